#include "profile_spec.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "kg/errors.hpp"

namespace kgcli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

double number(const std::string& s, const std::string& spec) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw kg::DomainError("bad number '" + s + "' in profile '" + spec + "'");
  }
}

}  // namespace

kg::Profile parse_profile(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.empty()) throw kg::DomainError("empty profile");
  const std::string& kind = parts[0];
  auto arg = [&](std::size_t i, double fallback) {
    if (i < parts.size()) return number(parts[i], spec);
    if (std::isnan(fallback)) throw kg::DomainError("profile '" + spec + "' needs a parameter");
    return fallback;
  };
  const double need = std::nan("");
  if (parts.size() > 3) throw kg::DomainError("too many fields in profile '" + spec + "'");
  if (kind == "zero") return kg::profiles::constant(0.0);
  if (kind == "const") return kg::profiles::constant(arg(1, need));
  if (kind == "bump") return kg::profiles::bump(arg(1, need), arg(2, 1.0));
  if (kind == "gauss") return kg::profiles::gaussian(arg(1, need), arg(2, 1.0));
  if (kind == "paraboloid") {
    const double c = arg(1, 1.0);
    return kg::Profile{[c](double s) { return -(c + s * s); }};
  }
  if (kind == "hyperboloid") {
    const double c = arg(1, 1.0);
    if (!(c > 0)) throw kg::DomainError("hyperboloid needs c > 0");
    return kg::Profile{[c](double s) { return -std::sqrt(c + s * s); }};
  }
  if (kind == "tailexp") {
    const double c = arg(1, 1.2);
    return kg::Profile{[c](double s) {
      const double d = c - s * s * s;
      return d > 0 ? -std::exp(-s * s / d) : 0.0;
    }};
  }
  throw kg::DomainError("unknown profile kind '" + kind + "'");
}

bool is_zero_spec(const std::string& spec) {
  if (spec == "zero") return true;
  const auto parts = split(spec, ':');
  return parts.size() == 2 && parts[0] == "const" && number(parts[1], spec) == 0.0;
}

kg::SourceTerm parse_source(const std::string& spec, double rate) {
  if (is_zero_spec(spec)) return kg::SourceTerm::none();
  const kg::Profile p = parse_profile(spec);
  return kg::SourceTerm::make([p, rate](double s, double b) { return p(s) * std::exp(-rate * b); });
}

}  // namespace kgcli
