#include "kg/snapshot_io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <json.hpp>

#include "kg/errors.hpp"

namespace kg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kMetaSuffix = ".meta.json";

fs::path base_of(const fs::path& p) {
  const std::string s = p.string();
  const std::string meta = kMetaSuffix;
  if (s.size() > meta.size() && s.compare(s.size() - meta.size(), meta.size(), meta) == 0)
    return fs::path(s.substr(0, s.size() - meta.size()));
  if (p.extension() == ".raw") return fs::path(p).replace_extension();
  return p;
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw DomainError("cannot open " + p.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DomainError("malformed JSON in " + p.string() + ": " + e.what());
  }
}

}  // namespace

void write_snapshot(const Field3D& f, double dt, const fs::path& base) {
  const fs::path raw = fs::path(base.string() + ".raw");
  const fs::path meta = fs::path(base.string() + kMetaSuffix);
  {
    std::ofstream out(raw, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + raw.string());
    if constexpr (std::endian::native == std::endian::little) {
      out.write(reinterpret_cast<const char*>(f.values.data()),
                static_cast<std::streamsize>(f.size() * sizeof(double)));
    } else {
      for (std::size_t i = 0; i < f.size(); ++i) {
        std::uint64_t u;
        std::memcpy(&u, &f.values[i], sizeof u);
        u = __builtin_bswap64(u);
        out.write(reinterpret_cast<const char*>(&u), sizeof u);
      }
    }
    if (!out) throw std::runtime_error("write failed for " + raw.string());
  }
  json m = {{"n", f.n},           {"dx", f.dx},         {"dt", dt},
            {"time", f.time},     {"mu2", f.mu2},       {"lambda", f.lambda},
            {"order", "x-fastest"}, {"dtype", "f64le"}};
  std::ofstream out(meta);
  out << m.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + meta.string());
}

Field3D read_snapshot(const fs::path& path) {
  const fs::path base = base_of(path);
  const json m = read_json(fs::path(base.string() + kMetaSuffix));
  if (m.value("dtype", "") != "f64le" || m.value("order", "") != "x-fastest")
    throw DomainError("unsupported snapshot layout in " + base.string());
  Field3D f(m.at("n").get<int>(), m.at("dx").get<double>());
  f.time = m.at("time").get<double>();
  f.mu2 = m.value("mu2", 0.0);
  f.lambda = m.value("lambda", 0.0);
  const fs::path raw = fs::path(base.string() + ".raw");
  std::ifstream in(raw, std::ios::binary);
  if (!in) throw DomainError("cannot open " + raw.string());
  in.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(f.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(f.size() * sizeof(double)))
    throw DomainError("truncated snapshot " + raw.string());
  if constexpr (std::endian::native != std::endian::little) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      std::uint64_t u;
      std::memcpy(&u, &f.values[i], sizeof u);
      u = __builtin_bswap64(u);
      std::memcpy(&f.values[i], &u, sizeof u);
    }
  }
  return f;
}

std::vector<fs::path> list_snapshots(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DomainError("not a directory: " + dir.string());
  std::vector<std::pair<double, fs::path>> found;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    const std::string meta = kMetaSuffix;
    if (name.size() <= meta.size() || name.compare(name.size() - meta.size(), meta.size(), meta) != 0) continue;
    const json m = read_json(entry.path());
    if (!m.contains("time") || !m.contains("n")) continue;
    found.emplace_back(m.at("time").get<double>(), entry.path());
  }
  std::sort(found.begin(), found.end());
  std::vector<fs::path> out;
  for (auto& [t, p] : found) out.push_back(p);
  return out;
}

}  // namespace kg
