#pragma once

// Text forms of profiles and sources used on the command line:
//   zero | const:c | bump:R[:amp] | gauss:w[:amp] | paraboloid:c (-(c + s^2))
//   | hyperboloid:c (-sqrt(c + s^2)) | tailexp:c (-exp(-s^2/(c - s^3)))

#include <string>

#include "kg/transform.hpp"

namespace kgcli {

kg::Profile parse_profile(const std::string& spec);

/// True for "zero" and "const:0".
bool is_zero_spec(const std::string& spec);

/// f(s, b) = profile(s) e^{-rate b}.
kg::SourceTerm parse_source(const std::string& spec, double rate);

}  // namespace kgcli
