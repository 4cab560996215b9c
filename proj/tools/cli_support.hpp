#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "lamelab/glame.hpp"
#include "lamelab/monodromy.hpp"

namespace lamelab::cli {

// "a+bi", "bi", "a", "-a-bi"; no spaces. Throws InvalidArgument.
Complex parse_complex(const std::string& text);

// Upper half plane only.
Complex parse_tau(const std::string& text);

// "p=r,s:w;p=r,s:w;..." with the "p=" prefix and ":w" (default 1) optional.
SourceDivisor parse_divisor(const std::string& text, const LatticeContext& ctx);

// Comma separated complex values.
std::vector<Complex> parse_complex_list(const std::string& text);

nlohmann::json to_json(Complex z);
nlohmann::json to_json(const TorusPoint& p);
nlohmann::json to_json(const Mat2& m);  // row-major
nlohmann::json to_json(const LameParams& p);

}  // namespace lamelab::cli
