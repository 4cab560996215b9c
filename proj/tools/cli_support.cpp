#include "cli_support.hpp"

#include <charconv>
#include <cmath>
#include <regex>
#include <sstream>

namespace lamelab::cli {

namespace {

double parse_double(const std::string& s, const std::string& ctx) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (!s.empty() && *b == '+') ++b;
  const auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) {
    throw Error(ErrorCode::kInvalidArgument, "bad number '" + s + "' in " + ctx);
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

Complex parse_complex(const std::string& text) {
  static const std::regex re(
      R"(^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?(?:([+-](?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)i)?$)");
  std::smatch m;
  // A bare imaginary part such as "1.5i" carries no sign.
  const std::string t =
      (!text.empty() && text.back() == 'i' && text.front() != '+' && text.front() != '-' &&
       text.find_first_of("+-") == std::string::npos)
          ? "+" + text
          : text;
  if (t.empty() || !std::regex_match(t, m, re)) {
    throw Error(ErrorCode::kInvalidArgument, "cannot parse complex '" + text + "'");
  }
  double re_part = 0.0, im_part = 0.0;
  if (m[1].matched) re_part = parse_double(m[1].str(), text);
  if (m[2].matched) {
    std::string im = m[2].str();
    if (im == "+" || im == "-") im += "1";
    im_part = parse_double(im, text);
  }
  if (!m[1].matched && !m[2].matched) {
    throw Error(ErrorCode::kInvalidArgument, "cannot parse complex '" + text + "'");
  }
  return {re_part, im_part};
}

Complex parse_tau(const std::string& text) {
  const Complex tau = parse_complex(text);
  if (!(tau.imag() > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tau must have positive imaginary part");
  }
  return tau;
}

SourceDivisor parse_divisor(const std::string& text, const LatticeContext& ctx) {
  SourceDivisor L;
  for (std::string item : split(text, ';')) {
    if (item.empty()) continue;
    if (item.rfind("p=", 0) == 0) item = item.substr(2);
    int w = 1;
    const auto colon = item.find(':');
    if (colon != std::string::npos) {
      const double wd = parse_double(item.substr(colon + 1), text);
      if (wd != std::floor(wd) || wd < 1) {
        throw Error(ErrorCode::kInvalidArgument, "weights are positive integers");
      }
      w = static_cast<int>(wd);
      item = item.substr(0, colon);
    }
    const auto rs = split(item, ',');
    if (rs.size() != 2) {
      throw Error(ErrorCode::kInvalidArgument, "expected r,s in '" + item + "'");
    }
    L.points.push_back(make_point(ctx, parse_double(rs[0], text), parse_double(rs[1], text)));
    L.weights.push_back(w);
  }
  if (L.points.empty()) throw Error(ErrorCode::kInvalidArgument, "empty divisor");
  return L;
}

std::vector<Complex> parse_complex_list(const std::string& text) {
  std::vector<Complex> out;
  for (const std::string& s : split(text, ',')) {
    if (!s.empty()) out.push_back(parse_complex(s));
  }
  return out;
}

nlohmann::json to_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

nlohmann::json to_json(const TorusPoint& p) {
  return {{"r", p.r}, {"s", p.s}, {"z", to_json(p.z)}};
}

nlohmann::json to_json(const Mat2& m) {
  return nlohmann::json::array(
      {to_json(m(0, 0)), to_json(m(0, 1)), to_json(m(1, 0)), to_json(m(1, 1))});
}

nlohmann::json to_json(const LameParams& p) {
  nlohmann::json a = nlohmann::json::array();
  for (const Complex& x : p.A) a.push_back(to_json(x));
  return {{"A", a}, {"B", to_json(p.B)}};
}

}  // namespace lamelab::cli
