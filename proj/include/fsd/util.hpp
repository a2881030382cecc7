#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fsd {

// Shortest decimal form that round-trips an IEEE double exactly.
inline std::string fmt_double(double v) {
  char buf[40];
  int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

inline std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

inline bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

inline bool parse_u64(std::string_view s, std::uint64_t& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

inline double require_double(std::string_view s, const std::string& what) {
  double v;
  if (!parse_double(s, v)) throw std::runtime_error("bad number for " + what + ": '" + std::string(s) + "'");
  return v;
}

inline std::uint64_t require_u64(std::string_view s, const std::string& what) {
  std::uint64_t v;
  if (!parse_u64(s, v)) throw std::runtime_error("bad integer for " + what + ": '" + std::string(s) + "'");
  return v;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  return out;
}

}  // namespace fsd
