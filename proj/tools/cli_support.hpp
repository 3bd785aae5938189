#pragma once

#include <openssl/evp.h>

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "poisson_fields/errors.hpp"
#include "poisson_fields/sim.hpp"

namespace poisson_fields::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2, kNonConvergence = 3 };

inline constexpr const char* kSeedEnv = "POISSON_FIELDS_SEED";

inline std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_double(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidParams("not a number: '" + text + "'");
  }
  if (used != text.size()) throw InvalidParams("not a number: '" + text + "'");
  return v;
}

inline long parse_long(const std::string& text) {
  long v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw InvalidParams("not an integer: '" + text + "'");
  return v;
}

/// "1,2.5,0.3" → {1, 2.5, 0.3}.
inline std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_double(item));
  return out;
}

/// "3" → [3,3]; "0..5" → [0,5]; "-5..5" → [-5,5].
inline std::pair<long, long> parse_range(const std::string& text) {
  const std::size_t dots = text.find("..");
  if (dots == std::string::npos) {
    const long v = parse_long(text);
    return {v, v};
  }
  const long lo = parse_long(text.substr(0, dots));
  const long hi = parse_long(text.substr(dots + 2));
  if (lo > hi) throw InvalidParams("empty range '" + text + "'");
  return {lo, hi};
}

/// Shortest round-trip decimal form.
inline std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

/// RFC 4180 field quoting.
inline std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 digest failed");
  }
  std::ostringstream o;
  for (unsigned int i = 0; i < len; ++i) o << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return o.str();
}

/// Flag value if given, else the environment variable, else the fixed default.
inline std::uint64_t resolve_seed(const std::string& flag_value) {
  auto parse = [](const std::string& s, const char* source) {
    std::uint64_t v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) throw InvalidParams(std::string("invalid seed from ") + source + ": '" + s + "'");
    return v;
  };
  if (!flag_value.empty()) return parse(flag_value, "--seed");
  if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') return parse(env, kSeedEnv);
  return sim::kDefaultSeed;
}

}  // namespace poisson_fields::cli
