#include "nptorus/cache.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace nptorus::cli {

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CacheKey make_cache_key(double xi, int k, int l, int L, double tol,
                        const std::string& version) {
  char tolbuf[40];
  std::snprintf(tolbuf, sizeof(tolbuf), "%.9e", tol);
  std::string canonical = "xi=" + format_g17(xi) + "|k=" + std::to_string(k) +
                          "|l=" + std::to_string(l) +
                          "|L=" + std::to_string(L) + "|tol=" + tolbuf +
                          "|ver=" + version;
  return {canonical, sha256_hex(canonical)};
}

std::optional<std::string> cache_get(const std::filesystem::path& dir,
                                     const CacheKey& key) {
  if (dir.empty()) return std::nullopt;
  std::ifstream in(dir / (key.digest + ".json"), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string body = ss.str();
  // Corrupt entries (truncated writes from a crashed run) count as misses.
  auto parsed = nlohmann::json::parse(body, nullptr, false);
  if (parsed.is_discarded() || !parsed.contains("key") ||
      parsed["key"] != key.canonical)
    return std::nullopt;
  return body;
}

bool cache_put(const std::filesystem::path& dir, const CacheKey& key,
               const std::string& value) {
  if (dir.empty()) return false;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  const auto tmp =
      dir / (key.digest + ".tmp" + std::to_string(rng()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out << value;
    if (!out.good()) return false;
  }
  std::filesystem::rename(tmp, dir / (key.digest + ".json"), ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    return false;
  }
  return true;
}

}  // namespace nptorus::cli
