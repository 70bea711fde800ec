#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace nptorus::cli {

/// Canonical parameter string and its SHA-256 digest; the digest names the
/// cache file. Bumping the version string invalidates prior entries.
struct CacheKey {
  std::string canonical;
  std::string digest;
};

std::string sha256_hex(std::string_view data);

/// 17-significant-digit float serialization used for CSV cells and cache
/// keys; round-trips every double exactly.
std::string format_g17(double v);

CacheKey make_cache_key(double xi, int k, int l, int L, double tol,
                        const std::string& version);

/// Returns the stored value, or nullopt on miss/corrupt entry.
std::optional<std::string> cache_get(const std::filesystem::path& dir,
                                     const CacheKey& key);

/// Atomic write (temp file + rename); concurrent writers of the same key
/// converge to one valid entry. Returns false on I/O failure.
bool cache_put(const std::filesystem::path& dir, const CacheKey& key,
               const std::string& value);

}  // namespace nptorus::cli
