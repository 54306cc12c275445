#pragma once

// Append-only on-disk cache of lattice counts N(X).
//
//   # circdiv lattice-count cache v1
//   <X> <count>
//   ...
//   #checksum <16 hex digits>   FNV-1a 64 over the record lines of this batch
//
// Records after the last checksum line are an interrupted batch and are
// dropped. A bad checksum or malformed line discards the whole file.

#include <cstdint>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <vector>

namespace circdiv {

inline constexpr const char* kLatticeCacheHeader = "# circdiv lattice-count cache v1";

std::uint64_t fnv1a64(const std::string& data);

class LatticeCache {
 public:
  /// Loads `path` if it exists; creates it on the first write otherwise.
  explicit LatticeCache(std::string path);

  const std::string& path() const { return path_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Counts for every X, computing and persisting the missing ones as one batch.
  std::vector<std::int64_t> counts(const std::vector<std::uint64_t>& xs);

  /// Recomputes up to n cached keys chosen with `rng`. On any disagreement the
  /// cache is emptied and rewritten, with a warning. Returns the mismatches.
  std::size_t spot_check(std::mt19937_64& rng, std::size_t n = 10);

 private:
  void load();
  void rewrite();
  void append_batch(const std::vector<std::pair<std::uint64_t, std::int64_t>>& batch);

  std::string path_;
  std::map<std::uint64_t, std::int64_t> entries_;
  std::vector<std::string> warnings_;
  std::mutex mu_;
};

}  // namespace circdiv
