#include "circdiv/lattice_cache.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "circdiv/error_terms.hpp"
#include "circdiv/table.hpp"

namespace circdiv {

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string record_line(std::uint64_t x, std::int64_t n) { return std::to_string(x) + " " + std::to_string(n) + "\n"; }

}  // namespace

LatticeCache::LatticeCache(std::string path) : path_(std::move(path)) { load(); }

void LatticeCache::load() {
  std::ifstream is(path_);
  if (!is) return;
  std::string line;
  if (!std::getline(is, line)) return;
  if (line != kLatticeCacheHeader) {
    warnings_.push_back("cache " + path_ + ": unrecognised header; rebuilding");
    rewrite();
    return;
  }
  std::string pending_text;
  std::vector<std::pair<std::uint64_t, std::int64_t>> pending;
  bool corrupt = false;
  while (std::getline(is, line)) {
    if (line.rfind("#checksum ", 0) == 0) {
      if (line.substr(10) != hex16(fnv1a64(pending_text))) {
        corrupt = true;
        break;
      }
      for (const auto& [x, n] : pending) entries_[x] = n;
      pending.clear();
      pending_text.clear();
      continue;
    }
    std::istringstream ls(line);
    std::uint64_t x = 0;
    std::int64_t n = 0;
    std::string rest;
    if (!(ls >> x >> n) || (ls >> rest)) {
      corrupt = true;
      break;
    }
    pending.emplace_back(x, n);
    pending_text += record_line(x, n);
  }
  if (corrupt) {
    warnings_.push_back("cache " + path_ + ": checksum mismatch or malformed record; rebuilding");
    entries_.clear();
    rewrite();
  } else if (!pending.empty()) {
    warnings_.push_back("cache " + path_ + ": dropped " + std::to_string(pending.size()) +
                        " records from an interrupted batch");
    rewrite();
  }
}

void LatticeCache::rewrite() {
  std::ofstream os(path_, std::ios::trunc);
  if (!os) throw IoError("cannot write cache '" + path_ + "'");
  os << kLatticeCacheHeader << '\n';
  if (!entries_.empty()) {
    std::string text;
    for (const auto& [x, n] : entries_) text += record_line(x, n);
    os << text << "#checksum " << hex16(fnv1a64(text)) << '\n';
  }
  if (!os.flush()) throw IoError("write failed for cache '" + path_ + "'");
}

void LatticeCache::append_batch(const std::vector<std::pair<std::uint64_t, std::int64_t>>& batch) {
  if (batch.empty()) return;
  std::ifstream probe(path_);
  const bool fresh = !probe.good() || probe.peek() == std::ifstream::traits_type::eof();
  probe.close();
  std::ofstream os(path_, std::ios::app);
  if (!os) throw IoError("cannot write cache '" + path_ + "'");
  if (fresh) os << kLatticeCacheHeader << '\n';
  std::string text;
  for (const auto& [x, n] : batch) text += record_line(x, n);
  os << text << "#checksum " << hex16(fnv1a64(text)) << '\n';
  if (!os.flush()) throw IoError("write failed for cache '" + path_ + "'");
}

std::vector<std::int64_t> LatticeCache::counts(const std::vector<std::uint64_t>& xs) {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::pair<std::uint64_t, std::int64_t>> batch;
  std::vector<std::int64_t> out;
  out.reserve(xs.size());
  for (auto x : xs) {
    auto it = entries_.find(x);
    if (it == entries_.end()) {
      const std::int64_t n = lattice_count(x);
      it = entries_.emplace(x, n).first;
      batch.emplace_back(x, n);
    }
    out.push_back(it->second);
  }
  append_batch(batch);
  return out;
}

std::size_t LatticeCache::spot_check(std::mt19937_64& rng, std::size_t n) {
  std::lock_guard<std::mutex> lock(mu_);
  if (entries_.empty()) return 0;
  std::vector<std::uint64_t> keys;
  for (const auto& kv : entries_) keys.push_back(kv.first);
  std::vector<std::uint64_t> picked;
  std::sample(keys.begin(), keys.end(), std::back_inserter(picked), n, rng);
  std::size_t bad = 0;
  for (const std::uint64_t x : picked)
    if (lattice_count(x) != entries_[x]) ++bad;
  if (bad) {
    warnings_.push_back("cache " + path_ + ": " + std::to_string(bad) + " spot-checked values disagree; rebuilding");
    entries_.clear();
    rewrite();
  }
  return bad;
}

}  // namespace circdiv
