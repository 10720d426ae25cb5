#pragma once

// On-disk cache of serialized realizations V(λ). One file per key, written
// atomically; a trailing checksum line guards against corruption.

#include <optional>
#include <string>
#include <vector>

#include "qsp/repmod.hpp"
#include "qsp/rootdata.hpp"

namespace qsp::cache {

inline constexpr const char* kCacheEnv = "QSP_CACHE_DIR";

class RealizationCache {
 public:
  explicit RealizationCache(std::string dir);
  // $QSP_CACHE_DIR, or .qsp-cache in the working directory.
  static std::string default_directory();

  const std::string& directory() const { return dir_; }
  std::string key(const rootdata::SatakeDatum& s, const rootdata::IntVector& lambda) const;
  std::string path_for(const std::string& key) const;

  struct Entry {
    repmod::Realization realization;
    std::string key;
    std::string checksum;
    bool from_cache = false;
    std::vector<std::string> warnings;
  };

  // Reads the entry if present and intact; otherwise builds and stores it.
  Entry get_or_build(const rootdata::SatakeDatum& s, const rootdata::IntVector& lambda);
  // Always rebuilds and overwrites.
  Entry build(const rootdata::SatakeDatum& s, const rootdata::IntVector& lambda);

  struct Inspection {
    std::string key;
    std::string path;
    bool present = false;
    bool intact = false;
    std::string checksum;  // stored value
    std::size_t dim = 0;
    std::size_t bytes = 0;
  };
  Inspection inspect(const rootdata::SatakeDatum& s, const rootdata::IntVector& lambda) const;

  // Removes every cache file; returns how many.
  std::size_t purge();

 private:
  void store(const std::string& key, const std::string& body) const;
  std::string dir_;
};

}  // namespace qsp::cache
