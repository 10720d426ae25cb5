#include "qsp/cache.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "qsp/textio.hpp"

namespace qsp::cache {

namespace fs = std::filesystem;

namespace {

constexpr const char* kExtension = ".qspr";

// Splits a cache file into its body and stored checksum; nullopt if the
// checksum line is missing.
std::optional<std::pair<std::string, std::string>> split_entry(const std::string& text) {
  if (text.empty() || text.back() != '\n') return std::nullopt;
  auto start = text.rfind('\n', text.size() - 2);
  start = start == std::string::npos ? 0 : start + 1;
  std::string last = text.substr(start, text.size() - 1 - start);
  if (last.rfind("checksum ", 0) != 0) return std::nullopt;
  return std::make_pair(text.substr(0, start), last.substr(9));
}

std::atomic<unsigned> temp_counter{0};

}  // namespace

RealizationCache::RealizationCache(std::string dir) : dir_(std::move(dir)) {}

std::string RealizationCache::default_directory() {
  if (const char* env = std::getenv(kCacheEnv); env && *env) return env;
  return ".qsp-cache";
}

std::string RealizationCache::key(const rootdata::SatakeDatum& s, const rootdata::IntVector& lambda) const {
  std::string text = s.canonical_text();
  text += "\nlambda " + textio::render_weight(lambda);
  text += "\n";
  text += textio::kRealizationFormat;
  return textio::hex64(textio::fnv1a64(text));
}

std::string RealizationCache::path_for(const std::string& key) const {
  return (fs::path(dir_) / (key + kExtension)).string();
}

void RealizationCache::store(const std::string& key, const std::string& body) const {
  fs::create_directories(dir_);
  const std::string final_path = path_for(key);
  std::ostringstream tmp;
  tmp << final_path << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id()) << '.' << temp_counter++;
  {
    std::ofstream out(tmp.str(), std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.str());
    out << body << "checksum " << textio::hex64(textio::fnv1a64(body)) << '\n';
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.str());
  }
  fs::rename(tmp.str(), final_path);
}

RealizationCache::Entry RealizationCache::build(const rootdata::SatakeDatum& s, const rootdata::IntVector& lambda) {
  Entry e;
  e.key = key(s, lambda);
  e.realization = repmod::build_irreducible(s.root, lambda);
  const std::string body = textio::render_realization(e.realization, s);
  e.checksum = textio::hex64(textio::fnv1a64(body));
  store(e.key, body);
  return e;
}

RealizationCache::Entry RealizationCache::get_or_build(const rootdata::SatakeDatum& s,
                                                       const rootdata::IntVector& lambda) {
  const std::string k = key(s, lambda);
  const std::string path = path_for(k);
  std::vector<std::string> warnings;
  if (fs::exists(path)) {
    std::string problem;
    try {
      auto parts = split_entry(textio::read_file(path));
      if (!parts) {
        problem = "missing checksum";
      } else if (textio::hex64(textio::fnv1a64(parts->first)) != parts->second) {
        problem = "checksum mismatch";
      } else {
        Entry e;
        e.key = k;
        e.checksum = parts->second;
        e.realization = textio::parse_realization(parts->first, s);
        e.from_cache = true;
        if (e.realization.highest_weight == lambda) return e;
        problem = "highest weight mismatch";
      }
    } catch (const std::exception& ex) {
      problem = ex.what();
    }
    warnings.push_back("corrupt cache entry " + path + " (" + problem + "), rebuilding");
  }
  Entry e = build(s, lambda);
  e.warnings = std::move(warnings);
  return e;
}

RealizationCache::Inspection RealizationCache::inspect(const rootdata::SatakeDatum& s,
                                                       const rootdata::IntVector& lambda) const {
  Inspection r;
  r.key = key(s, lambda);
  r.path = path_for(r.key);
  if (!fs::exists(r.path)) return r;
  r.present = true;
  const std::string text = textio::read_file(r.path);
  r.bytes = text.size();
  auto parts = split_entry(text);
  if (!parts) return r;
  r.checksum = parts->second;
  if (textio::hex64(textio::fnv1a64(parts->first)) != parts->second) return r;
  try {
    r.dim = textio::parse_realization(parts->first, s).dim();
    r.intact = true;
  } catch (const std::exception&) {
  }
  return r;
}

std::size_t RealizationCache::purge() {
  std::size_t removed = 0;
  if (!fs::exists(dir_)) return 0;
  for (const auto& entry : fs::directory_iterator(dir_)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > 5 && (entry.path().extension() == kExtension || name.find(".qspr.tmp.") != std::string::npos)) {
      fs::remove(entry.path());
      ++removed;
    }
  }
  return removed;
}

}  // namespace qsp::cache
