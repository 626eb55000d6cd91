#include <fstream>

#include "paracons/digest.hpp"
#include "paracons/error.hpp"
#include "paracons/fileio.hpp"
#include "paracons/scoring.hpp"

namespace paracons {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

ordered_json to_json(const CacheHeader& h) {
  ordered_json j;
  j["type"] = "header";
  j["format"] = h.format;
  j["endpoint"] = h.endpoint;
  j["seed"] = h.seed;
  j["n_passages"] = h.n_passages;
  j["dataset_digest"] = h.dataset_digest;
  j["mask_token"] = h.mask_token;
  j["variant"] = h.variant;
  return j;
}

std::string CacheHeader::run_digest() const { return sha256_hex(to_json(*this).dump()); }

CacheHeader cache_header_from_json(const json& j) {
  if (!j.is_object() || j.value("type", std::string{}) != "header")
    throw ValidationError("cache: first line is not a header record");
  CacheHeader h;
  h.format = j.at("format").get<int>();
  h.endpoint = j.at("endpoint").get<std::string>();
  h.seed = j.at("seed").get<std::uint64_t>();
  h.n_passages = j.at("n_passages").get<int>();
  h.dataset_digest = j.at("dataset_digest").get<std::string>();
  h.mask_token = j.value("mask_token", std::string(kDefaultMaskToken));
  h.variant = j.value("variant", std::string{});
  return h;
}

CacheContents read_cache(const fs::path& path) {
  const std::string text = read_file(path);
  const auto lines = split_lines(text);
  const bool complete_last = !text.empty() && text.back() == '\n';
  CacheContents out;
  bool have_header = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    json j;
    try {
      j = json::parse(lines[i]);
    } catch (const json::parse_error& e) {
      if (i + 1 == lines.size() && !complete_last) break;  // interrupted append
      throw ValidationError(path.string() + ":" + std::to_string(i + 1) +
                            ": malformed cache line");
    }
    try {
      if (!have_header) {
        out.header = cache_header_from_json(j);
        have_header = true;
      } else {
        out.predictions.push_back(prediction_from_json(j));
      }
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception& e) {
      throw ValidationError(path.string() + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
  if (!have_header) throw ValidationError(path.string() + ": empty prediction cache");
  return out;
}

std::string serialize_cache(const CacheHeader& header, std::span<const Prediction> preds) {
  std::string out = to_json(header).dump() + "\n";
  for (const auto& p : preds) out += to_json(p).dump() + "\n";
  return out;
}

PredictionCache::PredictionCache(fs::path path, CacheHeader header)
    : path_(std::move(path)), header_(std::move(header)) {
  if (fs::exists(path_)) {
    CacheContents existing = read_cache(path_);
    if (!(existing.header == header_))
      throw DigestMismatchError("stale prediction cache " + path_.string() +
                                ": written for run " + existing.header.run_digest() +
                                ", current run is " + header_.run_digest());
    for (auto& p : existing.predictions) {
      QueryKey k = p.key;
      entries_.insert_or_assign(std::move(k), std::move(p));
    }
    // Rewrite so a truncated tail from an interrupted run does not linger.
    std::vector<Prediction> kept;
    kept.reserve(entries_.size());
    for (const auto& [k, p] : entries_) kept.push_back(p);
    write_file_atomic(path_, serialize_cache(header_, kept));
  } else {
    write_file_atomic(path_, serialize_cache(header_, {}));
  }
}

const Prediction* PredictionCache::find(const QueryKey& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

void PredictionCache::append(std::span<const Prediction> predictions) {
  std::string chunk;
  for (const auto& p : predictions) chunk += to_json(p).dump() + "\n";
  std::lock_guard lock(mu_);
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw ValidationError("cannot append to cache " + path_.string());
  out << chunk;
  out.flush();
}

void PredictionCache::finalize(std::span<const Prediction> ordered) {
  std::lock_guard lock(mu_);
  write_file_atomic(path_, serialize_cache(header_, ordered));
}

}  // namespace paracons
