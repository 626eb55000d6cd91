#include <algorithm>

#include "paracons/retrieval.hpp"

namespace paracons {
namespace {

std::size_t count_tokens(std::span<const std::string> hay, std::span<const std::string> needle) {
  if (needle.empty() || needle.size() > hay.size()) return 0;
  std::size_t n = 0;
  std::size_t i = 0;
  while (i + needle.size() <= hay.size()) {
    if (std::equal(needle.begin(), needle.end(), hay.begin() + static_cast<std::ptrdiff_t>(i))) {
      ++n;
      i += needle.size();
    } else {
      ++i;
    }
  }
  return n;
}

}  // namespace

std::size_t count_occurrences(std::string_view text, std::string_view phrase) {
  return count_tokens(word_tokens(text), word_tokens(phrase));
}

std::vector<std::size_t> candidate_frequencies(std::span<const Passage> passages,
                                               std::span<const std::string> candidates) {
  std::vector<std::vector<std::string>> needles;
  needles.reserve(candidates.size());
  for (const auto& c : candidates) needles.push_back(word_tokens(c));
  std::vector<std::size_t> freq(candidates.size(), 0);
  for (const auto& p : passages) {
    const auto hay = word_tokens(p.text);
    for (std::size_t c = 0; c < needles.size(); ++c) freq[c] += count_tokens(hay, needles[c]);
  }
  return freq;
}

double normalized_rank(std::span<const std::size_t> frequencies, std::size_t index) {
  const std::size_t n = frequencies.size();
  if (n <= 1) return 0.0;
  const std::size_t f = frequencies[index];
  std::size_t greater = 0, equal = 0;
  for (std::size_t v : frequencies) {
    if (v > f) ++greater;
    if (v == f) ++equal;
  }
  const double rank = static_cast<double>(greater) + static_cast<double>(equal + 1) / 2.0;
  return (rank - 1.0) / static_cast<double>(n - 1);
}

std::optional<RankRecord> frequency_rank(const Prediction& prediction,
                                         std::span<const std::string> candidates,
                                         std::string_view gold) {
  if (!prediction.passages) return std::nullopt;
  auto pos = [&](std::string_view s) -> std::optional<std::size_t> {
    auto it = std::find(candidates.begin(), candidates.end(), s);
    if (it == candidates.end()) return std::nullopt;
    return static_cast<std::size_t>(it - candidates.begin());
  };
  const auto pi = pos(prediction.chosen);
  const auto gi = pos(gold);
  if (!pi || !gi) return std::nullopt;
  const auto freq = candidate_frequencies(*prediction.passages, candidates);
  RankRecord r;
  r.key = prediction.key;
  r.pred_rank = normalized_rank(freq, *pi);
  r.gold_rank = normalized_rank(freq, *gi);
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    r.candidate_frequencies.emplace_back(candidates[c], freq[c]);
  }
  return r;
}

}  // namespace paracons
