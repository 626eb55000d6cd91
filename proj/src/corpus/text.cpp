#include "paracons/corpus.hpp"

namespace paracons {

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         c >= 0x80;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (is_word_byte(c)) {
      cur.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a')
                                         : static_cast<char>(c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

// Plural and possessive suffixes only; possessive apostrophes already split
// the token in word_tokens().
std::string stem(std::string_view token) {
  std::string s(token);
  if (s.size() > 4 && ends_with(s, "ies")) {
    s.resize(s.size() - 3);
    s += 'y';
  } else if (s.size() > 4 && (ends_with(s, "ches") || ends_with(s, "shes") ||
                              ends_with(s, "xes") || ends_with(s, "zes") ||
                              ends_with(s, "sses"))) {
    s.resize(s.size() - 2);
  } else if (s.size() > 3 && ends_with(s, "s") && !ends_with(s, "ss")) {
    s.pop_back();
  }
  return s;
}

bool compute_subject_object_overlap(std::string_view subject, std::string_view object) {
  const auto subj = word_tokens(subject);
  const auto obj = word_tokens(object);
  for (const auto& o : obj) {
    const std::string so = stem(o);
    for (const auto& s : subj)
      if (stem(s) == so) return true;
  }
  return false;
}

bool compute_subject_object_overlap(const FactTuple& tuple) {
  return compute_subject_object_overlap(tuple.subject, tuple.object_gold);
}

}  // namespace paracons
