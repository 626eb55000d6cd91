#include <algorithm>
#include <array>
#include <cctype>
#include <string_view>
#include <vector>

#include "paracons/corpus.hpp"

namespace paracons {

namespace {

// Manually annotated data-issue labels for the standard N-1 relation ids.

constexpr std::array<std::string_view, 12> kSemanticOverlap = {
    "P19", "P20", "P101", "P106", "P131", "P140",
    "P159", "P276", "P279", "P361", "P740", "P937"};

constexpr std::array<std::string_view, 9> kSubjectObjectSimilarity = {
    "P36", "P127", "P131", "P138", "P176", "P178", "P276", "P279", "P361"};

struct TemplateIssues {
  std::string_view relation_id;
  std::vector<std::string_view> patterns;
};

const std::array<TemplateIssues, 6>& template_issues() {
  static const std::array<TemplateIssues, 6> kIssues = {{
      {"P19", {"[X] is native to [Y].", "[X] was native to [Y]."}},
      {"P20",
       {"[X] died at [Y].", "[X] passed away at [Y].", "[X] lost their life at [Y].",
        "[X] succumbed at [Y]."}},
      {"P27", {"[X] is [Y] citizen."}},
      {"P106",
       {"[X] works as [Y].", "[X], who works as [Y].", "[X]'s occupation is [Y]",
        "the occupation of [X] is [Y].", "the profession of [X] is [Y]."}},
      {"P138",
       {"[X] is named in [Y]'s honor.", "[X] was named in [Y]'s honor.",
        "[X], named in [Y]'s honor.", "[X], which is named in [Y]'s honor.",
        "[X], which was named in [Y]'s honor."}},
      {"P1376",
       {"[Y]'s capital, [X].", "[Y]'s capital city, [X].", "[Y]'s capital is [X].",
        "[Y]'s capital city is [X]."}},
  }};
  return kIssues;
}

struct ObjectIssues {
  std::string_view relation_id;
  std::vector<std::string_view> objects;
};

const std::array<ObjectIssues, 3>& object_issues() {
  static const std::array<ObjectIssues, 3> kIssues = {{
      {"P101",
       {"Internet", "astronomer", "bird", "car", "cave", "comedian", "diplomat",
        "economist", "habitat", "hotel", "icon", "mathematician", "miniature",
        "musical", "musician", "nightclub", "novelist", "philosopher", "physician",
        "physicist", "priest", "programmer", "stock", "stomach", "virus", "website"}},
      {"P138",
       {"Alps", "Americas", "Arctic", "Bible", "Moon", "Netherlands", "Sun", "arrow",
        "backpack", "brake", "canon", "cube", "flower", "glove", "grape", "horse",
        "hotel", "liver", "mayor", "mole", "monastery", "patent", "patriarch", "red"}},
      {"P361",
       {"Alps",       "Americas",  "Antarctic", "BBC",       "Bible",      "Caribbean",
        "Caucasus",   "Internet",  "Nile",      "Quran",     "airline",    "airport",
        "ankle",      "aquarium",  "army",      "artillery", "atom",       "banana",
        "battery",    "bicycle",   "bird",      "bow",       "brain",      "breast",
        "bridge",     "candle",    "car",       "cartridge", "castle",     "cavalry",
        "cell",       "cemetery",  "chromosome", "clergy",   "cloud",      "cocktail",
        "coin",       "comet",     "computer",  "door",      "ear",        "economist",
        "ecosystem",  "engine",    "enzyme",    "eye",       "facade",     "film",
        "firearm",    "fish",      "fleet",     "flower",    "foot",       "forest",
        "fruit",      "galaxy",    "gang",      "gene",      "genome",     "gospel",
        "graph",      "head",      "heart",     "kidney",    "leaf",       "liver",
        "lung",       "matrix",    "molecule",  "mosque",    "municipality", "navy",
        "neck",       "nerve",     "orbit",     "organism",  "parish",     "penis",
        "perfume",    "pistol",    "piston",    "port",      "radar",      "saddle",
        "screw",      "sea",       "seed",      "shield",    "skeleton",   "skull",
        "spacecraft", "stomach",   "sword",     "track",     "trail",      "tree",
        "triangle",   "turbine",   "volcano"}},
  }};
  return kIssues;
}

template <typename Range>
bool contains(const Range& r, std::string_view v) {
  return std::find(r.begin(), r.end(), v) != r.end();
}

// Whitespace, case, and a final period are ignored when matching templates.
std::string normalize_pattern(std::string_view p) {
  std::string out;
  for (char c : p)
    if (!std::isspace(static_cast<unsigned char>(c)))
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  while (!out.empty() && out.back() == '.') out.pop_back();
  return out;
}

}  // namespace

bool apply_known_flags(RelationSpec& relation) {
  const std::string_view id = relation.relation_id;
  bool known = false;
  if (contains(kSemanticOverlap, id)) {
    relation.semantic_overlap = true;
    known = true;
  }
  if (contains(kSubjectObjectSimilarity, id)) {
    relation.subject_object_similarity_prone = true;
    known = true;
  }
  for (const auto& issue : template_issues()) {
    if (issue.relation_id != id) continue;
    known = true;
    for (auto& t : relation.templates) {
      const std::string norm = normalize_pattern(t.pattern);
      for (std::string_view p : issue.patterns)
        if (normalize_pattern(p) == norm) t.unidiomatic = true;
    }
  }
  for (const auto& issue : object_issues()) {
    if (issue.relation_id != id) continue;
    known = true;
    for (std::string_view o : issue.objects)
      if (relation.is_candidate(o) && !relation.is_unidiomatic_object(o))
        relation.unidiomatic_objects.emplace_back(o);
  }
  return known;
}

}  // namespace paracons
