#include <algorithm>
#include <set>

#include "json.hpp"
#include "paracons/corpus.hpp"
#include "paracons/digest.hpp"
#include "paracons/error.hpp"
#include "paracons/fileio.hpp"

namespace paracons {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::size_t RelationSpec::lama_template() const {
  for (std::size_t i = 0; i < templates.size(); ++i)
    if (templates[i].lama_original) return i;
  return 0;
}

bool RelationSpec::is_candidate(std::string_view answer) const {
  return std::find(candidates.begin(), candidates.end(), answer) != candidates.end();
}

bool RelationSpec::is_unidiomatic_object(std::string_view answer) const {
  return std::find(unidiomatic_objects.begin(), unidiomatic_objects.end(), answer) !=
         unidiomatic_objects.end();
}

bool RelationSpec::has_template_issue() const {
  return std::any_of(templates.begin(), templates.end(),
                     [](const Template& t) { return t.unidiomatic; });
}

const RelationData* Dataset::find(std::string_view relation_id) const {
  for (const auto& r : relations)
    if (r.spec.relation_id == relation_id) return &r;
  return nullptr;
}

std::size_t Dataset::tuple_count() const {
  std::size_t n = 0;
  for (const auto& r : relations) n += r.tuples.size();
  return n;
}

std::size_t Dataset::query_count() const {
  std::size_t n = 0;
  for (const auto& r : relations) n += r.tuples.size() * r.spec.templates.size();
  return n;
}

namespace {

std::size_t count_occurrences(std::string_view text, std::string_view needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size()))
    ++n;
  return n;
}

[[noreturn]] void fail(const std::string& source, std::size_t line,
                       const std::string& what) {
  throw ValidationError(source + ":" + std::to_string(line) + ": " + what);
}

std::string get_string(const json& j, const char* key, const std::string& source,
                       std::size_t line) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string())
    fail(source, line, std::string("missing string field '") + key + "'");
  return it->get<std::string>();
}

bool get_bool(const json& j, const char* key, bool fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  if (!it->is_boolean())
    throw ValidationError(std::string("field '") + key + "' must be boolean");
  return it->get<bool>();
}

RelationSpec parse_header(const json& j, const std::string& source) {
  if (!j.is_object()) fail(source, 1, "relation header must be a JSON object");
  RelationSpec spec;
  spec.relation_id = get_string(j, "relation_id", source, 1);
  spec.name = j.value("name", std::string{});
  auto templates = j.find("templates");
  if (templates == j.end() || !templates->is_array())
    fail(source, 1, "missing array field 'templates'");
  for (const auto& t : *templates) {
    if (!t.is_object()) fail(source, 1, "template entries must be objects");
    Template tpl;
    tpl.pattern = get_string(t, "pattern", source, 1);
    try {
      tpl.lama_original = get_bool(t, "lama_original", false);
      tpl.unidiomatic = get_bool(t, "unidiomatic", false);
    } catch (const ValidationError& e) {
      fail(source, 1, e.what());
    }
    spec.templates.push_back(std::move(tpl));
  }
  auto candidates = j.find("candidates");
  if (candidates == j.end() || !candidates->is_array())
    fail(source, 1, "missing array field 'candidates'");
  for (const auto& c : *candidates) {
    if (!c.is_string()) fail(source, 1, "candidates must be strings");
    spec.candidates.push_back(c.get<std::string>());
  }
  if (auto flags = j.find("flags"); flags != j.end() && flags->is_object()) {
    try {
      spec.semantic_overlap = get_bool(*flags, "semantic_overlap", false);
      spec.subject_object_similarity_prone = get_bool(*flags, "subj_obj_prone", false);
    } catch (const ValidationError& e) {
      fail(source, 1, e.what());
    }
  }
  if (auto objs = j.find("unidiomatic_objects"); objs != j.end() && objs->is_array()) {
    for (const auto& o : *objs) {
      if (!o.is_string()) fail(source, 1, "unidiomatic_objects must be strings");
      spec.unidiomatic_objects.push_back(o.get<std::string>());
    }
  }
  return spec;
}

}  // namespace

RelationData parse_relation(std::string_view text, const std::string& source) {
  const std::vector<std::string> lines = split_lines(text);
  RelationData rel;
  bool have_header = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (lines[i].find_first_not_of(" \t") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(lines[i]);
    } catch (const json::parse_error& e) {
      fail(source, line_no, std::string("parse error: ") + e.what());
    }
    if (!have_header) {
      if (line_no != 1) fail(source, line_no, "relation header must be the first line");
      rel.spec = parse_header(j, source);
      have_header = true;
      continue;
    }
    if (!j.is_object()) fail(source, line_no, "tuple record must be a JSON object");
    FactTuple t;
    t.subject = get_string(j, "subject", source, line_no);
    t.object_gold = get_string(j, "object", source, line_no);
    t.relation_id = rel.spec.relation_id;
    if (t.subject.empty()) fail(source, line_no, "empty subject");
    if (t.object_gold.empty()) fail(source, line_no, "empty object");
    if (!rel.spec.is_candidate(t.object_gold))
      fail(source, line_no,
           "gold object '" + t.object_gold + "' is not a candidate of " +
               rel.spec.relation_id);
    t.subj_obj_overlap = compute_subject_object_overlap(t.subject, t.object_gold);
    rel.tuples.push_back(std::move(t));
  }
  if (!have_header) fail(source, 1, "missing relation header");
  validate_relation(rel, source);
  return rel;
}

void validate_relation(const RelationData& rel, const std::string& source) {
  const RelationSpec& spec = rel.spec;
  auto bad = [&](const std::string& what) {
    throw ValidationError(source + ": " + spec.relation_id + ": " + what);
  };
  if (spec.relation_id.empty()) bad("empty relation_id");
  if (spec.candidates.empty()) bad("candidate set is empty");
  std::set<std::string_view> seen;
  for (const auto& c : spec.candidates) {
    if (c.empty()) bad("empty candidate");
    if (!seen.insert(c).second) bad("duplicate candidate '" + c + "'");
  }
  if (spec.templates.empty()) bad("no templates");
  std::size_t lama = 0;
  for (const auto& t : spec.templates) {
    if (t.lama_original) ++lama;
    if (count_occurrences(t.pattern, kSubjectSlot) != 1 ||
        count_occurrences(t.pattern, kAnswerSlot) != 1)
      bad("template '" + t.pattern + "' must contain [X] and [Y] exactly once");
  }
  if (lama != 1)
    bad("expected exactly one lama_original template, found " + std::to_string(lama));
  for (const auto& o : spec.unidiomatic_objects)
    if (!spec.is_candidate(o)) bad("unidiomatic object '" + o + "' is not a candidate");
  for (const auto& t : rel.tuples) {
    if (t.relation_id != spec.relation_id) bad("tuple relation id mismatch");
    if (!spec.is_candidate(t.object_gold))
      bad("gold object '" + t.object_gold + "' is not a candidate");
  }
}

Dataset load_dataset(const fs::path& dir) {
  if (!fs::is_directory(dir))
    throw ValidationError("dataset directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl")
      files.push_back(entry.path());
  if (files.empty()) throw ValidationError("no relation files in " + dir.string());
  std::sort(files.begin(), files.end());
  Dataset ds;
  for (const auto& f : files)
    ds.relations.push_back(parse_relation(read_file(f), f.filename().string()));
  std::sort(ds.relations.begin(), ds.relations.end(),
            [](const RelationData& a, const RelationData& b) {
              return a.spec.relation_id < b.spec.relation_id;
            });
  for (std::size_t i = 1; i < ds.relations.size(); ++i)
    if (ds.relations[i].spec.relation_id == ds.relations[i - 1].spec.relation_id)
      throw ValidationError("relation " + ds.relations[i].spec.relation_id +
                            " defined in more than one file");
  return ds;
}

std::string serialize_relation(const RelationData& rel) {
  const RelationSpec& s = rel.spec;
  ordered_json header;
  header["relation_id"] = s.relation_id;
  header["name"] = s.name;
  ordered_json templates = ordered_json::array();
  for (const auto& t : s.templates)
    templates.push_back({{"pattern", t.pattern},
                         {"lama_original", t.lama_original},
                         {"unidiomatic", t.unidiomatic}});
  header["templates"] = std::move(templates);
  header["candidates"] = s.candidates;
  header["flags"] = {{"semantic_overlap", s.semantic_overlap},
                     {"subj_obj_prone", s.subject_object_similarity_prone}};
  header["unidiomatic_objects"] = s.unidiomatic_objects;
  std::string out = header.dump() + "\n";
  for (const auto& t : rel.tuples) {
    ordered_json rec;
    rec["subject"] = t.subject;
    rec["object"] = t.object_gold;
    out += rec.dump() + "\n";
  }
  return out;
}

void write_dataset(const Dataset& dataset, const fs::path& dir) {
  fs::create_directories(dir);
  for (const auto& r : dataset.relations)
    write_file_atomic(dir / (r.spec.relation_id + ".jsonl"), serialize_relation(r));
}

std::string dataset_digest(const Dataset& dataset) {
  std::string all;
  for (const auto& r : dataset.relations) {
    all += serialize_relation(r);
    all += '\x1e';
  }
  return sha256_hex(all);
}

std::string render_prompt(std::string_view pattern, std::string_view subject,
                          std::string_view mask_token) {
  std::string out;
  out.reserve(pattern.size() + subject.size() + mask_token.size());
  std::size_t i = 0;
  while (i < pattern.size()) {
    if (pattern.compare(i, kSubjectSlot.size(), kSubjectSlot) == 0) {
      out += subject;
      i += kSubjectSlot.size();
    } else if (pattern.compare(i, kAnswerSlot.size(), kAnswerSlot) == 0) {
      out += mask_token;
      i += kAnswerSlot.size();
    } else {
      out += pattern[i++];
    }
  }
  return out;
}

std::vector<Query> render_queries(const RelationData& relation,
                                  std::size_t relation_index,
                                  std::string_view mask_token) {
  std::vector<Query> out;
  out.reserve(relation.tuples.size() * relation.spec.templates.size());
  for (std::size_t t = 0; t < relation.tuples.size(); ++t)
    for (std::size_t p = 0; p < relation.spec.templates.size(); ++p)
      out.push_back({relation_index, t, p,
                     render_prompt(relation.spec.templates[p].pattern,
                                   relation.tuples[t].subject, mask_token)});
  return out;
}

std::vector<Query> render_all(const Dataset& dataset, std::string_view mask_token) {
  std::vector<Query> out;
  out.reserve(dataset.query_count());
  for (std::size_t r = 0; r < dataset.relations.size(); ++r) {
    auto q = render_queries(dataset.relations[r], r, mask_token);
    std::move(q.begin(), q.end(), std::back_inserter(out));
  }
  return out;
}

}  // namespace paracons
