#include <cstdio>

#include "paracons/report.hpp"

namespace paracons {

using nlohmann::ordered_json;

namespace {

Cell L(std::string s) { return Cell::label(std::move(s)); }
Cell S(const std::optional<MeanStd>& v) { return Cell::stat(v); }
std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// A single value; rendered without a spread.
Cell V(std::optional<double> v) {
  if (!v) return Cell::stat(std::nullopt);
  return {number(*v), MeanStd{*v, 0.0, 1}, true};
}

ordered_json opt(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json distribution_json(const MetricDistribution& d) {
  return {{"mu", to_json(d.mu)}, {"sigma", to_json(d.sigma)}};
}

}  // namespace

Table consistency_table(const std::string& label, const SummaryMetrics& s) {
  Table t;
  t.id = "consistency";
  t.title = "Consistency, accuracy and consistent-and-accurate, macro-averaged over relations";
  t.header = {"Model", "Cons", "Acc", "C & A"};
  t.rows.push_back({L(label), S(s.consistency), S(s.accuracy), S(s.consistent_and_accurate)});
  t.caption = "Mean ±std across " + std::to_string(s.relations) + " relations.";
  return t;
}

Table knowledge_table(const std::string& label, const SummaryMetrics& s) {
  Table t;
  t.id = "knowledge";
  t.title = "Knowledgeable and unknowledgeable consistency";
  t.header = {"Model", "Know Cons", "K-know Cons", "Unk Cons"};
  t.rows.push_back({L(label), S(s.know_cons), S(s.k_know_cons), S(s.unk_cons)});
  t.caption = "Mean ±std across " + std::to_string(s.relations) + " relations.";
  return t;
}

Table per_relation_table(std::span<const RelationMetrics> per_relation) {
  Table t;
  t.id = "per_relation";
  t.title = "Per-relation metrics";
  t.header = {"Relation", "Tuples", "Pairs", "Cons", "Acc", "C & A",
              "Know Cons", "K-know Cons", "Unk Cons"};
  for (const auto& m : per_relation) {
    t.rows.push_back({L(m.relation_id), L(std::to_string(m.tuples)), L(std::to_string(m.pairs)),
                      V(m.consistency), V(m.accuracy), V(m.consistent_and_accurate),
                      V(m.know_cons), V(m.k_know_cons), V(m.unk_cons)});
  }
  return t;
}

Table stratified_table(const std::string& label, const StratifiedTable& st) {
  Table t;
  t.id = "strata_" + st.issue;
  t.title = "Pairwise consistency by " + st.issue;
  t.header = {"Model"};
  std::vector<Cell> row{L(label)};
  for (const auto& s : st.strata) {
    t.header.push_back(s.name);
    row.push_back(S(s.consistency));
  }
  t.rows.push_back(std::move(row));
  t.caption = st.caption;
  return t;
}

Table curation_table(const CurationReport& report) {
  Table t;
  t.id = "curation";
  t.title = "Duplicated entries per relation";
  t.header = {"Relation", "Entries", "Duplicates", "Exact", "Rate", "Retained", "Status"};
  std::size_t entries = 0, dups = 0, exact = 0, retained = 0;
  for (const auto& r : report.relations) {
    t.rows.push_back({L(r.relation_id), L(std::to_string(r.entries)),
                      L(std::to_string(r.duplicates)), L(std::to_string(r.exact_duplicates)),
                      L(number(r.duplicate_rate())), L(std::to_string(r.retained)),
                      L(r.dropped ? "dropped" : "kept")});
    entries += r.entries;
    dups += r.duplicates;
    exact += r.exact_duplicates;
    retained += r.dropped ? 0 : r.retained;
  }
  t.rows.push_back({L("Total"), L(std::to_string(entries)), L(std::to_string(dups)),
                    L(std::to_string(exact)), L(""), L(std::to_string(retained)),
                    L(std::to_string(report.retained_relations()) + " kept")});
  t.caption = "Relations whose duplicate rate exceeds " + number(report.drop_threshold) +
              " are dropped.";
  return t;
}

Table retriever_table(const RetrieverReport& report) {
  Table t;
  t.id = "retriever";
  t.title = "Similarity metrics used to estimate retriever consistency";
  t.header = {"Model", "Metric", "Similarity mu", "Similarity sigma"};
  for (const auto& row : report.rows) {
    t.rows.push_back({L(row.source), L("id"), S(row.id.mu), S(row.id.sigma)});
    t.rows.push_back({L(""), L("title"), S(row.title.mu), S(row.title.sigma)});
    t.rows.push_back({L(""), L("emb"), S(row.embedding.mu), S(row.embedding.sigma)});
  }
  t.caption = "mu: distribution of the per-relation mean; sigma: distribution of the "
              "per-relation standard deviation.";
  return t;
}

Table match_table(const std::string& label, const RetrieverReport& report) {
  Table t;
  t.id = "retriever_match";
  t.title = "Retriever similarity stratified by reader agreement";
  t.header = {"Model", "Metric", "Match sim.", "No match sim."};
  bool first = true;
  for (const auto& m : report.match) {
    t.rows.push_back({L(first ? label : ""), L(m.metric), S(m.match), S(m.no_match)});
    first = false;
  }
  const auto& rc = report.reader_correlation;
  t.caption = "Pearson between reader agreement and id / title / embedding: " +
              format_cell(rc.id) + " / " + format_cell(rc.title) + " / " +
              format_cell(rc.embedding) + ".";
  return t;
}

Table correlation_table(const RetrieverReport& report) {
  Table t;
  t.id = "retriever_correlation";
  t.title = "Correlations between the retriever consistency metrics (r-all samples)";
  t.header = {"", "id", "title", "embedding"};
  const char* names[] = {"id", "title", "embedding"};
  for (int a = 0; a < 3; ++a) {
    std::vector<Cell> row{L(names[a])};
    for (int b = 0; b < 3; ++b) {
      row.push_back(S(report.correlations ? report.correlations->cells[a][b] : std::nullopt));
    }
    t.rows.push_back(std::move(row));
  }
  t.caption = "Mean ±std across relations of the per-relation Pearson coefficient.";
  return t;
}

Table rank_table(const std::string& label, const RankReport& report) {
  Table t;
  t.id = "rank";
  t.title = "Frequency-based averaged rankings in the retrieved result";
  t.header = {"Model", "Type", "Rank", "Match", "No match"};
  bool first = true;
  for (const auto& r : report.rows) {
    t.rows.push_back({L(first ? label : ""), L(r.type), S(r.rank), S(r.match), S(r.no_match)});
    first = false;
  }
  t.caption = "Pearson between agreement and pred / gold rank: " +
              format_cell(report.pearson_pred) + " / " + format_cell(report.pearson_gold) + ".";
  return t;
}

Table intervention_table(const std::string& label, std::span<const InterventionRow> rows) {
  Table t;
  t.id = "intervention";
  t.title = label + " results for interventions on the retrieval augmentation";
  t.header = {"Intervention", "Cons", "Acc", "C & A"};
  for (const auto& r : rows) {
    t.rows.push_back({L(r.mode), S(r.summary.consistency), S(r.summary.accuracy),
                      S(r.summary.consistent_and_accurate)});
  }
  return t;
}

std::string strata_csv(const std::string& label, std::span<const StratifiedTable> tables) {
  std::string out = "model,issue,stratum,mean,std,relations,pairs\n";
  for (const auto& t : tables) {
    for (const auto& s : t.strata) {
      char buf[64] = "";
      std::string mean, sd;
      if (s.consistency) {
        std::snprintf(buf, sizeof buf, "%.10g", s.consistency->mean);
        mean = buf;
        std::snprintf(buf, sizeof buf, "%.10g", s.consistency->std);
        sd = buf;
      }
      out += label + "," + t.issue + "," + s.name + "," + mean + "," + sd + "," +
             std::to_string(s.relations) + "," + std::to_string(s.pairs) + "\n";
    }
  }
  return out;
}

ordered_json to_json(const SummaryMetrics& s) {
  return {{"relations", s.relations},
          {"consistency", to_json(s.consistency)},
          {"accuracy", to_json(s.accuracy)},
          {"consistent_and_accurate", to_json(s.consistent_and_accurate)},
          {"know_cons", to_json(s.know_cons)},
          {"k_know_cons", to_json(s.k_know_cons)},
          {"unk_cons", to_json(s.unk_cons)}};
}

ordered_json to_json(const RelationMetrics& m) {
  return {{"relation_id", m.relation_id},
          {"tuples", m.tuples},
          {"pairs", m.pairs},
          {"knowledgeable", m.knowledgeable},
          {"unknowledgeable", m.unknowledgeable},
          {"consistency", opt(m.consistency)},
          {"accuracy", opt(m.accuracy)},
          {"consistent_and_accurate", opt(m.consistent_and_accurate)},
          {"know_cons", opt(m.know_cons)},
          {"k_know_cons", opt(m.k_know_cons)},
          {"unk_cons", opt(m.unk_cons)},
          {"diagnostics",
           {{"excluded_tuples", m.diagnostics.excluded_tuples},
            {"incomplete_tuples", m.diagnostics.incomplete_tuples},
            {"missing_lama", m.diagnostics.missing_lama}}}};
}

ordered_json to_json(const StratifiedTable& t) {
  ordered_json strata = ordered_json::array();
  for (const auto& s : t.strata) {
    strata.push_back({{"name", s.name},
                      {"consistency", to_json(s.consistency)},
                      {"relations", s.relations},
                      {"pairs", s.pairs}});
  }
  return {{"issue", t.issue},
          {"caption", t.caption},
          {"scope_relations", t.scope_relations},
          {"strata", std::move(strata)}};
}

ordered_json to_json(const CurationReport& r) {
  ordered_json rels = ordered_json::array();
  for (const auto& c : r.relations) {
    rels.push_back({{"relation_id", c.relation_id},
                    {"name", c.name},
                    {"entries", c.entries},
                    {"duplicates", c.duplicates},
                    {"exact_duplicates", c.exact_duplicates},
                    {"duplicate_rate", c.duplicate_rate()},
                    {"retained", c.retained},
                    {"removed", c.removed},
                    {"dropped", c.dropped},
                    {"subj_obj_overlap_rate", c.subj_obj_overlap_rate}});
  }
  return {{"drop_threshold", r.drop_threshold},
          {"total_entries", r.total_entries()},
          {"total_retained", r.total_retained()},
          {"retained_relations", r.retained_relations()},
          {"relations", std::move(rels)}};
}

ordered_json to_json(const RetrieverReport& r) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"source", row.source},
                    {"id", distribution_json(row.id)},
                    {"title", distribution_json(row.title)},
                    {"embedding", distribution_json(row.embedding)}});
  }
  ordered_json match = ordered_json::array();
  for (const auto& m : r.match) {
    match.push_back(
        {{"metric", m.metric}, {"match", to_json(m.match)}, {"no_match", to_json(m.no_match)}});
  }
  ordered_json corr = nullptr;
  if (r.correlations) {
    const char* names[] = {"id", "title", "embedding"};
    corr = ordered_json::object();
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) corr[names[a]][names[b]] = to_json(r.correlations->cells[a][b]);
    }
  }
  return {{"rows", std::move(rows)},
          {"match", std::move(match)},
          {"correlations", std::move(corr)},
          {"reader_correlation",
           {{"id", to_json(r.reader_correlation.id)},
            {"title", to_json(r.reader_correlation.title)},
            {"embedding", to_json(r.reader_correlation.embedding)}}}};
}

ordered_json to_json(const RankReport& r) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"type", row.type},
                    {"rank", to_json(row.rank)},
                    {"match", to_json(row.match)},
                    {"no_match", to_json(row.no_match)}});
  }
  return {{"rows", std::move(rows)},
          {"pearson_pred", to_json(r.pearson_pred)},
          {"pearson_gold", to_json(r.pearson_gold)}};
}

}  // namespace paracons
