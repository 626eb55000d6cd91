#pragma once

// Report tables: rendered as aligned text, CSV and JSON with rows and
// columns mirroring the published table layouts.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "paracons/corpus.hpp"
#include "paracons/metrics.hpp"
#include "paracons/retrieval.hpp"

namespace paracons {

/// "0.74 ±0.15"; "n/a" when absent.
std::string format_cell(const std::optional<MeanStd>& v, int precision = 2);

/// Cells joined by " / ", e.g. "0.74 ±0.15 / 0.80 ±0.16 / 0.42 ±0.27".
std::string format_row(std::span<const std::optional<MeanStd>> cells, int precision = 2);

struct Cell {
  std::string text;
  std::optional<MeanStd> value;
  bool numeric = false;

  static Cell label(std::string s) { return {std::move(s), std::nullopt, false}; }
  static Cell stat(std::optional<MeanStd> v) { return {format_cell(v), v, true}; }
};

struct Table {
  std::string id;  // file stem, e.g. "consistency"
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
  std::string caption;
};

/// Aligned plain text with a title line, header, rule, rows and caption.
std::string render_text(const Table& table);

/// Numeric columns expand to "<name>_mean,<name>_std" with absent cells left
/// empty.
std::string render_csv(const Table& table);

nlohmann::ordered_json to_json(const std::optional<MeanStd>& v);
nlohmann::ordered_json to_json(const Table& table);

// Builders.
Table consistency_table(const std::string& label, const SummaryMetrics& s);  // Cons / Acc / C & A
Table knowledge_table(const std::string& label, const SummaryMetrics& s);    // Know / K-know / Unk
Table per_relation_table(std::span<const RelationMetrics> per_relation);
Table stratified_table(const std::string& label, const StratifiedTable& t);
Table curation_table(const CurationReport& report);
Table retriever_table(const RetrieverReport& report);   // similarity mu / sigma
Table match_table(const std::string& label, const RetrieverReport& report);
Table correlation_table(const RetrieverReport& report);
Table rank_table(const std::string& label, const RankReport& report);

struct InterventionRow {
  std::string mode;  // none, relevant, irr cohesive, irr incohesive
  SummaryMetrics summary;
};
Table intervention_table(const std::string& label, std::span<const InterventionRow> rows);

/// model,issue,stratum,mean,std,relations,pairs
std::string strata_csv(const std::string& label, std::span<const StratifiedTable> tables);

nlohmann::ordered_json to_json(const SummaryMetrics& s);
nlohmann::ordered_json to_json(const RelationMetrics& m);
nlohmann::ordered_json to_json(const StratifiedTable& t);
nlohmann::ordered_json to_json(const CurationReport& r);
nlohmann::ordered_json to_json(const RetrieverReport& r);
nlohmann::ordered_json to_json(const RankReport& r);

}  // namespace paracons
