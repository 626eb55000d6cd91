#include <functional>

#include "paracons/retrieval.hpp"

namespace paracons {
namespace {

using Getter = std::function<std::optional<double>(const PairRecord&)>;

const Getter kId = [](const PairRecord& p) { return p.id_overlap; };
const Getter kTitle = [](const PairRecord& p) { return p.title_overlap; };
const Getter kEmb = [](const PairRecord& p) { return p.embedding_similarity; };

std::optional<double> sample_field(const RetrieverPairMetrics& m, int which) {
  return which == 0 ? m.id_overlap : which == 1 ? m.title_overlap : m.embedding_similarity;
}

std::optional<MeanStd> macro(const std::vector<double>& per_relation) {
  return mean_std(std::span<const double>(per_relation));
}

// Distribution of per-relation means and stds of one metric.
MetricDistribution distribution(const std::vector<std::vector<double>>& per_relation) {
  std::vector<double> mus, sigmas;
  for (const auto& values : per_relation) {
    if (auto ms = mean_std(std::span<const double>(values))) {
      mus.push_back(ms->mean);
      sigmas.push_back(ms->std);
    }
  }
  return {macro(mus), macro(sigmas)};
}

std::vector<std::vector<double>> collect(std::span<const std::vector<PairRecord>> pairs,
                                         const Getter& get) {
  std::vector<std::vector<double>> out(pairs.size());
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    for (const auto& p : pairs[r]) {
      if (auto v = get(p)) out[r].push_back(*v);
    }
  }
  return out;
}

// Macro mean over relations of the per-relation mean of `get` restricted to
// pairs whose agree flag equals `agree` (or all pairs when unset).
std::optional<MeanStd> macro_mean(std::span<const std::vector<PairRecord>> pairs,
                                  const Getter& get, std::optional<bool> agree) {
  std::vector<double> per_relation;
  for (const auto& rel : pairs) {
    std::vector<double> v;
    for (const auto& p : rel) {
      if (agree && p.agree != *agree) continue;
      if (auto x = get(p)) v.push_back(*x);
    }
    if (auto ms = mean_std(std::span<const double>(v))) per_relation.push_back(ms->mean);
  }
  return macro(per_relation);
}

// Mean and std across relations of the per-relation Pearson between the
// agree flag and `get`.
std::optional<MeanStd> agree_correlation(std::span<const std::vector<PairRecord>> pairs,
                                         const Getter& get) {
  std::vector<double> per_relation;
  for (const auto& rel : pairs) {
    std::vector<double> flags, values;
    for (const auto& p : rel) {
      if (auto x = get(p)) {
        flags.push_back(p.agree ? 1.0 : 0.0);
        values.push_back(*x);
      }
    }
    if (auto r = pearson(flags, values)) per_relation.push_back(*r);
  }
  return macro(per_relation);
}

}  // namespace

RetrieverReport retriever_consistency_report(
    const EvalSet& eval, std::span<const std::vector<PairRecord>> annotated,
    std::span<const BaselineResult> baselines, std::string model_label) {
  RetrieverReport rep;
  const std::size_t n_rel = eval.relations.size();

  for (const auto& b : baselines) {
    RetrieverRow row;
    row.source = std::string(baseline_name(b.mode));
    std::vector<std::vector<double>> v[3];
    for (auto& m : v) m.assign(n_rel, {});
    for (const auto& s : b.samples) {
      for (int k = 0; k < 3; ++k) {
        if (auto x = sample_field(s.metrics, k)) v[k][s.relation].push_back(*x);
      }
    }
    row.id = distribution(v[0]);
    row.title = distribution(v[1]);
    row.embedding = distribution(v[2]);
    rep.rows.push_back(std::move(row));

    if (b.mode == BaselineMode::kAll) {
      CorrelationMatrix cm;
      for (int a = 0; a < 3; ++a) {
        for (int c = 0; c < 3; ++c) {
          std::vector<double> per_relation;
          for (std::size_t r = 0; r < n_rel; ++r) {
            std::vector<double> xa, xc;
            for (const auto& s : b.samples) {
              if (s.relation != r) continue;
              auto va = sample_field(s.metrics, a);
              auto vc = sample_field(s.metrics, c);
              if (va && vc) {
                xa.push_back(*va);
                xc.push_back(*vc);
              }
            }
            if (auto p = pearson(xa, xc)) per_relation.push_back(*p);
          }
          cm.cells[a][c] = macro(per_relation);
        }
      }
      rep.correlations = cm;
    }
  }

  RetrieverRow model;
  model.source = std::move(model_label);
  model.id = distribution(collect(annotated, kId));
  model.title = distribution(collect(annotated, kTitle));
  model.embedding = distribution(collect(annotated, kEmb));
  rep.rows.push_back(std::move(model));

  const std::pair<const char*, const Getter*> metrics[] = {
      {"id", &kId}, {"title", &kTitle}, {"embedding", &kEmb}};
  for (const auto& [name, get] : metrics) {
    rep.match.push_back({name, macro_mean(annotated, *get, true),
                         macro_mean(annotated, *get, false)});
  }
  rep.reader_correlation.id = agree_correlation(annotated, kId);
  rep.reader_correlation.title = agree_correlation(annotated, kTitle);
  rep.reader_correlation.embedding = agree_correlation(annotated, kEmb);
  return rep;
}

RankReport rank_consistency_report(std::span<const std::vector<PairRecord>> annotated) {
  RankReport rep;
  const Getter pred = [](const PairRecord& p) { return p.pred_rank_mean; };
  const Getter gold = [](const PairRecord& p) { return p.gold_rank_mean; };
  for (const auto& [type, get] : {std::pair{"pred", &pred}, std::pair{"gold", &gold}}) {
    rep.rows.push_back({type, macro_mean(annotated, *get, std::nullopt),
                        macro_mean(annotated, *get, true), macro_mean(annotated, *get, false)});
  }
  rep.pearson_pred = agree_correlation(annotated, pred);
  rep.pearson_gold = agree_correlation(annotated, gold);
  return rep;
}

}  // namespace paracons
