#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "paracons/kernels.hpp"
#include "paracons/metrics.hpp"

namespace paracons {

std::optional<MeanStd> mean_std(std::span<const double> values) {
  if (values.empty()) return std::nullopt;
  const double n = static_cast<double>(values.size());
  const double mean = kernels::sum(values) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return MeanStd{mean, std::sqrt(ss / n), values.size()};
}

std::optional<MeanStd> mean_std(std::span<const std::optional<double>> values) {
  std::vector<double> present;
  for (const auto& v : values) {
    if (v) present.push_back(*v);
  }
  return mean_std(std::span<const double>(present));
}

SummaryMetrics macro_summary(std::span<const RelationMetrics> per_relation) {
  SummaryMetrics s;
  s.relations = per_relation.size();
  auto collect = [&](std::optional<double> RelationMetrics::*field) {
    std::vector<std::optional<double>> v;
    v.reserve(per_relation.size());
    for (const auto& m : per_relation) v.push_back(m.*field);
    return mean_std(std::span<const std::optional<double>>(v));
  };
  s.consistency = collect(&RelationMetrics::consistency);
  s.accuracy = collect(&RelationMetrics::accuracy);
  s.consistent_and_accurate = collect(&RelationMetrics::consistent_and_accurate);
  s.know_cons = collect(&RelationMetrics::know_cons);
  s.k_know_cons = collect(&RelationMetrics::k_know_cons);
  s.unk_cons = collect(&RelationMetrics::unk_cons);
  return s;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  if (x.size() < 2) return std::nullopt;
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
  };
  if (constant(x) || constant(y)) return std::nullopt;
  const double n = static_cast<double>(x.size());
  const double mx = kernels::sum(x) / n;
  const double my = kernels::sum(y) / n;
  const auto m = kernels::centered_moments(x, y, mx, my);
  if (!(m.sxx > 0.0) || !(m.syy > 0.0)) return std::nullopt;
  const double r = m.sxy / std::sqrt(m.sxx * m.syy);
  return std::fmax(-1.0, std::fmin(1.0, r));
}

}  // namespace paracons
