#include "gw/bench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <tuple>

#include <boost/math/distributions/students_t.hpp>

#include "gw/error.hpp"

namespace gw::bench {

double t_quantile_975(int dof) {
  require(dof >= 1, ErrorCategory::invalid_argument, "t quantile needs dof >= 1");
  const boost::math::students_t dist(static_cast<double>(dof));
  return boost::math::quantile(dist, 0.975);
}

Summary summarize(std::span<const double> values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  if (sorted.size() >= 2) {
    double ss = 0.0;
    for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    s.half_width = t_quantile_975(static_cast<int>(sorted.size()) - 1) * sd / std::sqrt(n);
  }
  return s;
}

std::vector<AggregateRow> aggregate(std::span<const RunRecord> records) {
  struct Cell {
    std::vector<double> values, walls, weights;
  };
  std::map<std::tuple<std::string, std::string, long>, Cell> cells;
  for (const auto& r : records) {
    auto& c = cells[{r.label, r.metric, r.iteration}];
    c.values.push_back(r.value);
    c.walls.push_back(static_cast<double>(r.wall_ns));
    c.weights.push_back(r.weight);
  }
  std::vector<AggregateRow> out;
  for (const auto& [key, c] : cells) {
    AggregateRow row;
    std::tie(row.label, row.metric, row.iteration) = key;
    row.value = summarize(c.values);
    row.mean_wall_ns = summarize(c.walls).mean;
    row.mean_weight = summarize(c.weights).mean;
    out.push_back(std::move(row));
  }
  return out;
}

void write_aggregate_csv(std::ostream& out, std::span<const AggregateRow> rows) {
  out << "label,metric,iteration,count,mean,half_width,mean_wall_ns,mean_weight\n";
  char buf[64];
  auto real = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& r : rows) {
    out << r.label << ',' << r.metric << ',' << r.iteration << ',' << r.value.count << ','
        << real(r.value.mean) << ',' << (r.value.half_width ? real(*r.value.half_width) : "")
        << ',' << real(r.mean_wall_ns) << ',' << real(r.mean_weight) << '\n';
  }
}

std::string format_mean_hw(const Summary& summary, int digits) {
  char buf[96];
  if (summary.half_width) {
    std::snprintf(buf, sizeof buf, "%.*f \xC2\xB1 %.*f", digits, summary.mean, digits,
                  *summary.half_width);
  } else {
    std::snprintf(buf, sizeof buf, "%.*f", digits, summary.mean);
  }
  return buf;
}

RatioResult iterations_until_ratio(std::span<const RunRecord> records, const std::string& label_a,
                                   const std::string& label_b, const std::string& metric,
                                   double ratio) {
  require(ratio > 0.0, ErrorCategory::invalid_argument, "ratio must be positive");
  using Series = std::map<long, double>;
  std::map<std::uint64_t, Series> a, b;
  for (const auto& r : records) {
    if (r.metric != metric) continue;
    if (r.label == label_a) a[r.game_seed][r.iteration] = r.value;
    if (r.label == label_b) b[r.game_seed][r.iteration] = r.value;
  }
  RatioResult out;
  double total = 0.0;
  int reached = 0;
  for (const auto& [seed, series_a] : a) {
    const auto it = b.find(seed);
    require(it != b.end(), ErrorCategory::invalid_argument,
            "seed " + std::to_string(seed) + " missing for label " + label_b);
    std::optional<long> first;
    for (const auto& [t, va] : series_a) {
      const auto jt = it->second.find(t);
      if (jt == it->second.end()) continue;
      if (va <= jt->second / ratio) {
        first = t;
        break;
      }
    }
    if (first) {
      total += static_cast<double>(*first);
      ++reached;
    }
    out.per_seed.emplace_back(seed, first);
  }
  if (reached > 0) out.mean_iteration = total / reached;
  return out;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorCategory::invalid_argument,
          "spearman needs two equal-length samples of size >= 2");
  const auto rx = average_ranks(x), ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  require(sxx > 0.0 && syy > 0.0, ErrorCategory::invalid_argument,
          "spearman is undefined for a constant sample");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace gw::bench
