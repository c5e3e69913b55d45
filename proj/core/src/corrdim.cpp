#include "vkdelay/corrdim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

namespace vkd {

namespace {

int acf_first_zero(const std::vector<double>& s, int cap) {
  const std::size_t n = s.size();
  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= double(n);
  double var = 0.0;
  for (double v : s) var += (v - mean) * (v - mean);
  if (var == 0.0) return 1;
  for (int lag = 1; lag <= cap; ++lag) {
    double c = 0.0;
    for (std::size_t k = 0; k + lag < n; ++k) c += (s[k] - mean) * (s[k + lag] - mean);
    if (c <= 0.0) return lag;
  }
  return cap;
}

}  // namespace

CorrDimResult correlation_dimension(const std::vector<double>& series,
                                    const std::vector<int>& embed_dims,
                                    const std::vector<double>& radii,
                                    const CorrDimOptions& opts) {
  if (series.size() < 10000)
    throw DataError("correlation_dimension: series too short (need 10^4 samples, got " +
                    std::to_string(series.size()) + ")");
  if (embed_dims.empty()) throw ConfigError("correlation_dimension: no embedding dimensions");
  for (std::size_t k = 0; k < embed_dims.size(); ++k) {
    if (embed_dims[k] < 1) throw ConfigError("correlation_dimension: embedding dims must be >= 1");
    if (k > 0 && embed_dims[k] <= embed_dims[k - 1])
      throw ConfigError("correlation_dimension: embedding dims must increase");
  }
  if (radii.size() < 4) throw ConfigError("correlation_dimension: need at least 4 radii");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0)) throw ConfigError("correlation_dimension: radii must be positive");
    if (k > 0 && radii[k] <= radii[k - 1])
      throw ConfigError("correlation_dimension: radii must increase");
  }
  for (double v : series)
    if (!std::isfinite(v)) throw DataError("correlation_dimension: non-finite sample");

  CorrDimResult res;
  res.embed_dims = embed_dims;
  res.radii = radii;

  const auto [lo_it, hi_it] = std::minmax_element(series.begin(), series.end());
  if (*hi_it - *lo_it == 0.0) {
    // A constant series is a single phase-space point.
    res.dimension = 0.0;
    res.converged = true;
    res.delay_lag = 1;
    res.slopes.assign(embed_dims.size(), 0.0);
    res.corr.assign(embed_dims.size(), std::vector<double>(radii.size(), 1.0));
    return res;
  }

  const int m_max = embed_dims.back();
  const int lag_cap = std::max(1, int(series.size()) / (4 * m_max));
  const int lag = opts.delay_lag > 0 ? opts.delay_lag : acf_first_zero(series, lag_cap);
  const int theiler = opts.theiler > 0 ? opts.theiler : lag * m_max;
  res.delay_lag = lag;

  for (int m : embed_dims) {
    const std::int64_t n_vec = std::int64_t(series.size()) - std::int64_t(m - 1) * lag;
    if (n_vec < 100)
      throw DataError("correlation_dimension: series too short for embedding dimension " +
                      std::to_string(m));
    const int stride = std::max<std::int64_t>(1, (n_vec + opts.max_points - 1) / opts.max_points);

    std::vector<std::int64_t> below(radii.size(), 0);
    std::int64_t n_pairs = 0;
    for (std::int64_t ia = 0; ia < n_vec; ia += stride) {
      for (std::int64_t ib = ia + stride; ib < n_vec; ib += stride) {
        if (ib - ia <= theiler) continue;
        // Chebyshev distance between the embedded points.
        double d = 0.0;
        for (int c = 0; c < m; ++c) {
          const double diff = std::abs(series[ia + std::int64_t(c) * lag] -
                                       series[ib + std::int64_t(c) * lag]);
          if (diff > d) d = diff;
        }
        ++n_pairs;
        // First radius strictly above d; every larger radius also counts.
        const auto it = std::upper_bound(radii.begin(), radii.end(), d);
        if (it != radii.end()) ++below[it - radii.begin()];
      }
    }
    if (n_pairs < 100) throw DataError("correlation_dimension: too few pairs after subsampling");

    std::vector<double> corr(radii.size());
    std::int64_t cum = 0;
    for (std::size_t k = 0; k < radii.size(); ++k) {
      cum += below[k];
      corr[k] = double(cum) / double(n_pairs);
    }
    res.corr.push_back(corr);

    // Slope of log C against log r over the scaling window.
    std::vector<double> xs, ys;
    const double c_floor = std::max(opts.c_low, 10.0 / double(n_pairs));
    for (std::size_t k = 0; k < radii.size(); ++k) {
      if (corr[k] < c_floor || corr[k] > opts.c_high) continue;
      xs.push_back(std::log(radii[k]));
      ys.push_back(std::log(corr[k]));
    }
    if (xs.size() < 3)
      throw DataError("correlation_dimension: no scaling region at embedding dimension " +
                      std::to_string(m));
    const double n = double(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      sx += xs[k];
      sy += ys[k];
      sxx += xs[k] * xs[k];
      sxy += xs[k] * ys[k];
    }
    res.slopes.push_back((n * sxy - sx * sy) / (n * sxx - sx * sx));
  }

  // Plateau: adjacent embedding dimensions agreeing within the tolerance.
  for (std::size_t k = 0; k + 1 < res.slopes.size(); ++k) {
    const double s0 = res.slopes[k], s1 = res.slopes[k + 1];
    if (std::abs(s1 - s0) <= opts.plateau_rtol * std::max(std::abs(s1), 0.5)) {
      res.dimension = 0.5 * (s0 + s1);
      res.converged = true;
      return res;
    }
  }
  res.dimension = res.slopes.back();
  res.converged = false;
  return res;
}

}  // namespace vkd
