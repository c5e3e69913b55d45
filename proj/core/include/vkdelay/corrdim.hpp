#pragma once

#include <vector>

#include "vkdelay/errors.hpp"

namespace vkd {

struct CorrDimOptions {
  int delay_lag = 0;     // embedding delay in samples; 0 = first ACF zero crossing
  int theiler = 0;       // temporal exclusion window; 0 = delay_lag * max dim
  int max_points = 6000; // subsample budget for the pair count
  double c_low = 1e-3;   // correlation-sum window used for the slope fit
  double c_high = 0.25;
  double plateau_rtol = 0.1;  // relative slope agreement across dims
};

struct CorrDimResult {
  double dimension = 0.0;
  bool converged = false;
  int delay_lag = 0;
  std::vector<int> embed_dims;
  std::vector<double> slopes;               // fitted slope per embedding dim
  std::vector<double> radii;                // the probe radii actually used
  std::vector<std::vector<double>> corr;    // correlation sum per dim per radius
};

// Grassberger-Procaccia correlation dimension of a scalar time series:
// time-delay embedding, cumulative pair counts C(r) with a Theiler window,
// log-log slope over the scaling region, plateau across embedding dims.
// A constant series has dimension exactly 0.
CorrDimResult correlation_dimension(const std::vector<double>& series,
                                    const std::vector<int>& embed_dims,
                                    const std::vector<double>& radii,
                                    const CorrDimOptions& opts = {});

}  // namespace vkd
