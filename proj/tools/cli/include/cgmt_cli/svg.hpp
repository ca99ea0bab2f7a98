#pragma once

#include <string>

#include "cgmt/experiments.hpp"

namespace cgmt::cli {

/// Empirical CDFs of Phi and phi from the per-trial records, drawn as step
/// polylines on shared axes.
std::string cdf_overlay_svg(const ExperimentReport& report);

/// Histogram of ||w_hat||^2 / sigma^2 with a vertical marker at the
/// predicted NSE.
std::string nse_histogram_svg(const ExperimentReport& report, int bins = 20);

}  // namespace cgmt::cli
