#pragma once

#include <Eigen/Core>

#include <vector>

namespace tubempc {

/// Quantile of the standard normal distribution (inverse CDF).
/// Acklam's rational approximation refined with one Halley step; accurate to
/// full double precision for p in (0, 1).
double normal_quantile(double p);

/// Two-sided normal quantile: smallest w with P(|X| <= w) >= alpha for
/// X ~ N(0, 1). Equals normal_quantile((1 + alpha) / 2).
double two_sided_normal_quantile(double alpha);

/// Nearest-rank empirical quantile: the ceil(alpha * n)-th smallest value
/// (1-based). Deterministic and reproducible bit-for-bit.
double nearest_rank_quantile(std::vector<double> values, double alpha);

double mean(const std::vector<double>& values);
double stddev(const std::vector<double>& values);

}  // namespace tubempc
