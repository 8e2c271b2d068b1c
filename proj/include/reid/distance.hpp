#pragma once

#include "reid/types.hpp"

namespace reid {

inline constexpr double kDefaultSigmaEps = 1e-6;

// Dimension-normalized, sigma-scaled deviation of x from the model:
//   sqrt( (1/D) * sum_i ((x_i - mu_i) / max(sigma_i, eps))^2 )
// The eps floor keeps the value defined while a dimension has never varied.
double statistical_distance(const FeatureVector& x, const TargetModel& model,
                            double eps = kDefaultSigmaEps);

// out_i = (x_i - mu_i)^2
FeatureVector elementwise_squared_deviation(const FeatureVector& mu, const FeatureVector& x);

// (d - mu_d)^2
double scalar_squared_deviation(double mu_d, double d);

}  // namespace reid
