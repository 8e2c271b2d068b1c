#pragma once

#include <cstdint>

#include "reid/types.hpp"

namespace reid {

inline constexpr std::int64_t kDefaultNMax = 100;
inline constexpr double kDeltaFFloor = 1e-3;

// Adaptive weight 2 / (n * delta + 1). Lives in (0, 2]; delta must be > 0.
double alpha_damp(std::int64_t n, double delta);

// Damping factor for the feature-model stream: min(1, d/2), floored at
// kDeltaFFloor so a target frozen at the ideal appearance keeps a stable
// recurrence.
double delta_f(double d);

// Damping factor for the threshold stream: max(1, 2*d / lambda_d).
// A non-positive lambda_d falls back to 1; *used_fallback reports it.
double delta_lambda(double d, double lambda_d, bool* used_fallback = nullptr);

// Moving-average state for one scalar or vector quantity. n == 0 means no
// update has ever been applied and the stored value is a placeholder.
template <typename T>
struct DemaState {
    T value{};
    std::int64_t n = 0;
    std::int64_t n_max = kDefaultNMax;
};

// One damped update. The first update replaces the value outright (the
// weight at n = 0 would be 2, overshooting past the placeholder); later
// updates blend alpha*psi + (1-alpha)*value. n clamps at n_max.
DemaState<double> dema_update(DemaState<double> state, double psi, double delta);
DemaState<FeatureVector> dema_update(DemaState<FeatureVector> state, const FeatureVector& psi,
                                     double delta);

}  // namespace reid
