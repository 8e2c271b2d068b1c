#include "reid/dema.hpp"

#include <algorithm>
#include <cmath>

namespace reid {

double alpha_damp(std::int64_t n, double delta) {
    if (delta <= 0.0) throw ContractViolation("alpha_damp: delta must be positive");
    if (n < 0) throw ContractViolation("alpha_damp: n must be non-negative");
    return 2.0 / (static_cast<double>(n) * delta + 1.0);
}

double delta_f(double d) {
    return std::max(kDeltaFFloor, std::min(1.0, d / 2.0));
}

double delta_lambda(double d, double lambda_d, bool* used_fallback) {
    if (lambda_d <= 0.0) {
        if (used_fallback != nullptr) *used_fallback = true;
        return 1.0;
    }
    if (used_fallback != nullptr) *used_fallback = false;
    return std::max(1.0, 2.0 * d / lambda_d);
}

namespace {

std::int64_t bumped(std::int64_t n, std::int64_t n_max) { return std::min(n + 1, n_max); }

}  // namespace

DemaState<double> dema_update(DemaState<double> state, double psi, double delta) {
    if (!std::isfinite(psi)) throw ContractViolation("dema_update: psi must be finite");
    if (state.n == 0) {
        state.value = psi;
    } else {
        const double alpha = alpha_damp(state.n, delta);
        state.value = alpha * psi + (1.0 - alpha) * state.value;
    }
    state.n = bumped(state.n, state.n_max);
    return state;
}

DemaState<FeatureVector> dema_update(DemaState<FeatureVector> state, const FeatureVector& psi,
                                     double delta) {
    if (state.n != 0 && psi.size() != state.value.size()) {
        throw ContractViolation("dema_update: psi shape mismatch");
    }
    check_feature(psi, psi.size(), "dema_update: psi");
    if (state.n == 0) {
        state.value = psi;
    } else {
        const double alpha = alpha_damp(state.n, delta);
        for (std::size_t i = 0; i < psi.size(); ++i) {
            state.value[i] = alpha * psi[i] + (1.0 - alpha) * state.value[i];
        }
    }
    state.n = bumped(state.n, state.n_max);
    return state;
}

}  // namespace reid
