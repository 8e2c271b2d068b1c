#include "reid/distance.hpp"

#include <cmath>
#include <string>

namespace reid {

void check_feature(const FeatureVector& x, std::size_t dim, const char* what) {
    if (x.size() != dim) {
        throw ContractViolation(std::string(what) + ": dimension " + std::to_string(x.size()) +
                                ", expected " + std::to_string(dim));
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) {
            throw ContractViolation(std::string(what) + ": non-finite component at index " +
                                    std::to_string(i));
        }
    }
}

FeatureVector l2_normalized(FeatureVector x) {
    double sq = 0.0;
    for (double v : x) sq += v * v;
    if (sq > 0.0) {
        const double inv = 1.0 / std::sqrt(sq);
        for (double& v : x) v *= inv;
    }
    return x;
}

double statistical_distance(const FeatureVector& x, const TargetModel& model, double eps) {
    if (eps <= 0.0) throw ContractViolation("statistical_distance: eps must be positive");
    const std::size_t dim = model.mu.size();
    if (model.sigma.size() != dim) {
        throw ContractViolation("statistical_distance: model mu/sigma dimensions differ");
    }
    check_feature(x, dim, "statistical_distance: x");

    double acc = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        const double scale = std::max(model.sigma[i], eps);
        const double term = (x[i] - model.mu[i]) / scale;
        acc += term * term;
    }
    return std::sqrt(acc / static_cast<double>(dim));
}

FeatureVector elementwise_squared_deviation(const FeatureVector& mu, const FeatureVector& x) {
    if (mu.size() != x.size()) {
        throw ContractViolation("elementwise_squared_deviation: dimension mismatch");
    }
    FeatureVector out(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const double dev = x[i] - mu[i];
        out[i] = dev * dev;
    }
    return out;
}

double scalar_squared_deviation(double mu_d, double d) {
    const double dev = d - mu_d;
    return dev * dev;
}

const char* to_string(DecisionKind kind) {
    switch (kind) {
        case DecisionKind::DirectTrack: return "direct_track";
        case DecisionKind::Reidentified: return "reidentified";
        case DecisionKind::Lost: return "lost";
    }
    return "lost";
}

std::optional<DecisionKind> decision_kind_from_string(const std::string& s) {
    if (s == "direct_track") return DecisionKind::DirectTrack;
    if (s == "reidentified") return DecisionKind::Reidentified;
    if (s == "lost") return DecisionKind::Lost;
    return std::nullopt;
}

}  // namespace reid
