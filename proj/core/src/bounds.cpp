#include "rdts/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rdts/error.hpp"

namespace rdts {

namespace {

void require_non_negative(double x, const char * name) {
    if (!(x >= 0.0) || !std::isfinite(x))
        throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be finite and >= 0");
}

void require_horizon(double d, double horizon) {
    if (!(d >= 1.0) || !std::isfinite(d))
        throw Error(ErrorCode::InvalidArgument, "d must be >= 1");
    if (!(horizon >= 1.0) || !std::isfinite(horizon))
        throw Error(ErrorCode::InvalidArgument, "T must be >= 1");
}

}  // namespace

double entropy_bound(double gamma_bar, double entropy, double horizon) {
    require_non_negative(gamma_bar, "gamma_bar");
    require_non_negative(entropy, "entropy");
    require_non_negative(horizon, "T");
    return std::sqrt(gamma_bar * entropy * horizon);
}

double compressed_bound(double gamma_bar, double info, double epsilon, double horizon) {
    require_non_negative(gamma_bar, "gamma_bar");
    require_non_negative(info, "info");
    require_non_negative(epsilon, "epsilon");
    require_non_negative(horizon, "T");
    return std::sqrt(gamma_bar * info * horizon) + epsilon * horizon;
}

double linear_bound(double d, double horizon) {
    require_horizon(d, horizon);
    return d * std::sqrt(horizon * std::log(3.0 + 3.0 * std::sqrt(2.0 * horizon) / d));
}

double glm_bound(double d, double horizon, double c_phi) {
    if (!(c_phi > 0.0) || !std::isfinite(c_phi))
        throw Error(ErrorCode::InvalidArgument, "C(phi) must be positive and finite");
    return 2.0 * c_phi * linear_bound(d, horizon);
}

LogisticBound logistic_bound(double d, double horizon, double beta, double delta) {
    require_horizon(d, horizon);
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw Error(ErrorCode::InvalidArgument, "beta must be positive and finite");
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw Error(ErrorCode::InvalidArgument, "delta must be positive and finite");

    const Link phi{LinkKind::Logistic, beta};
    const double slope_at_margin = phi.derivative(delta);  // beta e^{beta delta} / (1 + e^{beta delta})^2
    const double root = std::sqrt(2.0 * horizon);

    LogisticBound out;
    out.primary = 2.0 * d * std::sqrt(horizon * std::log(3.0 + 6.0 * root / d * slope_at_margin));
    out.simplified =
        2.0 * d * std::sqrt(horizon * std::log(3.0 + 3.0 * root / (2.0 * d) * std::min(1.0 / delta, beta)));
    const double epsilon = d / root;
    out.epsilon_out_of_range = !(epsilon < phi(delta) - 0.5);
    return out;
}

double c_phi(const OutcomeModel & model, double lo, double hi) {
    return sup_mean_derivative(model, lo, hi);
}

double partition_count_bound(const PartitionCountInputs & in) {
    if (!(in.epsilon > 0.0) || !std::isfinite(in.epsilon))
        throw Error(ErrorCode::InvalidEpsilon, "epsilon must be positive and finite");
    if (!(in.d >= 1.0)) throw Error(ErrorCode::InvalidArgument, "d must be >= 1");
    switch (in.kind) {
        case PartitionBoundKind::Linear:
            return std::pow(1.0 / in.epsilon + 1.0, in.d);
        case PartitionBoundKind::Glm:
            if (!(in.c_phi > 0.0)) throw Error(ErrorCode::InvalidArgument, "C(phi) must be positive");
            return std::pow(2.0 * in.c_phi / in.epsilon + 1.0, in.d);
        case PartitionBoundKind::Logistic: {
            if (!(in.beta > 0.0) || !(in.delta > 0.0))
                throw Error(ErrorCode::InvalidArgument, "beta and delta must be positive");
            const Link phi{LinkKind::Logistic, in.beta};
            if (in.epsilon >= phi(in.delta) - 0.5)
                throw Error(ErrorCode::EpsilonTooLarge, "epsilon must be below phi(delta) - 1/2");
            const double width = in.delta - phi.inverse(phi(in.delta) - in.epsilon);
            return std::pow(1.0 + 2.0 / width, in.d) / in.epsilon;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown partition bound kind");
}

}  // namespace rdts
