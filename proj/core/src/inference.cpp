#include "rdts/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rdts/error.hpp"

namespace rdts {

BeliefState::BeliefState(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw Error(ErrorCode::InvalidPmf, "belief over an empty parameter set");
    for (double p : probs_)
        if (!(p >= 0.0) || !std::isfinite(p))
            throw Error(ErrorCode::InvalidPmf, "belief entries must be finite and >= 0");
    const double total = compensated_sum(probs_);
    if (std::fabs(total - 1.0) > 1e-10)
        throw Error(ErrorCode::InvalidPmf, "belief sums to " + std::to_string(total));
    for (auto & p : probs_) p /= total;
}

BeliefState BeliefState::uniform(std::size_t m) {
    if (m == 0) throw Error(ErrorCode::InvalidPmf, "belief over an empty parameter set");
    return BeliefState(std::vector<double>(m, 1.0 / static_cast<double>(m)), Unchecked{});
}

BeliefState BeliefState::point_mass(std::size_t m, std::size_t index) {
    if (index >= m) throw Error(ErrorCode::IndexOutOfRange, "point mass index out of range");
    std::vector<double> probs(m, 0.0);
    probs[index] = 1.0;
    return BeliefState(std::move(probs), Unchecked{});
}

BeliefState BeliefState::dirichlet(std::size_t m, Rng & rng) {
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> w(m);
    for (auto & x : w) x = expo(rng);
    return normalized_belief(std::move(w));
}

BeliefState normalized_belief(std::vector<double> weights) {
    if (weights.empty()) throw Error(ErrorCode::InvalidPmf, "belief over an empty parameter set");
    const double total = compensated_sum(weights);
    if (!(total > 0.0) || !std::isfinite(total))
        throw Error(ErrorCode::AllZeroLikelihood, "observation has zero probability under every parameter");
    for (auto & w : weights) w /= total;
    return BeliefState(std::move(weights), BeliefState::Unchecked{});
}

BeliefState posterior_update_index(const BeliefState & belief, const BanditInstance & instance,
                                   std::size_t action, std::size_t outcome_index) {
    const std::size_t m = instance.num_params();
    if (belief.size() != m)
        throw Error(ErrorCode::InvalidArgument, "belief and instance sizes differ");
    if (action >= instance.num_actions())
        throw Error(ErrorCode::IndexOutOfRange, "action index " + std::to_string(action));
    if (outcome_index >= instance.num_outcomes(action))
        throw Error(ErrorCode::IndexOutOfRange, "outcome index " + std::to_string(outcome_index));

    std::vector<double> w(m);
    if (m <= kLogSpaceThreshold) {
        for (std::size_t i = 0; i < m; ++i)
            w[i] = belief[i] * instance.likelihood_row(action, i)[outcome_index];
        return normalized_belief(std::move(w));
    }

    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        const double lik = instance.likelihood_row(action, i)[outcome_index];
        w[i] = (belief[i] > 0.0 && lik > 0.0) ? std::log(belief[i]) + std::log(lik)
                                               : -std::numeric_limits<double>::infinity();
        top = std::max(top, w[i]);
    }
    if (top == -std::numeric_limits<double>::infinity())
        throw Error(ErrorCode::AllZeroLikelihood, "observation has zero probability under every parameter");
    for (auto & x : w) x = std::exp(x - top);
    return normalized_belief(std::move(w));
}

BeliefState posterior_update(const BeliefState & belief, const BanditInstance & instance,
                             std::size_t action, double outcome) {
    if (action >= instance.num_actions())
        throw Error(ErrorCode::IndexOutOfRange, "action index " + std::to_string(action));
    const auto y = instance.outcome_index(action, outcome);
    if (!y)
        throw Error(ErrorCode::AllZeroLikelihood,
                    "outcome " + std::to_string(outcome) + " is outside the action's support");
    return posterior_update_index(belief, instance, action, *y);
}

std::vector<double> optimal_action_distribution(const BeliefState & belief,
                                                const BanditInstance & instance) {
    if (belief.size() != instance.num_params())
        throw Error(ErrorCode::InvalidArgument, "belief and instance sizes differ");
    std::vector<CompensatedSum> acc(instance.num_actions());
    for (std::size_t i = 0; i < belief.size(); ++i) acc[instance.best(i)] += belief[i];
    std::vector<double> out(acc.size());
    for (std::size_t a = 0; a < acc.size(); ++a) out[a] = acc[a].value();
    return out;
}

std::size_t sample_parameter(const BeliefState & belief, Rng & rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < belief.size(); ++i) {
        if (belief[i] <= 0.0) continue;
        last_positive = i;
        cumulative += belief[i];
        if (u < cumulative) return i;
    }
    return last_positive;
}

BeliefState posterior_after(const BeliefState & prior, const BanditInstance & instance,
                            const History & history) {
    BeliefState belief = prior;
    for (const auto & step : history.steps)
        belief = posterior_update(belief, instance, step.action, step.outcome);
    return belief;
}

}  // namespace rdts
