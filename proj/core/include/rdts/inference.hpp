#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rdts/model.hpp"
#include "rdts/numeric.hpp"

namespace rdts {

/// Probability vector over the finite parameter set. Immutable value type.
class BeliefState {
  public:
    /// Validates non-negativity and |sum - 1| <= 1e-10, then renormalizes.
    explicit BeliefState(std::vector<double> probs);

    static BeliefState uniform(std::size_t m);
    static BeliefState point_mass(std::size_t m, std::size_t index);
    /// Symmetric Dirichlet(1) draw, i.e. uniform on the simplex.
    static BeliefState dirichlet(std::size_t m, Rng & rng);

    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    std::span<const double> probs() const noexcept { return probs_; }

  private:
    struct Unchecked {};
    BeliefState(std::vector<double> probs, Unchecked) : probs_(std::move(probs)) {}
    friend BeliefState normalized_belief(std::vector<double> weights);

    std::vector<double> probs_;
};

/// Normalizes non-negative weights; throws AllZeroLikelihood when they vanish.
BeliefState normalized_belief(std::vector<double> weights);

struct HistoryStep {
    std::size_t param = 0;
    std::size_t action = 0;
    double outcome = 0.0;

    bool operator==(const HistoryStep &) const = default;
};

struct History {
    std::vector<HistoryStep> steps;
};

/// Above this many parameters the update runs in log space.
inline constexpr std::size_t kLogSpaceThreshold = 1000;

BeliefState posterior_update(const BeliefState & belief, const BanditInstance & instance,
                             std::size_t action, double outcome);

/// Same as posterior_update, keyed by index into instance.outcome_values(action).
BeliefState posterior_update_index(const BeliefState & belief, const BanditInstance & instance,
                                   std::size_t action, std::size_t outcome_index);

/// P(A* = a) = sum of belief mass over parameters whose best action is a.
std::vector<double> optimal_action_distribution(const BeliefState & belief,
                                                const BanditInstance & instance);

/// Inverse-CDF draw over the fixed parameter ordering.
std::size_t sample_parameter(const BeliefState & belief, Rng & rng);

/// Replays a history from a prior.
BeliefState posterior_after(const BeliefState & prior, const BanditInstance & instance,
                            const History & history);

}  // namespace rdts
