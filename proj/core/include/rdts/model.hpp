#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rdts/numeric.hpp"

namespace rdts {

/// Row-major set of d-dimensional vectors inside the closed unit ball.
template <typename Tag>
class UnitBallPoints {
  public:
    UnitBallPoints() = default;
    explicit UnitBallPoints(const std::vector<std::vector<double>> & rows);
    UnitBallPoints(std::size_t dim, std::vector<double> data);

    std::size_t size() const noexcept { return dim_ == 0 ? 0 : data_.size() / dim_; }
    std::size_t dim() const noexcept { return dim_; }
    std::span<const double> operator[](std::size_t i) const {
        return {data_.data() + i * dim_, dim_};
    }
    const std::vector<double> & data() const noexcept { return data_; }

  private:
    void validate() const;

    std::size_t dim_ = 0;
    std::vector<double> data_;
};

struct ActionTag;
struct ParameterTag;
using ActionSet = UnitBallPoints<ActionTag>;
using ParameterSet = UnitBallPoints<ParameterTag>;

/// Norm slack tolerated on unit-ball membership.
inline constexpr double kNormTolerance = 1e-12;

enum class ModelKind { LinearBinary, Glm, Logistic };
enum class LinkKind { Logistic, Probit };

/// Strictly increasing link phi(x) = F(slope * x), F the logistic or the
/// standard normal CDF.
struct Link {
    LinkKind kind = LinkKind::Logistic;
    double slope = 1.0;

    double operator()(double x) const;
    double derivative(double x) const;
    double inverse(double p) const;
};

class OutcomeModel {
  public:
    /// Outcomes {-1/2, +1/2}, P(+1/2) = 1/2 + a'theta/2.
    static OutcomeModel linear_binary();
    /// Outcomes {0, 1}, P(1) = e^{beta x} / (1 + e^{beta x}).
    static OutcomeModel logistic(double beta);
    /// Outcomes phi(a'theta) +- eta with probability 1/2 each.
    static OutcomeModel glm(Link link, double eta);

    ModelKind kind() const noexcept { return kind_; }
    const Link & link() const noexcept { return link_; }
    double beta() const noexcept { return link_.slope; }
    double eta() const noexcept { return eta_; }

    double mean(double inner) const;
    /// Derivative of the mean map with respect to the inner product.
    double mean_derivative(double inner) const;

  private:
    ModelKind kind_ = ModelKind::LinearBinary;
    Link link_{};
    double eta_ = 0.0;
};

struct OutcomePmf {
    std::vector<double> values;
    std::vector<double> probs;
};

/// Immutable finite-parameter bandit problem with cached mean rewards,
/// best actions and per-action outcome likelihoods.
class BanditInstance {
  public:
    BanditInstance(ActionSet actions, ParameterSet params, OutcomeModel model);

    std::size_t num_actions() const noexcept { return actions_.size(); }
    std::size_t num_params() const noexcept { return params_.size(); }
    std::size_t dim() const noexcept { return actions_.dim(); }

    const ActionSet & actions() const noexcept { return actions_; }
    const ParameterSet & params() const noexcept { return params_; }
    const OutcomeModel & model() const noexcept { return model_; }

    double inner(std::size_t action, std::size_t param) const {
        return inner_[param * num_actions() + action];
    }
    double mean(std::size_t action, std::size_t param) const {
        return mean_[param * num_actions() + action];
    }
    /// mean(., param) as a contiguous row over actions.
    std::span<const double> mean_row(std::size_t param) const {
        return {mean_.data() + param * num_actions(), num_actions()};
    }
    std::size_t best(std::size_t param) const { return best_[param]; }
    const std::vector<std::size_t> & best_actions() const noexcept { return best_; }

    /// Sorted outcome alphabet of an action, shared by all parameters.
    std::span<const double> outcome_values(std::size_t action) const {
        return outcomes_[action];
    }
    std::size_t num_outcomes(std::size_t action) const { return outcomes_[action].size(); }
    /// P(Y_a = outcome_values(a)[y] | theta^param), one row per parameter.
    std::span<const double> likelihood_row(std::size_t action, std::size_t param) const {
        const std::size_t k = outcomes_[action].size();
        return {likelihood_[action].data() + param * k, k};
    }
    std::optional<std::size_t> outcome_index(std::size_t action, double value) const;

    /// Smallest and largest a'theta over the instance.
    std::pair<double, double> inner_range() const noexcept { return inner_range_; }
    /// min over theta of |alpha(theta)' theta|.
    double margin() const noexcept { return margin_; }

  private:
    ActionSet actions_;
    ParameterSet params_;
    OutcomeModel model_;
    std::vector<double> inner_;
    std::vector<double> mean_;
    std::vector<std::size_t> best_;
    std::vector<std::vector<double>> outcomes_;
    std::vector<std::vector<double>> likelihood_;
    std::pair<double, double> inner_range_{0.0, 0.0};
    double margin_ = 0.0;
};

double mean_reward(const BanditInstance & instance, std::size_t action, std::size_t param);

/// argmax over actions; ties go to the lowest action index.
std::size_t best_action(const BanditInstance & instance, std::size_t param);

OutcomePmf outcome_distribution(const BanditInstance & instance, std::size_t action,
                                std::size_t param);

/// sup of the mean map's derivative over [lo, hi]. Both supported links are
/// unimodal and symmetric about 0, so the sup sits at the point nearest 0.
double sup_mean_derivative(const OutcomeModel & model, double lo, double hi);

/// Uniform draw from the closed d-ball (Gaussian direction, radius U^{1/d}).
std::vector<double> sample_unit_ball(Rng & rng, std::size_t d);

BanditInstance sample_instance(Rng & rng, std::size_t d, std::size_t n_actions,
                               std::size_t m_params, const OutcomeModel & model);

/// Like sample_instance, but each parameter is redrawn until
/// |alpha(theta)' theta| >= delta. Throws Infeasible after `max_tries`
/// draws for a single parameter.
BanditInstance sample_instance_with_margin(Rng & rng, std::size_t d, std::size_t n_actions,
                                           std::size_t m_params, const OutcomeModel & model,
                                           double delta, std::size_t max_tries = 100000);

}  // namespace rdts
