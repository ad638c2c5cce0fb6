#include "rdts/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "rdts/error.hpp"

namespace rdts {

namespace {

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// Probabilities computed from inner products of unit vectors may drift a few
// ulps outside [0, 1]; anything further out means the instance is malformed.
double checked_probability(double p) {
    if (!(p >= -1e-9 && p <= 1.0 + 1e-9))
        throw Error(ErrorCode::InvalidInstance,
                    "outcome probability " + std::to_string(p) + " outside [0, 1]");
    return std::clamp(p, 0.0, 1.0);
}

void raw_outcomes(const OutcomeModel & model, double inner, std::vector<double> & values,
                  std::vector<double> & probs) {
    values.clear();
    probs.clear();
    switch (model.kind()) {
        case ModelKind::LinearBinary: {
            const double up = checked_probability(0.5 + 0.5 * inner);
            values = {-0.5, 0.5};
            probs = {1.0 - up, up};
            break;
        }
        case ModelKind::Logistic: {
            const double one = checked_probability(model.link()(inner));
            values = {0.0, 1.0};
            probs = {1.0 - one, one};
            break;
        }
        case ModelKind::Glm: {
            const double mu = model.link()(inner);
            if (model.eta() == 0.0) {
                values = {mu};
                probs = {1.0};
            } else {
                values = {mu - model.eta(), mu + model.eta()};
                probs = {0.5, 0.5};
            }
            break;
        }
    }
}

}  // namespace

template <typename Tag>
UnitBallPoints<Tag>::UnitBallPoints(const std::vector<std::vector<double>> & rows) {
    if (rows.empty()) throw Error(ErrorCode::InvalidInstance, "point set is empty");
    dim_ = rows.front().size();
    data_.reserve(rows.size() * dim_);
    for (const auto & row : rows) {
        if (row.size() != dim_)
            throw Error(ErrorCode::InvalidInstance, "point set has mixed dimensions");
        data_.insert(data_.end(), row.begin(), row.end());
    }
    validate();
}

template <typename Tag>
UnitBallPoints<Tag>::UnitBallPoints(std::size_t dim, std::vector<double> data)
    : dim_(dim), data_(std::move(data)) {
    if (dim_ == 0 || data_.empty() || data_.size() % dim_ != 0)
        throw Error(ErrorCode::InvalidInstance, "point set has invalid shape");
    validate();
}

template <typename Tag>
void UnitBallPoints<Tag>::validate() const {
    if (dim_ == 0) throw Error(ErrorCode::InvalidInstance, "dimension must be >= 1");
    for (std::size_t i = 0; i < size(); ++i) {
        const auto v = (*this)[i];
        for (double x : v)
            if (!std::isfinite(x))
                throw Error(ErrorCode::InvalidInstance, "non-finite coordinate");
        if (norm(v) > 1.0 + kNormTolerance)
            throw Error(ErrorCode::InvalidInstance,
                        "vector " + std::to_string(i) + " lies outside the unit ball");
    }
}

template class UnitBallPoints<ActionTag>;
template class UnitBallPoints<ParameterTag>;

double Link::operator()(double x) const {
    const double z = slope * x;
    if (kind == LinkKind::Logistic) return sigmoid(z);
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double Link::derivative(double x) const {
    const double z = slope * x;
    if (kind == LinkKind::Logistic) {
        // beta * sigma(z) * (1 - sigma(z)), written to avoid overflow at large |z|.
        const double e = std::exp(-std::fabs(z));
        return slope * e / ((1.0 + e) * (1.0 + e));
    }
    return slope * std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double Link::inverse(double p) const {
    if (!(p > 0.0 && p < 1.0))
        throw Error(ErrorCode::InvalidArgument, "link inverse needs p in (0, 1)");
    if (kind == LinkKind::Logistic) return std::log(p / (1.0 - p)) / slope;
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p) / slope;
}

OutcomeModel OutcomeModel::linear_binary() { return OutcomeModel{}; }

OutcomeModel OutcomeModel::logistic(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw Error(ErrorCode::InvalidArgument, "logistic beta must be positive and finite");
    OutcomeModel m;
    m.kind_ = ModelKind::Logistic;
    m.link_ = Link{LinkKind::Logistic, beta};
    return m;
}

OutcomeModel OutcomeModel::glm(Link link, double eta) {
    if (!(link.slope > 0.0) || !std::isfinite(link.slope))
        throw Error(ErrorCode::InvalidArgument, "link slope must be positive and finite");
    if (!(eta >= 0.0) || !std::isfinite(eta))
        throw Error(ErrorCode::InvalidArgument, "noise support eta must be >= 0");
    OutcomeModel m;
    m.kind_ = ModelKind::Glm;
    m.link_ = link;
    m.eta_ = eta;
    return m;
}

double OutcomeModel::mean(double inner) const {
    if (kind_ == ModelKind::LinearBinary) return 0.5 * inner;
    return link_(inner);
}

double OutcomeModel::mean_derivative(double inner) const {
    if (kind_ == ModelKind::LinearBinary) return 0.5;
    return link_.derivative(inner);
}

BanditInstance::BanditInstance(ActionSet actions, ParameterSet params, OutcomeModel model)
    : actions_(std::move(actions)), params_(std::move(params)), model_(model) {
    if (actions_.size() == 0 || params_.size() == 0)
        throw Error(ErrorCode::InvalidInstance, "instance needs at least one action and parameter");
    if (actions_.dim() != params_.dim())
        throw Error(ErrorCode::InvalidInstance, "action and parameter dimensions differ");

    const std::size_t n = actions_.size();
    const std::size_t m = params_.size();
    inner_.resize(n * m);
    mean_.resize(n * m);
    best_.resize(m);

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t arg = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const double x = dot(actions_[j], params_[i]);
            inner_[i * n + j] = x;
            mean_[i * n + j] = model_.mean(x);
            lo = std::min(lo, x);
            hi = std::max(hi, x);
            if (mean_[i * n + j] > mean_[i * n + arg]) arg = j;
        }
        best_[i] = arg;
    }
    inner_range_ = {lo, hi};
    margin_ = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i)
        margin_ = std::min(margin_, std::fabs(inner_[i * n + best_[i]]));

    // Per-action alphabet: union of the per-parameter supports, with values
    // closer than 1e-12 identified so that floating noise never makes an
    // outcome spuriously informative.
    outcomes_.resize(n);
    likelihood_.resize(n);
    double reward_lo = std::numeric_limits<double>::infinity();
    double reward_hi = -reward_lo;
    std::vector<double> values, probs;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> all;
        for (std::size_t i = 0; i < m; ++i) {
            raw_outcomes(model_, inner_[i * n + j], values, probs);
            all.insert(all.end(), values.begin(), values.end());
        }
        std::sort(all.begin(), all.end());
        std::vector<double> alphabet;
        for (double v : all)
            if (alphabet.empty() || v - alphabet.back() > 1e-12) alphabet.push_back(v);
        reward_lo = std::min(reward_lo, alphabet.front());
        reward_hi = std::max(reward_hi, alphabet.back());

        auto & lik = likelihood_[j];
        lik.assign(m * alphabet.size(), 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            raw_outcomes(model_, inner_[i * n + j], values, probs);
            for (std::size_t k = 0; k < values.size(); ++k) {
                auto it = std::upper_bound(alphabet.begin(), alphabet.end(), values[k] + 1e-12);
                const std::size_t y = static_cast<std::size_t>(it - alphabet.begin()) - 1;
                lik[i * alphabet.size() + y] += probs[k];
            }
        }
        outcomes_[j] = std::move(alphabet);
    }
    if (reward_hi - reward_lo > 1.0 + 1e-12)
        throw Error(ErrorCode::InvalidInstance,
                    "reward range " + std::to_string(reward_hi - reward_lo) + " exceeds 1");
}

std::optional<std::size_t> BanditInstance::outcome_index(std::size_t action, double value) const {
    const auto & alphabet = outcomes_.at(action);
    auto it = std::lower_bound(alphabet.begin(), alphabet.end(), value - 1e-12);
    if (it != alphabet.end() && std::fabs(*it - value) <= 1e-12)
        return static_cast<std::size_t>(it - alphabet.begin());
    return std::nullopt;
}

namespace {

void check_indices(const BanditInstance & instance, std::size_t action, std::size_t param) {
    if (action >= instance.num_actions())
        throw Error(ErrorCode::IndexOutOfRange, "action index " + std::to_string(action));
    if (param >= instance.num_params())
        throw Error(ErrorCode::IndexOutOfRange, "parameter index " + std::to_string(param));
}

}  // namespace

double mean_reward(const BanditInstance & instance, std::size_t action, std::size_t param) {
    check_indices(instance, action, param);
    return instance.mean(action, param);
}

std::size_t best_action(const BanditInstance & instance, std::size_t param) {
    check_indices(instance, 0, param);
    return instance.best(param);
}

OutcomePmf outcome_distribution(const BanditInstance & instance, std::size_t action,
                                std::size_t param) {
    check_indices(instance, action, param);
    OutcomePmf pmf;
    raw_outcomes(instance.model(), instance.inner(action, param), pmf.values, pmf.probs);
    return pmf;
}

double sup_mean_derivative(const OutcomeModel & model, double lo, double hi) {
    if (!(lo <= hi)) throw Error(ErrorCode::InvalidArgument, "derivative interval needs lo <= hi");
    return model.mean_derivative(std::clamp(0.0, lo, hi));
}

std::vector<double> sample_unit_ball(Rng & rng, std::size_t d) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> v(d);
    double len = 0.0;
    do {
        for (auto & x : v) x = gauss(rng);
        len = norm(v);
    } while (len == 0.0);
    const double radius = std::pow(unif(rng), 1.0 / static_cast<double>(d));
    for (auto & x : v) x *= radius / len;
    // Rounding can push a radius-1 draw a hair outside the ball.
    const double after = norm(v);
    if (after > 1.0)
        for (auto & x : v) x /= after;
    return v;
}

BanditInstance sample_instance(Rng & rng, std::size_t d, std::size_t n_actions,
                               std::size_t m_params, const OutcomeModel & model) {
    if (d == 0 || n_actions == 0 || m_params == 0)
        throw Error(ErrorCode::InvalidArgument, "d, n and m must all be >= 1");
    std::vector<double> actions, params;
    actions.reserve(d * n_actions);
    params.reserve(d * m_params);
    for (std::size_t j = 0; j < n_actions; ++j) {
        auto v = sample_unit_ball(rng, d);
        actions.insert(actions.end(), v.begin(), v.end());
    }
    for (std::size_t i = 0; i < m_params; ++i) {
        auto v = sample_unit_ball(rng, d);
        params.insert(params.end(), v.begin(), v.end());
    }
    return BanditInstance(ActionSet(d, std::move(actions)), ParameterSet(d, std::move(params)),
                          model);
}

BanditInstance sample_instance_with_margin(Rng & rng, std::size_t d, std::size_t n_actions,
                                           std::size_t m_params, const OutcomeModel & model,
                                           double delta, std::size_t max_tries) {
    if (d == 0 || n_actions == 0 || m_params == 0)
        throw Error(ErrorCode::InvalidArgument, "d, n and m must all be >= 1");
    std::vector<double> actions, params;
    actions.reserve(d * n_actions);
    params.reserve(d * m_params);
    for (std::size_t j = 0; j < n_actions; ++j) {
        auto v = sample_unit_ball(rng, d);
        actions.insert(actions.end(), v.begin(), v.end());
    }
    const ActionSet action_set(d, actions);
    for (std::size_t i = 0; i < m_params; ++i) {
        std::size_t tries = 0;
        for (;;) {
            if (tries++ == max_tries)
                throw Error(ErrorCode::Infeasible, "no parameter with the requested margin found");
            auto v = sample_unit_ball(rng, d);
            std::size_t arg = 0;
            double best_mean = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < n_actions; ++j) {
                const double mu = model.mean(dot(action_set[j], v));
                if (mu > best_mean) {
                    best_mean = mu;
                    arg = j;
                }
            }
            if (std::fabs(dot(action_set[arg], v)) >= delta) {
                params.insert(params.end(), v.begin(), v.end());
                break;
            }
        }
    }
    return BanditInstance(ActionSet(d, std::move(actions)), ParameterSet(d, std::move(params)),
                          model);
}

}  // namespace rdts
