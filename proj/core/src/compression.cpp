#include "rdts/compression.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "rdts/error.hpp"
#include "rdts/information.hpp"
#include "rdts/numeric.hpp"

namespace rdts {

Partition::Partition(std::vector<std::size_t> cell_of, double epsilon)
    : cell_of_(std::move(cell_of)), epsilon_(epsilon) {
    if (cell_of_.empty()) throw Error(ErrorCode::InvalidArgument, "partition of an empty set");
    const std::size_t k = *std::max_element(cell_of_.begin(), cell_of_.end()) + 1;
    members_.resize(k);
    for (std::size_t i = 0; i < cell_of_.size(); ++i) members_[cell_of_[i]].push_back(i);
    for (std::size_t c = 0; c < k; ++c)
        if (members_[c].empty())
            throw Error(ErrorCode::InvalidArgument, "partition cell " + std::to_string(c) + " is empty");
}

Partition Partition::singletons(std::size_t m, double epsilon) {
    std::vector<std::size_t> cells(m);
    for (std::size_t i = 0; i < m; ++i) cells[i] = i;
    return Partition(std::move(cells), epsilon);
}

Partition Partition::single_cell(std::size_t m, double epsilon) {
    return Partition(std::vector<std::size_t>(m, 0), epsilon);
}

double distortion(const BanditInstance & instance, std::size_t i, std::size_t j) {
    if (i >= instance.num_params() || j >= instance.num_params())
        throw Error(ErrorCode::IndexOutOfRange, "parameter index out of range");
    return instance.mean(instance.best(j), j) - instance.mean(instance.best(i), j);
}

double max_intra_cell_distortion(const BanditInstance & instance, const Partition & partition) {
    if (partition.size() != instance.num_params())
        throw Error(ErrorCode::InvalidArgument, "partition and instance sizes differ");
    double worst = 0.0;
    for (std::size_t k = 0; k < partition.num_cells(); ++k) {
        const auto & cell = partition.members(k);
        for (std::size_t i : cell)
            for (std::size_t j : cell) worst = std::max(worst, distortion(instance, i, j));
    }
    return worst;
}

std::vector<std::size_t> greedy_cover(const ActionSet & points, std::span<const std::size_t> subset,
                                      double radius) {
    constexpr std::size_t unassigned = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> group(subset.size(), unassigned);
    std::size_t next = 0;
    for (std::size_t c = 0; c < subset.size(); ++c) {
        if (group[c] != unassigned) continue;
        const auto center = points[subset[c]];
        for (std::size_t q = c; q < subset.size(); ++q)
            if (group[q] == unassigned && distance(center, points[subset[q]]) <= radius)
                group[q] = next;
        ++next;
    }
    return group;
}

namespace {

void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw Error(ErrorCode::InvalidEpsilon, "epsilon must be positive and finite");
}

void certify(const BanditInstance & instance, const Partition & partition) {
    const double worst = max_intra_cell_distortion(instance, partition);
    if (worst > partition.epsilon() + kCertificateTolerance)
        throw Error(ErrorCode::CertificateViolated,
                    "intra-cell distortion " + std::to_string(worst) + " exceeds epsilon " +
                        std::to_string(partition.epsilon()));
}

// Greedy cover of the distinct best actions among `params`; writes cell ids
// starting at `first_cell` and returns the number of cells created.
std::size_t cover_group(const BanditInstance & instance, std::span<const std::size_t> params,
                        double radius, std::size_t first_cell, std::vector<std::size_t> & cell_of) {
    std::vector<std::size_t> actions;
    for (std::size_t i : params) actions.push_back(instance.best(i));
    std::sort(actions.begin(), actions.end());
    actions.erase(std::unique(actions.begin(), actions.end()), actions.end());
    if (actions.empty()) return 0;

    const auto group = greedy_cover(instance.actions(), actions, radius);
    for (std::size_t i : params) {
        const auto pos = std::lower_bound(actions.begin(), actions.end(), instance.best(i)) - actions.begin();
        cell_of[i] = first_cell + group[static_cast<std::size_t>(pos)];
    }
    return *std::max_element(group.begin(), group.end()) + 1;
}

double packing_bound(double radius, std::size_t d) {
    return std::pow(1.0 + 2.0 / radius, static_cast<double>(d));
}

}  // namespace

Partition cover_best_actions(const BanditInstance & instance, double radius, double epsilon) {
    const std::size_t m = instance.num_params();
    std::vector<std::size_t> all(m);
    for (std::size_t i = 0; i < m; ++i) all[i] = i;
    std::vector<std::size_t> cell_of(m, 0);
    cover_group(instance, all, radius, 0, cell_of);
    Partition partition(std::move(cell_of), epsilon);
    partition.set_cardinality_bound(packing_bound(radius, instance.dim()));
    return partition;
}

Partition build_partition_linear(const BanditInstance & instance, double epsilon) {
    check_epsilon(epsilon);
    if (instance.model().kind() != ModelKind::LinearBinary)
        throw Error(ErrorCode::UnsupportedModel, "linear builder needs a linear-binary instance");
    // Cell diameter <= 2 epsilon and rewards are a'theta / 2.
    auto partition = cover_best_actions(instance, epsilon, epsilon);
    certify(instance, partition);
    return partition;
}

Partition build_partition_glm(const BanditInstance & instance, double epsilon, double c_phi) {
    check_epsilon(epsilon);
    if (!(c_phi > 0.0) || !std::isfinite(c_phi))
        throw Error(ErrorCode::InvalidArgument, "C(phi) must be positive and finite");
    auto partition = cover_best_actions(instance, epsilon / (2.0 * c_phi), epsilon);
    certify(instance, partition);
    return partition;
}

Partition build_partition_glm(const BanditInstance & instance, double epsilon) {
    const auto kind = instance.model().kind();
    if (kind != ModelKind::Glm && kind != ModelKind::Logistic)
        throw Error(ErrorCode::UnsupportedModel, "GLM builder needs a GLM or logistic instance");
    const auto [lo, hi] = instance.inner_range();
    return build_partition_glm(instance, epsilon, sup_mean_derivative(instance.model(), lo, hi));
}

LogisticLayers logistic_layers(double beta, double delta, double epsilon) {
    check_epsilon(epsilon);
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw Error(ErrorCode::InvalidArgument, "beta must be positive and finite");
    if (!(delta > 0.0 && delta <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "margin delta must lie in (0, 1]");
    const Link phi{LinkKind::Logistic, beta};
    const double at_delta = phi(delta);
    if (epsilon >= at_delta - 0.5)
        throw Error(ErrorCode::EpsilonTooLarge,
                    "epsilon must be below phi(delta) - 1/2 = " + std::to_string(at_delta - 0.5));

    // Smallest L with phi(delta) + (L - 1) epsilon >= phi(1).
    const double gap = phi(1.0) - at_delta;
    double guess = gap > 0.0 ? std::ceil(gap / epsilon) + 1.0 : 1.0;
    if (guess > 1e6) throw Error(ErrorCode::TooLarge, "epsilon too small for the layered partition");
    auto count = static_cast<std::size_t>(guess);
    while (count > 1 && at_delta + static_cast<double>(count - 2) * epsilon >= phi(1.0)) --count;
    while (at_delta + static_cast<double>(count - 1) * epsilon < phi(1.0)) ++count;

    LogisticLayers layers;
    layers.count = count;
    layers.edges.push_back(phi.inverse(at_delta - epsilon));
    layers.edges.push_back(delta);
    for (std::size_t l = 2; l < count; ++l)
        layers.edges.push_back(phi.inverse(at_delta + static_cast<double>(l - 1) * epsilon));
    if (count >= 2) layers.edges.push_back(1.0);
    return layers;
}

Partition build_partition_logistic(const BanditInstance & instance, double epsilon, double delta) {
    const auto & model = instance.model();
    const bool logistic_link = model.kind() == ModelKind::Logistic ||
                               (model.kind() == ModelKind::Glm && model.link().kind == LinkKind::Logistic);
    if (!logistic_link)
        throw Error(ErrorCode::UnsupportedModel, "layered builder needs a logistic link");
    const auto layers = logistic_layers(model.beta(), delta, epsilon);
    if (instance.margin() < delta - kCertificateTolerance)
        throw Error(ErrorCode::MarginViolated,
                    "instance margin " + std::to_string(instance.margin()) + " is below delta " +
                        std::to_string(delta));

    const auto & s = layers.edges;
    const std::size_t top_layer = std::max<std::size_t>(1, layers.count - 1);
    // Group parameters by (sign of alpha(theta)'theta, layer index).
    std::map<std::pair<int, std::size_t>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < instance.num_params(); ++i) {
        const double x = instance.inner(instance.best(i), i);
        const double level = std::fabs(x);
        std::size_t layer = 1;
        while (layer < top_layer && s[layer + 1] <= level) ++layer;
        groups[{x >= 0.0 ? 0 : 1, layer}].push_back(i);
    }

    std::vector<std::size_t> cell_of(instance.num_params(), 0);
    std::size_t cells = 0;
    double bound = 0.0;
    for (const auto & [key, params] : groups) {
        const double width = s[key.second] - s[key.second - 1];
        cells += cover_group(instance, params, width / 2.0, cells, cell_of);
        bound += packing_bound(width / 2.0, instance.dim());
    }
    Partition partition(std::move(cell_of), epsilon);
    partition.set_cardinality_bound(bound);
    certify(instance, partition);
    return partition;
}

TwoPointMixture two_point_pair(std::span<const double> a, std::span<const double> b,
                               std::span<const double> p) {
    if (a.empty() || a.size() != b.size() || a.size() != p.size())
        throw Error(ErrorCode::InvalidArgument, "two_point_pair needs equal, non-empty lengths");
    validate_pmf(p);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!std::isfinite(a[i]) || !std::isfinite(b[i]))
            throw Error(ErrorCode::Infeasible, "non-finite score");

    CompensatedSum mean_a_acc, mean_b_acc;
    for (std::size_t i = 0; i < a.size(); ++i) {
        mean_a_acc += p[i] * a[i];
        mean_b_acc += p[i] * b[i];
    }
    const double mean_a = mean_a_acc.value();
    const double mean_b = mean_b_acc.value();
    constexpr double tol = 1e-12;

    auto holds = [&](std::size_t j, std::size_t k, double r) {
        return r * a[j] + (1.0 - r) * a[k] <= mean_a + tol &&
               r * b[j] + (1.0 - r) * b[k] <= mean_b + tol;
    };

    const std::size_t n = a.size();
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            if (j == k) {
                if (holds(j, j, 1.0)) return {j, j, 1.0};
                continue;
            }
            // r (x_j - x_k) <= mean_x - x_k for x in {a, b}, r in [0, 1].
            double lo = 0.0, hi = 1.0;
            bool feasible = true;
            for (auto [slope, rhs] : {std::pair{a[j] - a[k], mean_a - a[k]},
                                      std::pair{b[j] - b[k], mean_b - b[k]}}) {
                if (slope > 0.0)
                    hi = std::min(hi, rhs / slope);
                else if (slope < 0.0)
                    lo = std::max(lo, rhs / slope);
                else if (rhs < -tol)
                    feasible = false;
            }
            if (!feasible) continue;
            double r;
            if (lo <= hi)
                r = lo;
            else if (lo - hi <= tol)
                r = 0.5 * (lo + hi);
            else
                continue;
            r = std::clamp(r, 0.0, 1.0);
            if (holds(j, k, r)) return {j, k, r};
        }
    }
    throw Error(ErrorCode::Infeasible, "no feasible two-point mixture");
}

Representation build_representation(const BanditInstance & instance, const BeliefState & belief,
                                    const Partition & partition) {
    if (belief.size() != instance.num_params() || partition.size() != instance.num_params())
        throw Error(ErrorCode::InvalidArgument, "instance, belief and partition sizes differ");

    const auto mass = cell_masses(belief, partition);
    std::vector<double> means(instance.num_actions());
    for (std::size_t a = 0; a < means.size(); ++a) {
        CompensatedSum acc;
        for (std::size_t i = 0; i < belief.size(); ++i) acc += belief[i] * instance.mean(a, i);
        means[a] = acc.value();
    }
    std::vector<double> gain(instance.num_actions(), std::numeric_limits<double>::quiet_NaN());
    auto gain_of = [&](std::size_t action) {
        if (std::isnan(gain[action]))
            gain[action] = info_gain_about_statistic(instance, belief, partition, action);
        return gain[action];
    };

    Representation rep{partition, {}, mass};
    rep.cells.resize(partition.num_cells());
    for (std::size_t k = 0; k < partition.num_cells(); ++k) {
        const auto & cell = partition.members(k);
        if (!(mass[k] > 0.0)) {
            rep.cells[k] = {cell.front(), cell.front(), 1.0};
            continue;
        }
        std::vector<std::size_t> candidates;
        std::vector<double> score_reward, score_info, weight;
        for (std::size_t i : cell) {
            if (belief[i] <= 0.0) continue;
            candidates.push_back(i);
            score_reward.push_back(means[instance.best(i)]);
            score_info.push_back(gain_of(instance.best(i)));
            weight.push_back(belief[i] / mass[k]);
        }
        // Renormalize so the in-cell weights are a pmf to working precision.
        const double total = compensated_sum(weight);
        for (auto & w : weight) w /= total;
        const auto mix = two_point_pair(score_reward, score_info, weight);
        rep.cells[k] = {candidates[mix.j], candidates[mix.k], mix.r};
    }
    return rep;
}

double statistic_mutual_information(const BeliefState & belief, const Partition & partition) {
    return entropy(cell_masses(belief, partition));
}

RateDistortionResult rate_distortion_bruteforce(const BanditInstance & instance,
                                                const BeliefState & belief, double epsilon) {
    check_epsilon(epsilon);
    const std::size_t m = instance.num_params();
    if (m > kBruteForceMaxParams)
        throw Error(ErrorCode::TooLarge, "brute-force search is limited to m <= 8");
    if (belief.size() != m) throw Error(ErrorCode::InvalidArgument, "belief and instance sizes differ");

    std::vector<std::vector<bool>> compatible(m, std::vector<bool>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            compatible[i][j] = std::max(distortion(instance, i, j), distortion(instance, j, i)) <=
                               epsilon + kCertificateTolerance;

    std::vector<std::size_t> assign(m, 0), best_assign;
    std::vector<std::vector<std::size_t>> blocks;
    double best_info = std::numeric_limits<double>::infinity();

    // Restricted-growth enumeration of set partitions, pruned on compatibility.
    std::function<void(std::size_t)> visit = [&](std::size_t i) {
        if (i == m) {
            std::vector<double> mass(blocks.size());
            for (std::size_t k = 0; k < blocks.size(); ++k) {
                CompensatedSum acc;
                for (std::size_t q : blocks[k]) acc += belief[q];
                mass[k] = acc.value();
            }
            CompensatedSum h;
            for (double x : mass) h += -xlogx(x);
            if (h.value() < best_info) {
                best_info = h.value();
                best_assign = assign;
            }
            return;
        }
        for (std::size_t k = 0; k <= blocks.size(); ++k) {
            if (k < blocks.size()) {
                bool ok = true;
                for (std::size_t q : blocks[k]) ok = ok && compatible[i][q];
                if (!ok) continue;
                blocks[k].push_back(i);
                assign[i] = k;
                visit(i + 1);
                blocks[k].pop_back();
            } else {
                blocks.push_back({i});
                assign[i] = k;
                visit(i + 1);
                blocks.pop_back();
            }
        }
    };
    visit(0);

    Partition partition(best_assign, epsilon);
    return {partition.num_cells(), std::max(0.0, best_info), partition};
}

CompressionCheck evaluate_compression(const BanditInstance & instance, const BeliefState & belief,
                                      const Representation & representation) {
    CompressionCheck check;
    check.ts_regret = ts_regret_gap(instance, belief);
    check.compressed_regret = compressed_regret_gap(instance, belief, representation);
    check.regret_slack = check.ts_regret - check.compressed_regret;
    check.info_rep = compressed_information(instance, belief, representation);
    check.info_psi_rep = compressed_statistic_information(instance, belief, representation);
    check.info_psi_ts = ts_statistic_information(instance, belief, representation.partition);
    check.posterior_entropy_psi = statistic_mutual_information(belief, representation.partition);
    return check;
}

}  // namespace rdts
