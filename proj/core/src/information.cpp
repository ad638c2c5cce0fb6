#include "rdts/information.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rdts/error.hpp"
#include "rdts/numeric.hpp"

namespace rdts {

namespace {

void check_sizes(const BanditInstance & instance, const BeliefState & belief) {
    if (belief.size() != instance.num_params())
        throw Error(ErrorCode::InvalidArgument, "belief and instance sizes differ");
}

// Mean of action a under the belief: sum_i p_i mu(a, theta^i).
std::vector<double> predictive_means(const BanditInstance & instance, const BeliefState & belief) {
    const std::size_t n = instance.num_actions();
    std::vector<CompensatedSum> acc(n);
    for (std::size_t i = 0; i < belief.size(); ++i) {
        if (belief[i] == 0.0) continue;
        const auto row = instance.mean_row(i);
        for (std::size_t a = 0; a < n; ++a) acc[a] += belief[i] * row[a];
    }
    std::vector<double> out(n);
    for (std::size_t a = 0; a < n; ++a) out[a] = acc[a].value();
    return out;
}

// Joint of (psi, Y_a) with rows indexed by cell.
JointTable cell_outcome_joint(const BanditInstance & instance, const BeliefState & belief,
                              const Partition & partition, std::size_t action) {
    const std::size_t ny = instance.num_outcomes(action);
    JointTable joint(partition.num_cells(), ny);
    for (std::size_t k = 0; k < partition.num_cells(); ++k) {
        for (std::size_t y = 0; y < ny; ++y) {
            CompensatedSum acc;
            for (std::size_t i : partition.members(k))
                acc += belief[i] * instance.likelihood_row(action, i)[y];
            joint.at(k, y) = acc.value();
        }
    }
    return joint;
}

// Mutual information of a joint that is a valid sub-probability table; no
// normalization check, used on internally built tables.
double mutual_information_unchecked(const JointTable & joint) {
    std::vector<CompensatedSum> row_acc(joint.rows), col_acc(joint.cols);
    for (std::size_t u = 0; u < joint.rows; ++u)
        for (std::size_t v = 0; v < joint.cols; ++v) {
            row_acc[u] += joint.at(u, v);
            col_acc[v] += joint.at(u, v);
        }
    std::vector<double> pu(joint.rows), pv(joint.cols);
    for (std::size_t u = 0; u < joint.rows; ++u) pu[u] = row_acc[u].value();
    for (std::size_t v = 0; v < joint.cols; ++v) pv[v] = col_acc[v].value();

    CompensatedSum acc;
    for (std::size_t u = 0; u < joint.rows; ++u) {
        if (pu[u] <= 0.0) continue;
        for (std::size_t v = 0; v < joint.cols; ++v) {
            const double p = joint.at(u, v);
            if (p <= 0.0) continue;
            acc += p * std::log(p / (pu[u] * pv[v]));
        }
    }
    const double mi = acc.value();
    return mi < 0.0 && mi > -1e-12 ? 0.0 : mi;
}

struct RepresentativeLaw {
    // Support of the representative: parameter index, owning cell, and
    // conditional probability given that cell.
    std::vector<std::size_t> value;
    std::vector<std::size_t> cell;
    std::vector<double> weight;
    std::vector<double> marginal;  // P(representative = value[s])
};

RepresentativeLaw representative_law(const Representation & rep) {
    RepresentativeLaw law;
    for (std::size_t k = 0; k < rep.cells.size(); ++k) {
        const auto & c = rep.cells[k];
        auto push = [&](std::size_t idx, double w) {
            if (w <= 0.0) return;
            law.value.push_back(idx);
            law.cell.push_back(k);
            law.weight.push_back(w);
            law.marginal.push_back(rep.cell_mass[k] * w);
        };
        if (c.idx1 == c.idx2) {
            push(c.idx1, 1.0);
        } else {
            push(c.idx1, c.r);
            push(c.idx2, 1.0 - c.r);
        }
    }
    return law;
}

}  // namespace

void validate_pmf(std::span<const double> p) {
    if (p.empty()) throw Error(ErrorCode::InvalidPmf, "empty pmf");
    for (double x : p)
        if (!(x >= 0.0) || !std::isfinite(x))
            throw Error(ErrorCode::InvalidPmf, "pmf entries must be finite and >= 0");
    const double total = compensated_sum(p);
    if (std::fabs(total - 1.0) > 1e-9)
        throw Error(ErrorCode::InvalidPmf, "pmf sums to " + std::to_string(total));
}

double entropy(std::span<const double> p) {
    validate_pmf(p);
    CompensatedSum acc;
    for (double x : p) acc += xlogx(x);
    return -acc.value();
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
    validate_pmf(p);
    validate_pmf(q);
    if (p.size() != q.size()) throw Error(ErrorCode::InvalidPmf, "pmf sizes differ");
    CompensatedSum acc;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
        acc += p[i] * std::log(p[i] / q[i]);
    }
    return acc.value();
}

double mutual_information(const JointTable & joint) {
    if (joint.p.size() != joint.rows * joint.cols)
        throw Error(ErrorCode::InvalidPmf, "joint table shape mismatch");
    validate_pmf(joint.p);
    return mutual_information_unchecked(joint);
}

double information_about_parameter(const BanditInstance & instance, const BeliefState & belief,
                                   std::size_t action) {
    check_sizes(instance, belief);
    const std::size_t ny = instance.num_outcomes(action);
    std::vector<double> marginal(ny);
    for (std::size_t y = 0; y < ny; ++y) {
        CompensatedSum acc;
        for (std::size_t i = 0; i < belief.size(); ++i)
            acc += belief[i] * instance.likelihood_row(action, i)[y];
        marginal[y] = acc.value();
    }
    CompensatedSum acc;
    for (std::size_t i = 0; i < belief.size(); ++i) {
        if (belief[i] == 0.0) continue;
        const auto row = instance.likelihood_row(action, i);
        for (std::size_t y = 0; y < ny; ++y)
            if (row[y] > 0.0) acc += belief[i] * row[y] * std::log(row[y] / marginal[y]);
    }
    const double mi = acc.value();
    return mi < 0.0 && mi > -1e-12 ? 0.0 : mi;
}

InfoRatioReport make_ratio_report(double numerator, double denominator) {
    InfoRatioReport report;
    report.numerator = numerator;
    report.denominator = denominator;
    if (denominator <= kDenominatorTolerance) {
        if (numerator > kNumeratorTolerance)
            throw Error(ErrorCode::DegenerateInformation,
                        "regret " + std::to_string(numerator) + " with no information gain");
        report.degenerate = true;
        report.ratio = 0.0;
        return report;
    }
    report.ratio = numerator / denominator;
    return report;
}

double ts_regret_gap(const BanditInstance & instance, const BeliefState & belief) {
    check_sizes(instance, belief);
    const auto means = predictive_means(instance, belief);
    // sum_i p_i [ mu(alpha_i, theta^i) - E mu(alpha_i, theta*) ]
    CompensatedSum gap;
    for (std::size_t i = 0; i < belief.size(); ++i) {
        if (belief[i] == 0.0) continue;
        const std::size_t a = instance.best(i);
        gap += belief[i] * (instance.mean(a, i) - means[a]);
    }
    return gap.value();
}

double ts_information(const BanditInstance & instance, const BeliefState & belief) {
    const auto action_prob = optimal_action_distribution(belief, instance);
    CompensatedSum info;
    for (std::size_t a = 0; a < action_prob.size(); ++a)
        if (action_prob[a] > 0.0)
            info += action_prob[a] * information_about_parameter(instance, belief, a);
    return info.value();
}

InfoRatioReport ts_info_ratio(const BanditInstance & instance, const BeliefState & belief) {
    const double regret = ts_regret_gap(instance, belief);
    return make_ratio_report(regret * regret, ts_information(instance, belief));
}

std::vector<double> cell_masses(const BeliefState & belief, const Partition & partition) {
    if (belief.size() != partition.size())
        throw Error(ErrorCode::InvalidArgument, "belief and partition sizes differ");
    std::vector<double> mass(partition.num_cells());
    for (std::size_t k = 0; k < partition.num_cells(); ++k) {
        CompensatedSum acc;
        for (std::size_t i : partition.members(k)) acc += belief[i];
        mass[k] = acc.value();
    }
    return mass;
}

void check_representation(const BeliefState & belief, const Representation & rep) {
    const auto & partition = rep.partition;
    const auto mass = cell_masses(belief, partition);
    if (rep.cell_mass.size() != mass.size() || rep.cells.size() != mass.size())
        throw Error(ErrorCode::InconsistentRepresentation, "representation has the wrong cell count");
    for (std::size_t k = 0; k < mass.size(); ++k) {
        if (std::fabs(mass[k] - rep.cell_mass[k]) > 1e-9)
            throw Error(ErrorCode::InconsistentRepresentation,
                        "cell " + std::to_string(k) + " mass disagrees with the belief");
        const auto & c = rep.cells[k];
        if (c.idx1 >= partition.size() || c.idx2 >= partition.size() ||
            partition.cell_of(c.idx1) != k || partition.cell_of(c.idx2) != k || !(c.r >= 0.0 && c.r <= 1.0))
            throw Error(ErrorCode::InconsistentRepresentation,
                        "cell " + std::to_string(k) + " representative is malformed");
    }
}

double compressed_regret_gap(const BanditInstance & instance, const BeliefState & belief,
                             const Representation & rep) {
    check_sizes(instance, belief);
    check_representation(belief, rep);
    const auto law = representative_law(rep);
    const auto means = predictive_means(instance, belief);

    // E[mu(alpha(rep), theta*)] - E[mu(alpha(rep copy), theta*)]
    CompensatedSum gap;
    for (std::size_t s = 0; s < law.value.size(); ++s) {
        const std::size_t a = instance.best(law.value[s]);
        CompensatedSum in_cell;
        for (std::size_t i : rep.partition.members(law.cell[s])) in_cell += belief[i] * instance.mean(a, i);
        gap += law.weight[s] * in_cell.value();
        gap += -law.marginal[s] * means[a];
    }
    return gap.value();
}

double compressed_information(const BanditInstance & instance, const BeliefState & belief,
                              const Representation & rep) {
    check_sizes(instance, belief);
    check_representation(belief, rep);
    const auto law = representative_law(rep);

    // sum_v q_v I(rep; Y_{alpha(v)}), with P(rep = v, y) = w_v P(psi = cell(v), y).
    CompensatedSum info;
    for (std::size_t s = 0; s < law.value.size(); ++s) {
        const std::size_t a = instance.best(law.value[s]);
        const auto cells = cell_outcome_joint(instance, belief, rep.partition, a);
        JointTable joint(law.value.size(), cells.cols);
        for (std::size_t t = 0; t < law.value.size(); ++t)
            for (std::size_t y = 0; y < cells.cols; ++y)
                joint.at(t, y) = law.weight[t] * cells.at(law.cell[t], y);
        info += law.marginal[s] * mutual_information_unchecked(joint);
    }
    return info.value();
}

double compressed_statistic_information(const BanditInstance & instance, const BeliefState & belief,
                                        const Representation & rep) {
    check_sizes(instance, belief);
    check_representation(belief, rep);
    const auto law = representative_law(rep);
    CompensatedSum info;
    for (std::size_t s = 0; s < law.value.size(); ++s)
        info += law.marginal[s] *
                info_gain_about_statistic(instance, belief, rep.partition, instance.best(law.value[s]));
    return info.value();
}

double ts_statistic_information(const BanditInstance & instance, const BeliefState & belief,
                                const Partition & partition) {
    const auto action_prob = optimal_action_distribution(belief, instance);
    CompensatedSum info;
    for (std::size_t a = 0; a < action_prob.size(); ++a)
        if (action_prob[a] > 0.0)
            info += action_prob[a] * info_gain_about_statistic(instance, belief, partition, a);
    return info.value();
}

InfoRatioReport compressed_info_ratio(const BanditInstance & instance, const BeliefState & belief,
                                      const Representation & rep) {
    const double regret = compressed_regret_gap(instance, belief, rep);
    return make_ratio_report(regret * regret, compressed_information(instance, belief, rep));
}

double info_gain_about_statistic(const BanditInstance & instance, const BeliefState & belief,
                                 const Partition & partition, std::size_t action) {
    check_sizes(instance, belief);
    if (partition.size() != belief.size())
        throw Error(ErrorCode::InvalidArgument, "belief and partition sizes differ");
    if (action >= instance.num_actions())
        throw Error(ErrorCode::IndexOutOfRange, "action index " + std::to_string(action));
    return mutual_information_unchecked(cell_outcome_joint(instance, belief, partition, action));
}

}  // namespace rdts
