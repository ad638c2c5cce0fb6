#include "rdts/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "rdts/compression.hpp"
#include "rdts/error.hpp"
#include "rdts/information.hpp"
#include "rdts/policy.hpp"

namespace rdts {

namespace {

using CountKey = std::vector<std::uint16_t>;
using Layer = std::map<CountKey, double>;

struct Categories {
    std::vector<std::size_t> offset;  // first category of each action
    std::size_t total = 0;
};

Categories make_categories(const BanditInstance & instance) {
    Categories c;
    c.offset.resize(instance.num_actions());
    for (std::size_t a = 0; a < instance.num_actions(); ++a) {
        c.offset[a] = c.total;
        c.total += instance.num_outcomes(a);
    }
    return c;
}

// Posterior from counts alone, so every path to the same counts yields the
// same belief bit for bit.
BeliefState belief_from_counts(const BanditInstance & instance, const BeliefState & prior,
                               const Categories & cats, const CountKey & key) {
    const std::size_t m = instance.num_params();
    std::vector<double> logw(m, 0.0);
    std::vector<bool> alive(m, true);
    for (std::size_t i = 0; i < m; ++i) {
        if (prior[i] <= 0.0) {
            alive[i] = false;
            continue;
        }
        double lw = std::log(prior[i]);
        for (std::size_t a = 0; a < instance.num_actions() && alive[i]; ++a) {
            const auto row = instance.likelihood_row(a, i);
            for (std::size_t y = 0; y < row.size(); ++y) {
                const auto c = key[cats.offset[a] + y];
                if (c == 0) continue;
                if (row[y] <= 0.0) {
                    alive[i] = false;
                    break;
                }
                lw += c * std::log(row[y]);
            }
        }
        logw[i] = lw;
    }
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i)
        if (alive[i]) top = std::max(top, logw[i]);
    std::vector<double> w(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (alive[i]) w[i] = std::exp(logw[i] - top);
    return normalized_belief(std::move(w));
}

struct LayerTotals {
    CompensatedSum regret, compressed, info_rep, info_psi_rep, info_psi, entropy;
    // Maxima over states of (ts - compressed) - eps and of the
    // data-processing gaps.
    double slack_violation = -std::numeric_limits<double>::infinity();
    double dpi_violation = -std::numeric_limits<double>::infinity();
};

}  // namespace

AuditReport audit_theorem1_chain(const BanditInstance & instance, const BeliefState & prior,
                                 const Partition & partition, std::size_t horizon,
                                 std::uint64_t seed, const AuditOptions & options) {
    const std::size_t m = instance.num_params();
    const std::size_t n = instance.num_actions();
    if (prior.size() != m || partition.size() != m)
        throw Error(ErrorCode::InvalidArgument, "prior and partition must match the instance");
    if (horizon == 0) throw Error(ErrorCode::InvalidArgument, "horizon must be >= 1");
    if (horizon > 60000) throw Error(ErrorCode::GuardExceeded, "horizon too long for exact audit");

    std::size_t widest = 0;
    for (std::size_t a = 0; a < n; ++a) widest = std::max(widest, instance.num_outcomes(a));
    const double work = static_cast<double>(m) * static_cast<double>(n) * static_cast<double>(widest);
    if (work > kAuditWorkGuard)
        throw Error(ErrorCode::GuardExceeded,
                    "m * n * |outcomes| = " + std::to_string(work) + " exceeds the audit guard");

    const double eps = partition.epsilon();
    const double tol = options.tolerance;
    const Categories cats = make_categories(instance);

    AuditReport report;
    report.epsilon = eps;
    report.info_theta_psi = statistic_mutual_information(prior, partition);

    Layer layer;
    layer.emplace(CountKey(cats.total, 0), 1.0);
    std::vector<LayerTotals> totals;
    std::vector<std::size_t> state_counts;
    std::vector<double> expected_entropy;  // E H_t(psi), t = 0..T

    auto entropy_of_layer = [&](const Layer & states) {
        CompensatedSum h;
        for (const auto & [key, prob] : states)
            h += prob * statistic_mutual_information(
                            belief_from_counts(instance, prior, cats, key), partition);
        return h.value();
    };

    for (std::size_t t = 1; t <= horizon; ++t) {
        if (layer.size() > options.max_states)
            throw Error(ErrorCode::GuardExceeded,
                        "period " + std::to_string(t) + " has " + std::to_string(layer.size()) +
                            " reachable posteriors");
        LayerTotals tot;
        Layer next;
        for (const auto & [key, prob] : layer) {
            const BeliefState belief = belief_from_counts(instance, prior, cats, key);
            const Representation rep = build_representation(instance, belief, partition);
            const CompressionCheck chk = evaluate_compression(instance, belief, rep);

            tot.regret += prob * chk.ts_regret;
            tot.compressed += prob * chk.compressed_regret;
            tot.info_rep += prob * chk.info_rep;
            tot.info_psi_rep += prob * chk.info_psi_rep;
            tot.info_psi += prob * chk.info_psi_ts;
            tot.entropy += prob * chk.posterior_entropy_psi;
            tot.slack_violation = std::max(tot.slack_violation, chk.regret_slack - eps);
            tot.dpi_violation = std::max({tot.dpi_violation, chk.info_rep - chk.info_psi_rep,
                                          chk.info_psi_rep - chk.info_psi_ts});

            const auto q = optimal_action_distribution(belief, instance);
            for (std::size_t a = 0; a < n; ++a) {
                if (q[a] <= 0.0) continue;
                for (std::size_t y = 0; y < instance.num_outcomes(a); ++y) {
                    CompensatedSum py;
                    for (std::size_t i = 0; i < m; ++i)
                        py += belief[i] * instance.likelihood_row(a, i)[y];
                    if (py.value() <= 0.0) continue;
                    CountKey child = key;
                    ++child[cats.offset[a] + y];
                    next[std::move(child)] += prob * q[a] * py.value();
                }
            }
        }
        expected_entropy.push_back(tot.entropy.value());
        totals.push_back(tot);
        state_counts.push_back(layer.size());
        layer = std::move(next);
    }
    expected_entropy.push_back(entropy_of_layer(layer));

    const double h0 = expected_entropy.front();
    std::vector<double> gamma(horizon, 0.0);
    for (std::size_t t = 0; t < horizon; ++t) {
        const auto r = make_ratio_report(std::pow(totals[t].compressed.value(), 2),
                                         totals[t].info_rep.value());
        gamma[t] = r.ratio;
    }
    report.gamma_bar = *std::max_element(gamma.begin(), gamma.end());
    const double gbar = report.gamma_bar;

    CompensatedSum cum_regret, cum_root, cum_info;
    for (std::size_t t = 0; t < horizon; ++t) {
        const auto & tot = totals[t];
        AuditRow row;
        row.period = t + 1;
        row.regret = tot.regret.value();
        row.compressed_regret = tot.compressed.value();
        row.gamma = gamma[t];
        row.info_rep = tot.info_rep.value();
        row.info_psi_rep = tot.info_psi_rep.value();
        row.info_psi = tot.info_psi.value();
        row.info_psi_history = h0 - expected_entropy[t + 1];
        row.states = state_counts[t];
        cum_regret += row.regret;
        cum_root += std::sqrt(gbar * row.info_psi);
        cum_info += row.info_psi;
        row.cumulative_regret = cum_regret.value();
        const double tt = static_cast<double>(t + 1);
        row.bound = std::sqrt(gbar * report.info_theta_psi * tt) + eps * tt;

        const double compressed_root = std::sqrt(row.gamma * row.info_rep);
        row.step_violation[0] = std::max(row.regret - row.compressed_regret - eps,
                                         tot.slack_violation);
        row.step_violation[1] = row.compressed_regret - compressed_root;
        row.step_violation[2] = std::max(compressed_root - std::sqrt(gbar * row.info_psi),
                                         tot.dpi_violation);
        row.step_violation[3] = cum_root.value() - std::sqrt(gbar * tt * cum_info.value());
        row.step_violation[4] = std::fabs(cum_info.value() - row.info_psi_history);
        row.step_violation[5] = row.info_psi_history - report.info_theta_psi;
        row.bound_violation = row.cumulative_regret - row.bound;
        row.passed = row.bound_violation <= tol;
        for (double v : row.step_violation) row.passed = row.passed && v <= tol;
        report.passed = report.passed && row.passed;
        report.rows.push_back(row);
    }
    report.exact_regret = cum_regret.value();
    report.bound = report.rows.back().bound;

    if (options.runs > 0) {
        SimulationOptions sim;
        sim.threads = options.threads;
        const auto trace = simulate_ts(instance, prior, horizon, options.runs, seed, sim);
        report.simulated_regret = trace.cumulative;
        report.simulated_std_error = trace.cumulative_std_error;
        report.passed = report.passed && report.simulated_regret <= report.bound + tol;
    }
    return report;
}

}  // namespace rdts
