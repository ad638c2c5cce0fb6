// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "commands.hpp"
#include "oracles.hpp"
#include "rdts/audit.hpp"
#include "rdts/bounds.hpp"
#include "rdts/compression.hpp"
#include "rdts/error.hpp"
#include "rdts/information.hpp"
#include "rdts/policy.hpp"

#ifndef RDTS_CLI_PATH
#error "RDTS_CLI_PATH must point at the CLI binary"
#endif

using namespace rdts;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::size_t worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// Some action sets admit no parameter with the margin at all; redraw them.
BanditInstance margin_instance(Rng & rng, std::size_t d, std::size_t n, std::size_t m, double beta,
                               double delta) {
    for (;;) {
        try {
            return sample_instance_with_margin(rng, d, n, m, OutcomeModel::logistic(beta), delta, 2000);
        } catch (const Error & e) {
            if (e.code() != ErrorCode::Infeasible) throw;
        }
    }
}

// Partition with a random restricted-growth labelling.
Partition random_partition(Rng & rng, std::size_t m, double eps) {
    std::vector<std::size_t> cells(m);
    std::size_t used = 0;
    for (std::size_t i = 0; i < m; ++i) {
        std::uniform_int_distribution<std::size_t> pick(0, used);
        cells[i] = pick(rng);
        used = std::max(used, cells[i] + 1);
    }
    return Partition(std::move(cells), eps);
}

Outcome c1_sweep() {
    cli::SweepConfig cfg;
    for (std::size_t d = 2; d <= 20; ++d) cfg.dims.push_back(d);
    cfg.betas = {0.1, 1, 10, 100};
    cfg.n = cfg.m = 100;
    cfg.instances = 100;
    cfg.seed = 20240601;
    cfg.threads = worker_count();
    const auto rows = cli::ir_sweep(cfg);
    std::size_t violated = 0;
    double worst = 0.0;
    for (const auto & r : rows) {
        violated += r.ratio > r.d / 2.0 + 1e-9;
        worst = std::max(worst, r.ratio / (r.d / 2.0));
    }
    return {violated == 0 && rows.size() == 19 * 4 * 100,
            std::to_string(rows.size()) + " instances, " + std::to_string(violated) +
                " above d/2, max ratio/(d/2) = " + fmt(worst)};
}

Outcome c2_linear_ceiling() {
    auto rng = make_stream(2);
    std::uniform_int_distribution<std::size_t> dim(1, 10), size(2, 50);
    std::uniform_real_distribution<double> eps_pick(0.05, 0.5);
    std::size_t violations = 0;
    double worst = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t d = dim(rng);
        auto inst = sample_instance(rng, d, size(rng), size(rng), OutcomeModel::linear_binary());
        auto belief = BeliefState::dirichlet(inst.num_params(), rng);
        const auto vanilla = ts_info_ratio(inst, belief);
        auto partition = build_partition_linear(inst, eps_pick(rng));
        const auto compressed = compressed_info_ratio(inst, belief, build_representation(inst, belief, partition));
        for (double r : {vanilla.ratio, compressed.ratio}) {
            violations += r > d / 2.0 + 1e-9;
            worst = std::max(worst, r / (d / 2.0));
        }
    }
    return {violations == 0, "1000 instances x {vanilla, compressed}, " + std::to_string(violations) +
                                 " violations, max ratio/(d/2) = " + fmt(worst)};
}

Outcome c3_two_point() {
    auto rng = make_stream(3);
    std::uniform_int_distribution<std::size_t> size(1, 12);
    std::normal_distribution<double> g(0.0, 1.0);
    std::size_t failures = 0;
    double worst = -1.0;
    for (int rep = 0; rep < 10000; ++rep) {
        const std::size_t n = size(rng);
        std::vector<double> a(n), b(n);
        for (auto & v : a) v = g(rng);
        for (auto & v : b) v = g(rng);
        auto p = BeliefState::dirichlet(n, rng);
        try {
            const auto m = two_point_pair(a, b, p.probs());
            long double ea = 0, eb = 0;
            for (std::size_t i = 0; i < n; ++i) {
                ea += p[i] * a[i];
                eb += p[i] * b[i];
            }
            const double va = m.r * a[m.j] + (1 - m.r) * a[m.k] - static_cast<double>(ea);
            const double vb = m.r * b[m.j] + (1 - m.r) * b[m.k] - static_cast<double>(eb);
            worst = std::max({worst, va, vb});
            failures += va > 1e-12 || vb > 1e-12 || m.r < 0 || m.r > 1;
        } catch (const Error &) {
            ++failures;
        }
    }
    return {failures == 0, "10000 triples, " + std::to_string(failures) + " failures, worst excess = " + fmt(worst)};
}

Outcome c4_compression() {
    auto rng = make_stream(4);
    std::uniform_int_distribution<std::size_t> dim(2, 5);
    std::size_t checks = 0, bad_slack = 0, bad_info = 0;
    double worst_slack = -1.0, worst_info = -1.0, largest_slack = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        auto inst = sample_instance(rng, dim(rng), 20, 20, OutcomeModel::logistic(rep % 2 ? 4.0 : 1.0));
        auto belief = BeliefState::dirichlet(20, rng);
        for (double eps : {0.05, 0.1, 0.2}) {
            auto partition = build_partition_glm(inst, eps);
            const auto chk = evaluate_compression(inst, belief, build_representation(inst, belief, partition));
            ++checks;
            worst_slack = std::max(worst_slack, chk.regret_slack - eps);
            largest_slack = std::max(largest_slack, chk.regret_slack);
            const double info_gap = std::max(chk.info_rep - chk.info_psi_rep, chk.info_psi_rep - chk.info_psi_ts);
            worst_info = std::max(worst_info, info_gap);
            bad_slack += chk.regret_slack > eps + 1e-9;
            bad_info += info_gap > 1e-9;
        }
    }
    return {bad_slack == 0 && bad_info == 0,
            std::to_string(checks) + " checks, largest slack = " + fmt(largest_slack) +
                ", slack-eps max = " + fmt(worst_slack) +
                ", data-processing excess max = " + fmt(worst_info)};
}

Outcome c5_audit() {
    auto rng = make_stream(5);
    std::uniform_int_distribution<std::size_t> n_pick(2, 4), m_pick(3, 8), d_pick(1, 3);
    const double eps_grid[3] = {0.05, 0.1, 0.2};
    std::size_t failed = 0;
    double worst = -1.0, worst_bound_ratio = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t d = d_pick(rng), n = n_pick(rng), m = m_pick(rng);
        const double eps = eps_grid[rep % 3];
        const bool linear = rep % 2 == 0;
        auto inst = sample_instance(rng, d, n, m, linear ? OutcomeModel::linear_binary() : OutcomeModel::logistic(4.0));
        auto partition = linear ? build_partition_linear(inst, eps) : build_partition_glm(inst, eps);
        AuditOptions opt;
        opt.runs = 2000;
        opt.threads = worker_count();
        const auto report = audit_theorem1_chain(inst, BeliefState::uniform(m), partition, 10,
                                                 1000 + static_cast<std::uint64_t>(rep), opt);
        failed += !report.passed;
        for (const auto & row : report.rows)
            for (double v : row.step_violation) worst = std::max(worst, v);
        if (report.bound > 0) worst_bound_ratio = std::max(worst_bound_ratio, report.simulated_regret / report.bound);
    }
    return {failed == 0, "50 audits, " + std::to_string(failed) + " failed, max step violation = " + fmt(worst) +
                             ", max simulated/bound = " + fmt(worst_bound_ratio)};
}

Outcome c6_linear_regret() {
    auto rng = make_stream(6);
    auto inst = sample_instance(rng, 3, 30, 30, OutcomeModel::linear_binary());
    SimulationOptions opt;
    opt.threads = worker_count();
    const auto trace = simulate_ts(inst, BeliefState::uniform(30), 500, 300, 606, opt);
    const double lhs = trace.cumulative + 3 * trace.cumulative_std_error;
    const double bound = linear_bound(3, 500);
    return {lhs <= bound, "regret + 3se = " + fmt(lhs) + " vs bound " + fmt(bound)};
}

Outcome c7_bounds() {
    const double lin = linear_bound(10, 1e4);
    const double limit = 2 * 2 * std::sqrt(100 * std::log(3.0));
    const double logi = logistic_bound(2, 100, 1e6, 0.5).primary;
    std::size_t grid_bad = 0;
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) {
            const double beta = std::pow(10.0, -1 + 4.0 * i / 19);
            const double delta = 0.05 + 0.95 * j / 19;
            const auto b = logistic_bound(2, 100, beta, delta);
            grid_bad += b.primary > b.simplified;
        }
    const bool ok = std::fabs(lin - 1953.5) <= 0.1 && std::fabs(logi / limit - 1) <= 1e-3 && grid_bad == 0;
    return {ok, "linear(10,1e4) = " + fmt(lin) + ", logistic(2,100,1e6,0.5) = " + fmt(logi) + " vs " + fmt(limit) +
                    ", grid violations = " + std::to_string(grid_bad)};
}

Outcome c8_partitions() {
    auto rng = make_stream(8);
    std::uniform_int_distribution<std::size_t> d_pick(1, 4), size(2, 30), small(2, 6);
    const double eps_grid[3] = {0.05, 0.1, 0.2};
    std::size_t cert_bad = 0, count_bad = 0, oracle_bad = 0, builds = 0;
    double worst_cert = -1.0;
    auto builders = [&](const BanditInstance & lin, const BanditInstance & glm, const BanditInstance & layered,
                        double eps) {
        return std::vector<std::pair<const BanditInstance *, Partition>>{
            {&lin, build_partition_linear(lin, eps)},
            {&glm, build_partition_glm(glm, eps)},
            {&layered, build_partition_logistic(layered, eps, 0.2)}};
    };
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t d = d_pick(rng);
        const double eps = eps_grid[rep % 3];
        const std::size_t n = size(rng), m = size(rng);
        auto lin = sample_instance(rng, d, n, m, OutcomeModel::linear_binary());
        auto glm = sample_instance(rng, d, n, m, OutcomeModel::glm(Link{LinkKind::Probit, 1.5}, 0.05));
        auto lay = margin_instance(rng, d, n, m, 10.0, 0.2);
        for (auto & [inst, p] : builders(lin, glm, lay, eps)) {
            ++builds;
            const double dist = max_intra_cell_distortion(*inst, p);
            worst_cert = std::max(worst_cert, dist - eps);
            cert_bad += dist > eps + 1e-12;
            count_bad += static_cast<double>(p.num_cells()) > p.cardinality_bound();
        }
        // Rate-distortion comparison on a small instance of each kind.
        const std::size_t ms = small(rng), ns = small(rng);
        auto slin = sample_instance(rng, d, ns, ms, OutcomeModel::linear_binary());
        auto sglm = sample_instance(rng, d, ns, ms, OutcomeModel::glm(Link{LinkKind::Probit, 1.5}, 0.05));
        auto slay = margin_instance(rng, d, ns, ms, 10.0, 0.2);
        auto belief = BeliefState::dirichlet(ms, rng);
        for (auto & [inst, p] : builders(slin, sglm, slay, eps)) {
            const auto best = rate_distortion_bruteforce(*inst, belief, eps);
            oracle_bad += statistic_mutual_information(belief, p) < best.info - 1e-12;
        }
    }
    return {cert_bad == 0 && count_bad == 0 && oracle_bad == 0,
            std::to_string(builds) + " partitions, max distortion-eps = " + fmt(worst_cert) + ", K over bound = " +
                std::to_string(count_bad) + ", greedy below optimum = " + std::to_string(oracle_bad)};
}

Outcome c9_oracles() {
    auto rng = make_stream(9);
    std::uniform_int_distribution<std::size_t> size(1, 4), d_pick(1, 3);
    std::exponential_distribution<double> ex(1.0);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t m = size(rng), n = size(rng);
        JointTable joint(m, n);
        double s = 0;
        for (auto & x : joint.p) s += (x = ex(rng));
        for (auto & x : joint.p) x /= s;
        worst = std::max(worst, std::fabs(mutual_information(joint) - oracle::mutual_information(joint.p, m, n)));

        auto inst = sample_instance(rng, d_pick(rng), n, m,
                                    rep % 2 ? OutcomeModel::linear_binary() : OutcomeModel::logistic(3.0));
        auto belief = BeliefState::dirichlet(m, rng);
        const std::vector<double> b(belief.probs().begin(), belief.probs().end());
        const auto ts = ts_info_ratio(inst, belief);
        const auto ref = oracle::ts_ratio(inst, b);
        worst = std::max({worst, std::fabs(ts.numerator - ref.gap * ref.gap), std::fabs(ts.denominator - ref.info)});
        if (!ts.degenerate) worst = std::max(worst, std::fabs(ts.ratio - ref.gap * ref.gap / ref.info));

        const auto rep_ = build_representation(inst, belief, random_partition(rng, m, 1.0));
        const auto cr = compressed_info_ratio(inst, belief, rep_);
        const auto cref = oracle::compressed_ratio(inst, b, rep_);
        worst = std::max({worst, std::fabs(cr.numerator - cref.gap * cref.gap), std::fabs(cr.denominator - cref.info)});
        if (!cr.degenerate) worst = std::max(worst, std::fabs(cr.ratio - cref.gap * cref.gap / cref.info));
    }
    return {worst <= 1e-9, "100 instances, max abs difference = " + fmt(worst)};
}

std::string read_all(const fs::path & p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

Outcome c10_determinism() {
    const std::string cli = RDTS_CLI_PATH;
    const fs::path dir = fs::temp_directory_path() / "rdts_acceptance";
    fs::create_directories(dir);
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"ir-sweep", "ir-sweep --d 2-6 --beta 0.1,1,10,100 --n 40 --m 40 --instances 10 --seed 11"},
        {"regret", "regret --model logistic --beta 5 --d 3 --n 20 --m 20 --T 100 --runs 200 --seed 12"},
        {"partition", "partition --model glm --link probit --beta 2 --d 3 --n 40 --m 40 --epsilon 0.1 --seed 13"},
        {"bounds", "bounds --which logistic --beta 3 --delta 0.4 --d 4 --T 1000 --format json"},
        {"audit", "audit --d 2 --n 3 --m 6 --T 8 --runs 500 --seed 14"},
    };
    std::size_t mismatches = 0;
    std::string detail;
    for (const auto & [name, args] : commands) {
        std::string outputs[3];
        const char * threads[3] = {"1", "1", "8"};
        for (int k = 0; k < 3; ++k) {
            const fs::path out = dir / (name + std::to_string(k) + ".txt");
            const std::string cmd = "\"" + cli + "\" " + args + " --threads " + threads[k] + " --out \"" +
                                    out.string() + "\" 2>/dev/null";
            const int status = std::system(cmd.c_str());
            outputs[k] = read_all(out);
            if (status == -1 || outputs[k].empty()) {
                ++mismatches;
                detail += " " + name + ":no-output";
            }
        }
        if (outputs[0] != outputs[1] || outputs[0] != outputs[2]) {
            ++mismatches;
            detail += " " + name + ":differs";
        }
    }
    return {mismatches == 0, std::to_string(commands.size()) + " subcommands x (2 runs + 8 threads)" +
                                 (detail.empty() ? ", byte-identical" : detail)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1  info-ratio sweep, logistic d=2..20 vs d/2", c1_sweep},
        {"2  linear vanilla/compressed ratio ceiling d/2", c2_linear_ceiling},
        {"3  two-point mixture existence", c3_two_point},
        {"4  compressed construction slack and data processing", c4_compression},
        {"5  regret decomposition audit, T=10", c5_audit},
        {"6  linear regret vs closed-form bound", c6_linear_regret},
        {"7  bound evaluators", c7_bounds},
        {"8  partition certificates and rate-distortion oracle", c8_partitions},
        {"9  exhaustive-enumeration oracle agreement", c9_oracles},
        {"10 CLI determinism across runs and threads", c10_determinism},
    };
    int failures = 0;
    for (const auto & [name, check] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome result;
        try {
            result = check();
        } catch (const std::exception & e) {
            result = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (result.pass ? "PASS" : "FAIL") << "  criterion " << name << " | " << result.detail << " ("
                  << fmt(secs) << " s)" << std::endl;
        failures += !result.pass;
    }
    return failures == 0 ? 0 : 1;
}
