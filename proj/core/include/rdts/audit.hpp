#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rdts/inference.hpp"
#include "rdts/model.hpp"
#include "rdts/partition.hpp"

namespace rdts {

// Exact audit of the regret decomposition behind the rate-distortion bound
//
//   sum_t E[R* - R_t]
//     <= sum_t E[R(rep*) - R(rep)] + eps T                    (step 1)
//      = sum_t sqrt(Gamma_t I_t(rep*; (rep, Y))) + eps T      (step 2)
//     <= sum_t sqrt(Gamma_bar I_t(psi; (theta_t, Y))) + eps T (step 3)
//     <= sqrt(Gamma_bar T sum_t I_t(psi; ...)) + eps T        (step 4)
//      = sqrt(Gamma_bar T I(psi; H_T)) + eps T                (step 5)
//     <= sqrt(Gamma_bar T I(theta*; psi)) + eps T             (step 6)
//
// Expectations over histories are computed exactly by propagating the
// probability of every reachable posterior, keyed by (action, outcome)
// counts. Statements that hold history-by-history (steps 1 and 3) are also
// checked at every reachable posterior.

struct AuditOptions {
    std::size_t runs = 2000;        // Monte Carlo runs for the simulated regret
    std::size_t threads = 1;
    double tolerance = 1e-8;
    std::size_t max_states = 2'000'000;  // reachable posteriors per period
};

inline constexpr double kAuditWorkGuard = 1e6;  // m * n * |outcomes|

struct AuditRow {
    std::size_t period = 0;
    double regret = 0.0;              // E[R* - R(Y_{A_t})]
    double compressed_regret = 0.0;   // E[R(rep*) - R(rep)]
    double gamma = 0.0;               // compressed information ratio
    double info_rep = 0.0;            // E I_{t-1}(rep*; (rep, Y))
    double info_psi_rep = 0.0;        // E I_{t-1}(psi; (rep, Y))
    double info_psi = 0.0;            // E I_{t-1}(psi; (theta_t, Y))
    double info_psi_history = 0.0;    // I(psi; H_t) = H(psi) - E H_t(psi)
    double cumulative_regret = 0.0;
    double bound = 0.0;               // sqrt(Gamma_bar I(theta*; psi) t) + eps t
    std::size_t states = 0;
    // Largest violation per step (<= tolerance means the step holds).
    double step_violation[6] = {0, 0, 0, 0, 0, 0};
    double bound_violation = 0.0;
    bool passed = true;
};

struct AuditReport {
    std::vector<AuditRow> rows;
    double epsilon = 0.0;
    double gamma_bar = 0.0;
    double info_theta_psi = 0.0;      // I(theta*; psi) = H(psi) under the prior
    double exact_regret = 0.0;
    double simulated_regret = 0.0;
    double simulated_std_error = 0.0;
    double bound = 0.0;
    bool passed = true;
};

AuditReport audit_theorem1_chain(const BanditInstance & instance, const BeliefState & prior,
                                 const Partition & partition, std::size_t horizon,
                                 std::uint64_t seed, const AuditOptions & options = {});

}  // namespace rdts
