#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rdts/inference.hpp"
#include "rdts/model.hpp"
#include "rdts/numeric.hpp"
#include "rdts/partition.hpp"

namespace rdts {

struct TsStep {
    std::size_t param = 0;
    std::size_t action = 0;

    bool operator==(const TsStep &) const = default;
};

/// Sample a parameter from the belief and play its best action.
TsStep thompson_step(const BanditInstance & instance, const BeliefState & belief, Rng & rng);

/// One-step compressed Thompson sampling: draw a cell from the cell masses,
/// then the cell's two-point representative.
TsStep compressed_ts_step(const BanditInstance & instance, const BeliefState & belief,
                          const Representation & representation, Rng & rng);

struct SimulationOptions {
    std::size_t threads = 1;
    /// Score realized rewards R(Y) instead of exact conditional means.
    bool realized = false;
};

struct RegretTrace {
    std::vector<double> per_period_regret;  // mean over runs
    std::vector<double> cumulative_regret;  // running sum of per_period_regret
    std::vector<double> std_error;          // std error of the cumulative regret at each period
    double cumulative = 0.0;
    double cumulative_std_error = 0.0;
    std::size_t runs = 0;
    bool realized = false;
};

/// Monte Carlo Bayesian regret of Thompson sampling. Run r draws its
/// randomness from make_stream(seed, r), so results do not depend on the
/// thread count.
RegretTrace simulate_ts(const BanditInstance & instance, const BeliefState & prior,
                        std::size_t horizon, std::size_t runs, std::uint64_t seed,
                        const SimulationOptions & options = {});

/// Runs `count` independent jobs on up to `threads` workers.
template <typename Job>
void parallel_for(std::size_t count, std::size_t threads, Job && job);

}  // namespace rdts

#include "rdts/detail/parallel.hpp"
