#include "rdts/policy.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rdts/error.hpp"
#include "rdts/information.hpp"

namespace rdts {

TsStep thompson_step(const BanditInstance & instance, const BeliefState & belief, Rng & rng) {
    if (belief.size() != instance.num_params())
        throw Error(ErrorCode::InvalidArgument, "belief and instance sizes differ");
    const std::size_t param = sample_parameter(belief, rng);
    return {param, instance.best(param)};
}

TsStep compressed_ts_step(const BanditInstance & instance, const BeliefState & belief,
                          const Representation & representation, Rng & rng) {
    if (belief.size() != instance.num_params())
        throw Error(ErrorCode::InvalidArgument, "belief and instance sizes differ");
    check_representation(belief, representation);
    const std::size_t cell = sample_parameter(BeliefState(representation.cell_mass), rng);
    const auto & rep = representation.cells[cell];
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::size_t param = unif(rng) < rep.r ? rep.idx1 : rep.idx2;
    return {param, instance.best(param)};
}

namespace {

std::size_t sample_outcome(const BanditInstance & instance, std::size_t action, std::size_t truth,
                           Rng & rng) {
    const auto row = instance.likelihood_row(action, truth);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    double cumulative = 0.0;
    std::size_t last = 0;
    for (std::size_t y = 0; y < row.size(); ++y) {
        if (row[y] <= 0.0) continue;
        last = y;
        cumulative += row[y];
        if (u < cumulative) return y;
    }
    return last;
}

}  // namespace

RegretTrace simulate_ts(const BanditInstance & instance, const BeliefState & prior,
                        std::size_t horizon, std::size_t runs, std::uint64_t seed,
                        const SimulationOptions & options) {
    if (runs == 0) throw Error(ErrorCode::InvalidArgument, "runs must be >= 1");
    if (prior.size() != instance.num_params())
        throw Error(ErrorCode::InvalidArgument, "prior and instance sizes differ");

    RegretTrace trace;
    trace.runs = runs;
    trace.realized = options.realized;

    // Runs are simulated in fixed-size blocks and folded into per-period
    // Welford accumulators in run order, so the result is independent of
    // scheduling and memory stays O(block * horizon).
    constexpr std::size_t kBlock = 256;
    std::vector<CompensatedSum> period_sum(horizon);
    std::vector<double> cum_mean(horizon, 0.0), cum_m2(horizon, 0.0);
    std::vector<std::vector<double>> block(std::min(kBlock, runs), std::vector<double>(horizon));
    std::size_t folded = 0;
    for (std::size_t start = 0; start < runs; start += kBlock) {
        const std::size_t size = std::min(kBlock, runs - start);
        parallel_for(size, options.threads, [&](std::size_t b) {
            Rng rng = make_stream(seed, start + b);
            const std::size_t truth = sample_parameter(prior, rng);
            const double optimum = instance.mean(instance.best(truth), truth);
            BeliefState belief = prior;
            auto & regret = block[b];
            for (std::size_t t = 0; t < horizon; ++t) {
                const auto step = thompson_step(instance, belief, rng);
                const std::size_t y = sample_outcome(instance, step.action, truth, rng);
                regret[t] = options.realized ? optimum - instance.outcome_values(step.action)[y]
                                             : optimum - instance.mean(step.action, truth);
                belief = posterior_update_index(belief, instance, step.action, y);
            }
        });
        for (std::size_t b = 0; b < size; ++b) {
            ++folded;
            double running = 0.0;
            for (std::size_t t = 0; t < horizon; ++t) {
                period_sum[t] += block[b][t];
                running += block[b][t];
                const double delta = running - cum_mean[t];
                cum_mean[t] += delta / static_cast<double>(folded);
                cum_m2[t] += delta * (running - cum_mean[t]);
            }
        }
    }

    const double n = static_cast<double>(runs);
    trace.per_period_regret.resize(horizon);
    trace.cumulative_regret.resize(horizon);
    trace.std_error.resize(horizon);
    CompensatedSum total;
    for (std::size_t t = 0; t < horizon; ++t) {
        trace.per_period_regret[t] = period_sum[t].value() / n;
        total += trace.per_period_regret[t];
        trace.cumulative_regret[t] = total.value();
        trace.std_error[t] = runs > 1 ? std::sqrt(cum_m2[t] / (n - 1.0) / n) : 0.0;
    }
    if (horizon > 0) {
        trace.cumulative = trace.cumulative_regret.back();
        trace.cumulative_std_error = trace.std_error.back();
    }
    return trace;
}

}  // namespace rdts
