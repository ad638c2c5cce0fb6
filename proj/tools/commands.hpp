#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rdts/model.hpp"

namespace rdts::cli {

enum ExitCode : int { kOk = 0, kViolated = 1, kConfigError = 2 };

struct SweepConfig {
    std::string model = "logistic";
    std::vector<std::size_t> dims;
    std::vector<double> betas;
    std::size_t n = 100;
    std::size_t m = 100;
    std::size_t instances = 100;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
};

struct SweepRow {
    std::size_t d = 0;
    double beta = 0.0;   // unused for the linear model
    std::size_t instance = 0;
    double numerator = 0.0;
    double denominator = 0.0;
    double ratio = 0.0;
    bool violated = false;
};

/// Rows ordered by (d, beta, instance). Cell (d, beta, instance) draws from
/// make_stream(seed, d, beta index, instance).
std::vector<SweepRow> ir_sweep(const SweepConfig & config);

std::string sweep_to_csv(const std::vector<SweepRow> & rows, bool linear);
std::string sweep_to_svg(const std::vector<SweepRow> & rows);

/// Model options shared by regret, partition and audit.
struct ModelOptions {
    std::string kind = "linear";
    double beta = 1.0;
    std::string link = "logistic";
    double eta = 0.0;
};

OutcomeModel make_model(const ModelOptions & options);

/// "2-20", "2,3,5" or a mix ("2-4,8").
std::vector<std::size_t> parse_size_list(const std::string & text);
std::vector<double> parse_real_list(const std::string & text);

/// Entry point; `args` excludes the program name.
int run(std::vector<std::string> args, std::ostream & out, std::ostream & err);

}  // namespace rdts::cli
