#pragma once

#include <map>
#include <string>

#include "rdts/model.hpp"

namespace rdts {

/// A named closed-form bound together with the inputs that produced it.
struct BoundReport {
    std::string name;
    double value = 0.0;
    std::map<std::string, double> inputs;
    std::map<std::string, bool> flags;
};

/// sqrt(gamma_bar * H * T).
double entropy_bound(double gamma_bar, double entropy, double horizon);

/// sqrt(gamma_bar * I * T) + epsilon * T.
double compressed_bound(double gamma_bar, double info, double epsilon, double horizon);

/// d sqrt(T ln(3 + 3 sqrt(2T) / d)).
double linear_bound(double d, double horizon);

/// 2 C(phi) d sqrt(T ln(3 + 3 sqrt(2T) / d)).
double glm_bound(double d, double horizon, double c_phi);

struct LogisticBound {
    double primary = 0.0;     // uses beta e^{beta delta} / (1 + e^{beta delta})^2
    double simplified = 0.0;  // uses min(1/delta, beta)
    /// epsilon = d / sqrt(2T) falls outside (0, phi(delta) - 1/2), so the
    /// large-T regime the formula assumes has not been reached.
    bool epsilon_out_of_range = false;
};

LogisticBound logistic_bound(double d, double horizon, double beta, double delta);

/// sup of phi' over [lo, hi]; 1/2 for the linear-binary model.
double c_phi(const OutcomeModel & model, double lo, double hi);

enum class PartitionBoundKind { Linear, Glm, Logistic };

struct PartitionCountInputs {
    double d = 1.0;
    double epsilon = 0.0;
    PartitionBoundKind kind = PartitionBoundKind::Linear;
    double c_phi = 0.5;   // Glm
    double beta = 1.0;    // Logistic
    double delta = 0.0;   // Logistic
};

/// (1/eps + 1)^d, (2C/eps + 1)^d, or (1/eps)(1 + 2/(delta - phi^{-1}(phi(delta) - eps)))^d.
double partition_count_bound(const PartitionCountInputs & inputs);

}  // namespace rdts
