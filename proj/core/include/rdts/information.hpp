#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rdts/inference.hpp"
#include "rdts/model.hpp"
#include "rdts/partition.hpp"

namespace rdts {

// All information quantities are in nats.

inline constexpr double kNumeratorTolerance = 1e-9;
inline constexpr double kDenominatorTolerance = 1e-12;

struct InfoRatioReport {
    double numerator = 0.0;    // squared one-step expected regret
    double denominator = 0.0;  // mutual information, nats
    double ratio = 0.0;
    bool degenerate = false;
};

/// Dense joint pmf over (u, v), row-major with rows indexed by u.
struct JointTable {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> p;

    JointTable(std::size_t r, std::size_t c) : rows(r), cols(c), p(r * c, 0.0) {}
    double & at(std::size_t u, std::size_t v) { return p[u * cols + v]; }
    double at(std::size_t u, std::size_t v) const { return p[u * cols + v]; }
};

/// Throws InvalidPmf unless entries are finite, >= 0 and sum to 1 within 1e-9.
void validate_pmf(std::span<const double> p);

double entropy(std::span<const double> p);
double kl_divergence(std::span<const double> p, std::span<const double> q);
double mutual_information(const JointTable & joint);

/// I(theta*; Y_a) under the belief.
double information_about_parameter(const BanditInstance & instance, const BeliefState & belief,
                                   std::size_t action);

/// Information ratio of vanilla Thompson sampling at a belief: theta* drawn
/// from the belief, the played parameter an independent copy.
InfoRatioReport ts_info_ratio(const BanditInstance & instance, const BeliefState & belief);

/// Same ratio with the compressed representative and its independent copy.
InfoRatioReport compressed_info_ratio(const BanditInstance & instance, const BeliefState & belief,
                                      const Representation & representation);

/// I(psi; Y_a) where psi is the cell index of theta*.
double info_gain_about_statistic(const BanditInstance & instance, const BeliefState & belief,
                                 const Partition & partition, std::size_t action);

/// Signed one-step regret E[R_{alpha(theta*)}] - E[R_{alpha(theta_t)}] of
/// Thompson sampling; the ratio's numerator is its square.
double ts_regret_gap(const BanditInstance & instance, const BeliefState & belief);
/// I(theta*; (theta_t, Y_{alpha(theta_t)})) = sum_a P(A* = a) I(theta*; Y_a).
double ts_information(const BanditInstance & instance, const BeliefState & belief);

/// Throws InconsistentRepresentation unless cell masses match the belief
/// within 1e-9 and every representative lies in its own cell.
void check_representation(const BeliefState & belief, const Representation & representation);
double compressed_regret_gap(const BanditInstance & instance, const BeliefState & belief,
                             const Representation & representation);
/// I(rep*; (rep, Y_{alpha(rep)})).
double compressed_information(const BanditInstance & instance, const BeliefState & belief,
                              const Representation & representation);
/// I(psi; (rep, Y_{alpha(rep)})).
double compressed_statistic_information(const BanditInstance & instance, const BeliefState & belief,
                                        const Representation & representation);
/// I(psi; (theta_t, Y_{alpha(theta_t)})).
double ts_statistic_information(const BanditInstance & instance, const BeliefState & belief,
                                const Partition & partition);

/// Pushforward of the belief onto the cells of a partition.
std::vector<double> cell_masses(const BeliefState & belief, const Partition & partition);

/// Applies the zero-over-zero convention and the degenerate-information check.
InfoRatioReport make_ratio_report(double numerator, double denominator);

}  // namespace rdts
