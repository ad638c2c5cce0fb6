#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rdts/inference.hpp"
#include "rdts/model.hpp"
#include "rdts/partition.hpp"

namespace rdts {

/// Slack allowed on a partition's intra-cell distortion certificate.
inline constexpr double kCertificateTolerance = 1e-12;

/// Regret of acting on theta^i when theta^j is true:
/// mu(alpha(theta^j), theta^j) - mu(alpha(theta^i), theta^j).
double distortion(const BanditInstance & instance, std::size_t i, std::size_t j);

/// Largest distortion between two parameters sharing a cell (both orders).
double max_intra_cell_distortion(const BanditInstance & instance, const Partition & partition);

/// Greedy center-based net over the given points: the first uncovered point
/// becomes a center and absorbs every uncovered point within `radius`.
/// Returns the group index of each input point.
std::vector<std::size_t> greedy_cover(const ActionSet & points, std::span<const std::size_t> subset,
                                      double radius);

/// Parameters grouped by a greedy cover of their best actions at the given
/// center radius. The partition's epsilon is set to `epsilon` and its
/// certificate is not checked here.
Partition cover_best_actions(const BanditInstance & instance, double radius, double epsilon);

Partition build_partition_linear(const BanditInstance & instance, double epsilon);

/// Center radius epsilon / (2 C(phi)); C(phi) taken from the instance's
/// inner-product range unless given.
Partition build_partition_glm(const BanditInstance & instance, double epsilon);
Partition build_partition_glm(const BanditInstance & instance, double epsilon, double c_phi);

/// Band edges s_0 < s_1 = delta < ... < s_L = 1 used by the layered
/// logistic construction.
struct LogisticLayers {
    std::vector<double> edges;
    std::size_t count = 0;  // L
};

LogisticLayers logistic_layers(double beta, double delta, double epsilon);

Partition build_partition_logistic(const BanditInstance & instance, double epsilon, double delta);

struct TwoPointMixture {
    std::size_t j = 0;
    std::size_t k = 0;
    double r = 1.0;

    bool operator==(const TwoPointMixture &) const = default;
};

/// Finds (j, k, r) with r a_j + (1-r) a_k <= E_p[a] and the same for b,
/// both within 1e-12. Pairs are scanned in lexicographic order; for j != k
/// the smallest feasible r is returned, for j == k r = 1.
TwoPointMixture two_point_pair(std::span<const double> a, std::span<const double> b,
                               std::span<const double> p);

Representation build_representation(const BanditInstance & instance, const BeliefState & belief,
                                    const Partition & partition);

/// I(theta*; psi) = H(psi) because psi is a function of theta*.
double statistic_mutual_information(const BeliefState & belief, const Partition & partition);

struct RateDistortionResult {
    std::size_t num_cells = 0;
    double info = 0.0;
    Partition partition;
};

inline constexpr std::size_t kBruteForceMaxParams = 8;

/// Minimum of I(theta*; psi) over all set partitions meeting the distortion
/// tolerance. Exponential; limited to m <= 8.
RateDistortionResult rate_distortion_bruteforce(const BanditInstance & instance,
                                                const BeliefState & belief, double epsilon);

/// Exact one-step quantities comparing Thompson sampling with its
/// compressed counterpart at a belief.
struct CompressionCheck {
    double ts_regret = 0.0;           // E[R* - R_{alpha(theta_t)}]
    double compressed_regret = 0.0;   // E[R_{alpha(rep*)} - R_{alpha(rep)}]
    double regret_slack = 0.0;        // ts_regret - compressed_regret, <= epsilon
    double info_rep = 0.0;            // I(rep*; (rep, Y))
    double info_psi_rep = 0.0;        // I(psi; (rep, Y))
    double info_psi_ts = 0.0;         // I(psi; (theta_t, Y))
    double posterior_entropy_psi = 0.0;
};

CompressionCheck evaluate_compression(const BanditInstance & instance, const BeliefState & belief,
                                      const Representation & representation);

}  // namespace rdts
