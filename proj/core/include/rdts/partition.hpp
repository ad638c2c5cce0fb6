#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace rdts {

/// Assignment of parameters to cells {0..K-1}. Every cell is non-empty.
/// The distortion certificate is established by the builders, which
/// re-verify it pairwise before returning.
class Partition {
  public:
    Partition(std::vector<std::size_t> cell_of, double epsilon);

    static Partition singletons(std::size_t m, double epsilon = 0.0);
    static Partition single_cell(std::size_t m, double epsilon);

    std::size_t size() const noexcept { return cell_of_.size(); }
    std::size_t num_cells() const noexcept { return members_.size(); }
    std::size_t cell_of(std::size_t param) const { return cell_of_[param]; }
    const std::vector<std::size_t> & cells() const noexcept { return cell_of_; }
    const std::vector<std::size_t> & members(std::size_t cell) const { return members_[cell]; }
    double epsilon() const noexcept { return epsilon_; }

    /// Packing-argument ceiling on num_cells() for greedy-built partitions;
    /// +inf when the partition was not produced by a covering builder.
    double cardinality_bound() const noexcept { return cardinality_bound_; }
    void set_cardinality_bound(double bound) noexcept { cardinality_bound_ = bound; }

    bool operator==(const Partition & other) const {
        return cell_of_ == other.cell_of_ && epsilon_ == other.epsilon_;
    }

  private:
    std::vector<std::size_t> cell_of_;
    std::vector<std::vector<std::size_t>> members_;
    double epsilon_ = 0.0;
    double cardinality_bound_ = std::numeric_limits<double>::infinity();
};

/// Two-point representative of one cell: idx1 with probability r, else idx2.
struct CellRepresentative {
    std::size_t idx1 = 0;
    std::size_t idx2 = 0;
    double r = 1.0;
};

/// Compressed statistic: conditioned on psi = k, the representative is
/// cells[k].idx1 w.p. cells[k].r and cells[k].idx2 otherwise.
struct Representation {
    Partition partition;
    std::vector<CellRepresentative> cells;
    std::vector<double> cell_mass;
};

}  // namespace rdts
