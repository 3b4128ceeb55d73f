#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "bbm/simulate.hpp"

namespace bbm {

/// Bramson centring level (3/2) ln t.
double bramson_level(double t);

/// Leaves sorted by ascending x, in structure-of-arrays form for the kernels.
/// Ties are broken by leaf id, so the order is deterministic.
class SortedLeaves
{
  public:
    explicit SortedLeaves(const ReplicaOutput& r);

    std::span<const double> x() const noexcept { return x_; }
    std::span<const double> y() const noexcept { return y_; }
    std::span<const LeafId> ids() const noexcept { return ids_; }
    std::size_t size() const noexcept { return x_.size(); }
    double t_final() const noexcept { return t_; }
    double x_min() const noexcept { return x_.empty() ? 0.0 : x_.front(); }

    /// Number of leaves with x <= level.
    std::size_t count_at_or_below(double level) const;

  private:
    double t_;
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<LeafId> ids_;
};

struct PartitionValue
{
    double gamma = 0.0;
    double beta = 0.0;
    std::complex<double> raw;        ///< sum e^{-gamma x + i sqrt(2) beta y}
    std::complex<double> normalized; ///< t^{3 gamma / 2} raw
    std::optional<double> trunc_level;
};

/// Complex partition function, optionally restricted to x <= (3/2) ln t + trunc_k.
PartitionValue complex_partition(const ReplicaOutput& r, double gamma, double beta,
                                 std::optional<double> trunc_k = std::nullopt);
PartitionValue complex_partition(const SortedLeaves& s, double gamma, double beta,
                                 std::optional<double> trunc_k = std::nullopt);

/// Normalized partition restricted to x - (3/2) ln t > k.
std::complex<double> tail_remainder(const ReplicaOutput& r, double gamma, double beta, double k);
std::complex<double> tail_remainder(const SortedLeaves& s, double gamma, double beta, double k);

/// sum x e^{-x}
double derivative_martingale(const ReplicaOutput& r);
double derivative_martingale(const SortedLeaves& s);

/// sum e^{-gamma x}
double additive_martingale(const ReplicaOutput& r, double gamma);
double additive_martingale(const SortedLeaves& s, double gamma);

/// min x - (3/2) ln t; +inf when no leaf survives (pruned runs)
double recentered_minimum(const ReplicaOutput& r);

/// sum_{i,j} e^{-gamma (x_i + x_j) - 2 beta^2 (t - tau_ij)} with tau_ii = t, by a
/// post-order sweep over the genealogy.
double pairwise_overlap(const ReplicaOutput& r, double gamma, double beta);

struct ClusterMember
{
    double dx = 0.0;       ///< x_j - x_anchor
    double dy = 0.0;       ///< y_j - y_anchor
    double split_age = 0.0; ///< t - tau_{j, anchor}
};

struct ClusterSummary
{
    double anchor_level = 0.0; ///< anchor x - (3/2) ln t
    LeafId anchor_leaf = -1;
    std::vector<ClusterMember> members; ///< excludes the anchor, sorted by dx
    double window_k = 0.0;
    double genealogical_depth_b = 0.0;
};

/// Partition {x <= (3/2) ln t + window_k} into classes of leaves whose pairwise
/// split age is below depth_b, each anchored at its minimal leaf. Sorted by
/// anchor level.
std::vector<ClusterSummary> extract_clusters(const ReplicaOutput& r, double window_k,
                                             double depth_b);

} // namespace bbm
