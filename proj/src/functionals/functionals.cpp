#include "bbm/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "bbm/error.hpp"
#include "bbm/kernels.hpp"

namespace bbm {

namespace {

// Neumaier sum, for the few non-kernel reductions here.
class CompensatedSum
{
  public:
    void add(double v) noexcept
    {
        const double t = sum_ + v;
        comp_ += std::fabs(sum_) >= std::fabs(v) ? (sum_ - t) + v : (v - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

std::complex<double> partition_range(const SortedLeaves& s, std::size_t begin, std::size_t end,
                                     double gamma, double beta)
{
    if (begin >= end)
        return {0.0, 0.0};
    const double shift = s.x_min();
    const auto sum = kernels::phase_sum(s.x().subspan(begin, end - begin),
                                        s.y().subspan(begin, end - begin), gamma,
                                        std::numbers::sqrt2 * beta, shift);
    const double scale = std::exp(-gamma * shift);
    return {scale * sum.re, scale * sum.im};
}

void require_genealogy(const ReplicaOutput& r)
{
    if (r.genealogy.size() == 0)
        throw MissingDataError("genealogy not present");
}

} // namespace

double bramson_level(double t)
{
    return 1.5 * std::log(t);
}

SortedLeaves::SortedLeaves(const ReplicaOutput& r) : t_(r.t_final())
{
    const auto n = r.leaves.size();
    ids_.resize(n);
    std::iota(ids_.begin(), ids_.end(), LeafId{0});
    std::sort(ids_.begin(), ids_.end(), [&](LeafId a, LeafId b) {
        const double xa = r.leaves[static_cast<std::size_t>(a)].x;
        const double xb = r.leaves[static_cast<std::size_t>(b)].x;
        return xa < xb || (xa == xb && a < b);
    });
    x_.reserve(n);
    y_.reserve(n);
    for (auto id : ids_) {
        x_.push_back(r.leaves[static_cast<std::size_t>(id)].x);
        y_.push_back(r.leaves[static_cast<std::size_t>(id)].y);
    }
}

std::size_t SortedLeaves::count_at_or_below(double level) const
{
    return static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), level) - x_.begin());
}

PartitionValue complex_partition(const SortedLeaves& s, double gamma, double beta,
                                 std::optional<double> trunc_k)
{
    if (!(gamma > 0.0))
        throw DomainError("complex_partition: gamma must be positive");
    const std::size_t end =
        trunc_k ? s.count_at_or_below(bramson_level(s.t_final()) + *trunc_k) : s.size();
    PartitionValue v;
    v.gamma = gamma;
    v.beta = beta;
    v.trunc_level = trunc_k;
    v.raw = partition_range(s, 0, end, gamma, beta);
    const double norm = std::pow(s.t_final(), 1.5 * gamma);
    v.normalized = {norm * v.raw.real(), norm * v.raw.imag()};
    return v;
}

PartitionValue complex_partition(const ReplicaOutput& r, double gamma, double beta,
                                 std::optional<double> trunc_k)
{
    return complex_partition(SortedLeaves(r), gamma, beta, trunc_k);
}

std::complex<double> tail_remainder(const SortedLeaves& s, double gamma, double beta, double k)
{
    const std::size_t begin = s.count_at_or_below(bramson_level(s.t_final()) + k);
    const auto raw = partition_range(s, begin, s.size(), gamma, beta);
    const double norm = std::pow(s.t_final(), 1.5 * gamma);
    return {norm * raw.real(), norm * raw.imag()};
}

std::complex<double> tail_remainder(const ReplicaOutput& r, double gamma, double beta, double k)
{
    return tail_remainder(SortedLeaves(r), gamma, beta, k);
}

double derivative_martingale(const SortedLeaves& s)
{
    CompensatedSum sum;
    for (double x : s.x())
        sum.add(x * std::exp(-x));
    return sum.value();
}

double derivative_martingale(const ReplicaOutput& r)
{
    return derivative_martingale(SortedLeaves(r));
}

double additive_martingale(const SortedLeaves& s, double gamma)
{
    if (!(gamma >= 0.0))
        throw DomainError("additive_martingale: gamma must be nonnegative");
    // Same path as complex_partition with beta = 0, so the two agree exactly.
    return partition_range(s, 0, s.size(), gamma, 0.0).real();
}

double additive_martingale(const ReplicaOutput& r, double gamma)
{
    return additive_martingale(SortedLeaves(r), gamma);
}

double recentered_minimum(const ReplicaOutput& r)
{
    double m = std::numeric_limits<double>::infinity();
    for (const auto& leaf : r.leaves)
        m = std::min(m, leaf.x);
    return m - bramson_level(r.t_final());
}

double pairwise_overlap(const ReplicaOutput& r, double gamma, double beta)
{
    require_genealogy(r);
    const auto& g = r.genealogy;
    const auto nodes = g.nodes();
    const double t = r.t_final();
    double x_min = std::numeric_limits<double>::infinity();
    for (const auto& leaf : r.leaves)
        x_min = std::min(x_min, leaf.x);
    if (r.leaves.empty())
        return 0.0;

    // a[v] = sum over leaves below v of e^{-gamma (x - x_min)}
    // p[v] = pair sum below v, scaled by e^{2 gamma x_min}
    std::vector<double> a(nodes.size(), 0.0);
    std::vector<double> p(nodes.size(), 0.0);
    const double two_beta_sq = 2.0 * beta * beta;
    for (std::size_t v = nodes.size(); v-- > 0;) {
        const auto& node = nodes[v];
        if (node.kind == NodeKind::leaf) {
            const double w = std::exp(-gamma * (r.leaves[static_cast<std::size_t>(node.leaf)].x - x_min));
            a[v] = w;
            p[v] = w * w;
        }
        if (node.parent != no_node) {
            const auto u = static_cast<std::size_t>(node.parent);
            const double cross = std::exp(-two_beta_sq * (t - nodes[u].split_time));
            p[u] += p[v] + 2.0 * cross * a[u] * a[v];
            a[u] += a[v];
        }
    }
    return p[0] * std::exp(-2.0 * gamma * x_min);
}

std::vector<ClusterSummary> extract_clusters(const ReplicaOutput& r, double window_k,
                                             double depth_b)
{
    require_genealogy(r);
    if (!(window_k > 0.0) || !(depth_b > 0.0))
        throw DomainError("extract_clusters: window_k and depth_b must be positive");
    const auto& g = r.genealogy;
    const auto nodes = g.nodes();
    const double t = r.t_final();
    const double cut = t - depth_b;
    const double level = bramson_level(t) + window_k;

    // group[v]: the ancestor of v alive at time `cut` (or v itself if born by then)
    std::vector<NodeId> group(nodes.size());
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        const auto& node = nodes[v];
        group[v] = (node.parent != no_node && node.birth_time > cut)
                       ? group[static_cast<std::size_t>(node.parent)]
                       : static_cast<NodeId>(v);
    }

    struct Entry
    {
        NodeId group;
        double x;
        LeafId leaf;
    };
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < r.leaves.size(); ++i) {
        const auto& leaf = r.leaves[i];
        if (leaf.x <= level)
            entries.push_back({group[static_cast<std::size_t>(leaf.node)], leaf.x,
                               static_cast<LeafId>(i)});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.group != b.group)
            return a.group < b.group;
        if (a.x != b.x)
            return a.x < b.x;
        return a.leaf < b.leaf;
    });

    std::vector<ClusterSummary> clusters;
    std::vector<std::uint32_t> stamp(nodes.size(), 0);
    std::uint32_t epoch = 0;
    for (std::size_t i = 0; i < entries.size();) {
        std::size_t j = i;
        while (j < entries.size() && entries[j].group == entries[i].group)
            ++j;

        const auto& anchor = r.leaves[static_cast<std::size_t>(entries[i].leaf)];
        ClusterSummary c;
        c.anchor_leaf = entries[i].leaf;
        c.anchor_level = anchor.x - bramson_level(t);
        c.window_k = window_k;
        c.genealogical_depth_b = depth_b;

        ++epoch;
        for (NodeId v = anchor.node; v != no_node; v = nodes[static_cast<std::size_t>(v)].parent) {
            stamp[static_cast<std::size_t>(v)] = epoch;
            if (v == entries[i].group)
                break;
        }
        for (std::size_t m = i + 1; m < j; ++m) {
            const auto& leaf = r.leaves[static_cast<std::size_t>(entries[m].leaf)];
            NodeId v = leaf.node;
            while (stamp[static_cast<std::size_t>(v)] != epoch)
                v = nodes[static_cast<std::size_t>(v)].parent;
            c.members.push_back({leaf.x - anchor.x, leaf.y - anchor.y,
                                 t - nodes[static_cast<std::size_t>(v)].split_time});
        }
        clusters.push_back(std::move(c));
        i = j;
    }
    std::sort(clusters.begin(), clusters.end(), [](const ClusterSummary& a, const ClusterSummary& b) {
        return a.anchor_level < b.anchor_level ||
               (a.anchor_level == b.anchor_level && a.anchor_leaf < b.anchor_leaf);
    });
    return clusters;
}

} // namespace bbm
