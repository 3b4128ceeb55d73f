#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace bbm {

using NodeId = std::int32_t;
using LeafId = std::int32_t;
inline constexpr NodeId no_node = -1;

enum class NodeKind : std::uint8_t
{
    internal, ///< split into two children at split_time
    leaf,     ///< alive at t_final
    pruned,   ///< subtree removed by the pruning rule
};

struct GenealogyNode
{
    double birth_time = 0.0;
    double split_time = std::numeric_limits<double>::quiet_NaN(); ///< internal only
    NodeId parent = no_node;
    LeafId leaf = -1; ///< index into the leaf sequence, leaves only
    NodeKind kind = NodeKind::leaf;
};

/// Binary branching tree with split times.
///
/// Nodes are stored in depth-first pre-order: a parent always precedes its
/// children, so a reverse sweep over node ids is a valid post-order
/// accumulation. Pruned subtrees are kept as terminal stubs, which keeps
/// "every internal node has two children" true in pruned mode.
class Genealogy
{
  public:
    Genealogy() = default;
    explicit Genealogy(double t_final) : t_final_(t_final) {}

    NodeId add_node(GenealogyNode node);
    void set_split(NodeId id, double split_time);
    void set_leaf(NodeId id, LeafId leaf);
    void set_pruned(NodeId id);

    const GenealogyNode& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
    std::span<const GenealogyNode> nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    double t_final() const noexcept { return t_final_; }

    /// Node id of leaf `leaf`.
    NodeId leaf_node(LeafId leaf) const;
    std::span<const NodeId> leaf_nodes() const noexcept { return leaf_nodes_; }
    std::size_t leaf_count() const noexcept { return leaf_nodes_.size(); }

    /// Number of children of each node (0 or 2 for a well-formed tree).
    std::vector<std::uint8_t> child_counts() const;

    /// Throws std::logic_error if any structural invariant is violated.
    void validate() const;

  private:
    double t_final_ = 0.0;
    std::vector<GenealogyNode> nodes_;
    std::vector<NodeId> leaf_nodes_;
};

/// Lowest-common-ancestor index over a Genealogy: Euler tour plus a sparse
/// table of minimum depths. O(n log n) build, O(1) query.
class LcaIndex
{
  public:
    explicit LcaIndex(const Genealogy& g);

    NodeId lca(NodeId a, NodeId b) const;

  private:
    std::vector<NodeId> euler_;
    std::vector<std::int32_t> depth_;
    std::vector<std::int32_t> first_;
    std::vector<std::vector<std::int32_t>> table_; // indices into euler_
};

/// Split time of the most recent common ancestor of leaves i and j; t_final
/// when i == j. Builds a throwaway LcaIndex; prefer the indexed overload for
/// repeated queries.
double mrca_time(const Genealogy& g, LeafId i, LeafId j);
double mrca_time(const Genealogy& g, const LcaIndex& index, LeafId i, LeafId j);

} // namespace bbm
