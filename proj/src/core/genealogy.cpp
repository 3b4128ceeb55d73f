#include "bbm/genealogy.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bbm/error.hpp"

namespace bbm {

NodeId Genealogy::add_node(GenealogyNode node)
{
    const auto id = static_cast<NodeId>(nodes_.size());
    if (node.kind == NodeKind::leaf) {
        node.leaf = static_cast<LeafId>(leaf_nodes_.size());
        leaf_nodes_.push_back(id);
    }
    nodes_.push_back(node);
    return id;
}

void Genealogy::set_split(NodeId id, double split_time)
{
    auto& n = nodes_.at(static_cast<std::size_t>(id));
    n.kind = NodeKind::internal;
    n.split_time = split_time;
}

void Genealogy::set_leaf(NodeId id, LeafId leaf)
{
    auto& n = nodes_.at(static_cast<std::size_t>(id));
    n.kind = NodeKind::leaf;
    n.leaf = leaf;
    if (static_cast<std::size_t>(leaf) != leaf_nodes_.size())
        throw std::logic_error("leaves must be registered in order");
    leaf_nodes_.push_back(id);
}

void Genealogy::set_pruned(NodeId id)
{
    nodes_.at(static_cast<std::size_t>(id)).kind = NodeKind::pruned;
}

NodeId Genealogy::leaf_node(LeafId leaf) const
{
    if (leaf < 0 || static_cast<std::size_t>(leaf) >= leaf_nodes_.size())
        throw ConfigError("invalid leaf identifier " + std::to_string(leaf));
    return leaf_nodes_[static_cast<std::size_t>(leaf)];
}

std::vector<std::uint8_t> Genealogy::child_counts() const
{
    std::vector<std::uint8_t> counts(nodes_.size(), 0);
    for (const auto& n : nodes_) {
        if (n.parent != no_node)
            ++counts[static_cast<std::size_t>(n.parent)];
    }
    return counts;
}

void Genealogy::validate() const
{
    auto fail = [](const std::string& msg) { throw std::logic_error("genealogy: " + msg); };
    if (nodes_.empty())
        fail("empty");
    std::size_t roots = 0;
    std::size_t internal = 0;
    std::size_t terminal = 0;
    const auto counts = child_counts();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        if (n.parent == no_node) {
            ++roots;
            if (n.birth_time != 0.0)
                fail("root born after 0");
        } else {
            if (n.parent < 0 || static_cast<std::size_t>(n.parent) >= i)
                fail("parent must precede child");
            const auto& p = nodes_[static_cast<std::size_t>(n.parent)];
            if (p.kind != NodeKind::internal)
                fail("parent is not internal");
            if (n.birth_time != p.split_time)
                fail("birth time differs from parent split time");
        }
        switch (n.kind) {
        case NodeKind::internal:
            ++internal;
            if (counts[i] != 2)
                fail("internal node without exactly two children");
            if (!(n.split_time > n.birth_time) || !(n.split_time <= t_final_))
                fail("split time not increasing along path");
            break;
        case NodeKind::leaf:
        case NodeKind::pruned:
            ++terminal;
            if (counts[i] != 0)
                fail("terminal node with children");
            break;
        }
        if (n.kind == NodeKind::leaf) {
            if (n.leaf < 0 || static_cast<std::size_t>(n.leaf) >= leaf_nodes_.size() ||
                leaf_nodes_[static_cast<std::size_t>(n.leaf)] != static_cast<NodeId>(i))
                fail("leaf index mismatch");
        }
    }
    if (roots != 1)
        fail("expected exactly one root");
    if (nodes_.front().parent != no_node)
        fail("root must be node 0");
    if (terminal != internal + 1)
        fail("terminal count != internal count + 1");
}

//---------------------------------------------------------------------------//

LcaIndex::LcaIndex(const Genealogy& g)
{
    const auto n = g.size();
    if (n == 0)
        throw MissingDataError("LCA index over an empty genealogy");

    // CSR children lists
    std::vector<std::int32_t> offset(n + 1, 0);
    for (const auto& node : g.nodes()) {
        if (node.parent != no_node)
            ++offset[static_cast<std::size_t>(node.parent) + 1];
    }
    for (std::size_t i = 0; i < n; ++i)
        offset[i + 1] += offset[i];
    std::vector<NodeId> children(static_cast<std::size_t>(offset[n]));
    {
        auto fill = offset;
        for (std::size_t i = 0; i < n; ++i) {
            const auto p = g.node(static_cast<NodeId>(i)).parent;
            if (p != no_node)
                children[static_cast<std::size_t>(fill[static_cast<std::size_t>(p)]++)] =
                    static_cast<NodeId>(i);
        }
    }

    first_.assign(n, -1);
    euler_.reserve(2 * n);
    depth_.reserve(2 * n);

    struct Frame
    {
        NodeId node;
        std::int32_t depth;
        std::int32_t next_child;
    };
    std::vector<Frame> stack;
    stack.push_back({0, 0, offset[0]});
    while (!stack.empty()) {
        auto& f = stack.back();
        const auto idx = static_cast<std::size_t>(f.node);
        if (first_[idx] < 0)
            first_[idx] = static_cast<std::int32_t>(euler_.size());
        euler_.push_back(f.node);
        depth_.push_back(f.depth);
        if (f.next_child < offset[idx + 1]) {
            const NodeId c = children[static_cast<std::size_t>(f.next_child++)];
            const auto d = f.depth + 1;
            stack.push_back({c, d, offset[static_cast<std::size_t>(c)]});
        } else {
            stack.pop_back();
            // the parent is re-emitted when it resumes
        }
    }

    const auto m = euler_.size();
    const auto levels = static_cast<std::size_t>(std::bit_width(m));
    table_.resize(levels);
    table_[0].resize(m);
    for (std::size_t i = 0; i < m; ++i)
        table_[0][i] = static_cast<std::int32_t>(i);
    for (std::size_t k = 1; k < levels; ++k) {
        const std::size_t half = std::size_t{1} << (k - 1);
        const std::size_t len = m - (std::size_t{1} << k) + 1;
        table_[k].resize(len);
        for (std::size_t i = 0; i < len; ++i) {
            const auto a = table_[k - 1][i];
            const auto b = table_[k - 1][i + half];
            table_[k][i] = depth_[static_cast<std::size_t>(a)] <= depth_[static_cast<std::size_t>(b)]
                               ? a
                               : b;
        }
    }
}

NodeId LcaIndex::lca(NodeId a, NodeId b) const
{
    auto l = static_cast<std::size_t>(first_.at(static_cast<std::size_t>(a)));
    auto r = static_cast<std::size_t>(first_.at(static_cast<std::size_t>(b)));
    if (l > r)
        std::swap(l, r);
    const auto k = static_cast<std::size_t>(std::bit_width(r - l + 1) - 1);
    const auto x = table_[k][l];
    const auto y = table_[k][r - (std::size_t{1} << k) + 1];
    const auto best = depth_[static_cast<std::size_t>(x)] <= depth_[static_cast<std::size_t>(y)] ? x : y;
    return euler_[static_cast<std::size_t>(best)];
}

double mrca_time(const Genealogy& g, const LcaIndex& index, LeafId i, LeafId j)
{
    const NodeId a = g.leaf_node(i);
    const NodeId b = g.leaf_node(j);
    if (a == b)
        return g.t_final();
    return g.node(index.lca(a, b)).split_time;
}

double mrca_time(const Genealogy& g, LeafId i, LeafId j)
{
    if (i == j) {
        g.leaf_node(i);
        return g.t_final();
    }
    LcaIndex index(g);
    return mrca_time(g, index, i, j);
}

} // namespace bbm
