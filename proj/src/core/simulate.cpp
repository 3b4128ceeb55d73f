#include "bbm/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bbm/error.hpp"
#include "bbm/rng.hpp"

namespace bbm {

namespace {

// Draw slots of a node stream.
enum : std::uint64_t
{
    draw_lifetime = 0,
    draw_gauss_a = 1,
    draw_gauss_b = 2,
    draw_bridge = 3,
};

double log_normal_cdf(double z)
{
    const double p = 0.5 * std::erfc(-z / std::numbers::sqrt2);
    return p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
}

// log of e^{t-s} Phi((level - x - 2(t-s)) / sqrt(2(t-s))): expected number of
// descendants at t_final of a particle at (s, x) lying at or below `level`.
double log_count_bound(double x, double s, double t, double level)
{
    const double dt = t - s;
    if (dt <= 0.0)
        return x <= level ? 0.0 : -std::numeric_limits<double>::infinity();
    return dt + log_normal_cdf((level - x - 2.0 * dt) / std::sqrt(2.0 * dt));
}

double tracked_level(const SimConfig& c)
{
    return 1.5 * std::log(c.t_final) + c.track_min_level.value_or(0.0);
}

// Precomputed log-domain thresholds. Shared by prune_decision() and the
// simulation loop so both always agree.
class Pruner
{
  public:
    explicit Pruner(const SimConfig& c) : t_(c.t_final)
    {
        if (!c.prune_epsilon)
            return;
        enabled_ = true;
        const double log_eps = std::log(*c.prune_epsilon);
        log_eps_ = log_eps;
        const double log_t = std::log(c.t_final);
        for (double g : c.gamma_grid) {
            gammas_.push_back(g);
            drift_.push_back((1.0 - g) * (1.0 - g));
            log_thr_.push_back(log_eps - 1.5 * g * log_t);
        }
        if (c.track_min_level) {
            track_level_ = true;
            level_ = tracked_level(c);
        }
    }

    bool enabled() const noexcept { return enabled_; }
    std::size_t size() const noexcept { return gammas_.size(); }

    double log_mass_bound(std::size_t k, double x, double s) const noexcept
    {
        return -gammas_[k] * x + drift_[k] * (t_ - s);
    }

    double log_count_bound(double x, double s) const noexcept
    {
        return bbm::log_count_bound(x, s, t_, level_);
    }

    bool should_prune(double x, double s) const noexcept
    {
        for (std::size_t k = 0; k < gammas_.size(); ++k) {
            if (log_mass_bound(k, x, s) > log_thr_[k])
                return false;
        }
        if (track_level_ && log_count_bound(x, s) > log_eps_)
            return false;
        return true;
    }

    bool tracks_level() const noexcept { return track_level_; }

  private:
    double t_;
    bool enabled_ = false;
    bool track_level_ = false;
    double level_ = 0.0;
    double log_eps_ = 0.0;
    std::vector<double> gammas_;
    std::vector<double> drift_;
    std::vector<double> log_thr_;
};

} // namespace

void SimConfig::validate() const
{
    if (!(t_final > 0.0) || !std::isfinite(t_final))
        throw ConfigError("t_final must be positive and finite");
    if (gamma_grid.empty())
        throw ConfigError("gamma_grid must be nonempty");
    for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
        if (!(gamma_grid[i] > 0.5))
            throw ConfigError("gamma_grid entries must exceed 1/2");
        if (i > 0 && !(gamma_grid[i] > gamma_grid[i - 1]))
            throw ConfigError("gamma_grid must be strictly increasing");
    }
    if (prune_epsilon && !(*prune_epsilon > 0.0 && *prune_epsilon < 1.0))
        throw ConfigError("prune_epsilon must lie in (0, 1)");
    if (track_min_level && !std::isfinite(*track_min_level))
        throw ConfigError("track_min_level must be finite");
    if (particle_ceiling == 0)
        throw ConfigError("particle_ceiling must be positive");
}

PruneDecision prune_decision(double x, double s, const SimConfig& config)
{
    PruneDecision d;
    const Pruner pruner(config);
    d.mass_bounds.reserve(config.gamma_grid.size());
    double cert = 0.0;
    for (std::size_t k = 0; k < config.gamma_grid.size(); ++k) {
        // B_gamma = exp(-gamma x + (1 - gamma)^2 (t - s))
        const double g = config.gamma_grid[k];
        const double b = std::exp(-g * x + (1.0 - g) * (1.0 - g) * (config.t_final - s));
        d.mass_bounds.push_back(b);
        cert = std::max(cert, b);
    }
    if (config.track_min_level) {
        d.count_bound =
            std::exp(log_count_bound(x, s, config.t_final, tracked_level(config)));
        cert = std::max(cert, *d.count_bound);
    }
    d.certificate = cert;
    d.prune = pruner.enabled() && pruner.should_prune(x, s);
    return d;
}

double bridge_min_sample(double a, double b, double dt, double u)
{
    if (!(dt > 0.0))
        throw DomainError("bridge_min_sample: dt must be positive");
    if (!(u > 0.0 && u < 1.0))
        throw DomainError("bridge_min_sample: u must lie in (0, 1)");
    // P(min <= m | a, b) = exp(-(a - m)(b - m) / dt), variance rate 2
    const double d = a - b;
    return 0.5 * ((a + b) - std::sqrt(d * d - 4.0 * dt * std::log(u)));
}

ReplicaOutput simulate(const SimConfig& config)
{
    config.validate();

    ReplicaOutput out;
    out.config = config;
    out.genealogy = Genealogy(config.t_final);
    out.pruned_mass_bound.assign(config.gamma_grid.size(), 0.0);

    const Pruner pruner(config);
    const double t_end = config.t_final;

    struct Pending
    {
        double birth;
        double x;
        double y;
        double path_min;
        std::uint64_t key;
        NodeId parent;
    };
    std::vector<Pending> stack;
    stack.push_back({0.0, 0.0, 0.0, 0.0, root_key(config.seed), no_node});

    while (!stack.empty()) {
        const Pending p = stack.back();
        stack.pop_back();

        GenealogyNode node;
        node.birth_time = p.birth;
        node.parent = p.parent;

        if (pruner.enabled() && pruner.should_prune(p.x, p.birth)) {
            node.kind = NodeKind::pruned;
            const NodeId id = out.genealogy.add_node(node);
            for (std::size_t k = 0; k < pruner.size(); ++k)
                out.pruned_mass_bound[k] += std::exp(pruner.log_mass_bound(k, p.x, p.birth));
            if (pruner.tracks_level())
                out.pruned_count_bound += std::exp(pruner.log_count_bound(p.x, p.birth));
            out.pruned.push_back({id, p.x, p.birth});
            continue;
        }

        const NodeStream rs(p.key);
        const double end = p.birth + exponential_from_uniform(rs.uniform(draw_lifetime));
        const bool is_leaf = !(end < t_end);
        const double dt = (is_leaf ? t_end : end) - p.birth;
        const auto [ga, gb] = box_muller(rs.uniform(draw_gauss_a), rs.uniform(draw_gauss_b));

        // shifted X: variance 2 dt, drift +2 dt; raw Y: variance dt
        const double x1 = p.x + std::sqrt(2.0 * dt) * ga + 2.0 * dt;
        const double y1 = config.track_y ? p.y + std::sqrt(dt) * gb : 0.0;
        double path_min = p.path_min;
        if (config.track_bridge_minima && dt > 0.0)
            path_min = std::min(path_min, bridge_min_sample(p.x, x1, dt, rs.uniform(draw_bridge)));

        if (is_leaf) {
            node.kind = NodeKind::leaf;
            const NodeId id = out.genealogy.add_node(node);
            Leaf leaf;
            leaf.x = x1;
            leaf.y = y1;
            leaf.node = id;
            leaf.key = p.key;
            if (config.track_bridge_minima)
                leaf.path_min = std::min(path_min, x1);
            out.leaves.push_back(leaf);
        } else {
            node.kind = NodeKind::internal;
            node.split_time = end;
            const NodeId id = out.genealogy.add_node(node);
            // child 0 is expanded first
            stack.push_back({end, x1, y1, path_min, child_key(p.key, 1), id});
            stack.push_back({end, x1, y1, path_min, child_key(p.key, 0), id});
        }

        if (out.leaves.size() + stack.size() > config.particle_ceiling)
            throw ResourceLimitError(config.particle_ceiling, p.birth);
    }
    return out;
}

double global_infimum(const ReplicaOutput& r)
{
    if (!r.config.track_bridge_minima)
        throw MissingDataError("global_infimum requires track_bridge_minima");
    double m = std::numeric_limits<double>::infinity();
    for (const auto& leaf : r.leaves) {
        if (!leaf.path_min)
            throw MissingDataError("leaf without path_min");
        m = std::min(m, *leaf.path_min);
    }
    return m;
}

} // namespace bbm
