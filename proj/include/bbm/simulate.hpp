#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "bbm/genealogy.hpp"

namespace bbm {

inline constexpr std::size_t default_particle_ceiling = 200'000'000;

/// Parameters of one replica simulation. Branching rate is fixed at 1.
struct SimConfig
{
    double t_final = 1.0;
    std::uint64_t seed = 0;
    std::optional<double> prune_epsilon; ///< absent = exact simulation
    std::vector<double> gamma_grid{1.0}; ///< functionals certified by pruning
    std::optional<double> track_min_level; ///< k_max, relative to (3/2) ln t
    bool track_y = true;
    bool track_bridge_minima = false;
    std::size_t particle_ceiling = default_particle_ceiling;

    /// Throws ConfigError on any violated invariant.
    void validate() const;
};

/// A particle alive at t_final.
struct Leaf
{
    double x = 0.0; ///< shifted position sqrt(2) Xbar + 2t
    double y = 0.0; ///< raw second coordinate Ybar
    NodeId node = no_node;
    std::uint64_t key = 0; ///< stream key; stable across pruned/exact runs
    std::optional<double> path_min; ///< infimum of the shifted X path on [0, t]
};

/// A subtree removed by pruning: its root was born at time s at position x.
struct PrunedStub
{
    NodeId node = no_node;
    double x = 0.0;
    double s = 0.0;
};

struct ReplicaOutput
{
    SimConfig config;
    std::vector<Leaf> leaves;
    Genealogy genealogy;
    std::vector<double> pruned_mass_bound;  ///< per gamma_grid entry
    double pruned_count_bound = 0.0;        ///< expected pruned leaves below the tracked level
    std::vector<PrunedStub> pruned;

    std::size_t n_leaves() const noexcept { return leaves.size(); }
    double t_final() const noexcept { return config.t_final; }
};

struct PruneDecision
{
    bool prune = false;
    double certificate = 0.0;             ///< max over the tracked bounds
    std::vector<double> mass_bounds;      ///< B_gamma per gamma_grid entry
    std::optional<double> count_bound;    ///< expected descendants below the tracked level
};

/// Run one replica. Deterministic in `config`.
ReplicaOutput simulate(const SimConfig& config);

/// First-moment pruning test for a particle born at time s at shifted
/// position x. Pure function.
PruneDecision prune_decision(double x, double s, const SimConfig& config);

/// Inverse-CDF sample of the minimum of a Brownian bridge with variance rate 2
/// from a to b over duration dt, using the uniform draw u.
double bridge_min_sample(double a, double b, double dt, double u);

/// Minimum over leaves of the sampled path infimum.
double global_infimum(const ReplicaOutput& r);

} // namespace bbm
