#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bbm/simulate.hpp"

namespace bbm::harness {

inline constexpr int schema_version = 1;

/// Everything needed to reproduce a replica farm.
struct ExperimentConfig
{
    // simulation template (t and seed vary per task)
    std::optional<double> prune_epsilon;
    std::optional<double> track_min_level;
    bool track_bridge_minima = false;
    std::size_t particle_ceiling = default_particle_ceiling;

    std::vector<double> t_grid{3.0};
    std::vector<double> gamma_grid{1.0};
    std::vector<double> beta_grid{0.0};
    std::vector<double> trunc_levels;
    double cluster_k = 6.0;
    double cluster_b = 5.0;
    std::size_t cluster_cap = 256; ///< 0 disables cluster extraction
    std::size_t member_cap = 32;

    std::size_t n_replicas = 1;
    std::uint64_t root_seed = 0;
    std::filesystem::path output_path;
    std::size_t parallelism = 0; ///< 0 = auto
    bool record_timing = true;

    void validate() const;

    /// Simulation config for one task.
    SimConfig sim_config(double t, std::uint64_t seed) const;

    /// Hash of every field that affects record content (excludes output_path,
    /// parallelism and record_timing), as 16 hex digits.
    std::string hash() const;

    std::string to_json() const;
    static ExperimentConfig from_json(const std::string& text);
};

/// Seed of replica `replica_index` at t_grid[t_index]:
/// splitmix64_mix(root_seed + golden * (1 + (t_index << 32 | replica_index))).
std::uint64_t replica_seed(std::uint64_t root_seed, std::size_t t_index, std::size_t replica_index);

struct Task
{
    std::size_t t_index = 0;
    double t = 0.0;
    std::size_t replica_index = 0;
    std::uint64_t seed = 0;
};

/// Deterministic task list, ordered by (t_index, replica_index).
std::vector<Task> plan(const ExperimentConfig& config);

struct PartitionEntry
{
    double gamma = 0.0;
    double beta = 0.0;
    std::optional<double> trunc;
    std::complex<double> raw;
};

struct StoredCluster
{
    double level = 0.0;
    std::int64_t anchor_leaf = -1;
    std::size_t n_members = 0;
    std::vector<std::array<double, 3>> members; ///< (dx, dy, split_age), capped
};

struct TaskError
{
    std::string kind; ///< "resource_limit" or "error"
    std::string message;
    std::optional<std::size_t> ceiling;
    std::optional<double> t_reached;
};

/// Self-describing result of one task.
struct ReplicaRecord
{
    int schema = schema_version;
    std::string config_hash;
    double t = 0.0;
    std::size_t t_index = 0;
    std::size_t replica_index = 0;
    std::uint64_t seed = 0;
    std::optional<TaskError> error;

    std::size_t n_leaves = 0;
    std::vector<PartitionEntry> partitions;
    std::vector<std::pair<double, double>> additive;            ///< (gamma, value)
    double derivative = 0.0;
    std::optional<double> recentered_min; ///< absent when no leaf survived pruning
    std::vector<std::array<double, 3>> overlap;                 ///< (gamma, beta, value)
    std::optional<double> global_inf;
    std::size_t cluster_count = 0;
    std::size_t cluster_cap = 0;
    std::size_t member_cap = 0;
    std::vector<StoredCluster> clusters;
    std::vector<std::pair<double, double>> pruned_mass_bound;   ///< (gamma, bound)
    double pruned_count_bound = 0.0;
    double wall_time_s = 0.0;

    bool ok() const noexcept { return !error.has_value(); }

    std::optional<std::complex<double>> partition(double gamma, double beta,
                                                  std::optional<double> trunc = std::nullopt) const;
    std::optional<double> additive_at(double gamma) const;
    std::optional<double> overlap_at(double gamma, double beta) const;
    std::optional<double> pruned_bound_at(double gamma) const;
};

/// Compute every functional of one replica.
ReplicaRecord compute_record(const ReplicaOutput& out, const ExperimentConfig& config,
                             const Task& task, const std::string& config_hash);

/// Run one task end to end, converting per-task failures into error records.
ReplicaRecord execute_task(const ExperimentConfig& config, const Task& task,
                           const std::string& config_hash);

/// One line of the store (no trailing newline).
std::string serialize(const ReplicaRecord& record);
ReplicaRecord parse_record(const std::string& line);

/// Path of the configuration sidecar for a store.
std::filesystem::path sidecar_path(const std::filesystem::path& store);

/// Read all complete records of a store. A trailing partial line is ignored.
std::vector<ReplicaRecord> load_store(const std::filesystem::path& store);

struct RunSummary
{
    std::size_t planned = 0;
    std::size_t computed = 0;
    std::size_t resumed = 0; ///< already present in the store
    std::size_t failed = 0;  ///< error records in the store after the run
};

/// Execute the tasks not already present in the store, appending one record
/// per task. Resumable and idempotent; the record set does not depend on
/// `parallelism` (0 = auto).
RunSummary run(const ExperimentConfig& config, const std::vector<Task>& tasks,
               std::size_t parallelism);

/// Default parallelism: BBM_PARALLELISM if set, else hardware concurrency.
std::size_t default_parallelism();

/// A scalar field of a record, e.g. "additive:1", "overlap:0.75,0.75",
/// "partition_abs:0.8,0.8", "normalized_abs:0.8,0.8,6", "derivative",
/// "n_leaves", "recentered_min", "global_inf".
struct FieldKey
{
    enum class Kind
    {
        n_leaves,
        additive,
        derivative,
        recentered_min,
        overlap,
        global_inf,
        partition_re,
        partition_im,
        partition_abs,
        normalized_abs,
    };
    Kind kind = Kind::n_leaves;
    double gamma = 0.0;
    double beta = 0.0;
    std::optional<double> trunc;

    static FieldKey parse(const std::string& text);
    std::string to_string() const;
    std::optional<double> extract(const ReplicaRecord& r) const;
};

struct Summary
{
    std::size_t count = 0;
    double mean = 0.0;
    std::optional<double> se; ///< absent for a single record
    double median = 0.0;
    std::map<double, double> quantiles; ///< 0.05, 0.25, 0.75, 0.95
};

/// Summary of `key` over successful records (optionally only those at time t).
/// Independent of record order.
Summary aggregate(std::span<const ReplicaRecord> records, const FieldKey& key,
                  std::optional<double> t = std::nullopt);

/// Values of `key` over successful records at time t (all t if absent),
/// ordered by (t_index, replica_index).
std::vector<double> collect(std::span<const ReplicaRecord> records, const FieldKey& key,
                            std::optional<double> t = std::nullopt);

} // namespace bbm::harness
