#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "bbm/error.hpp"
#include "bbm/functionals.hpp"
#include "bbm/harness.hpp"
#include "bbm/rng.hpp"

namespace bbm::harness {

using nlohmann::json;

namespace {

void require_unique_finite(const std::vector<double>& v, const char* name, bool allow_empty = false)
{
    if (v.empty() && !allow_empty)
        throw ConfigError(std::string(name) + " must not be empty");
    std::set<double> seen;
    for (double x : v) {
        if (!std::isfinite(x))
            throw ConfigError(std::string(name) + " contains a non-finite value");
        if (!seen.insert(x).second)
            throw ConfigError(std::string(name) + " contains a duplicate value");
    }
}

json content_json(const ExperimentConfig& c)
{
    json j;
    j["schema_version"] = schema_version;
    j["prune_epsilon"] = c.prune_epsilon ? json(*c.prune_epsilon) : json(nullptr);
    j["track_min_level"] = c.track_min_level ? json(*c.track_min_level) : json(nullptr);
    j["track_bridge_minima"] = c.track_bridge_minima;
    j["particle_ceiling"] = c.particle_ceiling;
    j["t_grid"] = c.t_grid;
    j["gamma_grid"] = c.gamma_grid;
    j["beta_grid"] = c.beta_grid;
    j["trunc_levels"] = c.trunc_levels;
    j["cluster_k"] = c.cluster_k;
    j["cluster_b"] = c.cluster_b;
    j["cluster_cap"] = c.cluster_cap;
    j["member_cap"] = c.member_cap;
    j["n_replicas"] = c.n_replicas;
    j["root_seed"] = c.root_seed;
    return j;
}

std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace

void ExperimentConfig::validate() const
{
    if (n_replicas < 1)
        throw ConfigError("n_replicas must be at least 1");
    if (n_replicas > 0xffffffffull || t_grid.size() > 0xffffffffull)
        throw ConfigError("n_replicas and the t grid must each be below 2^32");
    require_unique_finite(t_grid, "t_grid");
    require_unique_finite(gamma_grid, "gamma_grid");
    require_unique_finite(beta_grid, "beta_grid");
    require_unique_finite(trunc_levels, "trunc_levels", true);
    for (double t : t_grid) {
        if (!(t > 0.0))
            throw ConfigError("t_grid values must be positive");
    }
    for (double g : gamma_grid) {
        if (!(g > 0.0))
            throw ConfigError("gamma_grid values must be positive");
        if (prune_epsilon && g <= 0.5)
            throw ConfigError("pruning certifies only gamma > 1/2; run gamma <= 1/2 in exact mode");
    }
    if (!(cluster_k > 0.0) || !(cluster_b > 0.0) || !std::isfinite(cluster_k) ||
        !std::isfinite(cluster_b))
        throw ConfigError("cluster_k and cluster_b must be positive and finite");
    sim_config(t_grid.front(), 0).validate();
}

SimConfig ExperimentConfig::sim_config(double t, std::uint64_t seed) const
{
    SimConfig s;
    s.t_final = t;
    s.seed = seed;
    s.prune_epsilon = prune_epsilon;
    s.track_min_level = track_min_level;
    s.track_bridge_minima = track_bridge_minima;
    s.particle_ceiling = particle_ceiling;
    s.gamma_grid.clear();
    for (double g : gamma_grid) {
        if (g > 0.5)
            s.gamma_grid.push_back(g);
    }
    std::sort(s.gamma_grid.begin(), s.gamma_grid.end());
    if (s.gamma_grid.empty())
        s.gamma_grid = {1.0};
    return s;
}

std::string ExperimentConfig::hash() const
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fmix64(fnv1a(content_json(*this).dump()))));
    return buf;
}

std::string ExperimentConfig::to_json() const
{
    json j = content_json(*this);
    j["output_path"] = output_path.string();
    j["parallelism"] = parallelism;
    j["record_timing"] = record_timing;
    return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text)
{
    ExperimentConfig c;
    try {
        const json j = json::parse(text);
        static const std::set<std::string> known = {
            "schema_version", "prune_epsilon", "track_min_level", "track_bridge_minima",
            "particle_ceiling", "t_grid", "gamma_grid", "beta_grid", "trunc_levels",
            "cluster_k", "cluster_b", "cluster_cap", "member_cap", "n_replicas",
            "root_seed", "output_path", "parallelism", "record_timing"};
        for (const auto& [key, _] : j.items()) {
            if (!known.contains(key))
                throw ConfigError("unknown config key '" + key + "'");
        }
        auto opt = [&](const char* key) -> std::optional<double> {
            if (!j.contains(key) || j.at(key).is_null())
                return std::nullopt;
            return j.at(key).get<double>();
        };
        auto get = [&]<typename T>(const char* key, T& dst) {
            if (j.contains(key))
                dst = j.at(key).get<T>();
        };
        c.prune_epsilon = opt("prune_epsilon");
        c.track_min_level = opt("track_min_level");
        get("track_bridge_minima", c.track_bridge_minima);
        get("particle_ceiling", c.particle_ceiling);
        get("t_grid", c.t_grid);
        get("gamma_grid", c.gamma_grid);
        get("beta_grid", c.beta_grid);
        get("trunc_levels", c.trunc_levels);
        get("cluster_k", c.cluster_k);
        get("cluster_b", c.cluster_b);
        get("cluster_cap", c.cluster_cap);
        get("member_cap", c.member_cap);
        get("n_replicas", c.n_replicas);
        get("root_seed", c.root_seed);
        get("parallelism", c.parallelism);
        get("record_timing", c.record_timing);
        if (j.contains("output_path"))
            c.output_path = j.at("output_path").get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid config JSON: ") + e.what());
    }
    return c;
}

std::uint64_t replica_seed(std::uint64_t root_seed, std::size_t t_index, std::size_t replica_index)
{
    const std::uint64_t counter =
        (static_cast<std::uint64_t>(t_index) << 32) | static_cast<std::uint64_t>(replica_index);
    return splitmix64_mix(root_seed + golden_gamma * (counter + 1));
}

std::vector<Task> plan(const ExperimentConfig& config)
{
    config.validate();
    std::vector<Task> tasks;
    tasks.reserve(config.t_grid.size() * config.n_replicas);
    std::unordered_set<std::uint64_t> seeds;
    for (std::size_t ti = 0; ti < config.t_grid.size(); ++ti) {
        for (std::size_t r = 0; r < config.n_replicas; ++r) {
            Task task{ti, config.t_grid[ti], r, replica_seed(config.root_seed, ti, r)};
            if (!seeds.insert(task.seed).second)
                throw ConfigError("seed collision at t_index " + std::to_string(ti) +
                                  ", replica " + std::to_string(r));
            tasks.push_back(task);
        }
    }
    return tasks;
}

ReplicaRecord compute_record(const ReplicaOutput& out, const ExperimentConfig& config,
                             const Task& task, const std::string& config_hash)
{
    ReplicaRecord r;
    r.config_hash = config_hash;
    r.t = task.t;
    r.t_index = task.t_index;
    r.replica_index = task.replica_index;
    r.seed = task.seed;
    r.n_leaves = out.n_leaves();

    const SortedLeaves s(out);
    for (double g : config.gamma_grid) {
        r.additive.emplace_back(g, additive_martingale(s, g));
        for (double b : config.beta_grid) {
            r.partitions.push_back({g, b, std::nullopt, complex_partition(s, g, b).raw});
            for (double k : config.trunc_levels)
                r.partitions.push_back({g, b, k, complex_partition(s, g, b, k).raw});
            r.overlap.push_back({g, b, pairwise_overlap(out, g, b)});
        }
    }
    r.derivative = derivative_martingale(s);
    if (const double w = recentered_minimum(out); std::isfinite(w))
        r.recentered_min = w;
    if (config.track_bridge_minima)
        r.global_inf = global_infimum(out);

    r.cluster_cap = config.cluster_cap;
    r.member_cap = config.member_cap;
    if (config.cluster_cap > 0) {
        const auto clusters = extract_clusters(out, config.cluster_k, config.cluster_b);
        r.cluster_count = clusters.size();
        const std::size_t keep = std::min(clusters.size(), config.cluster_cap);
        for (std::size_t i = 0; i < keep; ++i) {
            const auto& c = clusters[i];
            StoredCluster sc;
            sc.level = c.anchor_level;
            sc.anchor_leaf = c.anchor_leaf;
            sc.n_members = c.members.size();
            const std::size_t mk = std::min(c.members.size(), config.member_cap);
            for (std::size_t m = 0; m < mk; ++m)
                sc.members.push_back({c.members[m].dx, c.members[m].dy, c.members[m].split_age});
            r.clusters.push_back(std::move(sc));
        }
    }
    for (std::size_t i = 0; i < out.config.gamma_grid.size(); ++i)
        r.pruned_mass_bound.emplace_back(out.config.gamma_grid[i], out.pruned_mass_bound[i]);
    r.pruned_count_bound = out.pruned_count_bound;
    return r;
}

ReplicaRecord execute_task(const ExperimentConfig& config, const Task& task,
                           const std::string& config_hash)
{
    const auto start = std::chrono::steady_clock::now();
    ReplicaRecord r;
    try {
        const auto out = simulate(config.sim_config(task.t, task.seed));
        r = compute_record(out, config, task, config_hash);
    } catch (const ResourceLimitError& e) {
        r = ReplicaRecord{};
        r.error = TaskError{"resource_limit", e.what(), e.ceiling(), e.t_reached()};
    } catch (const IoError&) {
        throw;
    } catch (const Error& e) {
        r = ReplicaRecord{};
        r.error = TaskError{"error", e.what(), std::nullopt, std::nullopt};
    } catch (const std::bad_alloc&) {
        r = ReplicaRecord{};
        r.error = TaskError{"resource_limit", "out of memory", std::nullopt, std::nullopt};
    }
    if (r.error) {
        r.config_hash = config_hash;
        r.t = task.t;
        r.t_index = task.t_index;
        r.replica_index = task.replica_index;
        r.seed = task.seed;
    }
    if (config.record_timing)
        r.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::size_t default_parallelism()
{
    if (const char* env = std::getenv("BBM_PARALLELISM")) {
        const std::string v = env;
        if (!v.empty() && v != "auto") {
            char* end = nullptr;
            const unsigned long long n = std::strtoull(v.c_str(), &end, 10);
            if (*end != '\0' || n == 0)
                throw ConfigError("BBM_PARALLELISM must be a positive integer or 'auto'");
            return static_cast<std::size_t>(n);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

void write_sidecar(const ExperimentConfig& config, const std::string& hash)
{
    const auto path = sidecar_path(config.output_path);
    if (std::filesystem::exists(path)) {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot read " + path.string());
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw IoError("corrupt sidecar " + path.string() + ": " + e.what());
        }
        const auto existing = j.value("config_hash", std::string{});
        if (existing != hash)
            throw ConfigError("store " + config.output_path.string() + " was written by config " +
                              existing + ", current config is " + hash);
        return;
    }
    json j;
    j["config_hash"] = hash;
    j["config"] = json::parse(config.to_json());
    std::ofstream out(path, std::ios::trunc);
    out << j.dump(2) << '\n';
    if (!out)
        throw IoError("cannot write " + path.string());
}

// Drop a trailing partial line left by an interrupted run and return the
// completed (t_index, replica_index) pairs.
std::set<std::pair<std::size_t, std::size_t>> recover_store(const std::filesystem::path& store,
                                                            const std::string& hash,
                                                            std::size_t& failed)
{
    std::set<std::pair<std::size_t, std::size_t>> done;
    if (!std::filesystem::exists(store))
        return done;
    std::string text;
    {
        std::ifstream in(store, std::ios::binary);
        if (!in)
            throw IoError("cannot open store " + store.string());
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    const auto last = text.rfind('\n');
    const std::size_t complete = last == std::string::npos ? 0 : last + 1;
    if (complete != text.size()) {
        std::error_code ec;
        std::filesystem::resize_file(store, complete, ec);
        if (ec)
            throw IoError("cannot truncate partial record in " + store.string());
    }
    for (const auto& r : load_store(store)) {
        if (r.config_hash != hash)
            throw ConfigError("store contains records of config " + r.config_hash);
        done.emplace(r.t_index, r.replica_index);
        if (!r.ok())
            ++failed;
    }
    return done;
}

} // namespace

RunSummary run(const ExperimentConfig& config, const std::vector<Task>& tasks,
               std::size_t parallelism)
{
    config.validate();
    if (config.output_path.empty())
        throw ConfigError("output_path is required");
    const std::string hash = config.hash();
    if (const auto dir = config.output_path.parent_path(); !dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec)
            throw IoError("cannot create " + dir.string());
    }
    write_sidecar(config, hash);

    RunSummary summary;
    summary.planned = tasks.size();
    const auto done = recover_store(config.output_path, hash, summary.failed);
    std::vector<const Task*> todo;
    for (const auto& task : tasks) {
        if (done.contains({task.t_index, task.replica_index}))
            ++summary.resumed;
        else
            todo.push_back(&task);
    }
    if (todo.empty())
        return summary;

    std::ofstream out(config.output_path, std::ios::binary | std::ios::app);
    if (!out)
        throw IoError("cannot open " + config.output_path.string() + " for appending");

    if (parallelism == 0)
        parallelism = default_parallelism();
    const std::size_t workers = std::min(parallelism, todo.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> abort{false};
    std::mutex write_mutex;
    std::exception_ptr failure;

    auto work = [&] {
        while (!abort.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= todo.size())
                return;
            try {
                const auto record = execute_task(config, *todo[i], hash);
                const std::string line = serialize(record) + '\n';
                std::lock_guard lock(write_mutex);
                out.write(line.data(), static_cast<std::streamsize>(line.size()));
                out.flush();
                if (!out)
                    throw IoError("write failed on " + config.output_path.string());
                ++summary.computed;
                if (!record.ok())
                    ++summary.failed;
            } catch (...) {
                std::lock_guard lock(write_mutex);
                if (!failure)
                    failure = std::current_exception();
                abort = true;
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(work);
    }
    if (failure)
        std::rethrow_exception(failure);
    return summary;
}

} // namespace bbm::harness
