#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bbm/error.hpp"
#include "bbm/harness.hpp"
#include "bbm/stats.hpp"

namespace bbm::harness {

using nlohmann::json;

namespace {

json optional_real(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

std::optional<double> read_optional_real(const json& j, const char* key)
{
    if (!j.contains(key) || j.at(key).is_null())
        return std::nullopt;
    return j.at(key).get<double>();
}

json to_json(const ReplicaRecord& r)
{
    json j;
    j["schema_version"] = r.schema;
    j["config_hash"] = r.config_hash;
    j["t"] = r.t;
    j["t_index"] = r.t_index;
    j["replica_index"] = r.replica_index;
    j["seed"] = r.seed;
    j["wall_time_s"] = r.wall_time_s;
    if (r.error) {
        json e;
        e["kind"] = r.error->kind;
        e["message"] = r.error->message;
        e["ceiling"] = r.error->ceiling ? json(*r.error->ceiling) : json(nullptr);
        e["t_reached"] = optional_real(r.error->t_reached);
        j["error"] = e;
        return j;
    }
    j["n_leaves"] = r.n_leaves;
    json parts = json::array();
    for (const auto& p : r.partitions)
        parts.push_back({{"gamma", p.gamma},
                         {"beta", p.beta},
                         {"trunc", optional_real(p.trunc)},
                         {"z", {p.raw.real(), p.raw.imag()}}});
    j["partitions"] = parts;
    json add = json::array();
    for (const auto& [g, v] : r.additive)
        add.push_back({{"gamma", g}, {"value", v}});
    j["additive"] = add;
    j["derivative"] = r.derivative;
    j["recentered_min"] = optional_real(r.recentered_min);
    json ov = json::array();
    for (const auto& o : r.overlap)
        ov.push_back({{"gamma", o[0]}, {"beta", o[1]}, {"value", o[2]}});
    j["overlap"] = ov;
    j["global_inf"] = optional_real(r.global_inf);
    json cl;
    cl["count"] = r.cluster_count;
    cl["cap"] = r.cluster_cap;
    cl["member_cap"] = r.member_cap;
    json list = json::array();
    for (const auto& c : r.clusters) {
        json members = json::array();
        for (const auto& m : c.members)
            members.push_back({m[0], m[1], m[2]});
        list.push_back({{"level", c.level},
                        {"leaf", c.anchor_leaf},
                        {"n_members", c.n_members},
                        {"members", members}});
    }
    cl["list"] = list;
    j["clusters"] = cl;
    json pb = json::array();
    for (const auto& [g, v] : r.pruned_mass_bound)
        pb.push_back({{"gamma", g}, {"bound", v}});
    j["pruned_mass_bound"] = pb;
    j["pruned_count_bound"] = r.pruned_count_bound;
    return j;
}

ReplicaRecord from_json(const json& j)
{
    ReplicaRecord r;
    r.schema = j.at("schema_version").get<int>();
    if (r.schema != schema_version)
        throw ConfigError("record schema_version " + std::to_string(r.schema) +
                          " is not supported (expected " + std::to_string(schema_version) + ")");
    r.config_hash = j.at("config_hash").get<std::string>();
    r.t = j.at("t").get<double>();
    r.t_index = j.at("t_index").get<std::size_t>();
    r.replica_index = j.at("replica_index").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.wall_time_s = j.at("wall_time_s").get<double>();
    if (j.contains("error")) {
        const auto& e = j.at("error");
        TaskError err;
        err.kind = e.at("kind").get<std::string>();
        err.message = e.at("message").get<std::string>();
        if (!e.at("ceiling").is_null())
            err.ceiling = e.at("ceiling").get<std::size_t>();
        err.t_reached = read_optional_real(e, "t_reached");
        r.error = err;
        return r;
    }
    r.n_leaves = j.at("n_leaves").get<std::size_t>();
    for (const auto& p : j.at("partitions")) {
        const auto& z = p.at("z");
        r.partitions.push_back({p.at("gamma").get<double>(), p.at("beta").get<double>(),
                                read_optional_real(p, "trunc"),
                                {z.at(0).get<double>(), z.at(1).get<double>()}});
    }
    for (const auto& a : j.at("additive"))
        r.additive.emplace_back(a.at("gamma").get<double>(), a.at("value").get<double>());
    r.derivative = j.at("derivative").get<double>();
    r.recentered_min = read_optional_real(j, "recentered_min");
    for (const auto& o : j.at("overlap"))
        r.overlap.push_back(
            {o.at("gamma").get<double>(), o.at("beta").get<double>(), o.at("value").get<double>()});
    r.global_inf = read_optional_real(j, "global_inf");
    const auto& cl = j.at("clusters");
    r.cluster_count = cl.at("count").get<std::size_t>();
    r.cluster_cap = cl.at("cap").get<std::size_t>();
    r.member_cap = cl.at("member_cap").get<std::size_t>();
    for (const auto& c : cl.at("list")) {
        StoredCluster s;
        s.level = c.at("level").get<double>();
        s.anchor_leaf = c.at("leaf").get<std::int64_t>();
        s.n_members = c.at("n_members").get<std::size_t>();
        for (const auto& m : c.at("members"))
            s.members.push_back({m.at(0).get<double>(), m.at(1).get<double>(), m.at(2).get<double>()});
        r.clusters.push_back(std::move(s));
    }
    for (const auto& b : j.at("pruned_mass_bound"))
        r.pruned_mass_bound.emplace_back(b.at("gamma").get<double>(), b.at("bound").get<double>());
    r.pruned_count_bound = j.at("pruned_count_bound").get<double>();
    return r;
}

std::vector<double> parse_numbers(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size())
                throw ConfigError("");
        } catch (const std::exception&) {
            throw ConfigError("field key: '" + item + "' is not a number");
        }
    }
    return out;
}

} // namespace

std::optional<std::complex<double>> ReplicaRecord::partition(double gamma, double beta,
                                                             std::optional<double> trunc) const
{
    for (const auto& p : partitions) {
        if (p.gamma == gamma && p.beta == beta && p.trunc == trunc)
            return p.raw;
    }
    return std::nullopt;
}

std::optional<double> ReplicaRecord::additive_at(double gamma) const
{
    for (const auto& [g, v] : additive) {
        if (g == gamma)
            return v;
    }
    return std::nullopt;
}

std::optional<double> ReplicaRecord::overlap_at(double gamma, double beta) const
{
    for (const auto& o : overlap) {
        if (o[0] == gamma && o[1] == beta)
            return o[2];
    }
    return std::nullopt;
}

std::optional<double> ReplicaRecord::pruned_bound_at(double gamma) const
{
    for (const auto& [g, v] : pruned_mass_bound) {
        if (g == gamma)
            return v;
    }
    return std::nullopt;
}

std::string serialize(const ReplicaRecord& record)
{
    return to_json(record).dump();
}

ReplicaRecord parse_record(const std::string& line)
{
    try {
        return from_json(json::parse(line));
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed record: ") + e.what());
    }
}

std::filesystem::path sidecar_path(const std::filesystem::path& store)
{
    auto p = store;
    p += ".config.json";
    return p;
}

std::vector<ReplicaRecord> load_store(const std::filesystem::path& store)
{
    std::ifstream in(store, std::ios::binary);
    if (!in)
        throw IoError("cannot open store " + store.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad())
        throw IoError("read failed on " + store.string());
    std::vector<ReplicaRecord> out;
    std::size_t start = 0;
    while (true) {
        const auto end = text.find('\n', start);
        if (end == std::string::npos)
            break; // partial trailing line
        if (end > start)
            out.push_back(parse_record(text.substr(start, end - start)));
        start = end + 1;
    }
    return out;
}

//---------------------------------------------------------------------------//
// Field keys and aggregation
//---------------------------------------------------------------------------//

namespace {

struct KindName
{
    FieldKey::Kind kind;
    const char* name;
    std::size_t params; // gamma, beta
};

constexpr KindName kind_names[] = {
    {FieldKey::Kind::n_leaves, "n_leaves", 0},
    {FieldKey::Kind::additive, "additive", 1},
    {FieldKey::Kind::derivative, "derivative", 0},
    {FieldKey::Kind::recentered_min, "recentered_min", 0},
    {FieldKey::Kind::overlap, "overlap", 2},
    {FieldKey::Kind::global_inf, "global_inf", 0},
    {FieldKey::Kind::partition_re, "partition_re", 2},
    {FieldKey::Kind::partition_im, "partition_im", 2},
    {FieldKey::Kind::partition_abs, "partition_abs", 2},
    {FieldKey::Kind::normalized_abs, "normalized_abs", 2},
};

std::string format_number(double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace

FieldKey FieldKey::parse(const std::string& text)
{
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    for (const auto& kn : kind_names) {
        if (name != kn.name)
            continue;
        FieldKey key;
        key.kind = kn.kind;
        std::vector<double> args;
        if (colon != std::string::npos)
            args = parse_numbers(text.substr(colon + 1));
        const bool is_partition = kn.params == 2 && kn.kind != Kind::overlap;
        const std::size_t max_args = kn.params + (is_partition ? 1 : 0);
        if (args.size() < kn.params || args.size() > max_args)
            throw ConfigError("field key '" + text + "': expected " + std::to_string(kn.params) +
                              " parameter(s)");
        if (kn.params >= 1)
            key.gamma = args[0];
        if (kn.params >= 2)
            key.beta = args[1];
        if (args.size() == 3)
            key.trunc = args[2];
        return key;
    }
    throw ConfigError("unknown field key '" + text + "'");
}

std::string FieldKey::to_string() const
{
    for (const auto& kn : kind_names) {
        if (kn.kind != kind)
            continue;
        std::string s = kn.name;
        if (kn.params >= 1)
            s += ":" + format_number(gamma);
        if (kn.params >= 2)
            s += "," + format_number(beta);
        if (trunc)
            s += "," + format_number(*trunc);
        return s;
    }
    return "?";
}

std::optional<double> FieldKey::extract(const ReplicaRecord& r) const
{
    if (!r.ok())
        return std::nullopt;
    switch (kind) {
    case Kind::n_leaves:
        return static_cast<double>(r.n_leaves);
    case Kind::additive:
        return r.additive_at(gamma);
    case Kind::derivative:
        return r.derivative;
    case Kind::recentered_min:
        return r.recentered_min;
    case Kind::overlap:
        return r.overlap_at(gamma, beta);
    case Kind::global_inf:
        return r.global_inf;
    case Kind::partition_re:
    case Kind::partition_im:
    case Kind::partition_abs:
    case Kind::normalized_abs: {
        const auto z = r.partition(gamma, beta, trunc);
        if (!z)
            return std::nullopt;
        if (kind == Kind::partition_re)
            return z->real();
        if (kind == Kind::partition_im)
            return z->imag();
        if (kind == Kind::partition_abs)
            return std::abs(*z);
        return std::pow(r.t, 1.5 * gamma) * std::abs(*z);
    }
    }
    return std::nullopt;
}

std::vector<double> collect(std::span<const ReplicaRecord> records, const FieldKey& key,
                            std::optional<double> t)
{
    std::vector<const ReplicaRecord*> sel;
    for (const auto& r : records) {
        if (r.ok() && (!t || r.t == *t))
            sel.push_back(&r);
    }
    std::sort(sel.begin(), sel.end(), [](const ReplicaRecord* a, const ReplicaRecord* b) {
        return std::tie(a->t_index, a->replica_index) < std::tie(b->t_index, b->replica_index);
    });
    std::vector<double> out;
    out.reserve(sel.size());
    for (const auto* r : sel) {
        if (const auto v = key.extract(*r))
            out.push_back(*v);
    }
    return out;
}

Summary aggregate(std::span<const ReplicaRecord> records, const FieldKey& key,
                  std::optional<double> t)
{
    auto values = collect(records, key, t);
    if (values.empty())
        throw MissingDataError("aggregate: no record carries " + key.to_string());
    std::sort(values.begin(), values.end());
    Summary s;
    s.count = values.size();
    const auto n = static_cast<double>(s.count);
    double sum = 0.0;
    for (double v : values)
        sum += v;
    s.mean = sum / n;
    if (s.count > 1) {
        double ss = 0.0;
        for (double v : values)
            ss += (v - s.mean) * (v - s.mean);
        s.se = std::sqrt(ss / (n - 1.0) / n);
    }
    s.median = stats::quantile(values, 0.5);
    for (double q : {0.05, 0.25, 0.75, 0.95})
        s.quantiles[q] = stats::quantile(values, q);
    return s;
}

} // namespace bbm::harness
