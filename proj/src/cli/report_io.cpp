#include "report_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "bbm/error.hpp"
#include "bbm/gates.hpp"

namespace bbm {

std::string gates::describe()
{
    std::ostringstream s;
    s << "gates_version = " << version << '\n'
      << "oracle_se = " << cli::num(oracle_se) << '\n'
      << "overlap_rel = " << cli::num(overlap_rel) << '\n'
      << "prune_factor = " << cli::num(prune_factor) << '\n'
      << "hill_rel = " << cli::num(hill_rel) << '\n'
      << "tails_min_samples = " << tails_min_samples << '\n'
      << "cf_p_abs = " << cli::num(cf_p_abs) << '\n'
      << "cf_synthetic_rel = " << cli::num(cf_synthetic_rel) << '\n'
      << "isotropy_p_min = " << cli::num(isotropy_p_min) << '\n'
      << "rotation_theta = " << cli::num(rotation_theta) << '\n'
      << "ppp_window = [" << cli::num(ppp_window_lo) << ", " << cli::num(ppp_window_hi) << "]\n"
      << "ppp_bins = " << ppp_bins << '\n'
      << "ppp_slope = " << cli::num(ppp_slope) << " +- " << cli::num(ppp_slope_abs) << '\n'
      << "norm_exponent_rel = " << cli::num(norm_exponent_rel) << '\n'
      << "phase_scan_rel = " << cli::num(phase_scan_rel) << '\n'
      << "bramson_median_spread = " << cli::num(bramson_median_spread) << '\n'
      << "bramson_tail = [" << cli::num(bramson_tail_lo) << ", " << cli::num(bramson_tail_hi)
      << "] points " << bramson_tail_points << '\n'
      << "bramson_tail_slope = " << cli::num(bramson_tail_slope) << " +- "
      << cli::num(bramson_tail_slope_abs) << '\n'
      << "infimum_se = " << cli::num(infimum_se) << '\n'
      << "infimum_k_max = " << infimum_k_max << '\n';
    return s.str();
}

namespace cli {

std::string num(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<harness::ReplicaRecord> read_records(const std::filesystem::path& store)
{
    if (store.empty())
        throw ConfigError("--store is required");
    if (!std::filesystem::exists(store))
        throw ConfigError("store " + store.string() + " does not exist");
    auto records = harness::load_store(store);
    if (records.empty())
        throw ConfigError("store " + store.string() + " is empty");
    return records;
}

std::vector<double> store_times(const std::vector<harness::ReplicaRecord>& records)
{
    std::set<double> ts;
    for (const auto& r : records) {
        if (r.ok())
            ts.insert(r.t);
    }
    return {ts.begin(), ts.end()};
}

void write_file(const std::filesystem::path& path, const std::string& body)
{
    if (const auto dir = path.parent_path(); !dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec)
            throw IoError("cannot create " + dir.string());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << body;
    if (!out)
        throw IoError("cannot write " + path.string());
}

std::string gates_banner()
{
    std::string s = "# gates\n";
    std::istringstream in(gates::describe());
    std::string line;
    while (std::getline(in, line))
        s += "#   " + line + '\n';
    return s;
}

std::filesystem::path output_dir(const std::filesystem::path& requested,
                                 const std::filesystem::path& store)
{
    if (!requested.empty())
        return requested;
    const auto parent = store.parent_path();
    return parent.empty() ? std::filesystem::path(".") : parent;
}

} // namespace cli
} // namespace bbm
