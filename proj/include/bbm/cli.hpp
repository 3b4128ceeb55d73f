#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bbm/harness.hpp"

namespace bbm::cli {

enum ExitCode : int
{
    exit_ok = 0,
    exit_config = 1,
    exit_io = 2,
    exit_partial = 3,
};

struct CommandResult
{
    int exit_code = exit_ok;
    std::vector<std::filesystem::path> artifacts;
};

struct SimulateOptions
{
    harness::ExperimentConfig config;
};

struct ValidateOptions
{
    std::filesystem::path store;
    std::filesystem::path report; ///< empty = <store>.oracles.txt
};

struct AnalyzeOptions
{
    std::string subcommand; ///< cf-fit, tails, isotropy, extremes, bramson
    std::filesystem::path store;
    std::filesystem::path out_dir; ///< empty = directory of the store
    double gamma = 1.0;
    double beta = 0.75;
    std::optional<double> t; ///< empty = largest t in the store
    std::optional<std::size_t> hill_k;
    double theta = 0.0;     ///< 0 = gate default
    std::optional<double> trunc;
};

struct ScanOptions
{
    double gamma_lo = 0.3;
    double gamma_hi = 1.2;
    double beta_lo = 0.0;
    double beta_hi = 1.0;
    std::size_t cells = 3; ///< per axis; an axis with lo == hi has one cell
    std::vector<double> t_grid{4.0, 6.0, 8.0};
    std::size_t replicas = 200;
    std::uint64_t seed = 0;
    std::size_t parallelism = 0;
    std::size_t particle_ceiling = default_particle_ceiling;
    double tolerance = 0.0; ///< 0 = gate default
    std::filesystem::path out_dir;
};

struct ReportOptions
{
    std::filesystem::path store;
    std::filesystem::path out; ///< empty = <store>.report.csv
};

CommandResult cmd_simulate(const SimulateOptions& opt, std::ostream& log);
CommandResult cmd_validate_oracles(const ValidateOptions& opt, std::ostream& log);
CommandResult cmd_analyze(const AnalyzeOptions& opt, std::ostream& log);
CommandResult cmd_scan_phase(const ScanOptions& opt, std::ostream& log);
CommandResult cmd_report(const ReportOptions& opt, std::ostream& log);

/// Full command line entry point; maps errors to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bbm::cli
