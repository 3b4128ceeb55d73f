#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "bbm/cli.hpp"
#include "bbm/error.hpp"
#include "bbm/gates.hpp"
#include "bbm/oracles.hpp"
#include "bbm/stats.hpp"
#include "report_io.hpp"

namespace bbm::cli {

using harness::FieldKey;
using harness::ReplicaRecord;

CommandResult cmd_simulate(const SimulateOptions& opt, std::ostream& log)
{
    const auto& config = opt.config;
    if (config.output_path.empty())
        throw ConfigError("--out is required");
    const auto tasks = harness::plan(config);
    const auto summary = harness::run(config, tasks, config.parallelism);
    log << "planned " << summary.planned << ", computed " << summary.computed << ", resumed "
        << summary.resumed << ", failed " << summary.failed << '\n';
    CommandResult res;
    res.artifacts = {config.output_path, harness::sidecar_path(config.output_path)};
    res.exit_code = summary.failed > 0 ? exit_partial : exit_ok;
    return res;
}

//---------------------------------------------------------------------------//
// validate-oracles
//---------------------------------------------------------------------------//

namespace {

struct OracleRow
{
    double t;
    std::string name;
    std::string gamma;
    std::string beta;
    harness::Summary summary;
    double oracle;
    bool pass;
    double z;
};

OracleRow check(const std::vector<ReplicaRecord>& records, double t, const FieldKey& key,
                const std::string& name, double oracle)
{
    OracleRow row{t, name, "", "", harness::aggregate(records, key, t), oracle, false, 0.0};
    if (key.kind != FieldKey::Kind::n_leaves && key.kind != FieldKey::Kind::derivative)
        row.gamma = num(key.gamma);
    if (key.kind == FieldKey::Kind::overlap || key.kind == FieldKey::Kind::partition_re ||
        key.kind == FieldKey::Kind::partition_im)
        row.beta = num(key.beta);
    const double diff = std::fabs(row.summary.mean - oracle);
    if (row.summary.se) {
        const double se = *row.summary.se;
        row.pass = diff <= gates::oracle_se * se;
        row.z = se > 0.0 ? (row.summary.mean - oracle) / se : (diff == 0.0 ? 0.0 : HUGE_VAL);
    }
    return row;
}

} // namespace

CommandResult cmd_validate_oracles(const ValidateOptions& opt, std::ostream& log)
{
    const auto records = read_records(opt.store);
    const auto times = store_times(records);
    if (times.empty())
        throw ConfigError("store " + opt.store.string() + " has no successful records");

    std::vector<OracleRow> rows;
    double max_pruned = 0.0;
    for (const auto& r : records) {
        for (const auto& [g, b] : r.pruned_mass_bound)
            max_pruned = std::max(max_pruned, b);
    }
    for (double t : times) {
        const ReplicaRecord* first = nullptr;
        for (const auto& r : records) {
            if (r.ok() && r.t == t) {
                first = &r;
                break;
            }
        }
        FieldKey key;
        key.kind = FieldKey::Kind::n_leaves;
        rows.push_back(check(records, t, key, "count", oracles::expected_count(t)));
        key.kind = FieldKey::Kind::derivative;
        rows.push_back(check(records, t, key, "derivative", oracles::expected_critical(t).second));
        for (const auto& [g, v] : first->additive) {
            key = {FieldKey::Kind::additive, g, 0.0, std::nullopt};
            rows.push_back(check(records, t, key, g == 1.0 ? "critical_additive" : "additive",
                                 oracles::expected_additive(t, g)));
        }
        for (const auto& p : first->partitions) {
            if (p.trunc)
                continue;
            key = {FieldKey::Kind::partition_re, p.gamma, p.beta, std::nullopt};
            rows.push_back(check(records, t, key, "partition_re",
                                 oracles::expected_partition(t, p.gamma, p.beta)));
            key.kind = FieldKey::Kind::partition_im;
            rows.push_back(check(records, t, key, "partition_im", 0.0));
        }
        for (const auto& o : first->overlap) {
            key = {FieldKey::Kind::overlap, o[0], o[1], std::nullopt};
            rows.push_back(check(records, t, key, "overlap",
                                 oracles::expected_second_moment(t, o[0], o[1])));
        }
    }

    std::ostringstream table;
    table << gates_banner();
    table << "# store " << opt.store.filename().string() << ", " << records.size() << " records\n";
    if (max_pruned > 0.0)
        table << "# pruned store: largest per-replica mass certificate " << num(max_pruned) << '\n';
    table << std::left << std::setw(6) << "t" << std::setw(19) << "quantity" << std::setw(8)
          << "gamma" << std::setw(8) << "beta" << std::setw(8) << "n" << std::setw(16) << "mean"
          << std::setw(14) << "se" << std::setw(16) << "oracle" << std::setw(10) << "z"
          << "verdict\n";
    bool all_pass = true;
    for (const auto& row : rows) {
        all_pass = all_pass && row.pass;
        std::ostringstream z;
        z << std::fixed << std::setprecision(2) << row.z;
        table << std::left << std::setw(6) << num(row.t) << std::setw(19) << row.name
              << std::setw(8) << row.gamma << std::setw(8) << row.beta << std::setw(8)
              << row.summary.count << std::setw(16) << std::setprecision(9) << row.summary.mean
              << std::setw(14) << std::setprecision(4)
              << (row.summary.se ? *row.summary.se : std::nan("")) << std::setw(16)
              << std::setprecision(9) << row.oracle << std::setw(10) << z.str()
              << (row.pass ? "PASS" : "FAIL") << '\n';
    }
    table << "overall " << (all_pass ? "PASS" : "FAIL") << '\n';

    auto report = opt.report;
    if (report.empty()) {
        report = opt.store;
        report += ".oracles.txt";
    }
    write_file(report, table.str());
    log << table.str();
    CommandResult res;
    res.artifacts = {report};
    res.exit_code = all_pass ? exit_ok : exit_partial;
    return res;
}

//---------------------------------------------------------------------------//
// scan-phase
//---------------------------------------------------------------------------//

namespace {

std::vector<double> axis(double lo, double hi, std::size_t cells)
{
    if (lo == hi)
        return {lo};
    std::vector<double> v;
    for (std::size_t i = 0; i < cells; ++i)
        v.push_back(cells == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) /
                                               static_cast<double>(cells - 1));
    return v;
}

struct ScanRow
{
    double gamma;
    double beta;
    bool skipped;
    stats::PhaseCell cell;
};

std::string svg_grid(const std::vector<ScanRow>& rows, const std::vector<double>& gammas,
                     const std::vector<double>& betas)
{
    constexpr int cell = 60;
    constexpr int margin = 50;
    const int w = margin * 2 + cell * static_cast<int>(gammas.size());
    const int h = margin * 2 + cell * static_cast<int>(betas.size());
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    for (const auto& r : rows) {
        const auto gi = std::find(gammas.begin(), gammas.end(), r.gamma) - gammas.begin();
        const auto bi = std::find(betas.begin(), betas.end(), r.beta) - betas.begin();
        const long x = margin + cell * gi;
        const long y = h - margin - cell * (bi + 1);
        const char* fill = r.skipped ? "#ffffff"
                           : r.cell.phase_two_consistent ? "#4a7fb5"
                                                         : "#d9d9d9";
        s << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\""
          << cell << "\" fill=\"" << fill << "\" stroke=\"#333\"/>\n";
        const bool predicted = stats::in_phase_two(r.gamma, r.beta);
        s << "<text x=\"" << x + 4 << "\" y=\"" << y + 14 << "\">" << (predicted ? "II" : "")
          << "</text>\n";
        if (!r.skipped) {
            std::ostringstream sl;
            sl << std::fixed << std::setprecision(2) << r.cell.slope;
            s << "<text x=\"" << x + 4 << "\" y=\"" << y + cell - 6 << "\">" << sl.str()
              << "</text>\n";
        }
    }
    for (std::size_t i = 0; i < gammas.size(); ++i)
        s << "<text x=\"" << margin + cell * static_cast<int>(i) + 4 << "\" y=\"" << h - margin + 16
          << "\">" << num(gammas[i]) << "</text>\n";
    for (std::size_t i = 0; i < betas.size(); ++i)
        s << "<text x=\"4\" y=\"" << h - margin - cell * static_cast<int>(i) - cell / 2 << "\">"
          << num(betas[i]) << "</text>\n";
    s << "<text x=\"" << w / 2 << "\" y=\"" << h - 8 << "\">gamma</text>\n"
      << "<text x=\"4\" y=\"" << margin - 10 << "\">beta</text>\n</svg>\n";
    return s.str();
}

} // namespace

CommandResult cmd_scan_phase(const ScanOptions& opt, std::ostream& log)
{
    if (opt.replicas < 1)
        throw ConfigError("--replicas must be at least 1");
    if (opt.cells < 1)
        throw ConfigError("--cells must be at least 1");
    if (opt.gamma_lo > opt.gamma_hi || opt.beta_lo > opt.beta_hi)
        throw ConfigError("ranges must satisfy lo <= hi");
    if (opt.t_grid.size() < 2)
        throw ConfigError("--t-grid needs at least two values");
    if (opt.out_dir.empty())
        throw ConfigError("--out is required");
    const double tol = opt.tolerance > 0.0 ? opt.tolerance : gates::phase_scan_rel;
    const auto gammas = axis(opt.gamma_lo, opt.gamma_hi, opt.cells);
    const auto betas = axis(opt.beta_lo, opt.beta_hi, opt.cells);

    harness::ExperimentConfig config;
    config.t_grid = opt.t_grid;
    config.gamma_grid = gammas;
    config.beta_grid = betas;
    config.cluster_cap = 0;
    config.n_replicas = opt.replicas;
    config.root_seed = opt.seed;
    config.particle_ceiling = opt.particle_ceiling;
    config.record_timing = false;
    config.output_path = opt.out_dir / "scan.jsonl";
    const auto summary = harness::run(config, harness::plan(config), opt.parallelism);
    log << "scan store: computed " << summary.computed << ", resumed " << summary.resumed
        << ", failed " << summary.failed << '\n';

    const auto records = harness::load_store(config.output_path);
    std::map<double, std::size_t> ok_at;
    for (const auto& r : records) {
        if (r.ok())
            ++ok_at[r.t];
    }
    std::vector<double> usable_t;
    for (double t : opt.t_grid) {
        if (ok_at[t] == opt.replicas)
            usable_t.push_back(t);
    }

    std::vector<ScanRow> rows;
    for (double g : gammas) {
        for (double b : betas) {
            ScanRow row{g, b, usable_t.size() < 2, {}};
            if (!row.skipped) {
                stats::PhaseCellData data{g, b, {}};
                for (double t : usable_t)
                    data.abs_raw_by_t[t] =
                        harness::collect(records, {FieldKey::Kind::partition_abs, g, b, {}}, t);
                row.cell = stats::phase_scan(std::span(&data, 1), tol).front();
            }
            rows.push_back(row);
        }
    }

    std::ostringstream csv;
    csv << "gamma,beta,status,slope,stderr_slope,expected_slope,phase_two_consistent,"
           "in_phase_two,agrees\n";
    std::ostringstream dat;
    dat << "# gamma beta slope consistent(1/0/-1 skipped) predicted_phase_two\n";
    std::ostringstream txt;
    txt << gates_banner() << "# phase scan tolerance " << num(tol) << ", t grid";
    for (double t : opt.t_grid)
        txt << ' ' << num(t);
    txt << ", replicas " << opt.replicas << '\n';
    std::size_t agree = 0;
    std::size_t evaluated = 0;
    double last_gamma = rows.empty() ? 0.0 : rows.front().gamma;
    for (const auto& r : rows) {
        const bool predicted = stats::in_phase_two(r.gamma, r.beta);
        if (r.gamma != last_gamma) {
            dat << '\n';
            last_gamma = r.gamma;
        }
        if (r.skipped) {
            csv << num(r.gamma) << ',' << num(r.beta) << ",skipped,,,"
                << num(-1.5 * r.gamma) << ",," << predicted << ",\n";
            dat << num(r.gamma) << ' ' << num(r.beta) << " nan -1 " << predicted << '\n';
            txt << "cell (" << num(r.gamma) << ", " << num(r.beta) << ") skipped\n";
            continue;
        }
        ++evaluated;
        const bool agrees = r.cell.phase_two_consistent == predicted;
        agree += agrees ? 1 : 0;
        csv << num(r.gamma) << ',' << num(r.beta) << ",ok," << num(r.cell.slope) << ','
            << num(r.cell.stderr_slope) << ',' << num(r.cell.expected_slope) << ','
            << r.cell.phase_two_consistent << ',' << predicted << ',' << agrees << '\n';
        dat << num(r.gamma) << ' ' << num(r.beta) << ' ' << num(r.cell.slope) << ' '
            << r.cell.phase_two_consistent << ' ' << predicted << '\n';
        txt << "cell (" << num(r.gamma) << ", " << num(r.beta) << ") slope " << num(r.cell.slope)
            << " expected " << num(r.cell.expected_slope) << " -> "
            << (r.cell.phase_two_consistent ? "II-consistent" : "not II-consistent")
            << (predicted ? " (predicted II)" : " (predicted not II)") << '\n';
    }
    txt << "cells agreeing with the predicted region: " << agree << " of " << evaluated << '\n';

    CommandResult res;
    const auto csv_path = opt.out_dir / "phase_scan.csv";
    const auto dat_path = opt.out_dir / "phase_grid.dat";
    const auto svg_path = opt.out_dir / "phase_grid.svg";
    const auto txt_path = opt.out_dir / "phase_scan.txt";
    write_file(csv_path, csv.str());
    write_file(dat_path, dat.str());
    write_file(svg_path, svg_grid(rows, gammas, betas));
    write_file(txt_path, txt.str());
    log << txt.str();
    res.artifacts = {config.output_path, csv_path, dat_path, svg_path, txt_path};
    res.exit_code = summary.failed > 0 ? exit_partial : exit_ok;
    return res;
}

//---------------------------------------------------------------------------//
// report
//---------------------------------------------------------------------------//

CommandResult cmd_report(const ReportOptions& opt, std::ostream& log)
{
    const auto records = read_records(opt.store);
    std::size_t failed = 0;
    for (const auto& r : records)
        failed += r.ok() ? 0 : 1;

    std::ostringstream csv;
    csv << "t,field,count,mean,se,median,q05,q25,q75,q95\n";
    for (double t : store_times(records)) {
        const ReplicaRecord* first = nullptr;
        for (const auto& r : records) {
            if (r.ok() && r.t == t) {
                first = &r;
                break;
            }
        }
        std::vector<FieldKey> keys;
        keys.push_back({FieldKey::Kind::n_leaves, 0, 0, {}});
        keys.push_back({FieldKey::Kind::derivative, 0, 0, {}});
        keys.push_back({FieldKey::Kind::recentered_min, 0, 0, {}});
        if (first->global_inf)
            keys.push_back({FieldKey::Kind::global_inf, 0, 0, {}});
        for (const auto& [g, v] : first->additive)
            keys.push_back({FieldKey::Kind::additive, g, 0, {}});
        for (const auto& p : first->partitions) {
            for (auto kind : {FieldKey::Kind::partition_re, FieldKey::Kind::partition_im,
                              FieldKey::Kind::partition_abs, FieldKey::Kind::normalized_abs})
                keys.push_back({kind, p.gamma, p.beta, p.trunc});
        }
        for (const auto& o : first->overlap)
            keys.push_back({FieldKey::Kind::overlap, o[0], o[1], {}});
        for (const auto& key : keys) {
            const auto s = harness::aggregate(records, key, t);
            csv << num(t) << ",\"" << key.to_string() << "\"," << s.count << ',' << num(s.mean)
                << ',' << (s.se ? num(*s.se) : "") << ',' << num(s.median);
            for (const auto& [q, v] : s.quantiles)
                csv << ',' << num(v);
            csv << '\n';
        }
    }
    auto out = opt.out;
    if (out.empty()) {
        out = opt.store;
        out += ".report.csv";
    }
    auto txt_path = out;
    txt_path.replace_extension(".txt");
    std::ostringstream txt;
    txt << gates_banner() << "records " << records.size() << ", failed " << failed << '\n'
        << "config_hash " << records.front().config_hash << '\n';
    for (const auto& r : records) {
        if (!r.ok())
            txt << "error t=" << num(r.t) << " replica " << r.replica_index << ": "
                << r.error->message << '\n';
    }
    write_file(out, csv.str());
    write_file(txt_path, txt.str());
    log << txt.str();
    CommandResult res;
    res.artifacts = {out, txt_path};
    res.exit_code = failed > 0 ? exit_partial : exit_ok;
    return res;
}

//---------------------------------------------------------------------------//
// command line
//---------------------------------------------------------------------------//

namespace {

std::pair<double, double> parse_range(const std::string& text, const char* flag)
{
    const auto sep = text.find_first_of(":,");
    try {
        if (sep == std::string::npos) {
            const double v = std::stod(text);
            return {v, v};
        }
        return {std::stod(text.substr(0, sep)), std::stod(text.substr(sep + 1))};
    } catch (const std::exception&) {
        throw ConfigError(std::string(flag) + ": expected lo:hi, got '" + text + "'");
    }
}

std::size_t parse_parallelism(const std::string& text)
{
    if (text.empty())
        return 0;
    if (text == "auto")
        return std::max(1u, std::thread::hardware_concurrency());
    try {
        std::size_t used = 0;
        const long long n = std::stoll(text, &used);
        if (used != text.size() || n < 1)
            throw ConfigError("");
        return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
        throw ConfigError("--parallelism must be a positive integer or 'auto'");
    }
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Branching Brownian motion replica farm and analysis"};
    app.name("bbmc");
    app.require_subcommand(1);

    SimulateOptions sim;
    auto& ec = sim.config;
    ec.n_replicas = 1;
    std::string out_path;
    std::string parallelism;
    std::optional<double> prune_eps;
    std::optional<double> track_min;
    bool no_timing = false;
    auto* simulate = app.add_subcommand("simulate", "Run a replica experiment into a store");
    simulate->add_option("--t-grid", ec.t_grid, "Final times")->delimiter(',')->capture_default_str();
    simulate->add_option("--gamma-grid", ec.gamma_grid, "Inverse temperatures gamma")
        ->delimiter(',')
        ->capture_default_str();
    simulate->add_option("--beta-grid", ec.beta_grid, "Imaginary parts beta")
        ->delimiter(',')
        ->capture_default_str();
    simulate->add_option("--replicas", ec.n_replicas, "Replicas per t")->capture_default_str();
    simulate->add_option("--seed", ec.root_seed, "Root seed")->capture_default_str();
    simulate->add_option("--prune-eps", prune_eps, "Pruning threshold (absent = exact)");
    simulate->add_option("--trunc-levels", ec.trunc_levels, "Truncation levels k")
        ->delimiter(',');
    simulate->add_option("--cluster-k", ec.cluster_k, "Cluster window above the Bramson level")
        ->capture_default_str();
    simulate->add_option("--cluster-b", ec.cluster_b, "Cluster genealogical depth")
        ->capture_default_str();
    simulate->add_option("--cluster-cap", ec.cluster_cap, "Clusters kept per record (0 = none)")
        ->capture_default_str();
    simulate->add_option("--member-cap", ec.member_cap, "Members kept per cluster")
        ->capture_default_str();
    simulate->add_option("--track-min-level", track_min,
                         "Also certify the count below the Bramson level + k");
    simulate->add_flag("--bridge-minima", ec.track_bridge_minima, "Sample path infima");
    simulate->add_option("--particle-ceiling", ec.particle_ceiling, "Per-replica population cap")
        ->capture_default_str();
    simulate->add_flag("--no-timing", no_timing, "Write wall_time_s = 0");
    simulate->add_option("--out", out_path, "Store path")->required();
    simulate->add_option("--parallelism", parallelism,
                         "Worker threads or 'auto' (default: BBM_PARALLELISM, else auto)");

    ValidateOptions val;
    auto* validate = app.add_subcommand("validate-oracles", "Compare store means with closed forms");
    validate->add_option("--store", val.store, "Store path")->required();
    validate->add_option("--report", val.report, "Report path (default <store>.oracles.txt)");

    AnalyzeOptions an;
    std::optional<double> an_t;
    std::optional<std::size_t> an_k;
    std::optional<double> an_trunc;
    auto* analyze = app.add_subcommand("analyze", "Statistical analyses of a store");
    analyze->require_subcommand(1);
    for (const char* name : {"cf-fit", "tails", "isotropy", "extremes", "bramson"}) {
        auto* sub = analyze->add_subcommand(name);
        sub->add_option("--store", an.store, "Store path")->required();
        sub->add_option("--out", an.out_dir, "Output directory (default: store directory)");
        sub->add_option("--gamma", an.gamma, "gamma")->capture_default_str();
        sub->add_option("--beta", an.beta, "beta")->capture_default_str();
        sub->add_option("--t", an_t, "t (default: largest in store)");
        sub->add_option("--trunc", an_trunc, "Use the partition truncated at level k");
        if (std::string(name) == "tails")
            sub->add_option("--hill-k", an_k, "Order statistics used (default floor(n^(2/3)))");
        if (std::string(name) == "isotropy")
            sub->add_option("--theta", an.theta, "Rotation angle (0 = pi/3)")->capture_default_str();
    }

    ScanOptions sc;
    std::string gamma_range = "0.3:1.2";
    std::string beta_range = "0:1";
    std::string scan_par;
    auto* scan = app.add_subcommand("scan-phase", "Classify a (gamma, beta) grid");
    scan->add_option("--gamma-range", gamma_range, "lo:hi")->capture_default_str();
    scan->add_option("--beta-range", beta_range, "lo:hi")->capture_default_str();
    scan->add_option("--cells", sc.cells, "Cells per axis")->capture_default_str();
    scan->add_option("--t-grid", sc.t_grid, "Final times")->delimiter(',')->capture_default_str();
    scan->add_option("--replicas", sc.replicas, "Replicas per t")->capture_default_str();
    scan->add_option("--seed", sc.seed, "Root seed")->capture_default_str();
    scan->add_option("--tolerance", sc.tolerance, "Relative slope tolerance (0 = gate default)")
        ->capture_default_str();
    scan->add_option("--particle-ceiling", sc.particle_ceiling, "Per-replica population cap")
        ->capture_default_str();
    scan->add_option("--out", sc.out_dir, "Output directory")->required();
    scan->add_option("--parallelism", scan_par, "Worker threads or 'auto'");

    ReportOptions rep;
    auto* report = app.add_subcommand("report", "Summaries of every field in a store");
    report->add_option("--store", rep.store, "Store path")->required();
    report->add_option("--out", rep.out, "CSV path (default <store>.report.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const CLI::App* failing = &app;
        for (auto* sub : app.get_subcommands()) {
            failing = sub;
            for (auto* nested : sub->get_subcommands())
                failing = nested;
        }
        err << failing->help();
        return exit_config;
    }

    try {
        CommandResult res;
        if (simulate->parsed()) {
            ec.output_path = out_path;
            ec.prune_epsilon = prune_eps;
            ec.track_min_level = track_min;
            ec.record_timing = !no_timing;
            ec.parallelism = parse_parallelism(parallelism);
            res = cmd_simulate(sim, out);
        } else if (validate->parsed()) {
            res = cmd_validate_oracles(val, out);
        } else if (analyze->parsed()) {
            an.subcommand = analyze->get_subcommands().front()->get_name();
            an.t = an_t;
            an.hill_k = an_k;
            an.trunc = an_trunc;
            res = cmd_analyze(an, out);
        } else if (scan->parsed()) {
            std::tie(sc.gamma_lo, sc.gamma_hi) = parse_range(gamma_range, "--gamma-range");
            std::tie(sc.beta_lo, sc.beta_hi) = parse_range(beta_range, "--beta-range");
            sc.parallelism = parse_parallelism(scan_par);
            res = cmd_scan_phase(sc, out);
        } else if (report->parsed()) {
            res = cmd_report(rep, out);
        }
        for (const auto& a : res.artifacts)
            out << "wrote " << a.string() << '\n';
        return res.exit_code;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return exit_io;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_io;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<const char*> argv;
    argv.push_back("bbmc");
    for (const auto& a : args)
        argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace bbm::cli
