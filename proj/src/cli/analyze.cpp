#include <algorithm>
#include <cmath>
#include <ostream>
#include <numbers>
#include <sstream>

#include "bbm/cli.hpp"
#include "bbm/error.hpp"
#include "bbm/gates.hpp"
#include "bbm/stats.hpp"
#include "report_io.hpp"

namespace bbm::cli {

using harness::ReplicaRecord;

namespace {

struct Context
{
    const AnalyzeOptions& opt;
    std::vector<ReplicaRecord> records;
    double t = 0.0;
    std::filesystem::path dir;
    std::ostringstream summary;
    std::ostringstream csv;
    bool pass = false;
};

std::vector<std::complex<double>> normalized_partitions(const Context& c,
                                                        std::vector<double>* derivative = nullptr)
{
    std::vector<std::complex<double>> z;
    const double norm = std::pow(c.t, 1.5 * c.opt.gamma);
    std::vector<const ReplicaRecord*> sel;
    for (const auto& r : c.records) {
        if (r.ok() && r.t == c.t)
            sel.push_back(&r);
    }
    std::sort(sel.begin(), sel.end(), [](const ReplicaRecord* a, const ReplicaRecord* b) {
        return a->replica_index < b->replica_index;
    });
    for (const auto* r : sel) {
        const auto v = r->partition(c.opt.gamma, c.opt.beta, c.opt.trunc);
        if (!v)
            throw MissingDataError("store has no partition at gamma " + num(c.opt.gamma) +
                                   ", beta " + num(c.opt.beta));
        z.push_back(norm * *v);
        if (derivative)
            derivative->push_back(r->derivative);
    }
    return z;
}

void header(Context& c, const char* what)
{
    c.summary << gates_banner() << "# analyze " << what << " on " << c.opt.store.filename().string()
              << "\n"
              << "t = " << num(c.t) << ", gamma = " << num(c.opt.gamma)
              << ", beta = " << num(c.opt.beta);
    if (c.opt.trunc)
        c.summary << ", trunc = " << num(*c.opt.trunc);
    c.summary << '\n';
}

void cf_fit(Context& c)
{
    header(c, "cf-fit");
    std::vector<double> d;
    const auto z = normalized_partitions(c, &d);
    const auto fit = stats::fit_stable_mixture(z, d);
    const double target = 1.0 / c.opt.gamma;
    c.pass = std::fabs(fit.p_hat - target) <= gates::cf_p_abs;
    c.csv << "r,ecf,model\n";
    for (std::size_t k = 0; k < fit.grid.size(); ++k)
        c.csv << num(fit.grid[k]) << ',' << num(fit.ecf[k]) << ',' << num(fit.model[k]) << '\n';
    c.summary << "pairs used " << fit.n_used << ", filtered (derivative <= 0) " << fit.n_filtered
              << '\n'
              << "c_hat = " << num(fit.c_hat) << '\n'
              << "p_hat = " << num(fit.p_hat) << " (target 1/gamma = " << num(target) << " +- "
              << num(gates::cf_p_abs) << ")\n"
              << "residual = " << num(fit.residual) << ", converged " << fit.converged << " after "
              << fit.iterations << " iterations\n";
}

void tails(Context& c)
{
    header(c, "tails");
    const auto z = normalized_partitions(c);
    std::vector<double> mod;
    for (const auto& v : z) {
        if (std::abs(v) > 0.0)
            mod.push_back(std::abs(v));
    }
    if (mod.size() < gates::tails_min_samples)
        throw InsufficientDataError("tails: " + std::to_string(mod.size()) + " nonzero samples",
                                    gates::tails_min_samples);
    const std::size_t k = c.opt.hill_k.value_or(stats::default_hill_k(mod.size()));
    const double a = stats::hill_estimator(mod, k);
    const double target = 1.0 / c.opt.gamma;
    c.pass = std::fabs(a - target) <= gates::hill_rel * target;
    c.csv << "k,hill\n";
    for (std::size_t kk = 10; kk < mod.size() / 2; kk = kk * 5 / 4 + 1)
        c.csv << kk << ',' << num(stats::hill_estimator(mod, kk)) << '\n';
    c.summary << "n = " << mod.size() << ", k = " << k << '\n'
              << "hill = " << num(a) << " (target 1/gamma = " << num(target) << " +- "
              << num(100.0 * gates::hill_rel) << "%)\n";
}

void isotropy(Context& c)
{
    header(c, "isotropy");
    const auto z = normalized_partitions(c);
    const double theta = c.opt.theta != 0.0 ? c.opt.theta : gates::rotation_theta;
    const auto uni = stats::ks_uniform_angle(z);
    const auto rot = stats::rotation_invariance_test(z, theta);
    c.pass = uni.p_value > gates::isotropy_p_min && rot.p_value > gates::isotropy_p_min;
    std::vector<double> u;
    for (const auto& v : z) {
        if (v == std::complex<double>{})
            continue;
        double a = std::arg(v) / (2.0 * std::numbers::pi);
        u.push_back(a < 0.0 ? a + 1.0 : a);
    }
    std::sort(u.begin(), u.end());
    c.csv << "angle_fraction,ecdf\n";
    for (std::size_t i = 0; i < u.size(); ++i)
        c.csv << num(u[i]) << ',' << num(static_cast<double>(i + 1) / static_cast<double>(u.size()))
              << '\n';
    c.summary << "uniform angle (Kuiper): V = " << num(uni.statistic) << ", p = "
              << num(uni.p_value) << ", n = " << uni.n << ", zeros dropped " << uni.dropped << '\n'
              << "rotation by " << num(theta) << " (two-sample KS): D = " << num(rot.statistic)
              << ", p = " << num(rot.p_value) << '\n'
              << "gate: both p > " << num(gates::isotropy_p_min) << '\n';
    if (c.opt.beta == 0.0)
        c.summary << "finding: beta = 0 makes the partition real, so its angle only takes the "
                     "values 0 and pi; FAIL is the expected outcome here\n";
}

void extremes(Context& c)
{
    header(c, "extremes");
    const double lo = gates::ppp_window_lo;
    const double hi = gates::ppp_window_hi;
    const int bins = gates::ppp_bins;
    std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
    std::size_t replicas = 0;
    std::size_t truncated = 0;
    for (const auto& r : c.records) {
        if (!r.ok() || r.t != c.t)
            continue;
        ++replicas;
        if (r.cluster_count > r.clusters.size() &&
            (r.clusters.empty() || r.clusters.back().level < hi))
            ++truncated;
        for (const auto& cl : r.clusters) {
            if (cl.level < lo || cl.level >= hi)
                continue;
            const auto b = static_cast<std::size_t>((cl.level - lo) / (hi - lo) * bins);
            counts[std::min(b, counts.size() - 1)] += 1.0;
        }
    }
    if (replicas == 0)
        throw InsufficientDataError("extremes: no records at t = " + num(c.t), 1);
    std::vector<double> xs;
    std::vector<double> ys;
    c.csv << "bin_lo,bin_hi,count,ln_count\n";
    for (int b = 0; b < bins; ++b) {
        const double a = lo + (hi - lo) * b / bins;
        const double e = lo + (hi - lo) * (b + 1) / bins;
        const double n = counts[static_cast<std::size_t>(b)];
        c.csv << num(a) << ',' << num(e) << ',' << n << ',' << (n > 0 ? num(std::log(n)) : "")
              << '\n';
        if (n > 0) {
            xs.push_back(0.5 * (a + e));
            ys.push_back(std::log(n));
        }
    }
    const auto reg = stats::slope_regression(xs, ys);
    c.pass = std::fabs(reg.slope - gates::ppp_slope) <= gates::ppp_slope_abs;
    double total = 0.0;
    for (double n : counts)
        total += n;
    c.summary << "replicas " << replicas << ", anchors in [" << num(lo) << ", " << num(hi)
              << ") " << total << '\n'
              << "records whose cluster cap may cut the window: " << truncated << '\n'
              << "ln-count slope = " << num(reg.slope) << " +- " << num(reg.stderr_slope)
              << " (target " << num(gates::ppp_slope) << " +- " << num(gates::ppp_slope_abs)
              << ")\n";
}

void bramson(Context& c)
{
    c.summary << gates_banner() << "# analyze bramson on " << c.opt.store.filename().string()
              << '\n';
    const auto times = store_times(c.records);
    std::vector<double> pooled;
    std::vector<double> medians;
    c.csv << "section,t_or_x,value,count\n";
    for (double t : times) {
        // a replica with no surviving leaf has its minimum above the tracked level
        std::vector<double> w;
        for (const auto& r : c.records) {
            if (r.ok() && r.t == t)
                w.push_back(r.recentered_min.value_or(HUGE_VAL));
        }
        const double m = stats::median(w);
        medians.push_back(m);
        pooled.insert(pooled.end(), w.begin(), w.end());
        c.csv << "median," << num(t) << ',' << num(m) << ',' << w.size() << '\n';
        c.summary << "t = " << num(t) << ": n = " << w.size() << ", median recentered minimum "
                  << num(m) << '\n';
    }
    const auto [mn, mx] = std::minmax_element(medians.begin(), medians.end());
    const double spread = *mx - *mn;
    const bool median_ok = spread < gates::bramson_median_spread;

    std::vector<double> xs;
    std::vector<double> ys;
    const auto n = static_cast<double>(pooled.size());
    for (int i = 0; i < gates::bramson_tail_points; ++i) {
        const double x = gates::bramson_tail_lo + (gates::bramson_tail_hi - gates::bramson_tail_lo) *
                                                      i / (gates::bramson_tail_points - 1);
        const auto k = std::count_if(pooled.begin(), pooled.end(), [&](double w) { return w <= x; });
        c.csv << "tail," << num(x) << ',' << num(static_cast<double>(k) / n) << ',' << k << '\n';
        if (k > 0) {
            xs.push_back(x);
            ys.push_back(std::log(static_cast<double>(k) / n) - std::log(std::fabs(x)));
        }
    }
    if (xs.size() < 3)
        throw InsufficientDataError("bramson: too few tail points with data", 3);
    const auto reg = stats::slope_regression(xs, ys);
    const bool tail_ok =
        std::fabs(reg.slope - gates::bramson_tail_slope) <= gates::bramson_tail_slope_abs;
    c.pass = median_ok && tail_ok;
    c.summary << "median spread = " << num(spread) << " (gate < "
              << num(gates::bramson_median_spread) << ") " << (median_ok ? "PASS" : "FAIL") << '\n'
              << "pooled n = " << pooled.size() << ", tail points used " << xs.size() << '\n'
              << "left-tail slope = " << num(reg.slope) << " +- " << num(reg.stderr_slope)
              << " (target " << num(gates::bramson_tail_slope) << " +- "
              << num(gates::bramson_tail_slope_abs) << ") " << (tail_ok ? "PASS" : "FAIL") << '\n';
}

} // namespace

CommandResult cmd_analyze(const AnalyzeOptions& opt, std::ostream& log)
{
    Context c{opt, read_records(opt.store), 0.0, output_dir(opt.out_dir, opt.store), {}, {}, false};
    const auto times = store_times(c.records);
    if (times.empty())
        throw InsufficientDataError("analyze: store has no successful records", 1);
    c.t = opt.t.value_or(times.back());
    if (std::find(times.begin(), times.end(), c.t) == times.end())
        throw MissingDataError("store has no records at t = " + num(c.t));

    const std::string& sub = opt.subcommand;
    if (sub == "cf-fit")
        cf_fit(c);
    else if (sub == "tails")
        tails(c);
    else if (sub == "isotropy")
        isotropy(c);
    else if (sub == "extremes")
        extremes(c);
    else if (sub == "bramson")
        bramson(c);
    else
        throw ConfigError("unknown analysis '" + sub + "'");
    c.summary << "verdict: " << (c.pass ? "PASS" : "FAIL") << '\n';

    const auto csv_path = c.dir / (sub + ".csv");
    const auto txt_path = c.dir / (sub + ".txt");
    write_file(csv_path, c.csv.str());
    write_file(txt_path, c.summary.str());
    log << c.summary.str();
    return {exit_ok, {csv_path, txt_path}};
}

} // namespace bbm::cli
