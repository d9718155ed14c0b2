#include "evt/simlab.hpp"
#include "evt/asymptotics.hpp"
#include "evt/errors.hpp"
#include "evt/hfun.hpp"
#include "evt/normal.hpp"
#include "evt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace evt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void ExperimentConfig::normalize() {
    if (n_grid.empty()) {
        for (long e = 5; e <= 16; ++e) {
            n_grid.push_back(1L << e);
        }
    }
    if (!std::is_sorted(n_grid.begin(), n_grid.end())) {
        throw ConfigError("n_grid must be ascending");
    }
    if (replications < 1) {
        throw ConfigError("replications must be at least 1");
    }
    if (!(iota > 1.0)) {
        throw ConfigError("iota must exceed 1");
    }
    if (models.empty()) {
        throw ConfigError("at least one model is required");
    }
    if (estimators.empty()) {
        throw ConfigError("at least one estimator is required");
    }
    if (tau_grid.empty()) {
        throw ConfigError("at least one tau is required");
    }
    if (workers < 1) {
        workers = 1;
    }
    for (double t : tau_grid) {
        if (!(t > 0.0)) {
            throw ConfigError("tau must be positive");
        }
    }
}

std::vector<double> sample(const TailModel& model, long n, std::uint64_t stream_seed) {
    if (n < 1) {
        throw DomainError("sample: n must be at least 1");
    }
    std::mt19937_64 eng(stream_seed);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (auto& x : out) {
        x = model.q_fn(exponential_draw(eng));
    }
    return out;
}

CellResult run_cell(const TailModel& model, Family family, long n, long replications,
                    double iota, std::span<const double> tau_grid, std::uint64_t base_seed,
                    std::uint64_t model_index, bool floor_at_max, int workers) {
    CellResult cell;
    cell.schedule = family == Family::GP ? schedule_gp(n, iota) : schedule_base(n, iota);
    const std::size_t reps = static_cast<std::size_t>(replications);
    cell.ok.assign(reps, 0);
    cell.rho_hat.assign(reps, kNaN);
    cell.q_hat.assign(tau_grid.size(), std::vector<double>(reps, kNaN));
    cell.nu_hat.assign(tau_grid.size(), std::vector<double>(reps, kNaN));

    std::vector<double> zs(tau_grid.size());
    for (std::size_t t = 0; t < tau_grid.size(); ++t) {
        zs[t] = tau_grid[t] * std::log(static_cast<double>(n));
    }

    const KSchedule sched = cell.schedule;
    auto worker = [&](std::size_t lo, std::size_t hi) {
        std::vector<double> exps(static_cast<std::size_t>(n));
        const long ks[3] = {sched.k2, sched.k1, sched.k0};
        for (std::size_t r = lo; r < hi; ++r) {
            const std::uint64_t seed =
                derive_seed(base_seed, model_index, static_cast<std::uint64_t>(n),
                            static_cast<std::uint64_t>(r));
            std::mt19937_64 eng(seed);
            for (auto& e : exps) {
                e = exponential_draw(eng);
            }
            // q is nondecreasing, so order statistics of q(E) are q applied
            // to the order statistics of E; only four evaluations needed.
            const auto evals = select_order_stats(exps, ks);
            OrderStats os;
            try {
                os.x_k2 = model.q_fn(evals[0]);
                os.x_k1 = model.q_fn(evals[1]);
                os.x_k0 = model.q_fn(evals[2]);
                os.max = model.q_fn(evals[3]);
                const TailEstimate est = estimate(family, os, sched);
                cell.rho_hat[r] = est.rho_hat;
                for (std::size_t t = 0; t < zs.size(); ++t) {
                    cell.q_hat[t][r] = quantile_at(est, zs[t], floor_at_max);
                    cell.nu_hat[t][r] = nu_hat(model, est, zs[t], floor_at_max);
                }
                cell.ok[r] = 1;
            } catch (const std::exception&) {
                cell.ok[r] = 0;
            }
        }
    };

    const int w = std::min<int>(workers, static_cast<int>(reps));
    if (w <= 1) {
        worker(0, reps);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (reps + w - 1) / w;
        for (int i = 0; i < w; ++i) {
            const std::size_t lo = static_cast<std::size_t>(i) * chunk;
            const std::size_t hi = std::min(reps, lo + chunk);
            if (lo < hi) {
                pool.emplace_back(worker, lo, hi);
            }
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    for (std::size_t r = 0; r < reps; ++r) {
        if (!cell.ok[r]) {
            ++cell.degenerate_count;
        }
    }
    return cell;
}

double percentile_nearest_rank(std::span<const double> sorted_ascending, double p) {
    if (sorted_ascending.empty()) {
        return kNaN;
    }
    const double np = p * static_cast<double>(sorted_ascending.size());
    std::size_t rank = static_cast<std::size_t>(std::ceil(np - 1e-12));
    if (rank < 1) {
        rank = 1;
    }
    if (rank > sorted_ascending.size()) {
        rank = sorted_ascending.size();
    }
    return sorted_ascending[rank - 1];
}

namespace {

struct Pcts {
    double p05 = kNaN, p50 = kNaN, p95 = kNaN;
};

Pcts percentiles_of(const std::vector<double>& values, const std::vector<char>& ok) {
    std::vector<double> v;
    v.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (ok[i]) {
            v.push_back(values[i]);
        }
    }
    std::sort(v.begin(), v.end());
    Pcts p;
    if (!v.empty()) {
        p.p05 = percentile_nearest_rank(v, 0.05);
        p.p50 = percentile_nearest_rank(v, 0.50);
        p.p95 = percentile_nearest_rank(v, 0.95);
    }
    return p;
}

double true_index_of(const TailModel& model, Family family) {
    const std::optional<double>& idx = family == Family::GP      ? model.gamma_true
                                       : family == Family::GW    ? model.rho_gw_true
                                                                 : model.rho_loggw_true;
    return idx ? *idx : kNaN;
}

} // namespace

SimulationSummary run_experiment(const ExperimentConfig& cfg_in) {
    ExperimentConfig cfg = cfg_in;
    cfg.normalize();
    SimulationSummary summary;
    for (std::size_t mi = 0; mi < cfg.models.size(); ++mi) {
        const TailModel model = make_model(cfg.models[mi]);
        for (Family family : cfg.estimators) {
            for (long n : cfg.n_grid) {
                const CellResult cell =
                    run_cell(model, family, n, cfg.replications, cfg.iota, cfg.tau_grid,
                             cfg.seed, mi, cfg.floor_at_max, cfg.workers);
                const double y_n = cell.schedule.y_n;
                const double thr = model.q(y_n);
                // plug-in rho for the asymptotic bands
                const Pcts rho_p = percentiles_of(cell.rho_hat, cell.ok);
                const double rho_plug = rho_p.p50;

                double det_rho = kNaN;
                PenultimateApprox det_approx{};
                bool have_det = false;
                if (family != Family::GP) {
                    try {
                        det_approx = make_approx(model, family, cfg.iota, y_n);
                        det_rho = det_approx.rho_tilde;
                        have_det = true;
                    } catch (const std::exception&) {
                        have_det = false;
                    }
                }

                for (std::size_t t = 0; t < cfg.tau_grid.size(); ++t) {
                    const double tau = cfg.tau_grid[t];
                    const double z = tau * std::log(static_cast<double>(n));
                    const double lambda = z / y_n;

                    SummaryRow rho_row;
                    rho_row.model = cfg.models[mi];
                    rho_row.family = family;
                    rho_row.n = n;
                    rho_row.tau = tau;
                    rho_row.degenerate_count = cell.degenerate_count;
                    rho_row.threshold_true = thr;

                    SummaryRow q_row = rho_row;
                    SummaryRow nu_row = rho_row;

                    rho_row.quantity = "rho_hat";
                    const Pcts rp = rho_p;
                    rho_row.p05 = rp.p05;
                    rho_row.p50 = rp.p50;
                    rho_row.p95 = rp.p95;
                    rho_row.deterministic = det_rho;
                    rho_row.true_value = true_index_of(model, family);
                    if (have_det && std::isfinite(rho_plug)) {
                        const double sd =
                            rho_sd(rho_plug, cfg.iota, y_n, cell.schedule.k2);
                        rho_row.band_low = det_rho - 1.6448536269514722 * sd;
                        rho_row.band_high = det_rho + 1.6448536269514722 * sd;
                    } else {
                        rho_row.band_low = rho_row.band_high = kNaN;
                    }
                    summary.rows.push_back(rho_row);

                    q_row.quantity = "q_hat";
                    const Pcts qp = percentiles_of(cell.q_hat[t], cell.ok);
                    q_row.p05 = qp.p05;
                    q_row.p50 = qp.p50;
                    q_row.p95 = qp.p95;
                    q_row.true_value = model.q(z);
                    q_row.deterministic = kNaN;
                    q_row.band_low = q_row.band_high = kNaN;
                    if (have_det) {
                        try {
                            q_row.deterministic = approx_eval(det_approx, z);
                            if (std::isfinite(rho_plug)) {
                                const AsymptoticBand b = q_band(
                                    rho_plug, cfg.iota, lambda, y_n, cell.schedule.k2,
                                    model.q_prime(y_n), q_row.deterministic, family,
                                    model.q(y_n));
                                q_row.band_low = b.low;
                                q_row.band_high = b.high;
                            }
                        } catch (const std::exception&) {
                        }
                    }
                    summary.rows.push_back(q_row);

                    nu_row.quantity = "nu_hat";
                    const Pcts np = percentiles_of(cell.nu_hat[t], cell.ok);
                    nu_row.p05 = np.p05;
                    nu_row.p50 = np.p50;
                    nu_row.p95 = np.p95;
                    nu_row.true_value = 0.0;
                    nu_row.deterministic = kNaN;
                    nu_row.band_low = nu_row.band_high = kNaN;
                    if (have_det) {
                        try {
                            nu_row.deterministic = nu(model, det_approx, z);
                            if (std::isfinite(rho_plug) && std::isfinite(nu_row.deterministic)) {
                                const AsymptoticBand b =
                                    nu_band(rho_plug, cfg.iota, lambda, y_n,
                                            cell.schedule.k2, nu_row.deterministic);
                                nu_row.band_low = b.low;
                                nu_row.band_high = b.high;
                            }
                        } catch (const std::exception&) {
                        }
                    }
                    summary.rows.push_back(nu_row);
                }
            }
        }
    }
    return summary;
}

std::string summary_to_csv(const SimulationSummary& summary) {
    std::ostringstream out;
    out << "model,estimator,n,tau,quantity,p05,p50,p95,deterministic,band_low,band_high,"
           "degenerate_count,true_value,threshold_true\n";
    for (const auto& r : summary.rows) {
        out << r.model << ',' << family_name(r.family) << ',' << r.n << ',' << fmt17(r.tau)
            << ',' << r.quantity << ',' << fmt17(r.p05) << ',' << fmt17(r.p50) << ','
            << fmt17(r.p95) << ',' << fmt17(r.deterministic) << ',' << fmt17(r.band_low) << ','
            << fmt17(r.band_high) << ',' << r.degenerate_count << ',' << fmt17(r.true_value)
            << ',' << fmt17(r.threshold_true) << '\n';
    }
    return out.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        out.push_back(tok);
    }
    return out;
}

} // namespace

SimulationSummary summary_from_csv(const std::string& csv_text) {
    SimulationSummary s;
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError("summary CSV: empty input");
    }
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 14) {
            throw ConfigError("summary CSV line " + std::to_string(lineno) +
                              ": expected 14 fields, got " + std::to_string(f.size()));
        }
        SummaryRow r;
        r.model = f[0];
        r.family = family_from_name(f[1]);
        r.n = std::stol(f[2]);
        r.tau = std::stod(f[3]);
        r.quantity = f[4];
        r.p05 = std::stod(f[5]);
        r.p50 = std::stod(f[6]);
        r.p95 = std::stod(f[7]);
        r.deterministic = std::stod(f[8]);
        r.band_low = std::stod(f[9]);
        r.band_high = std::stod(f[10]);
        r.degenerate_count = std::stol(f[11]);
        r.true_value = std::stod(f[12]);
        r.threshold_true = std::stod(f[13]);
        s.rows.push_back(r);
    }
    return s;
}

std::string figure_csv(const SimulationSummary& summary, char panel, const std::string& model,
                       Family family, double tau) {
    const std::string quantity = panel == 'a' ? "q_hat" : panel == 'b' ? "rho_hat" : "nu_hat";
    if (panel != 'a' && panel != 'b' && panel != 'c') {
        throw ConfigError("figure panel must be a, b or c");
    }
    std::ostringstream out;
    if (panel == 'a') {
        out << "n,p05,p50,p95,true_q,threshold\n";
    } else if (panel == 'b') {
        out << "n,p05,p50,p95,true_index\n";
    } else {
        out << "n,p05,p50,p95,deterministic_nu,band_low,band_high\n";
    }
    bool any = false;
    for (const auto& r : summary.rows) {
        if (r.model != model || r.family != family || r.quantity != quantity ||
            std::abs(r.tau - tau) > 1e-12) {
            continue;
        }
        any = true;
        out << r.n << ',' << fmt17(r.p05) << ',' << fmt17(r.p50) << ',' << fmt17(r.p95);
        if (panel == 'a') {
            out << ',' << fmt17(r.true_value) << ',' << fmt17(r.threshold_true);
        } else if (panel == 'b') {
            out << ',' << fmt17(r.true_value);
        } else {
            out << ',' << fmt17(r.deterministic) << ',' << fmt17(r.band_low) << ','
                << fmt17(r.band_high);
        }
        out << '\n';
    }
    if (!any) {
        throw ConfigError("figure: no rows for model=" + model + " estimator=" +
                          family_name(family) + " quantity=" + quantity);
    }
    return out.str();
}

std::string figure_gnuplot(char panel, const std::string& csv_path) {
    std::ostringstream out;
    out << "set datafile separator ','\n"
        << "set key autotitle columnhead\n"
        << "set logscale x 2\n";
    if (panel == 'a') {
        out << "set logscale y\n"
            << "plot '" << csv_path << "' using 1:3:2:4 with yerrorbars title 'median',\\\n"
            << "     '' using 1:5 with lines dashtype 2 title 'target',\\\n"
            << "     '' using 1:6 with points pointtype 4 title 'threshold'\n";
    } else if (panel == 'b') {
        out << "plot '" << csv_path << "' using 1:3:2:4 with yerrorbars title 'median',\\\n"
            << "     '' using 1:5 with lines dashtype 2 title 'index'\n";
    } else {
        out << "plot '" << csv_path << "' using 1:3:2:4 with yerrorbars title 'median',\\\n"
            << "     '' using 1:5 with lines title 'deterministic',\\\n"
            << "     '' using 1:6 with lines dashtype 4 title 'band low',\\\n"
            << "     '' using 1:7 with lines dashtype 4 title 'band high'\n";
    }
    return out.str();
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) {
            out.push_back(tok);
        }
    }
    return out;
}

} // namespace

ExperimentConfig config_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    ExperimentConfig cfg;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line.substr(0, line.find('#')));
        if (stripped.empty()) {
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        try {
            if (key == "models") {
                cfg.models = split_list(value);
            } else if (key == "estimators") {
                cfg.estimators.clear();
                for (const auto& e : split_list(value)) {
                    cfg.estimators.push_back(family_from_name(e));
                }
            } else if (key == "nmin" || key == "nmax") {
                // powers-of-two grid bounds; realized below
                (key == "nmin" ? cfg.n_grid.emplace_back(-std::stol(value))
                               : cfg.n_grid.emplace_back(std::stol(value)));
            } else if (key == "reps") {
                cfg.replications = std::stol(value);
            } else if (key == "iota") {
                cfg.iota = std::stod(value);
            } else if (key == "tau") {
                cfg.tau_grid.clear();
                for (const auto& t : split_list(value)) {
                    cfg.tau_grid.push_back(std::stod(t));
                }
            } else if (key == "seed") {
                cfg.seed = std::stoull(value);
            } else if (key == "eta") {
                cfg.eta_grid.clear();
                for (const auto& t : split_list(value)) {
                    cfg.eta_grid.push_back(std::stod(t));
                }
            } else if (key == "floor") {
                cfg.floor_at_max = std::stol(value) != 0;
            } else if (key == "workers") {
                cfg.workers = static_cast<int>(std::stol(value));
            } else if (key == "out") {
                cfg.output_path = value;
            } else {
                throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" +
                                  key + "'");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("config line " + std::to_string(lineno) + ": bad value '" +
                              value + "' for key '" + key + "'");
        }
    }
    // nmin/nmax were stashed as (-nmin, nmax); expand to the power-of-two grid
    long nmin = 0, nmax = 0;
    for (long v : cfg.n_grid) {
        if (v < 0) {
            nmin = -v;
        } else {
            nmax = v;
        }
    }
    cfg.n_grid.clear();
    if (nmin > 0 || nmax > 0) {
        if (nmin == 0) {
            nmin = 32;
        }
        if (nmax == 0) {
            nmax = 65536;
        }
        for (long n = 1; n <= nmax; n <<= 1) {
            if (n >= nmin) {
                cfg.n_grid.push_back(n);
            }
        }
        if (cfg.n_grid.empty()) {
            throw ConfigError("no powers of two in [nmin, nmax]");
        }
    }
    return cfg;
}

EstimateReport estimate_file(const std::string& path, Family family, double iota,
                             std::span<const double> eta_grid, double level,
                             std::span<const double> probs) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open sample file '" + path + "'");
    }
    std::vector<double> xs;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) {
            continue;
        }
        std::size_t pos = 0;
        double v = 0.0;
        bool bad = false;
        try {
            v = std::stod(t, &pos);
        } catch (const std::exception&) {
            bad = true;
        }
        if (bad || pos != t.size() || !std::isfinite(v)) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": not a finite number: '" +
                              t + "'");
        }
        xs.push_back(v);
    }
    if (static_cast<long>(xs.size()) < 32) {
        throw ConfigError(path + ": need at least 32 observations, got " +
                          std::to_string(xs.size()));
    }
    const long n = static_cast<long>(xs.size());
    const KSchedule sched =
        family == Family::GP ? schedule_gp(n, iota) : schedule_base(n, iota);
    EstimateReport rep;
    try {
        rep.estimate = estimate(family, select_schedule_stats(xs, sched), sched);
    } catch (const NonpositiveThreshold& e) {
        throw NonpositiveThreshold(std::string(e.what()) +
                                   " (hint: shift the data positive before using loggw)");
    }
    const double sd = rho_sd(rep.estimate.rho_hat, iota, sched.y_n, sched.k2);
    const double zq = norm_ppf(0.5 * (1.0 + level));
    rep.ci_low = rep.estimate.rho_hat - zq * sd;
    rep.ci_high = rep.estimate.rho_hat + zq * sd;
    for (double p : probs) {
        if (!(p > 0.0) || !(p < 1.0)) {
            throw ConfigError("exceedance probability must be in (0,1)");
        }
        rep.quantiles.emplace_back(p, quantile_at(rep.estimate, -std::log(p)));
    }
    rep.profile = stability_profile(xs, iota, eta_grid, family, level);
    return rep;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot open output file '" + path + "'");
    }
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace evt
