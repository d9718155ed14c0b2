// evtq: high-quantile estimation laboratory.
//
// Subcommands: simulate, estimate, approx, stability, figure.

#include "evt/approx.hpp"
#include "evt/errors.hpp"
#include "evt/estimators.hpp"
#include "evt/models.hpp"
#include "evt/simlab.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>

namespace {

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::fputs(content.c_str(), stdout);
    } else {
        evt::write_text_file(path, content);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"High quantile estimation from intermediate order statistics"};
    app.require_subcommand(1);

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "Run the Monte Carlo study, emit a summary CSV");
    std::string config_path;
    std::vector<std::string> sim_models;
    std::vector<std::string> sim_estimators;
    long nmin = 32, nmax = 65536, reps = 1000;
    double sim_iota = 2.0;
    std::vector<double> taus;
    std::uint64_t seed = 1;
    int workers = 1;
    bool no_floor = false;
    std::string sim_out;
    sim->add_option("--config", config_path, "flat key=value config file");
    sim->add_option("--models", sim_models, "model names")->delimiter(',');
    sim->add_option("--estimators", sim_estimators, "gw,loggw,gp")->delimiter(',');
    sim->add_option("--nmin", nmin, "smallest sample size (powers of two grid)");
    sim->add_option("--nmax", nmax, "largest sample size");
    sim->add_option("--reps", reps, "replications per cell");
    sim->add_option("--iota", sim_iota, "spacing ratio iota > 1");
    sim->add_option("--tau", taus, "target exponents: p = n^-tau")->delimiter(',');
    sim->add_option("--seed", seed, "base seed");
    sim->add_option("--workers", workers, "worker threads");
    sim->add_flag("--no-floor", no_floor, "disable flooring at the sample maximum");
    sim->add_option("--out", sim_out, "output CSV path (default stdout)");

    // ---- estimate ----
    auto* est = app.add_subcommand("estimate", "Estimate tail parameters from a data file");
    std::string est_file, est_family = "loggw";
    double est_iota = 2.0, est_level = 0.90;
    std::vector<double> est_probs{1e-4};
    std::vector<double> est_etas;
    est->add_option("--file", est_file, "newline-delimited numeric sample")->required();
    est->add_option("--family", est_family, "gw|loggw|gp");
    est->add_option("--iota", est_iota, "spacing ratio");
    est->add_option("--p", est_probs, "exceedance probabilities")->delimiter(',');
    est->add_option("--eta", est_etas, "threshold-stability eta grid")->delimiter(',');
    est->add_option("--level", est_level, "confidence level");

    // ---- approx ----
    auto* apx = app.add_subcommand("approx", "Deterministic penultimate approximations");
    std::string apx_model, apx_family = "loggw", apx_out;
    double apx_iota = 2.0;
    std::vector<double> apx_ys, apx_zs;
    apx->add_option("--model", apx_model, "model name")->required();
    apx->add_option("--family", apx_family, "gw|loggw");
    apx->add_option("--iota", apx_iota, "spacing ratio");
    apx->add_option("--y", apx_ys, "anchor grid")->required()->delimiter(',');
    apx->add_option("--z", apx_zs, "evaluation grid")->required()->delimiter(',');
    apx->add_option("--out", apx_out, "output CSV path (default stdout)");

    // ---- stability ----
    auto* stab = app.add_subcommand("stability", "Threshold-stability profile for a data file");
    std::string stab_file, stab_family = "loggw", stab_out;
    double stab_iota = 2.0, stab_level = 0.90;
    std::vector<double> stab_etas{0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    stab->add_option("--file", stab_file, "newline-delimited numeric sample")->required();
    stab->add_option("--family", stab_family, "gw|loggw|gp");
    stab->add_option("--iota", stab_iota, "spacing ratio");
    stab->add_option("--eta", stab_etas, "eta grid in (0,1]")->delimiter(',');
    stab->add_option("--level", stab_level, "confidence level");
    stab->add_option("--out", stab_out, "output CSV path (default stdout)");

    // ---- figure ----
    auto* fig = app.add_subcommand("figure", "Plot-ready CSV projection of a summary");
    std::string fig_summary, fig_panel = "a", fig_model, fig_family = "loggw", fig_out;
    double fig_tau = 2.0;
    bool fig_gnuplot = false;
    fig->add_option("--summary", fig_summary, "summary CSV from simulate")->required();
    fig->add_option("--panel", fig_panel, "a|b|c")->required();
    fig->add_option("--model", fig_model, "model filter (default: first in summary)");
    fig->add_option("--estimator", fig_family, "gw|loggw|gp");
    fig->add_option("--tau", fig_tau, "tau filter");
    fig->add_flag("--gnuplot", fig_gnuplot, "also print a gnuplot script for the CSV");
    fig->add_option("--out", fig_out, "output CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            evt::ExperimentConfig cfg;
            if (!config_path.empty()) {
                cfg = evt::config_from_file(config_path);
            }
            if (!sim_models.empty()) cfg.models = sim_models;
            if (!sim_estimators.empty()) {
                cfg.estimators.clear();
                for (const auto& e : sim_estimators) {
                    cfg.estimators.push_back(evt::family_from_name(e));
                }
            }
            if (sim->count("--nmin") || sim->count("--nmax") ||
                (config_path.empty() && cfg.n_grid.empty())) {
                cfg.n_grid.clear();
                for (long n = 1; n <= nmax; n <<= 1) {
                    if (n >= nmin) cfg.n_grid.push_back(n);
                }
            }
            if (sim->count("--reps")) cfg.replications = reps;
            if (sim->count("--iota")) cfg.iota = sim_iota;
            if (!taus.empty()) cfg.tau_grid = taus;
            if (sim->count("--seed")) cfg.seed = seed;
            if (sim->count("--workers")) cfg.workers = workers;
            if (no_floor) cfg.floor_at_max = false;
            if (!sim_out.empty()) cfg.output_path = sim_out;
            const auto summary = evt::run_experiment(cfg);
            emit(cfg.output_path, evt::summary_to_csv(summary));
        } else if (est->parsed()) {
            const auto family = evt::family_from_name(est_family);
            const auto rep =
                evt::estimate_file(est_file, family, est_iota, est_etas, est_level, est_probs);
            std::printf("family      %s\n", evt::family_name(rep.estimate.family));
            std::printf("n           %ld\n", rep.estimate.schedule.n);
            std::printf("k2,k1,k0    %ld,%ld,%ld\n", rep.estimate.schedule.k2,
                        rep.estimate.schedule.k1, rep.estimate.schedule.k0);
            std::printf("y_n         %.17g\n", rep.estimate.schedule.y_n);
            std::printf("rho_hat     %.17g\n", rep.estimate.rho_hat);
            std::printf("rho %g%% CI  [%.17g, %.17g]\n", est_level * 100.0, rep.ci_low,
                        rep.ci_high);
            std::printf("g_hat       %.17g\n", rep.estimate.g_hat);
            std::printf("threshold   %.17g\n", rep.estimate.x_k0);
            for (const auto& [p, qv] : rep.quantiles) {
                std::printf("q(p=%.17g)  %.17g\n", p, qv);
            }
            for (const auto& pt : rep.profile) {
                if (pt.ok) {
                    std::printf("eta=%.4g rho_hat=%.17g ci=[%.17g, %.17g]\n", pt.eta, pt.rho_hat,
                                pt.ci_low, pt.ci_high);
                } else {
                    std::printf("eta=%.4g skipped: %s\n", pt.eta, pt.note.c_str());
                }
            }
        } else if (apx->parsed()) {
            const auto family = evt::family_from_name(apx_family);
            if (family == evt::Family::GP) {
                throw evt::ConfigError("approx: family must be gw or loggw");
            }
            const auto model = evt::make_model(apx_model);
            std::string csv = "model,family,y,z,rho_tilde,g_tilde,approx,nu\n";
            char buf[256];
            for (double y : apx_ys) {
                const auto a = evt::make_approx(model, family, apx_iota, y);
                for (double z : apx_zs) {
                    std::snprintf(buf, sizeof(buf), "%s,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                                  apx_model.c_str(), evt::family_name(family), y, z, a.rho_tilde,
                                  a.g_tilde, evt::approx_eval(a, z), evt::nu(model, a, z));
                    csv += buf;
                }
            }
            emit(apx_out, csv);
        } else if (stab->parsed()) {
            const auto family = evt::family_from_name(stab_family);
            const auto rep = evt::estimate_file(stab_file, family, stab_iota, stab_etas,
                                                stab_level, std::vector<double>{});
            std::string csv = "eta,ok,rho_hat,ci_low,ci_high,note\n";
            char buf[256];
            for (const auto& pt : rep.profile) {
                std::snprintf(buf, sizeof(buf), "%.17g,%d,%.17g,%.17g,%.17g,%s\n", pt.eta,
                              pt.ok ? 1 : 0, pt.rho_hat, pt.ci_low, pt.ci_high, pt.note.c_str());
                csv += buf;
            }
            emit(stab_out, csv);
        } else if (fig->parsed()) {
            const auto summary = evt::summary_from_csv(evt::read_text_file(fig_summary));
            if (fig_panel.size() != 1) {
                throw evt::ConfigError("figure panel must be a, b or c");
            }
            if (fig_model.empty()) {
                if (summary.rows.empty()) {
                    throw evt::ConfigError("figure: summary has no rows");
                }
                fig_model = summary.rows.front().model;
            }
            const std::string csv = evt::figure_csv(summary, fig_panel[0], fig_model,
                                                    evt::family_from_name(fig_family), fig_tau);
            emit(fig_out, csv);
            if (fig_gnuplot) {
                std::fputs(
                    evt::figure_gnuplot(fig_panel[0], fig_out.empty() ? "figure.csv" : fig_out)
                        .c_str(),
                    stdout);
            }
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
