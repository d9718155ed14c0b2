#pragma once

#include "evt/approx.hpp"
#include "evt/estimators.hpp"
#include "evt/models.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace evt {

struct ExperimentConfig {
    std::vector<std::string> models;
    std::vector<Family> estimators = {Family::GW, Family::LogGW, Family::GP};
    std::vector<long> n_grid;        // default 2^5..2^16, set by normalize()
    long replications = 1000;
    double iota = 2.0;
    std::vector<double> tau_grid = {2.0};
    std::uint64_t seed = 1;
    std::vector<double> eta_grid;    // used by the stability CLI path
    bool floor_at_max = true;
    int workers = 1;
    std::string output_path;

    void normalize(); // fill defaults, validate invariants
};

struct SummaryRow {
    std::string model;
    Family family = Family::GW;
    long n = 0;
    double tau = 0.0;
    std::string quantity; // q_hat | rho_hat | nu_hat
    double p05 = 0.0, p50 = 0.0, p95 = 0.0;
    double deterministic = 0.0;
    double band_low = 0.0, band_high = 0.0;
    long degenerate_count = 0;
    double true_value = 0.0;     // U(n^tau) / true index / 0
    double threshold_true = 0.0; // U(n/k0)
};

struct SimulationSummary {
    std::vector<SummaryRow> rows;
};

// n inverse-transform draws X = q(E), E standard exponential from a
// mt19937_64 stream; bit-identical for identical (version, stream_seed).
std::vector<double> sample(const TailModel& model, long n, std::uint64_t stream_seed);

// Per-replication raw results for one (model, family, n) cell; reused by the
// aggregator and by the acceptance suite.
struct CellResult {
    KSchedule schedule;
    std::vector<char> ok;                       // per replication
    std::vector<double> rho_hat;                // valid where ok
    std::vector<std::vector<double>> q_hat;     // [tau][rep]
    std::vector<std::vector<double>> nu_hat;    // [tau][rep]
    long degenerate_count = 0;
};

CellResult run_cell(const TailModel& model, Family family, long n, long replications,
                    double iota, std::span<const double> tau_grid, std::uint64_t base_seed,
                    std::uint64_t model_index, bool floor_at_max, int workers);

SimulationSummary run_experiment(const ExperimentConfig& cfg);

// Nearest-rank percentile of an ascending-sorted vector, p in (0,1).
double percentile_nearest_rank(std::span<const double> sorted_ascending, double p);

std::string summary_to_csv(const SimulationSummary& summary);
SimulationSummary summary_from_csv(const std::string& csv_text);

// Plot-ready projection of a summary: panel 'a' quantiles, 'b' parameter
// estimates, 'c' probability-based errors.
std::string figure_csv(const SimulationSummary& summary, char panel, const std::string& model,
                       Family family, double tau);
// gnuplot script that plots the corresponding figure CSV.
std::string figure_gnuplot(char panel, const std::string& csv_path);

// Flat key=value config file; all keys mirror CLI flags; unknown keys error.
ExperimentConfig config_from_file(const std::string& path);

struct EstimateReport {
    TailEstimate estimate;
    double ci_low = 0.0, ci_high = 0.0;  // plug-in CI for rho_hat
    std::vector<std::pair<double, double>> quantiles; // (p, q_hat at z = -log p)
    std::vector<StabilityPoint> profile;
};

// Real-data entry point: newline-delimited numeric sample, no truth model.
EstimateReport estimate_file(const std::string& path, Family family, double iota,
                             std::span<const double> eta_grid, double level,
                             std::span<const double> probs);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace evt
