#include <doctest.h>

#include "evt/asymptotics.hpp"
#include "evt/errors.hpp"
#include "evt/estimators.hpp"
#include "evt/models.hpp"
#include "evt/rng.hpp"
#include "evt/simlab.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path((std::filesystem::temp_directory_path() / name).string()) {
        evt::write_text_file(path, content);
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("sample: determinism, positivity of E, exponential mean") {
    const auto lin = evt::make_model("exact_weibull(1)"); // q(y) = y: standard exponential
    const auto a = evt::sample(lin, 10000, 123);
    const auto b = evt::sample(lin, 10000, 123);
    CHECK(a == b); // bit-identical
    const auto c = evt::sample(lin, 10000, 124);
    CHECK(a != c);

    const auto big = evt::sample(lin, 1000000, 2024);
    double mean = 0.0, lo = 1e300;
    for (double x : big) {
        mean += x;
        lo = std::min(lo, x);
    }
    mean /= static_cast<double>(big.size());
    CHECK(mean == doctest::Approx(1.0).epsilon(0.005));
    CHECK(lo > 0.0); // -log V never evaluates at V = 0
}

TEST_CASE("run_experiment: single-replication hand trace") {
    evt::ExperimentConfig cfg;
    cfg.models = {"exact_weibull(0.5)"};
    cfg.estimators = {evt::Family::GW};
    cfg.n_grid = {1024};
    cfg.replications = 1;
    cfg.seed = 31;
    const auto summary = evt::run_experiment(cfg);
    REQUIRE(summary.rows.size() == 3);

    // independent recomputation through the public pieces
    const auto model = evt::make_model("exact_weibull(0.5)");
    const auto sched = evt::schedule_base(1024, 2.0);
    const auto data = evt::sample(model, 1024, evt::derive_seed(31, 0, 1024, 0));
    const auto est = evt::estimate_gw(data, sched);
    const double z = 2.0 * std::log(1024.0);
    const double expect_q = evt::quantile_at(est, z, true);

    for (const auto& row : summary.rows) {
        if (row.quantity == "q_hat") {
            CHECK(row.p50 == doctest::Approx(expect_q).epsilon(1e-14));
            CHECK(row.p05 == doctest::Approx(expect_q).epsilon(1e-14));
            CHECK(row.true_value == doctest::Approx(model.q(z)).epsilon(1e-14));
            CHECK(row.threshold_true == doctest::Approx(model.q(sched.y_n)).epsilon(1e-14));
        }
        if (row.quantity == "rho_hat") {
            CHECK(row.p50 == doctest::Approx(est.rho_hat).epsilon(1e-14));
            CHECK(row.true_value == doctest::Approx(0.5));
        }
    }
}

TEST_CASE("run_cell: worker count does not change results") {
    const auto model = evt::make_model("lognormal");
    const std::vector<double> taus = {2.0};
    const auto one =
        evt::run_cell(model, evt::Family::LogGW, 2048, 64, 2.0, taus, 5, 0, true, 1);
    const auto four =
        evt::run_cell(model, evt::Family::LogGW, 2048, 64, 2.0, taus, 5, 0, true, 4);
    CHECK(one.rho_hat == four.rho_hat);
    CHECK(one.q_hat == four.q_hat);
    CHECK(one.nu_hat == four.nu_hat);
    CHECK(one.degenerate_count == four.degenerate_count);
}

TEST_CASE("percentile: nearest-rank convention") {
    const std::vector<double> v = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    CHECK(evt::percentile_nearest_rank(v, 0.05) == doctest::Approx(1.0));  // ceil(0.5) = 1
    CHECK(evt::percentile_nearest_rank(v, 0.50) == doctest::Approx(5.0));  // ceil(5) = 5
    CHECK(evt::percentile_nearest_rank(v, 0.95) == doctest::Approx(10.0)); // ceil(9.5) = 10
    const std::vector<double> w = {3.0};
    CHECK(evt::percentile_nearest_rank(w, 0.5) == doctest::Approx(3.0));
}

TEST_CASE("summary CSV: round trip preserves every field") {
    evt::ExperimentConfig cfg;
    cfg.models = {"lognormal"};
    cfg.estimators = {evt::Family::GW, evt::Family::LogGW, evt::Family::GP};
    cfg.n_grid = {64, 128};
    cfg.replications = 20;
    cfg.seed = 9;
    const auto summary = evt::run_experiment(cfg);
    const std::string csv = evt::summary_to_csv(summary);
    const auto back = evt::summary_from_csv(csv);
    CHECK(evt::summary_to_csv(back) == csv); // 17-significant-digit round trip
    REQUIRE(back.rows.size() == summary.rows.size());
    CHECK(back.rows[0].model == "lognormal");
}

TEST_CASE("config file: keys mirror flags, unknown key rejected") {
    TempFile good("evt_cfg_good.txt",
                  "# comment\n"
                  "models = lognormal, burr\n"
                  "estimators = gw, loggw\n"
                  "nmin = 64\n"
                  "nmax = 512\n"
                  "reps = 7\n"
                  "iota = 2.0\n"
                  "tau = 1.5, 2\n"
                  "seed = 42\n"
                  "floor = 1\n"
                  "workers = 2\n");
    const auto cfg = evt::config_from_file(good.path);
    CHECK(cfg.models == std::vector<std::string>{"lognormal", "burr"});
    REQUIRE(cfg.estimators.size() == 2);
    CHECK(cfg.n_grid == std::vector<long>{64, 128, 256, 512});
    CHECK(cfg.replications == 7);
    CHECK(cfg.tau_grid == std::vector<double>{1.5, 2.0});
    CHECK(cfg.seed == 42);
    CHECK(cfg.workers == 2);

    TempFile bad("evt_cfg_bad.txt", "models = lognormal\nbogus_key = 3\n");
    CHECK_THROWS_AS(evt::config_from_file(bad.path), evt::ConfigError);
    TempFile malformed("evt_cfg_malformed.txt", "models lognormal\n");
    CHECK_THROWS_AS(evt::config_from_file(malformed.path), evt::ConfigError);
}

TEST_CASE("experiment determinism: identical seeds give identical CSV bytes") {
    evt::ExperimentConfig cfg;
    cfg.models = {"burr"};
    cfg.estimators = {evt::Family::GW};
    cfg.n_grid = {32, 64, 128};
    cfg.replications = 25;
    cfg.seed = 77;
    const std::string a = evt::summary_to_csv(evt::run_experiment(cfg));
    const std::string b = evt::summary_to_csv(evt::run_experiment(cfg));
    CHECK(a == b);
    cfg.workers = 3;
    const std::string c = evt::summary_to_csv(evt::run_experiment(cfg));
    CHECK(a == c);
}

TEST_CASE("figure CSV: panel layouts and band plumbing") {
    evt::ExperimentConfig cfg;
    cfg.models = {"lognormal"};
    cfg.estimators = {evt::Family::LogGW};
    cfg.n_grid = {256, 1024};
    cfg.replications = 50;
    cfg.seed = 3;
    const auto summary = evt::run_experiment(cfg);

    const std::string a = evt::figure_csv(summary, 'a', "lognormal", evt::Family::LogGW, 2.0);
    CHECK(a.rfind("n,p05,p50,p95,true_q,threshold\n", 0) == 0);
    const std::string b = evt::figure_csv(summary, 'b', "lognormal", evt::Family::LogGW, 2.0);
    CHECK(b.rfind("n,p05,p50,p95,true_index\n", 0) == 0);
    const std::string c = evt::figure_csv(summary, 'c', "lognormal", evt::Family::LogGW, 2.0);
    CHECK(c.rfind("n,p05,p50,p95,deterministic_nu,band_low,band_high\n", 0) == 0);

    // panel (a) carries the true target quantile U(n^2) and the threshold U(n/k0)
    const auto model = evt::make_model("lognormal");
    for (long n : {256L, 1024L}) {
        const auto sched = evt::schedule_base(n, 2.0);
        const std::string expect_q = std::to_string(n) + ",";
        CHECK(a.find(expect_q) != std::string::npos);
        for (const auto& row : summary.rows) {
            if (row.n != n) continue;
            CHECK(row.true_value ==
                  doctest::Approx(row.quantity == "q_hat" ? model.q(2.0 * std::log(n))
                                  : row.quantity == "rho_hat" ? 0.5
                                                              : 0.0));
            CHECK(row.threshold_true == doctest::Approx(model.q(sched.y_n)).epsilon(1e-13));
        }
    }

    // panel (c) band columns equal the variance-formula output for the same inputs
    for (const auto& row : summary.rows) {
        if (row.quantity != "nu_hat" || !std::isfinite(row.band_low)) continue;
        double rho_plug = 0.0;
        for (const auto& r2 : summary.rows)
            if (r2.quantity == "rho_hat" && r2.n == row.n) rho_plug = r2.p50;
        const auto sched = evt::schedule_base(row.n, 2.0);
        const double z = 2.0 * std::log(static_cast<double>(row.n));
        const auto band = evt::nu_band(rho_plug, 2.0, z / sched.y_n, sched.y_n, sched.k2,
                                       row.deterministic);
        CHECK(row.band_low == doctest::Approx(band.low).epsilon(1e-12));
        CHECK(row.band_high == doctest::Approx(band.high).epsilon(1e-12));
    }

    CHECK_THROWS_AS(evt::figure_csv(summary, 'a', "burr", evt::Family::LogGW, 2.0),
                    evt::ConfigError);
    CHECK_THROWS_AS(evt::figure_csv(summary, 'x', "lognormal", evt::Family::LogGW, 2.0),
                    evt::ConfigError);
}

TEST_CASE("plug-in bands track the deterministic-index bands at n = 2^16") {
    // substituting the Monte Carlo median for the true index changes the
    // variance formula by well under 5% at this sample size
    const auto model = evt::make_model("lognormal");
    const std::vector<double> taus = {2.0};
    const auto cell =
        evt::run_cell(model, evt::Family::LogGW, 65536, 200, 2.0, taus, 1, 0, true, 4);
    std::vector<double> rho;
    for (std::size_t r = 0; r < cell.rho_hat.size(); ++r)
        if (cell.ok[r]) rho.push_back(cell.rho_hat[r]);
    std::sort(rho.begin(), rho.end());
    const double rho_med = evt::percentile_nearest_rank(rho, 0.5);
    const auto sched = cell.schedule;
    const double a = evt::a_loggw(model, 2.0, sched.y_n);
    const double sd_plug = evt::rho_sd(rho_med, 2.0, sched.y_n, sched.k2);
    const double sd_det = evt::rho_sd(a, 2.0, sched.y_n, sched.k2);
    CHECK(std::abs(sd_plug / sd_det - 1.0) <= 0.05);
}

TEST_CASE("estimate_file: exact quantile grid, threshold probability, error paths") {
    const long n = 65536;
    const auto model = evt::make_model("exact_loggw(1,0.5)");
    std::string content;
    {
        char buf[40];
        for (long i = 1; i <= n; ++i) {
            const double y =
                std::max(std::log(static_cast<double>(n) / static_cast<double>(i)), 1e-9);
            std::snprintf(buf, sizeof(buf), "%.17g\n", model.q(y));
            content += buf;
        }
    }
    TempFile data("evt_sample_exact.txt", content);

    const auto sched = evt::schedule_base(n, 2.0);
    const std::vector<double> etas = {1.0};
    const double p_thr = static_cast<double>(sched.k0) / static_cast<double>(n);
    const std::vector<double> probs = {p_thr, 1e-6};
    const auto rep = evt::estimate_file(data.path, evt::Family::LogGW, 2.0, etas, 0.90, probs);
    CHECK(rep.estimate.rho_hat == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(rep.ci_low < rep.estimate.rho_hat);
    CHECK(rep.estimate.rho_hat < rep.ci_high);
    REQUIRE(rep.quantiles.size() == 2);
    // p = k0/n maps to z = y_n, the threshold order statistic itself
    CHECK(rep.quantiles[0].second == doctest::Approx(rep.estimate.x_k0).epsilon(1e-12));

    // negative data cannot be used on the log scale; hint attached
    std::string neg;
    for (long i = 0; i < 64; ++i) neg += std::to_string(static_cast<double>(i) - 40.0) + "\n";
    TempFile negfile("evt_sample_neg.txt", neg);
    try {
        evt::estimate_file(negfile.path, evt::Family::LogGW, 2.0, etas, 0.90, std::vector<double>{});
        FAIL("expected NonpositiveThreshold");
    } catch (const evt::NonpositiveThreshold& e) {
        CHECK(std::string(e.what()).find("shift the data positive") != std::string::npos);
    }

    // parse errors carry line numbers
    TempFile badfile("evt_sample_bad.txt", "1.0\n2.0\nnot_a_number\n");
    try {
        evt::estimate_file(badfile.path, evt::Family::GW, 2.0, etas, 0.90, std::vector<double>{});
        FAIL("expected ConfigError");
    } catch (const evt::ConfigError& e) {
        CHECK(std::string(e.what()).find(":3") != std::string::npos);
    }

    TempFile tiny("evt_sample_tiny.txt", "1\n2\n3\n");
    CHECK_THROWS_AS(evt::estimate_file(tiny.path, evt::Family::GW, 2.0, etas, 0.90, std::vector<double>{}),
                    evt::ConfigError);
}

TEST_CASE("degenerate replications are counted, not fatal") {
    // exact_gw with alpha shifting the distribution negative breaks the
    // log-scale estimator in every replication
    evt::ExperimentConfig cfg;
    cfg.models = {"exact_gw(-100,1,0.5)"};
    cfg.estimators = {evt::Family::LogGW};
    cfg.n_grid = {64};
    cfg.replications = 10;
    cfg.seed = 2;
    const auto summary = evt::run_experiment(cfg);
    REQUIRE_FALSE(summary.rows.empty());
    for (const auto& row : summary.rows) CHECK(row.degenerate_count == 10);
}
