#include <doctest.h>

#include "evt/approx.hpp"
#include "evt/errors.hpp"
#include "evt/models.hpp"
#include "evt/normal.hpp"
#include "oracles.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace {

const std::vector<std::string> kAllModels = {
    "normal",      "lognormal",          "pareto_like",        "burr",
    "slowvar_exp", "exact_weibull(0.5)", "exact_gw(1,2,-0.5)", "exact_loggw(1,0.5)"};

} // namespace

TEST_CASE("model catalogue: pinned evaluations") {
    const auto burr = evt::make_model("burr");
    CHECK(burr.U(16.0) == doctest::Approx(1.0).epsilon(1e-12));

    const auto pareto = evt::make_model("pareto_like");
    CHECK(pareto.U(std::exp(1.0)) == doctest::Approx(7.154845485377136).epsilon(1e-12));
    CHECK(pareto.U(std::exp(1.0)) == doctest::Approx(3.0 * std::exp(1.0) - 1.0).epsilon(1e-14));

    const auto lognormal = evt::make_model("lognormal");
    CHECK(lognormal.q(std::log(2.0)) == doctest::Approx(1.0).epsilon(1e-12));

    const auto weib = evt::make_model("exact_weibull(0.5)");
    CHECK(weib.q(4.0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("model catalogue: unknown names and bad parameters") {
    CHECK_THROWS_AS(evt::make_model("frechet"), evt::ConfigError);
    CHECK_THROWS_AS(evt::make_model("exact_weibull(0)"), evt::ConfigError);
    CHECK_THROWS_AS(evt::make_model("exact_weibull(-1)"), evt::ConfigError);
    CHECK_THROWS_AS(evt::make_model("exact_gw(1,0,0.5)"), evt::ConfigError);
    CHECK_THROWS_AS(evt::make_model("exact_loggw(-1,0.5)"), evt::ConfigError);
    CHECK_THROWS_AS(evt::make_model("exact_weibull"), evt::ConfigError);
}

TEST_CASE("q_inv: pinned values") {
    const auto burr = evt::make_model("burr");
    CHECK(burr.q_inv(1.0) == doctest::Approx(4.0 * std::log(2.0)).epsilon(1e-14));

    const auto pareto = evt::make_model("pareto_like");
    CHECK(pareto.q_inv(pareto.q(3.0)) == doctest::Approx(3.0).epsilon(1e-9));

    const auto weib = evt::make_model("exact_weibull(0.5)");
    CHECK(weib.q_inv(5.0) == doctest::Approx(25.0).epsilon(1e-13));
}

TEST_CASE("q_inv: round trips over y in [0.1, 60] for every model") {
    for (const auto& name : kAllModels) {
        const auto model = evt::make_model(name);
        INFO("model = ", name);
        for (double y = 0.1; y <= 60.0 + 1e-9; y += 2.3) {
            const double x = model.q(y);
            const double back = model.q_inv(x);
            CHECK(std::abs(back - y) <= 1e-9 * (1.0 + std::abs(y)));
        }
    }
}

TEST_CASE("q_inv_numeric matches closed forms") {
    const auto burr = evt::make_model("burr");
    for (double y : {0.5, 2.0, 10.0, 40.0}) {
        CHECK(evt::q_inv_numeric(burr, burr.q(y)) == doctest::Approx(y).epsilon(1e-9));
    }
}

TEST_CASE("q_prime: pinned values") {
    const auto weib = evt::make_model("exact_weibull(0.5)");
    CHECK(weib.q_prime(4.0) == doctest::Approx(0.25).epsilon(1e-6));

    const auto burr = evt::make_model("burr");
    CHECK(burr.q_prime(4.0 * std::log(2.0)) == doctest::Approx(2.0).epsilon(1e-6));

    const auto lognormal = evt::make_model("lognormal");
    for (double y = 0.5; y <= 40.0; y += 1.7) CHECK(lognormal.q_prime(y) > 0.0);
}

TEST_CASE("normal tail: q(y)/sqrt(2y) near 1 at y = 40") {
    const auto normal = evt::make_model("normal");
    CHECK(normal.q(40.0) / std::sqrt(80.0) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("normal inverse: round trip against the quadrature oracle") {
    // norm_ppf_upper(p) should satisfy -log(1 - Phi(x)) = -log p, checked with
    // an independent long-double quadrature of the survival integral.
    for (double nlp : {1.0, 3.0, 10.0, 30.0, 100.0, 300.0}) {
        const double p = std::exp(-nlp);
        const double x = evt::norm_ppf_upper(p);
        const double lsf = static_cast<double>(oracle::norm_logsf_quad(x));
        CHECK(lsf == doctest::Approx(nlp).epsilon(1e-9));
    }
    CHECK(evt::norm_ppf(0.95) == doctest::Approx(1.6448536269514722).epsilon(1e-12));
    CHECK(evt::norm_ppf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(evt::norm_ppf(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
}

TEST_CASE("attraction diagnostics: a_loggw moves toward the true log-GW index") {
    struct Case {
        std::string name;
        double rho_true;
    };
    for (const auto& c : std::vector<Case>{{"normal", 0.0},
                                           {"lognormal", 0.5},
                                           {"pareto_like", 1.0},
                                           {"burr", 1.0}}) {
        const auto model = evt::make_model(c.name);
        INFO("model = ", c.name);
        REQUIRE(model.rho_loggw_true.has_value());
        CHECK(*model.rho_loggw_true == doctest::Approx(c.rho_true));
        const double d10 = std::abs(evt::a_loggw(model, 2.0, 10.0) - c.rho_true);
        const double d20 = std::abs(evt::a_loggw(model, 2.0, 20.0) - c.rho_true);
        const double d40 = std::abs(evt::a_loggw(model, 2.0, 40.0) - c.rho_true);
        CHECK(d20 <= d10 + 1e-12);
        CHECK(d40 <= d20 + 1e-12);
    }
    // Exact power-law model: equality is exact at every y.
    const auto exact = evt::make_model("exact_loggw(1,0.5)");
    for (double y : {10.0, 20.0, 40.0})
        CHECK(evt::a_loggw(exact, 2.0, y) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("finite-endpoint models expose q_sup") {
    const auto gw = evt::make_model("exact_gw(1,2,-0.5)");
    CHECK(gw.q_sup == doctest::Approx(1.0 + 2.0 / 0.5).epsilon(1e-14));
    CHECK(gw.q(50.0) < gw.q_sup);

    const auto lgw = evt::make_model("exact_loggw(1,-0.5)");
    CHECK(lgw.q_sup == doctest::Approx(std::exp(2.0)).epsilon(1e-14));

    const auto heavy = evt::make_model("pareto_like");
    CHECK(std::isinf(heavy.q_sup));
}

TEST_CASE("true indices on the catalogue") {
    CHECK(*evt::make_model("normal").rho_gw_true == doctest::Approx(0.5));
    CHECK(*evt::make_model("normal").gamma_true == doctest::Approx(0.0));
    CHECK(*evt::make_model("pareto_like").gamma_true == doctest::Approx(1.0));
    CHECK(*evt::make_model("exact_weibull(0.5)").rho_gw_true == doctest::Approx(0.5));
    CHECK(*evt::make_model("exact_gw(1,2,-0.5)").rho_gw_true == doctest::Approx(-0.5));
    CHECK(*evt::make_model("exact_loggw(1,0.5)").rho_loggw_true == doctest::Approx(0.5));
}
