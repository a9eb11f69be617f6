#include <doctest.h>

#include <cmath>
#include <random>

#include "divctl/error.hpp"
#include "divctl/params.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace divctl;

namespace {

std::string field_of(const ModelParams& p) {
    try {
        validate(p);
    } catch (const RangeError& e) {
        return e.field();
    }
    return "";
}

}  // namespace

TEST_CASE("validate accepts the figure parameters and names bad fields") {
    CHECK_NOTHROW(validate(fixtures::fig2()));
    auto p = fixtures::fig2();
    p.rho = 1.0;
    CHECK(field_of(p) == "rho");
    p = fixtures::fig2();
    p.sigma1 = 0.0;
    CHECK(field_of(p) == "sigma1");
    p = fixtures::fig2();
    p.beta = -1.0;
    CHECK(field_of(p) == "beta");
    p = fixtures::fig2();
    p.a = 1.2;
    CHECK(field_of(p) == "a");
    p = fixtures::fig2();
    p.cbar2 = NAN;
    CHECK(field_of(p) == "cbar2");
}

TEST_CASE("gross block must reproduce the adjusted drifts") {
    auto p = fixtures::fig2();
    p.gross = GrossBlock{8.0, 4.0, 0.5, 0.5};
    CHECK_NOTHROW(validate(p));
    p.gross->kappa2 = 0.6;
    CHECK_THROWS_AS(validate(p), InconsistentGross);
}

TEST_CASE("regime classification") {
    CHECK(classify_regime(fixtures::fig2()).tag == RegimeTag::Main);
    CHECK(classify_regime(fixtures::fig5()).tag == RegimeTag::FullReinsuranceLine1);
    CHECK(classify_regime(fixtures::fig6()).tag == RegimeTag::Main);

    auto p = fixtures::fig2();
    p.mu1 = 12.0;  // ratio 4 >= 1/rho
    const CorrelationRegime r = classify_regime(p);
    CHECK(r.tag == RegimeTag::FullReinsuranceLine2);
    CHECK(r.n.N1 == doctest::Approx(144.0));
    CHECK(r.n.N2 == doctest::Approx(144.0 + 2.0 * 0.5 * 2.25));
    CHECK(r.n.N3 == 12.0);
    CHECK(r.n.N4 == 2.25);

    // Ties belong to the full-reinsurance regimes.
    p = fixtures::fig2();
    p.rho = sharpe_ratio(p);
    CHECK(classify_regime(p).tag == RegimeTag::FullReinsuranceLine1);

    const CorrelationRegime f5 = classify_regime(fixtures::fig5());
    CHECK(f5.n.N1 == doctest::Approx(4.0));
    CHECK(f5.n.N2 == doctest::Approx(5.0));
    CHECK(f5.n.N3 == 2.0);
    CHECK(f5.n.N4 == 1.0);
}

TEST_CASE("figure 2 constants") {
    const auto p = fixtures::fig2();
    const DerivedConstants c = derive_constants(p, classify_regime(p));
    CHECK(c.N1 == doctest::Approx(10.6).epsilon(1e-12));
    CHECK(c.N2 == doctest::Approx(12.04).epsilon(1e-12));
    CHECK(c.N3 == doctest::Approx(4.8182).epsilon(1e-4));
    CHECK(c.N4 == doctest::Approx(3.1537).epsilon(1e-4));
    CHECK(c.gamma1 == doctest::Approx(0.1196).epsilon(1e-3));
    CHECK(c.w1 == doctest::Approx(0.5763).epsilon(1e-4));
    CHECK(c.w2 == doctest::Approx(1.4086).epsilon(1e-4));
    CHECK(c.gamma2_plus == doctest::Approx(0.1005).epsilon(1e-3));
    CHECK(c.gamma2_minus == doctest::Approx(-3.1561).epsilon(1e-4));
    CHECK(c.gamma3_plus == doctest::Approx(0.1626).epsilon(1e-3));
    CHECK(c.gamma3_minus == doctest::Approx(-1.9499).epsilon(1e-4));
    CHECK(c.gamma4_minus == doctest::Approx(-0.5084).epsilon(1e-3));
    CHECK(c.v_limit == (0.3 * 3.0 + 0.7 * 2.0) / 0.5);
    CHECK(c.threshold == doctest::Approx(2.7364).epsilon(1e-4));
}

TEST_CASE("constants agree with the mean-variance oracle on random inputs") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.2, 5.0), r(-0.95, 0.95);
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
        ModelParams p = fixtures::fig2();
        p.mu1 = u(rng);
        p.mu2 = u(rng);
        p.sigma1 = u(rng);
        p.sigma2 = u(rng);
        p.rho = r(rng);
        p.beta = u(rng) / 5.0;
        const CorrelationRegime reg = classify_regime(p);
        if (reg.tag != RegimeTag::Main) continue;
        const DerivedConstants c = derive_constants(p, reg);
        const oracle::Constants o = oracle::main_constants(p);
        CHECK(c.gamma1 == doctest::Approx(o.gamma1).epsilon(1e-10));
        CHECK(c.w1 == doctest::Approx(o.w1).epsilon(1e-9));
        CHECK(c.w2 == doctest::Approx(o.w2).epsilon(1e-9));
        CHECK(c.N2 - c.N1 ==
              doctest::Approx(2.0 * p.beta * (1 - p.rho * p.rho) * p.sigma1 * p.sigma1 * p.sigma2 * p.sigma2)
                  .epsilon(1e-10));
        CHECK(c.gamma1 > 0.0);
        CHECK(c.gamma1 < 1.0);
        CHECK(c.gamma2_minus < 0.0);
        CHECK(c.gamma2_plus > 0.0);
        CHECK(c.gamma3_minus < c.gamma4_minus);
        CHECK(c.gamma4_minus < 0.0);
        CHECK(c.gamma3_plus > 0.0);
        ++checked;
    }
    CHECK(checked > 500);
}

TEST_CASE("orientation normalization") {
    const auto f2 = fixtures::fig2();
    auto [same, o] = normalize_orientation(f2);
    CHECK_FALSE(o.lines_swapped);
    CHECK_FALSE(o.weight_flipped);
    CHECK(same.mu1 == f2.mu1);

    auto [back, o2] = normalize_orientation(fixtures::mirrored(f2));
    CHECK(o2.lines_swapped);
    CHECK(o2.weight_flipped);
    CHECK(back.mu1 == f2.mu1);
    CHECK(back.sigma2 == f2.sigma2);
    CHECK(back.a == doctest::Approx(f2.a).epsilon(1e-15));
    CHECK(back.cbar1 == f2.cbar1);

    auto half = f2;
    half.a = 0.5;
    CHECK_FALSE(normalize_orientation(half).second.weight_flipped);
}

TEST_CASE("derive_constants refuses a Main tag on a zero pivot") {
    // rho equal to the Sharpe ratio classifies as full reinsurance; forcing
    // the Main formulas there divides by zero.
    auto p = fixtures::fig2();
    p.rho = 0.75;  // mu2*sigma1 - rho*mu1*sigma2 = 3 - 3
    CorrelationRegime forced;
    forced.tag = RegimeTag::Main;
    forced.n = classify_regime(p).n;
    CHECK_THROWS_AS(derive_constants(p, forced), DegenerateRegime);
}
