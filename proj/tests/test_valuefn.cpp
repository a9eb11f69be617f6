#include <doctest.h>

#include <cmath>
#include <random>

#include "divctl/error.hpp"
#include "divctl/valuefn.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace divctl;

TEST_CASE("origin and domain") {
    const SolvedPolicy s = solve(fixtures::fig2());
    const ValueTriple v = eval(s, 0.0);
    CHECK(v.g == 0.0);
    CHECK(std::isinf(v.g_prime));
    CHECK(v.g_prime > 0);
    CHECK(std::isinf(v.g_double_prime));
    CHECK(v.g_double_prime < 0);
    CHECK_THROWS_AS(eval(s, -1e-9), DomainError);
}

TEST_CASE("defining slopes at the dividend thresholds") {
    for (const ModelParams& m : {fixtures::fig2(), fixtures::fig3(), fixtures::fig4(), fixtures::fig5(), fixtures::fig6()}) {
        const SolvedPolicy s = solve(m);
        const double a = s.effective.a;
        CHECK(std::abs(eval(s, s.u1).g_prime - (1 - a)) <= 1e-8);
        CHECK(std::abs(eval(s, s.u2).g_prime - a) <= 1e-8);
    }
}

TEST_CASE("analytic tail") {
    for (const ModelParams& m : {fixtures::fig2(), fixtures::fig4()}) {
        const SolvedPolicy s = solve(m);
        const double gt = tail_exponent(s);
        const double x = s.u2 + 20.0 / std::abs(gt);
        const double vl = s.constants.v_limit;
        CHECK(std::abs(eval(s, x).g - vl) <= s.effective.a / std::abs(gt) * std::exp(-20.0) * (1 + 1e-9));
        const double y = s.u2 + 1.7;
        CHECK(eval(s, y).g == doctest::Approx(vl + s.effective.a / gt * std::exp(gt * (y - s.u2))).epsilon(1e-14));
    }
}

TEST_CASE("integral branch agrees with quadrature of its integrand") {
    for (const ModelParams& m : {fixtures::fig3(), fixtures::fig4()}) {
        const SolvedPolicy s = solve(m);
        CHECK(integral_branch(s, s.u1) == doctest::Approx(0.0).epsilon(1e-15));
        const double cap = chi_cap(s);
        double prev = 0.0;
        for (int k = 1; k <= 8; ++k) {
            const double x = s.u1 + (cap - s.u1) * k / 8.0;
            const double q = oracle::integrate([&](double y) { return std::exp(-chi_inverse(y, s)); }, s.u1, x);
            const double c = integral_branch(s, x);
            CHECK(std::abs(c - q) <= 1e-8);
            CHECK(c > prev);
            prev = c;
        }
    }
}

TEST_CASE("shape on a dense grid") {
    for (const ModelParams& m : {fixtures::fig2(), fixtures::fig3(), fixtures::fig4(), fixtures::fig5(), fixtures::fig6()}) {
        const SolvedPolicy s = solve(m);
        const double top = s.u2 + 30.0 / std::abs(tail_exponent(s));
        for (int k = 1; k <= 2000; ++k) {
            const ValueTriple v = eval(s, top * k / 2000.0);
            REQUIRE(v.g_prime > 0.0);
            REQUIRE(v.g_double_prime < 0.0);
            REQUIRE(v.g < s.constants.v_limit);
        }
    }
}

TEST_CASE("finite differences match analytic derivatives away from switch points") {
    for (const ModelParams& m : {fixtures::fig2(), fixtures::fig3(), fixtures::fig4()}) {
        const SolvedPolicy s = solve(m);
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(0.1, s.u2 + 3.0);
        auto g = [&](double x) { return eval(s, x).g; };
        int done = 0;
        while (done < 200) {
            const double x = u(rng);
            bool near = false;
            for (double sp : {s.w0, s.u1, s.u2}) near = near || std::abs(x - sp) < 1e-2;
            if (near) continue;
            const ValueTriple v = eval(s, x);
            CHECK(oracle::central_first(g, x, 1e-5) == doctest::Approx(v.g_prime).epsilon(1e-6));
            CHECK(oracle::central_second(g, x, 1e-3) == doctest::Approx(v.g_double_prime).epsilon(1e-4));
            ++done;
        }
    }
}

TEST_CASE("branch layout and convention") {
    const SolvedPolicy t1 = solve(fixtures::fig2());
    CHECK(branch_at(t1, 0.1) == Branch::Power);
    CHECK(branch_at(t1, t1.w0) == Branch::TwoExp);
    CHECK(branch_at(t1, t1.u1) == Branch::Retained);
    CHECK(branch_at(t1, t1.u2) == Branch::Tail);
    const SolvedPolicy t2 = solve(fixtures::fig3());
    CHECK(branch_at(t2, t2.u1) == Branch::Integral);
    CHECK(branch_at(t2, t2.w0) == Branch::Retained);
    const SolvedPolicy t3 = solve(fixtures::fig4());
    CHECK(branch_at(t3, 0.5 * (t3.u1 + t3.u2)) == Branch::Integral);
    CHECK(branch_at(t3, t3.u2) == Branch::Tail);
}
