#include <doctest.h>

#include <random>

#include "divctl/error.hpp"
#include "divctl/strategy.hpp"
#include "fixtures.hpp"

using namespace divctl;

TEST_CASE("figure 2 control table") {
    const SolvedPolicy s = solve(fixtures::fig2());
    const ControlDecision z = controls_at(s, 0.0);
    CHECK(z.theta1 == 1.0);
    CHECK(z.theta2 == 1.0);
    CHECK(z.c1 == 0.0);
    CHECK(z.c2 == 0.0);

    const ControlDecision low = controls_at(s, 0.3);
    CHECK(low.theta1 == doctest::Approx(1 - 0.3 / s.w0));
    CHECK(low.theta2 == doctest::Approx(1 - 0.3 / s.constants.w2));

    for (double x : {s.w0, 0.6, 1.0, 2.0, 10.0}) {
        const ControlDecision d = controls_at(s, x);
        CHECK(d.theta1 == 0.0);
        CHECK(d.theta2 == doctest::Approx(0.5909).epsilon(1e-4));
    }
    CHECK(controls_at(s, 0.6).c2 == 0.0);
    CHECK(controls_at(s, s.u1).c2 == 2.0);
    CHECK(controls_at(s, s.u1).c1 == 0.0);
    CHECK(controls_at(s, s.u2).c1 == 3.0);
    CHECK_THROWS_AS(controls_at(s, -0.1), DomainError);
}

TEST_CASE("figure 4 retention above u2") {
    const SolvedPolicy s = solve(fixtures::fig4());
    const ControlDecision d = controls_at(s, s.u2 + 1.0);
    CHECK(d.theta1 == doctest::Approx(0.0864).epsilon(1e-3));
    CHECK(d.theta2 == doctest::Approx(0.6263).epsilon(1e-3));
    for (double x = 0.01; x < 5.0; x += 0.01) {
        const ControlDecision c = controls_at(s, x);
        REQUIRE(c.theta1 > 0.0);
        REQUIRE(c.theta2 > 0.0);
    }
}

TEST_CASE("reduced regime keeps the dormant line fully reinsured") {
    const SolvedPolicy s = solve(fixtures::fig5());
    for (double x = 0.0; x < 5.0; x += 0.05) CHECK(controls_at(s, x).theta1 == 1.0);
    CHECK(controls_at(s, 0.2).theta2 == doctest::Approx(1 - 0.2 / s.w0));
    CHECK(controls_at(s, 1.0).theta2 == 0.0);
}

// With the configured labels (mu1 = 2, sigma1 = 1) line 1 has the smaller w and
// stops reinsuring first, so theta1* <= theta2*. The "theta1* >= theta2*"
// reading holds once the risk labels are exchanged; switching points agree.
TEST_CASE("negative correlation: the line with the smaller w cedes less") {
    const SolvedPolicy s = solve(fixtures::fig6());
    ModelParams m = fixtures::fig6();
    std::swap(m.mu1, m.mu2);
    std::swap(m.sigma1, m.sigma2);
    const SolvedPolicy r = solve(m);
    CHECK(r.w0 == doctest::Approx(s.w0).epsilon(1e-12));
    CHECK(r.u2 == doctest::Approx(s.u2).epsilon(1e-12));
    for (double x = 0.0; x <= 4.0; x += 0.01) {
        const ControlDecision d = controls_at(s, x);
        REQUIRE(d.theta1 <= d.theta2);
        const ControlDecision e = controls_at(r, x);
        REQUIRE(e.theta1 >= e.theta2);
    }
}

TEST_CASE("mirrored labels swap the controls") {
    const SolvedPolicy a = solve(fixtures::fig2());
    const SolvedPolicy b = solve(fixtures::mirrored(fixtures::fig2()));
    for (double x : {0.2, 0.6, 1.0, 3.0}) {
        const ControlDecision da = controls_at(a, x), db = controls_at(b, x);
        CHECK(db.theta1 == doctest::Approx(da.theta2).epsilon(1e-12));
        CHECK(db.theta2 == doctest::Approx(da.theta1).epsilon(1e-12));
        CHECK(db.c1 == da.c2);
        CHECK(db.c2 == da.c1);
    }
}

TEST_CASE("region examples") {
    const SolvedPolicy s = solve(fixtures::fig2());
    CHECK(region_of(s, 0.0, 0.0) == Region::A7);
    CHECK(region_of(s, 0.1, 2.0) == Region::A1);
    CHECK(region_of(s, 1.0, 0.2) == Region::A4);
}

TEST_CASE("regions partition the quadrant") {
    for (const ModelParams& m : {fixtures::fig2(), fixtures::fig3(), fixtures::fig4()}) {
        const SolvedPolicy s = solve(m);
        const double d0 = s.deltas.d0, d1 = s.deltas.d1, d2 = s.deltas.d2;
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(0.0, 2.5 * d2);
        for (int i = 0; i < 100000; ++i) {
            const double x1 = i % 17 == 0 ? 0.0 : u(rng);
            const double x2 = i % 13 == 0 ? 0.0 : u(rng);
            const double t = x1 + x2;
            const bool in[7] = {
                x1 >= 0 && x2 > d2,
                x1 > 0 && x2 >= 0 && x2 <= d2 && t > d2,
                x1 >= 0 && x2 > d1 && x2 <= d2 && t <= d2,
                x1 > 0 && x2 >= 0 && x2 <= d1 && t > d1 && t <= d2,
                x1 >= 0 && x2 > d0 && x2 <= d1 && t <= d1,
                x1 > 0 && x2 >= 0 && x2 <= d0 && t > d0 && t <= d1,
                x1 >= 0 && x2 >= 0 && x2 <= d0 && t <= d0,
            };
            int hits = 0;
            for (bool b : in) hits += b;
            REQUIRE(hits == 1);
            REQUIRE(in[static_cast<int>(region_of(s, x1, x2)) - 1]);
        }
    }
}

TEST_CASE("injection keeps the aggregate and refills the hit line") {
    const SolvedPolicy s = solve(fixtures::fig2());
    // Line 1 hits with plenty on line 2: keep u2 on line 2.
    const InjectionAction a = injection_on_hit(s, 0.0, 3.0, 1);
    CHECK(a.kind == InjectionKind::TransferToLine1);
    CHECK(a.x2_after == s.deltas.d2);
    CHECK(a.x1_after + a.x2_after == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(a.amount == doctest::Approx(3.0 - s.deltas.d2));
    // Line 2 hits: moves to the line-1 axis.
    const InjectionAction b = injection_on_hit(s, 1.0, -0.001, 2);
    CHECK(b.kind == InjectionKind::TransferToLine2);
    CHECK(b.x1_after + b.x2_after == doctest::Approx(0.999).epsilon(1e-15));
    CHECK(b.x2_after > 0.0);
    // Small aggregate: the literal rule ends the problem, the rescue rule splits.
    const double small = 0.5 * s.deltas.d0;
    CHECK(injection_on_hit(s, 0.0, small, 1).kind == InjectionKind::Ruin);
    const InjectionAction r = injection_on_hit(s, 0.0, small, 1, OriginRule::Rescue);
    CHECK(r.kind == InjectionKind::TransferToLine1);
    CHECK(r.x1_after == doctest::Approx(0.5 * small));
    CHECK(injection_on_hit(s, 0.0, 0.0, 1, OriginRule::Rescue).kind == InjectionKind::Ruin);
    CHECK_THROWS_AS(injection_on_hit(s, 0.5, 0.5, 1), PreconditionError);
}
