#include <doctest.h>

#include <cmath>
#include <vector>

#include "divctl/rng.hpp"

using namespace divctl;

TEST_CASE("streams are reproducible and distinct") {
    Stream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    const std::uint64_t va = a.next();
    CHECK(va == b.next());
    CHECK(va != c.next());
    CHECK(va != d.next());
}

TEST_CASE("uniforms stay inside the open unit interval") {
    Stream s(1, 0);
    double lo = 1.0, hi = 0.0, sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    CHECK(std::abs(sum / n - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST_CASE("ziggurat normals have the right moments and tails") {
    Stream s(2024, 3);
    const int n = 4000000;
    double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
    int beyond2 = 0, beyond35 = 0;
    for (int i = 0; i < n; ++i) {
        const double z = standard_normal(s);
        m1 += z;
        m2 += z * z;
        m3 += z * z * z;
        m4 += z * z * z * z;
        beyond2 += std::abs(z) > 2.0;
        beyond35 += std::abs(z) > 3.5;
    }
    m1 /= n;
    m2 /= n;
    m3 /= n;
    m4 /= n;
    CHECK(std::abs(m1) < 4.0 / std::sqrt(n));
    CHECK(std::abs(m2 - 1.0) < 4.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(m3) < 4.0 * std::sqrt(15.0 / n));
    CHECK(std::abs(m4 - 3.0) < 4.0 * std::sqrt(96.0 / n));
    // P(|Z| > 2) = 0.0455003, P(|Z| > 3.5) = 4.6525e-4 (the second lives in the tail sampler).
    const double p2 = 0.0455002638963584, p35 = 4.65258e-4;
    CHECK(std::abs(beyond2 - n * p2) < 4.0 * std::sqrt(n * p2));
    CHECK(std::abs(beyond35 - n * p35) < 4.0 * std::sqrt(n * p35));
}

TEST_CASE("normal CDF at a few points") {
    Stream s(9, 9);
    const int n = 2000000;
    const double cuts[] = {-1.5, -0.5, 0.0, 0.7, 1.9};
    int below[5] = {};
    for (int i = 0; i < n; ++i) {
        const double z = standard_normal(s);
        for (int k = 0; k < 5; ++k) below[k] += z < cuts[k];
    }
    for (int k = 0; k < 5; ++k) {
        const double p = 0.5 * std::erfc(-cuts[k] / std::sqrt(2.0));
        CHECK(std::abs(below[k] - n * p) < 4.0 * std::sqrt(n * p * (1 - p)));
    }
}
