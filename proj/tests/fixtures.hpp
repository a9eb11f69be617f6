#pragma once

// Parameter sets of the five reference figures.

#include "divctl/params.hpp"

namespace fixtures {

inline divctl::ModelParams fig2() {
    divctl::ModelParams p;
    p.mu1 = 4.0;
    p.mu2 = 2.0;
    p.sigma1 = 1.5;
    p.sigma2 = 1.0;
    p.rho = 0.6;
    p.beta = 0.5;
    p.a = 0.3;
    p.cbar1 = 3.0;
    p.cbar2 = 2.0;
    return p;
}

inline divctl::ModelParams fig3() {
    auto p = fig2();
    p.cbar2 = 1.0;
    return p;
}

inline divctl::ModelParams fig4() {
    auto p = fig2();
    p.cbar1 = 1.5;
    p.cbar2 = 1.0;
    return p;
}

inline divctl::ModelParams fig5() {
    auto p = fig2();
    p.mu1 = 1.5;
    return p;
}

inline divctl::ModelParams fig6() {
    auto p = fig2();
    p.mu1 = 2.0;
    p.mu2 = 4.0;
    p.sigma1 = 1.0;
    p.sigma2 = 1.5;
    p.rho = -0.6;
    return p;
}

// Lines and weights exchanged: the same economic problem in other labels.
inline divctl::ModelParams mirrored(divctl::ModelParams p) {
    std::swap(p.mu1, p.mu2);
    std::swap(p.sigma1, p.sigma2);
    std::swap(p.cbar1, p.cbar2);
    p.a = 1.0 - p.a;
    return p;
}

}  // namespace fixtures
