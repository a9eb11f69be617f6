#pragma once

#include <optional>
#include <string>
#include <utility>

namespace divctl {

// Gross premium data. Only the products kappa_i * tilde_mu_i enter the model.
struct GrossBlock {
    double tilde_mu1 = 0.0;
    double tilde_mu2 = 0.0;
    double kappa1 = 0.0;
    double kappa2 = 0.0;
};

struct ModelParams {
    double mu1 = 0.0;     // adjusted drift of line 1
    double mu2 = 0.0;
    double sigma1 = 0.0;  // volatility of line 1
    double sigma2 = 0.0;
    double rho = 0.0;     // correlation of the two Brownian drivers
    double beta = 0.0;    // discount rate
    double a = 0.0;       // weight of line-1 dividends in the objective
    double cbar1 = 0.0;   // dividend rate caps
    double cbar2 = 0.0;
    std::optional<GrossBlock> gross;
};

enum class RegimeTag { Main, FullReinsuranceLine1, FullReinsuranceLine2 };

const char* to_string(RegimeTag tag);

// The N constants that drive every closed form. In the reduced regimes they
// are the single-line values of whichever line keeps its risk.
struct EffectiveN {
    double N1 = 0.0;
    double N2 = 0.0;
    double N3 = 0.0;
    double N4 = 0.0;
};

struct CorrelationRegime {
    RegimeTag tag = RegimeTag::Main;
    EffectiveN n;
};

// How the caller's labels map onto the normalized problem.
//
// Because only the aggregate surplus matters, the risk side (mu, sigma) and
// the dividend side (a, cbar) can be relabelled independently:
//   weight_flipped  -> a became 1-a and cbar1/cbar2 were exchanged, so the
//                      caller's dividend line 1 is internal dividend line 2;
//   lines_swapped   -> (mu, sigma) of the two lines were exchanged, so the
//                      caller's risk line 1 is internal risk line 2.
struct Orientation {
    bool lines_swapped = false;
    bool weight_flipped = false;
};

struct DerivedConstants {
    double N1 = 0.0, N2 = 0.0, N3 = 0.0, N4 = 0.0;
    double gamma1 = 0.0;
    double w1 = 0.0;
    double w2 = 0.0;  // +inf when the second line is fully reinsured
    double M = 0.0;
    double gamma2_plus = 0.0, gamma2_minus = 0.0;
    double gamma3_plus = 0.0, gamma3_minus = 0.0;
    double gamma4_minus = 0.0;
    double gamma3_tail = 0.0;  // tail exponent when no zero-reinsurance point exists
    double v_limit = 0.0;
    double threshold = 0.0;  // N3*N2/(2*N1): total dividend cap separating T3 from T1/T2
};

// Throws RangeError or InconsistentGross; returns the input untouched otherwise.
ModelParams validate(const ModelParams& p);

CorrelationRegime classify_regime(const ModelParams& p);

// Returns parameters with a <= 1/2 and (Main) w1 <= w2, or with the active
// line moved to internal line 1 in a reduced regime.
std::pair<ModelParams, Orientation> normalize_orientation(const ModelParams& p);

// p must already be normalized; regime must describe p itself.
DerivedConstants derive_constants(const ModelParams& p, const CorrelationRegime& regime);

// Relative Sharpe ratio (mu1/mu2)/(sigma1/sigma2).
inline double sharpe_ratio(const ModelParams& p) {
    return (p.mu1 / p.mu2) / (p.sigma1 / p.sigma2);
}

}  // namespace divctl
