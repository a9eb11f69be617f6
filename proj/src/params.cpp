#include "divctl/params.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "divctl/error.hpp"

namespace divctl {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw RangeError(name, "must be finite, got " + fmt(v));
}

void require_positive(double v, const char* name) {
    require_finite(v, name);
    if (!(v > 0.0)) throw RangeError(name, "must be > 0, got " + fmt(v));
}

void require_nonnegative(double v, const char* name) {
    require_finite(v, name);
    if (v < 0.0) throw RangeError(name, "must be >= 0, got " + fmt(v));
}

void check_gross(double mu, double tilde, double kappa, const char* name) {
    const double product = kappa * tilde;
    const double scale = std::max(std::abs(mu), std::abs(product));
    if (std::abs(mu - product) > 1e-12 * scale) {
        throw InconsistentGross(std::string(name) + " = " + fmt(mu) +
                                " but kappa * tilde_mu = " + fmt(product));
    }
}

void swap_risk(ModelParams& p) {
    std::swap(p.mu1, p.mu2);
    std::swap(p.sigma1, p.sigma2);
    if (p.gross) {
        std::swap(p.gross->tilde_mu1, p.gross->tilde_mu2);
        std::swap(p.gross->kappa1, p.gross->kappa2);
    }
}

}  // namespace

const char* to_string(RegimeTag tag) {
    switch (tag) {
        case RegimeTag::Main: return "Main";
        case RegimeTag::FullReinsuranceLine1: return "FullReinsuranceLine1";
        case RegimeTag::FullReinsuranceLine2: return "FullReinsuranceLine2";
    }
    return "?";
}

ModelParams validate(const ModelParams& p) {
    require_positive(p.mu1, "mu1");
    require_positive(p.mu2, "mu2");
    require_positive(p.sigma1, "sigma1");
    require_positive(p.sigma2, "sigma2");
    require_finite(p.rho, "rho");
    if (!(p.rho > -1.0 && p.rho < 1.0)) throw RangeError("rho", "must lie in (-1, 1), got " + fmt(p.rho));
    require_positive(p.beta, "beta");
    require_finite(p.a, "a");
    if (p.a < 0.0 || p.a > 1.0) throw RangeError("a", "must lie in [0, 1], got " + fmt(p.a));
    require_positive(p.cbar1, "cbar1");
    require_positive(p.cbar2, "cbar2");
    if (p.gross) {
        const GrossBlock& g = *p.gross;
        require_nonnegative(g.tilde_mu1, "tilde_mu1");
        require_nonnegative(g.tilde_mu2, "tilde_mu2");
        require_nonnegative(g.kappa1, "kappa1");
        require_nonnegative(g.kappa2, "kappa2");
        check_gross(p.mu1, g.tilde_mu1, g.kappa1, "mu1");
        check_gross(p.mu2, g.tilde_mu2, g.kappa2, "mu2");
    }
    return p;
}

CorrelationRegime classify_regime(const ModelParams& p) {
    const double r = sharpe_ratio(p);
    CorrelationRegime out;
    if (p.rho > 0.0 && p.rho >= r) {
        out.tag = RegimeTag::FullReinsuranceLine1;
        out.n = {p.mu2 * p.mu2, p.mu2 * p.mu2 + 2.0 * p.beta * p.sigma2 * p.sigma2, p.mu2,
                 p.sigma2 * p.sigma2};
        return out;
    }
    if (p.rho > 0.0 && r >= 1.0 / p.rho) {
        out.tag = RegimeTag::FullReinsuranceLine2;
        out.n = {p.mu1 * p.mu1, p.mu1 * p.mu1 + 2.0 * p.beta * p.sigma1 * p.sigma1, p.mu1,
                 p.sigma1 * p.sigma1};
        return out;
    }
    out.tag = RegimeTag::Main;
    const double s1 = p.sigma1, s2 = p.sigma2, m1 = p.mu1, m2 = p.mu2, rho = p.rho;
    const double d1 = m1 * s2 - rho * m2 * s1;
    const double diff = m1 * s2 - m2 * s1;
    out.n.N1 = diff * diff + 2.0 * (1.0 - rho) * m1 * m2 * s1 * s2;
    out.n.N2 = out.n.N1 + 2.0 * p.beta * (1.0 - rho * rho) * s1 * s1 * s2 * s2;
    if (d1 != 0.0) {
        out.n.N3 = out.n.N1 / (s2 * d1);
        out.n.N4 = (1.0 - rho * rho) * s1 * s1 * s2 / d1 * out.n.N3;
    } else {
        out.n.N3 = out.n.N4 = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

std::pair<ModelParams, Orientation> normalize_orientation(const ModelParams& p) {
    ModelParams q = p;
    Orientation o;
    if (q.a > 0.5) {
        q.a = 1.0 - q.a;
        std::swap(q.cbar1, q.cbar2);
        o.weight_flipped = true;
    }
    const CorrelationRegime regime = classify_regime(p);
    bool swap = false;
    switch (regime.tag) {
        case RegimeTag::Main: {
            // w1 > w2  <=>  sigma1 * d2 > sigma2 * d1, both d's positive here.
            const double d1 = p.mu1 * p.sigma2 - p.rho * p.mu2 * p.sigma1;
            const double d2 = p.mu2 * p.sigma1 - p.rho * p.mu1 * p.sigma2;
            swap = d1 > 0.0 && d2 > 0.0 && p.sigma1 * d2 > p.sigma2 * d1;
            break;
        }
        case RegimeTag::FullReinsuranceLine1:
            swap = true;  // the line that keeps risk becomes internal line 1
            break;
        case RegimeTag::FullReinsuranceLine2:
            break;
    }
    if (swap) {
        swap_risk(q);
        o.lines_swapped = true;
    }
    return {q, o};
}

DerivedConstants derive_constants(const ModelParams& p, const CorrelationRegime& regime) {
    DerivedConstants c;
    const EffectiveN& n = regime.n;
    if (regime.tag == RegimeTag::Main) {
        const double d1 = p.mu1 * p.sigma2 - p.rho * p.mu2 * p.sigma1;
        const double d2 = p.mu2 * p.sigma1 - p.rho * p.mu1 * p.sigma2;
        if (d1 == 0.0 || d2 == 0.0) {
            throw DegenerateRegime("mu1*sigma2 - rho*mu2*sigma1 or mu2*sigma1 - rho*mu1*sigma2 is zero");
        }
    }
    c.N1 = n.N1;
    c.N2 = n.N2;
    c.N3 = n.N3;
    c.N4 = n.N4;
    c.gamma1 = 1.0 - c.N1 / c.N2;
    c.w1 = (1.0 - c.gamma1) * c.N4 / c.N3;
    if (regime.tag == RegimeTag::Main) {
        const double d2 = p.mu2 * p.sigma1 - p.rho * p.mu1 * p.sigma2;
        c.w2 = (1.0 - c.gamma1) * (1.0 - p.rho * p.rho) * p.sigma1 * p.sigma2 * p.sigma2 / d2;
    } else {
        c.w2 = std::numeric_limits<double>::infinity();
    }
    c.M = c.N1 * p.beta / (c.N2 - c.N1);

    const double b = p.beta, N3 = c.N3, N4 = c.N4;
    auto root = [&](double shift, double sign) {
        const double m = N3 - shift;
        return (-m + sign * std::sqrt(m * m + 2.0 * b * N4)) / N4;
    };
    c.gamma2_plus = root(0.0, +1.0);
    c.gamma2_minus = root(0.0, -1.0);
    c.gamma3_plus = root(p.cbar2, +1.0);
    c.gamma3_minus = root(p.cbar2, -1.0);
    c.gamma4_minus = root(p.cbar1 + p.cbar2, -1.0);
    c.gamma3_tail = -c.N2 * b / ((p.cbar1 + p.cbar2) * (c.N2 - c.N1));
    c.v_limit = (p.a * p.cbar1 + (1.0 - p.a) * p.cbar2) / b;
    c.threshold = c.N3 * c.N2 / (2.0 * c.N1);
    return c;
}

}  // namespace divctl
