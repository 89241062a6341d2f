#include "dumbbell/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dumbbell {

namespace {

constexpr double kPi = std::numbers::pi;

// Below/above these ratios the lambda-dependent boundary layer in the inner
// integral is numerically negligible and the closed-form limit is exact to
// working precision.
constexpr double kWeakSpringRatio = 1e-6;
constexpr double kStrongSpringRatio = 1e6;

double oscillation_panel_width(double omega) {
    return omega != 0.0 ? kPi / std::abs(omega)
                        : std::numeric_limits<double>::infinity();
}

bool trivially_zero(const WaveParams& w) {
    return w.u == 0.0 || w.k == 0.0 || w.omega == 0.0;
}

}  // namespace

double msd_x(double beta, const DumbbellParams& p) {
    // sigma^2 (beta + (1 - e^{-lambda beta})/lambda), expm1 for small lambda*beta
    return p.sigma * p.sigma *
           (beta - std::expm1(-p.lambda * beta) / p.lambda);
}

double msd_xy(double tau, const DumbbellParams& p) {
    return p.sigma * p.sigma *
           (tau + (1.0 + std::exp(-p.lambda * tau)) / p.lambda);
}

double kernel_same_particle(double beta, const WaveParams& w,
                            const DumbbellParams& p) {
    return 0.5 * w.u * w.u * w.k * std::sin(w.omega * beta) *
           std::exp(-0.5 * w.k * w.k * msd_x(beta, p));
}

double kernel_cross_particle(double tau, const WaveParams& w,
                             const DumbbellParams& p) {
    return 0.5 * w.u * w.u * w.k * std::sin(w.omega * tau) *
           std::exp(-0.5 * w.k * w.k * msd_xy(tau, p));
}

DriftTerm m_of_beta(double beta, const WaveParams& w, const DumbbellParams& p,
                    const QuadratureConfig& q) {
    if (trivially_zero(w)) return {0.0, 0.0};

    const double lambda = p.lambda;
    const double ks2 = w.k * w.k * p.sigma * p.sigma;
    const double z = ks2 / (2.0 * lambda);

    const double first = std::sin(w.omega * beta) *
                         std::exp(-0.5 * w.k * w.k * msd_x(beta, p));

    // Inner integrand in overflow-safe form: the textbook expression
    //   exp(-k^2 sigma^2 / (2 lambda)) * sinh(z e^{-lambda tau})
    // is rewritten exactly as (exp(z(q-1)) - exp(-z(q+1)))/2 with
    // q = e^{-lambda tau} in (0,1], so both exponents are <= 0.  z(q-1) is
    // formed from expm1 to keep it accurate when lambda is tiny and z huge.
    const auto integrand = [&](double alpha) {
        const double tau = alpha + beta;
        const double zqm1 = z * std::expm1(-lambda * tau);
        const double zqp1 = z * (std::exp(-lambda * tau) + 1.0);
        const double sinh_part = 0.5 * (std::exp(zqm1) - std::exp(-zqp1));
        return std::exp(-lambda * alpha - 0.5 * ks2 * tau) *
               std::sin(w.omega * tau) * sinh_part;
    };

    const double alpha_max = q.envelope_cutoff / (lambda + 0.5 * ks2);
    QuadratureConfig inner_cfg = q;
    inner_cfg.rel_tol = 0.1 * q.rel_tol;  // inner tightened 10x
    inner_cfg.abs_tol = 0.1 * q.abs_tol;
    const QuadResult inner = integrate_adaptive(
        integrand, 0.0, alpha_max, inner_cfg, oscillation_panel_width(w.omega));

    const double scale = 0.5 * w.u * w.u * w.k;
    return {scale * (first - lambda * inner.value),
            std::abs(scale) * lambda * inner.error};
}

DriftTerm drift_order2_single_wave(const WaveParams& w, const DumbbellParams& p,
                                   const QuadratureConfig& q) {
    if (trivially_zero(w)) return {0.0, 0.0};

    const double ks2 = w.k * w.k * p.sigma * p.sigma;
    const double rate_scale = std::max(std::abs(w.omega), ks2);
    if (p.lambda < kWeakSpringRatio * rate_scale) {
        return {drift_weak_spring(w, p), 0.0};
    }
    if (p.lambda > kStrongSpringRatio * rate_scale) {
        return {drift_strong_spring(w, p), 0.0};
    }

    double max_inner_error = 0.0;
    const auto integrand = [&](double beta) {
        const DriftTerm m = m_of_beta(beta, w, p, q);
        max_inner_error = std::max(max_inner_error, m.error);
        return m.value;
    };

    const double beta_max = 2.0 * q.envelope_cutoff / ks2;
    const QuadResult outer = integrate_adaptive(
        integrand, 0.0, beta_max, q, oscillation_panel_width(w.omega));

    return {outer.value, outer.error + beta_max * max_inner_error};
}

double drift_strong_spring(const WaveParams& w, const DumbbellParams& p) {
    const double k2s2 = w.k * w.k * p.sigma * p.sigma;
    return 2.0 * w.u * w.u * w.k * w.omega /
           (k2s2 * k2s2 + 4.0 * w.omega * w.omega);
}

double drift_weak_spring(const WaveParams& w, const DumbbellParams& p) {
    const double k2s2 = w.k * w.k * p.sigma * p.sigma;
    return 0.5 * w.u * w.u * w.k * w.omega /
           (k2s2 * k2s2 + w.omega * w.omega);
}

DriftPrediction predict_total_drift(const Forcing& f, const DumbbellParams& p,
                                    const QuadratureConfig& q) {
    for (std::size_t i = 0; i < f.waves.size(); ++i) {
        for (std::size_t j = i + 1; j < f.waves.size(); ++j) {
            if (f.waves[i].k == f.waves[j].k &&
                f.waves[i].omega == f.waves[j].omega) {
                throw std::invalid_argument(
                    "waves with identical (k, omega) are not additive; "
                    "merge their amplitudes first");
            }
        }
    }

    DriftPrediction out;
    out.offset_order1 = -f.u0;
    out.per_wave_order2.reserve(f.waves.size());
    double err = 0.0;
    double sum2 = 0.0;
    for (const WaveParams& w : f.waves) {
        const DriftTerm t = drift_order2_single_wave(w, p, q);
        out.per_wave_order2.push_back(t.value);
        sum2 += t.value;
        err += t.error;
    }
    const double eps = f.epsilon;
    out.total_drift = eps * out.offset_order1 + eps * eps * sum2;
    out.quadrature_error_estimate = eps * eps * err;
    return out;
}

namespace {

OffsetInterval dip_interval(const std::vector<double>& v2, double eps) {
    OffsetInterval out;
    if (v2.size() < 3 || eps <= 0.0) return out;
    double interior_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < v2.size(); ++i) {
        interior_min = std::min(interior_min, v2[i]);
    }
    const double edge_min = std::min(v2.front(), v2.back());
    if (interior_min < edge_min) {
        out.lo = eps * interior_min;
        out.hi = eps * edge_min;
        out.is_empty = false;
    }
    return out;
}

}  // namespace

OffsetInterval find_sign_reversal_offset(std::span<const DumbbellParams> grid,
                                         const Forcing& f,
                                         const QuadratureConfig& q) {
    if (f.waves.size() != 1) {
        throw std::invalid_argument(
            "sign-reversal search requires exactly one wave");
    }
    std::vector<double> v2;
    v2.reserve(grid.size());
    for (const DumbbellParams& p : grid) {
        v2.push_back(drift_order2_single_wave(f.waves.front(), p, q).value);
    }
    OffsetInterval iv = dip_interval(v2, f.epsilon);
    if (!iv.is_empty) return iv;
    // Mirrored case (k < 0): the dip is a bump in negated drifts.
    for (double& v : v2) v = -v;
    OffsetInterval neg = dip_interval(v2, f.epsilon);
    if (!neg.is_empty) {
        iv.lo = -neg.hi;
        iv.hi = -neg.lo;
        iv.is_empty = false;
    }
    return iv;
}

}  // namespace dumbbell
