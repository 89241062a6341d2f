#pragma once

#include <span>
#include <vector>

#include "dumbbell/model.hpp"
#include "dumbbell/quadrature.hpp"

namespace dumbbell {

// Leading-order drift prediction for a full forcing:
// total = -epsilon*u0 + epsilon^2 * sum_i per_wave_order2[i].
struct DriftPrediction {
    double total_drift = 0.0;
    std::vector<double> per_wave_order2;
    double offset_order1 = 0.0;  // -u0 contribution, per epsilon
    double quadrature_error_estimate = 0.0;
};

struct DriftTerm {
    double value = 0.0;
    double error = 0.0;
};

// E[(X0_t - X0_{t-beta})^2] = sigma^2 (beta + (1 - e^{-lambda beta})/lambda).
double msd_x(double beta, const DumbbellParams& p);

// E[(X0_t - Y0_{t-tau})^2] = sigma^2 (tau + (1 + e^{-lambda tau})/lambda).
double msd_xy(double tau, const DumbbellParams& p);

// E[f'(X0_t,t) f(X0_{t-beta},t-beta)] = (u^2 k / 2) sin(omega beta)
//   * exp(-k^2 msd_x(beta)/2).
double kernel_same_particle(double beta, const WaveParams& w,
                            const DumbbellParams& p);

// K(tau): same with the cross-particle displacement variance.
double kernel_cross_particle(double tau, const WaveParams& w,
                             const DumbbellParams& p);

// The drift-density kernel M(beta); value plus the inner-quadrature error.
DriftTerm m_of_beta(double beta, const WaveParams& w, const DumbbellParams& p,
                    const QuadratureConfig& q);

// V^(2) = integral of M(beta) over [0, inf); drift per epsilon^2.
DriftTerm drift_order2_single_wave(const WaveParams& w, const DumbbellParams& p,
                                   const QuadratureConfig& q);

// Closed-form limits: strong spring (particles coalesce) and weak spring.
double drift_strong_spring(const WaveParams& w, const DumbbellParams& p);
double drift_weak_spring(const WaveParams& w, const DumbbellParams& p);

// Multiwave + offset predictor.  Requires pairwise distinct (k, omega);
// throws std::invalid_argument on duplicates.
DriftPrediction predict_total_drift(const Forcing& f, const DumbbellParams& p,
                                    const QuadratureConfig& q);

struct OffsetInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool is_empty = true;
    double midpoint() const { return 0.5 * (lo + hi); }
};

// Interval of u0 for which the drift sign differs between intermediate and
// extreme lambda entries of the grid (empty when V2 has no interior dip).
OffsetInterval find_sign_reversal_offset(std::span<const DumbbellParams> grid,
                                         const Forcing& f,
                                         const QuadratureConfig& q);

}  // namespace dumbbell
