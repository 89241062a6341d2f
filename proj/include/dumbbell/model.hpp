#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace dumbbell {

// One sinusoidal forcing component u*cos(k*x - omega*t + phi).
struct WaveParams {
    double u = 0.0;      // amplitude (velocity)
    double k = 0.0;      // wavenumber (1/length)
    double omega = 0.0;  // angular frequency (1/time)
    double phi = 0.0;    // phase, normalized into [0, 2*pi)
};

// Full forcing field: epsilon * (sum_i u_i cos(k_i x - omega_i t + phi_i) - u0).
struct Forcing {
    std::vector<WaveParams> waves;
    double u0 = 0.0;       // constant offset (velocity)
    double epsilon = 0.0;  // dimensionless wave strength, >= 0
};

struct DumbbellParams {
    double lambda = 1.0;  // spring constant / inverse relaxation time, > 0
    double sigma = 1.0;   // noise scale, > 0

    double centre_diffusivity() const { return 0.5 * sigma * sigma; }
    double particle_diffusivity() const { return sigma * sigma; }
    // Stationary variance of the separation coordinate U.
    double stationary_separation_variance() const {
        return sigma * sigma / (2.0 * lambda);
    }
};

struct DumbbellState {
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;

    double u() const { return 0.5 * (x - y); }  // separation coordinate
    double v() const { return 0.5 * (x + y); }  // centre coordinate

    static DumbbellState from_uv(double u, double v, double t) {
        return DumbbellState{v + u, v - u, t};
    }
};

// Maps any finite angle into [0, 2*pi).
double normalize_phase(double phi);

// Evaluates the full forcing (epsilon factor included).
double eval_forcing(const Forcing& f, double x, double t);

// Spatial derivative of eval_forcing; the constant offset contributes zero.
double eval_forcing_gradient(const Forcing& f, double x, double t);

// Throws std::invalid_argument naming the offending field.  Phases are
// normalized in place into [0, 2*pi).
void validate(DumbbellParams& p, Forcing& f);

}  // namespace dumbbell
