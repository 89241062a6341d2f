#include "dumbbell/model.hpp"

#include <numbers>

namespace dumbbell {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Large |arguments| to cos lose significance; reduce first.  Positions can
// grow without bound on long runs, so this guard matters for extreme
// parameter choices.
constexpr double kPhaseReduceThreshold = 1073741824.0;  // 2^30

inline double wave_phase(const WaveParams& w, double x, double t) {
    double arg = w.k * x - w.omega * t + w.phi;
    if (std::abs(arg) > kPhaseReduceThreshold) {
        arg = std::remainder(arg, kTwoPi);
    }
    return arg;
}

void require_finite(double v, const char* field) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(field) + " must be finite");
    }
}

}  // namespace

double normalize_phase(double phi) {
    double r = std::fmod(phi, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r;
}

double eval_forcing(const Forcing& f, double x, double t) {
    double sum = -f.u0;
    for (const WaveParams& w : f.waves) {
        sum += w.u * std::cos(wave_phase(w, x, t));
    }
    return f.epsilon * sum;
}

double eval_forcing_gradient(const Forcing& f, double x, double t) {
    double sum = 0.0;
    for (const WaveParams& w : f.waves) {
        sum -= w.u * w.k * std::sin(wave_phase(w, x, t));
    }
    return f.epsilon * sum;
}

void validate(DumbbellParams& p, Forcing& f) {
    require_finite(p.lambda, "lambda");
    require_finite(p.sigma, "sigma");
    require_finite(f.epsilon, "epsilon");
    require_finite(f.u0, "u0");
    if (p.lambda <= 0.0) throw std::invalid_argument("lambda must be positive");
    if (p.sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
    if (f.epsilon < 0.0) throw std::invalid_argument("epsilon must be nonnegative");
    for (WaveParams& w : f.waves) {
        require_finite(w.u, "wave u");
        require_finite(w.k, "wave k");
        require_finite(w.omega, "wave omega");
        require_finite(w.phi, "wave phi");
        if (w.u < 0.0) throw std::invalid_argument("wave u must be nonnegative");
        w.phi = normalize_phase(w.phi);
    }
}

}  // namespace dumbbell
