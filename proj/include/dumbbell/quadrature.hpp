#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace dumbbell {

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-13;
    // e-foldings of the exponential envelope before the semi-infinite
    // integrals are truncated; 40 puts the tail below 4e-18 of envelope scale.
    double envelope_cutoff = 40.0;
    int max_subdivisions = 4000;
};

class QuadratureBudgetExceeded : public std::runtime_error {
  public:
    explicit QuadratureBudgetExceeded(const char* what)
        : std::runtime_error(what) {}
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // absolute error estimate
};

namespace detail {

// Gauss 7 / Kronrod 15 on [-1, 1].  Kronrod nodes (nonnegative half),
// Kronrod weights, and Gauss weights for the embedded rule.
inline constexpr double kKronrodNodes[8] = {
    0.000000000000000, 0.207784955007898, 0.405845151377397,
    0.586087235467691, 0.741531185599394, 0.864864423359769,
    0.949107912342759, 0.991455371120813};
inline constexpr double kKronrodWeights[8] = {
    0.209482141084728, 0.204432940075298, 0.190350578064785,
    0.169004726639267, 0.140653259715525, 0.104790010322250,
    0.063092092629979, 0.022935322010529};
inline constexpr double kGaussWeights[8] = {
    0.417959183673469, 0.0, 0.381830050505119, 0.0,
    0.279705391489277, 0.0, 0.129484966168870, 0.0};

template <class F>
QuadResult gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double f0 = f(c);
    double kron = kKronrodWeights[0] * f0;
    double gauss = kGaussWeights[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = h * kKronrodNodes[i];
        const double fi = f(c + dx) + f(c - dx);
        kron += kKronrodWeights[i] * fi;
        gauss += kGaussWeights[i] * fi;
    }
    kron *= h;
    gauss *= h;
    // Standard QUADPACK-style error inflation of the Gauss/Kronrod gap.
    double err = std::abs(kron - gauss);
    err = 200.0 * err * std::sqrt(200.0 * err > 1.0 ? 1.0 : 200.0 * err);
    return {kron, err};
}

}  // namespace detail

// Globally adaptive G7K15 on [a, b].  Panels start no wider than
// max_panel_width (resolves oscillation periods); the worst panel is bisected
// until the summed error meets max(abs_tol, rel_tol*|integral|) or the panel
// budget is exhausted.
template <class F>
QuadResult integrate_adaptive(const F& f, double a, double b,
                              const QuadratureConfig& cfg,
                              double max_panel_width = 0.0) {
    struct Panel {
        double a, b, value, error;
    };
    std::vector<Panel> panels;

    double width = b - a;
    if (width <= 0.0) return {0.0, 0.0};
    int n0 = 1;
    if (max_panel_width > 0.0 && max_panel_width < width) {
        n0 = static_cast<int>(std::ceil(width / max_panel_width));
        if (n0 > cfg.max_subdivisions) n0 = cfg.max_subdivisions;
    }
    panels.reserve(static_cast<std::size_t>(n0) + 16);
    for (int i = 0; i < n0; ++i) {
        const double pa = a + width * i / n0;
        const double pb = a + width * (i + 1) / n0;
        const QuadResult r = detail::gk15(f, pa, pb);
        panels.push_back({pa, pb, r.value, r.error});
    }

    for (;;) {
        double total = 0.0, err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total += panels[i].value;
            err += panels[i].error;
            if (panels[i].error > panels[worst].error) worst = i;
        }
        const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
        if (err <= tol) return {total, err};
        if (static_cast<int>(panels.size()) >= cfg.max_subdivisions) {
            throw QuadratureBudgetExceeded(
                "quadrature panel budget exceeded before tolerance");
        }
        Panel p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        const QuadResult left = detail::gk15(f, p.a, mid);
        const QuadResult right = detail::gk15(f, mid, p.b);
        panels[worst] = {p.a, mid, left.value, left.error};
        panels.push_back({mid, p.b, right.value, right.error});
    }
}

}  // namespace dumbbell
