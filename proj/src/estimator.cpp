#include "dumbbell/estimator.hpp"

#include <cmath>
#include <stdexcept>

namespace dumbbell {

DriftEstimate estimate_drift(std::span<const Trajectory> trajectories) {
    if (trajectories.size() < 2) {
        throw std::invalid_argument("need at least 2 trajectories for a finite SE");
    }
    const double t_final = trajectories.front().final_state.t;
    // Fixed (index) reduction order: results are independent of how the
    // trajectories were produced.
    double sum = 0.0, sum_sq = 0.0;
    for (const Trajectory& tr : trajectories) {
        if (tr.final_state.t != t_final) {
            throw std::invalid_argument("trajectories have mismatched horizons");
        }
        const double d = (tr.final_state.v() - tr.initial.v()) / t_final;
        sum += d;
        sum_sq += d * d;
    }
    const double n = static_cast<double>(trajectories.size());
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    DriftEstimate est;
    est.mean_drift = mean;
    est.std_error = std::sqrt(var / n);
    est.replicas = static_cast<int>(trajectories.size());
    est.t_final = t_final;
    est.method = "monte-carlo";
    return est;
}

Verdict compare(const DriftEstimate& mc, double predicted, double quad_err) {
    if (!(mc.std_error > 0.0)) {
        throw std::invalid_argument("compare requires a positive standard error");
    }
    const double denom =
        std::sqrt(mc.std_error * mc.std_error + quad_err * quad_err);
    const double z = (mc.mean_drift - predicted) / denom;
    return {z, std::abs(z) <= 3.0};
}

double batch_means_std_error(const Trajectory& traj, int n_batches) {
    if (n_batches < 2) throw std::invalid_argument("need at least 2 batches");
    const auto& s = traj.samples;
    if (static_cast<int>(s.size()) < n_batches + 1) {
        throw std::invalid_argument("trajectory has too few samples for batching");
    }
    const std::size_t per = (s.size() - 1) / static_cast<std::size_t>(n_batches);
    double sum = 0.0, sum_sq = 0.0;
    for (int b = 0; b < n_batches; ++b) {
        const DumbbellState& a = s[static_cast<std::size_t>(b) * per];
        const DumbbellState& z = s[static_cast<std::size_t>(b + 1) * per];
        const double d = (z.v() - a.v()) / (z.t - a.t);
        sum += d;
        sum_sq += d * d;
    }
    const double n = n_batches;
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    return std::sqrt(var / n);
}

SweepResult sweep_lambda(std::span<const double> grid, const Forcing& f,
                         const DumbbellParams& base, const SimConfig& c,
                         const QuadratureConfig& q) {
    SweepResult out;
    out.points.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        SweepPoint pt;
        pt.lambda = grid[i];
        try {
            DumbbellParams p = base;
            p.lambda = grid[i];
            if (!(p.lambda > 0.0)) {
                throw std::invalid_argument("lambda must be positive");
            }
            validate(c, p);
            // Decorrelate the points while keeping the sweep reproducible.
            SimConfig cc = c;
            cc.seed = c.seed + 0x1000 * static_cast<std::uint64_t>(i);
            const DriftPrediction pred = predict_total_drift(f, p, q);
            const auto trajectories = run_ensemble(f, p, cc);
            pt.mc = estimate_drift(trajectories);
            pt.asym_drift = pred.total_drift;
            pt.quad_err = pred.quadrature_error_estimate;
            pt.z = compare(pt.mc, pt.asym_drift, pt.quad_err).z;
            pt.ok = true;
        } catch (const std::exception& e) {
            pt.error = e.what();
        }
        out.points.push_back(std::move(pt));
    }
    return out;
}

FanoutTable fanout_experiment(std::span<const DumbbellParams> species,
                              const Forcing& f, const SimConfig& c,
                              const QuadratureConfig& q) {
    if (species.empty()) throw std::invalid_argument("species list is empty");
    const double sigma = species.front().sigma;
    for (const DumbbellParams& p : species) {
        if (p.sigma != sigma) {
            throw std::invalid_argument(
                "fanout species must share sigma (same diffusivity)");
        }
    }

    FanoutTable out;
    out.rows.reserve(species.size());
    for (std::size_t i = 0; i < species.size(); ++i) {
        DumbbellParams p = species[i];
        validate(c, p);
        SimConfig cc = c;
        cc.seed = c.seed + 0x1000 * static_cast<std::uint64_t>(i);
        SpeciesRow row;
        row.params = p;
        const DriftPrediction pred = predict_total_drift(f, p, q);
        row.asym_drift = pred.total_drift;
        row.quad_err = pred.quadrature_error_estimate;
        const auto trajectories = run_ensemble(f, p, cc);
        row.mc = estimate_drift(trajectories);
        row.z = compare(row.mc, row.asym_drift, row.quad_err).z;
        row.sign_resolved =
            std::abs(row.mc.mean_drift) > 3.0 * row.mc.std_error;
        out.rows.push_back(std::move(row));
    }

    bool any_pos = false, any_neg = false;
    for (const SpeciesRow& r : out.rows) {
        (r.asym_drift > 0.0 ? any_pos : any_neg) = true;
    }
    out.signs_differ = any_pos && any_neg;
    if (out.signs_differ) {
        out.signs_resolved = true;
        for (const SpeciesRow& r : out.rows) {
            if (!r.sign_resolved) out.signs_resolved = false;
        }
    }
    return out;
}

}  // namespace dumbbell
