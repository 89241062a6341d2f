#pragma once

#include <span>
#include <string>
#include <vector>

#include "dumbbell/asymptotics.hpp"
#include "dumbbell/sde.hpp"

namespace dumbbell {

struct DriftEstimate {
    double mean_drift = 0.0;
    double std_error = 0.0;
    int replicas = 0;
    double t_final = 0.0;
    std::string method;  // "monte-carlo" | "asymptotic"
};

struct SweepPoint {
    double lambda = 0.0;
    DriftEstimate mc;
    double asym_drift = 0.0;
    double quad_err = 0.0;
    double z = 0.0;
    bool ok = false;
    std::string error;  // set when the point failed
};

struct SweepResult {
    std::vector<SweepPoint> points;
};

struct Verdict {
    double z = 0.0;
    bool pass = false;
};

struct SpeciesRow {
    DumbbellParams params;
    DriftEstimate mc;
    double asym_drift = 0.0;
    double quad_err = 0.0;
    double z = 0.0;
    bool sign_resolved = false;  // |mc drift| > 3 SE
};

struct FanoutTable {
    std::vector<SpeciesRow> rows;
    bool signs_differ = false;    // predicted signs differ across species
    bool signs_resolved = false;  // every species resolved when signs differ
};

// Per-replica drift (v_final - v_initial)/t_final averaged across replicas.
// Throws on mismatched horizons or fewer than 2 trajectories.
DriftEstimate estimate_drift(std::span<const Trajectory> trajectories);

// z = (mc - predicted)/sqrt(SE^2 + quad_err^2); pass iff |z| <= 3.
Verdict compare(const DriftEstimate& mc, double predicted, double quad_err);

// Batch-means standard error of the drift over one recorded trajectory;
// cross-check for the replica-based estimator.
double batch_means_std_error(const Trajectory& traj, int n_batches);

// MC + asymptotics at every lambda of the grid; per-point failures are
// flagged rather than aborting the sweep.
SweepResult sweep_lambda(std::span<const double> grid, const Forcing& f,
                         const DumbbellParams& base, const SimConfig& c,
                         const QuadratureConfig& q);

// Per-species drift table under a shared forcing; all species must share
// sigma (sorting purely by flexibility).
FanoutTable fanout_experiment(std::span<const DumbbellParams> species,
                              const Forcing& f, const SimConfig& c,
                              const QuadratureConfig& q);

}  // namespace dumbbell
