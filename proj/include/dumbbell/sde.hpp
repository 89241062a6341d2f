#pragma once

#include <cstdint>
#include <vector>

#include "dumbbell/model.hpp"
#include "dumbbell/rng.hpp"

namespace dumbbell {

enum class Scheme {
    euler_maruyama,  // plain explicit Euler, the reference protocol
    splitting        // exact OU decay for the spring, Euler for the forcing
};

struct SimConfig {
    double dt = 1e-3;
    double t_final = 1e5;
    std::uint64_t seed = 0;
    int replicas = 64;
    // Sample thinning interval in steps; 0 records final state only.
    long record_every = 0;
    Scheme scheme = Scheme::euler_maruyama;
};

struct Trajectory {
    DumbbellState initial;
    DumbbellState final_state;
    std::vector<DumbbellState> samples;  // empty unless record_every > 0
    std::uint64_t replica_id = 0;
    std::uint64_t seed_used = 0;  // derived stream key
};

// Throws std::invalid_argument; the dt*lambda < 0.5 gate applies to the
// explicit Euler scheme only.
void validate(const SimConfig& c, const DumbbellParams& p);

// Stationary initialization: V0 = 0, U0 ~ N(0, sigma^2/(2 lambda)).
DumbbellState init_state(const DumbbellParams& p, CounterRng& rng);

// One Euler-Maruyama step of the dumbbell equations.
DumbbellState step(const DumbbellState& s, const Forcing& f,
                   const DumbbellParams& p, double dt, CounterRng& rng);

// Runs one replica.  Deterministic function of (c.seed, replica_id); the wave
// phases are redrawn per replica from the replica's stream.
Trajectory simulate(const Forcing& f, const DumbbellParams& p,
                    const SimConfig& c, std::uint64_t replica_id);

// Replica ensemble, OpenMP-parallel over replicas.  Results are stored by
// replica index, so output is independent of thread count.
std::vector<Trajectory> run_ensemble(const Forcing& f, const DumbbellParams& p,
                                     const SimConfig& c);

// Serial reference for the parallel ensemble; must match it bitwise.
std::vector<Trajectory> run_ensemble_serial(const Forcing& f,
                                            const DumbbellParams& p,
                                            const SimConfig& c);

}  // namespace dumbbell
