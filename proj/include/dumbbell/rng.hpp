#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace dumbbell {

// Counter-based random stream: each output is a stateless hash of
// (key, counter), so a replica's stream depends only on (master seed,
// replica id) and is reproducible independently of thread scheduling.
// The mix is the SplitMix64 finalizer applied to key ^ phi64*counter.
class CounterRng {
  public:
    CounterRng(std::uint64_t key, std::uint64_t counter = 0)
        : key_(key), counter_(counter) {}

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Derives an independent stream for one replica.
    static CounterRng for_replica(std::uint64_t master_seed,
                                  std::uint64_t replica_id) {
        std::uint64_t k = mix(master_seed + 0x9E3779B97F4A7C15ULL);
        k = mix(k ^ mix(replica_id + 0xD1B54A32D192ED03ULL));
        return CounterRng(k);
    }

    std::uint64_t next_u64() {
        return mix(key_ ^ (0x9E3779B97F4A7C15ULL * ++counter_));
    }

    // Uniform on (0, 1]; never returns 0, safe under log().
    double next_uniform() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Box-Muller pair of independent standard normals.
    void next_normal_pair(double& n1, double& n2) {
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        n1 = r * std::cos(a);
        n2 = r * std::sin(a);
    }

    double next_normal() {
        double n1, n2;
        next_normal_pair(n1, n2);
        return n1;
    }

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace dumbbell
