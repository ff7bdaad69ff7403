#pragma once

#include <cstdint>
#include <initializer_list>

#include "sis/block.hpp"
#include "sis/defaults.hpp"

namespace sis {

// Deterministic, platform-independent sampling. All randomness flows from a
// single 64-bit seed through derive_seed(), so identical (seed, inputs) runs
// produce byte-identical traces. Sub-streams are derived per purpose tag,
// dilation level, and block index; no global state.

std::uint64_t splitmix64_step(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

class Rng {
public:
    explicit Rng(std::uint64_t seed);
    std::uint64_t next_u64();
    double uniform01();                      // [0, 1), 53-bit resolution
    double uniform(double lo, double hi);    // [lo, hi)

private:
    std::uint64_t s_[4];
};

// Probe parameters shared by all measure-ratio estimators.
struct DensityProbe {
    int j_max = defaults::probe_jmax_1d;
    std::size_t samples_per_level = defaults::probe_samples;
    std::uint64_t seed = defaults::probe_seed;
    double epsilon = defaults::probe_epsilon;
    int window = defaults::probe_window;
    double box_radius = defaults::probe_box_radius;

    static DensityProbe defaults_for(int dim) {
        DensityProbe p;
        p.j_max = (dim <= 1) ? defaults::probe_jmax_1d : defaults::probe_jmax_nd;
        return p;
    }
};

// Uniform samples from the open Euclidean ball of radius r (rejection from
// the bounding cube; d = 1 needs no rejection).
Block sample_ball(int dim, double r, std::size_t n, std::uint64_t seed);

// Uniform samples from the cube [-radius, radius]^d.
Block sample_box(int dim, double radius, std::size_t n, std::uint64_t seed);

// Purpose tags for sub-seed derivation.
namespace seedtag {
inline constexpr std::uint64_t ball = 0x11;
inline constexpr std::uint64_t box = 0x12;
inline constexpr std::uint64_t density = 0x21;
inline constexpr std::uint64_t approx_cont = 0x22;
inline constexpr std::uint64_t locally_nonzero = 0x23;
inline constexpr std::uint64_t absorbing = 0x24;
inline constexpr std::uint64_t invariant = 0x25;
inline constexpr std::uint64_t subsequence = 0x26;
inline constexpr std::uint64_t c2 = 0x32;
inline constexpr std::uint64_t c3 = 0x33;
inline constexpr std::uint64_t c4 = 0x34;
inline constexpr std::uint64_t c5 = 0x35;
inline constexpr std::uint64_t c6 = 0x36;
inline constexpr std::uint64_t c7 = 0x37;
inline constexpr std::uint64_t c8 = 0x38;
inline constexpr std::uint64_t filter = 0x41;
inline constexpr std::uint64_t refinable = 0x42;
inline constexpr std::uint64_t hypothesis = 0x43;
inline constexpr std::uint64_t calderon = 0x51;
inline constexpr std::uint64_t semiorth = 0x52;
inline constexpr std::uint64_t origin = 0x53;
inline constexpr std::uint64_t monotone = 0x54;
}  // namespace seedtag

}  // namespace sis
