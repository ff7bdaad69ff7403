#include "sis/sampler.hpp"

namespace sis {

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}

std::uint64_t splitmix64_step(std::uint64_t x) {
    std::uint64_t z = x + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = splitmix64_step(base);
    for (std::uint64_t v : path) {
        s ^= splitmix64_step(v + 0x2545f4914f6cdd1dULL);
        s = splitmix64_step(s);
    }
    return s;
}

Rng::Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) {
        sm += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = sm;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        w = z ^ (z >> 31);
    }
    if (s_[0] == 0 && s_[1] == 0 && s_[2] == 0 && s_[3] == 0) s_[0] = 1;
}

// xoshiro256++
std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

Block sample_ball(int dim, double r, std::size_t n, std::uint64_t seed) {
    Block out(dim, n);
    Rng rng(derive_seed(seed, {seedtag::ball, static_cast<std::uint64_t>(dim)}));
    if (dim == 1) {
        double* xs = out.col(0);
        for (std::size_t i = 0; i < n; ++i) xs[i] = rng.uniform(-r, r);
        return out;
    }
    const double r2 = r * r;
    double p[kMaxDim];
    for (std::size_t i = 0; i < n; ++i) {
        for (;;) {
            double norm2 = 0.0;
            for (int k = 0; k < dim; ++k) {
                p[k] = rng.uniform(-r, r);
                norm2 += p[k] * p[k];
            }
            if (norm2 < r2) break;
        }
        for (int k = 0; k < dim; ++k) out.col(k)[i] = p[k];
    }
    return out;
}

Block sample_box(int dim, double radius, std::size_t n, std::uint64_t seed) {
    Block out(dim, n);
    Rng rng(derive_seed(seed, {seedtag::box, static_cast<std::uint64_t>(dim)}));
    for (std::size_t i = 0; i < n; ++i)
        for (int k = 0; k < dim; ++k) out.col(k)[i] = rng.uniform(-radius, radius);
    return out;
}

}  // namespace sis
