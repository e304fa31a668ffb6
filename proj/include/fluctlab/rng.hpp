#pragma once
// Deterministic RNG substreams. Every stochastic routine takes an RngStream
// derived from (seed, path of ids); replica blocks own disjoint substreams so
// results are independent of thread scheduling and worker count.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace fluctlab {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// fold a path of stream ids into a single 64-bit substream seed
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> ids);

class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : eng_(seed) {}
    RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> ids)
        : eng_(derive_seed(seed, ids)) {}

    double u01() {  // uniform on (0,1), excludes both endpoints
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
    }
    double uniform(double a, double b) { return a + (b - a) * u01(); }
    double exponential(double rate = 1.0) { return -std::log(u01()) / rate; }
    double normal();  // standard normal, Box-Muller pair cache
    long long poisson(double mean);

    std::mt19937_64& engine() { return eng_; }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// strictly stable increment sampler (Chambers-Mallows-Stuck) under the
// parameterization psi(l) = -c|l|^a (1 - i delta sgn(l) tan(pi a/2)), a != 1;
// for a = 1 only delta = 0 (symmetric Cauchy) is simulable here; a = 2 is
// Gaussian with variance 2c per unit time
struct StableSampler {
    double alpha = 2.0;
    double c = 1.0;
    double delta = 0.0;

    StableSampler(double a, double c_, double d);
    // one increment over time span t
    double draw(RngStream& rng, double t) const;

  private:
    double theta0_ = 0.0;    // arctan(delta tan(pi alpha/2)) / alpha
    double prefactor_ = 1.0; // (1 + delta^2 tan^2(pi alpha/2))^(1/(2 alpha))
};

}  // namespace fluctlab
