#include "fluctlab/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace fluctlab {

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
    std::uint64_t s = seed ^ 0xa5a5a5a5a5a5a5a5ULL;
    splitmix64(s);
    for (std::uint64_t id : ids) {
        s ^= id + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
        splitmix64(s);
    }
    return splitmix64(s);
}

double RngStream::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(u01()));
    const double t = 2.0 * M_PI * u01();
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
}

long long RngStream::poisson(double mean) {
    if (mean < 0.0) throw std::invalid_argument("poisson: negative mean");
    if (mean == 0.0) return 0;
    std::poisson_distribution<long long> dist(mean);
    return dist(eng_);
}

StableSampler::StableSampler(double a, double c_, double d) : alpha(a), c(c_), delta(d) {
    if (!(alpha > 0.0) || alpha > 2.0) throw std::invalid_argument("StableSampler: alpha");
    if (!(c > 0.0)) throw std::invalid_argument("StableSampler: scale");
    if (delta < -1.0 || delta > 1.0) throw std::invalid_argument("StableSampler: delta");
    if (alpha == 1.0 && delta != 0.0)
        throw std::invalid_argument("StableSampler: alpha=1 with skew is not strictly stable "
                                    "under this parameterization");
    if (alpha != 1.0 && alpha != 2.0) {
        const double tg = std::tan(M_PI * alpha / 2.0);
        theta0_ = std::atan(delta * tg) / alpha;
        prefactor_ = std::pow(1.0 + delta * delta * tg * tg, 1.0 / (2.0 * alpha));
    }
}

double StableSampler::draw(RngStream& rng, double t) const {
    if (alpha == 2.0) {
        // psi = -c l^2, i.e. N(0, 2 c t)
        return std::sqrt(2.0 * c * t) * rng.normal();
    }
    if (alpha == 1.0) {
        // symmetric Cauchy: psi = -c|l|, increment law c t * standard Cauchy
        return c * t * std::tan(M_PI * (rng.u01() - 0.5));
    }
    const double u = M_PI * (rng.u01() - 0.5);
    const double w = rng.exponential();
    const double s = alpha * (u + theta0_);
    const double x = prefactor_ * std::sin(s) / std::pow(std::cos(u), 1.0 / alpha) *
                     std::pow(std::cos(u - s) / w, (1.0 - alpha) / alpha);
    return std::pow(c * t, 1.0 / alpha) * x;
}

}  // namespace fluctlab
