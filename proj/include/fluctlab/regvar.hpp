#pragma once
// Regular-variation index fitting at 0 or infinity, the difference-limit
// slope over log lambda, and the Abelian shift check tying a kernel function
// to its Mellin transform through Euler's constant.

#include <vector>

#include "fluctlab/quadrature.hpp"

namespace fluctlab {

enum class Direction { at_zero, at_infinity };

struct RvFit {
    double index = 0.0;
    double residual = 0.0;  // worst |log(f(lx)/f(x))/log l - index| on the fit decade
    bool ok = true;         // false on nonpositive values
    double decade_lo = 0.0; // chosen fit decade
    double decade_hi = 0.0;
};

// least-squares slope of log f against log x on one extreme decade of the
// geometric grid; among the three outermost decades the one with the smallest
// slow-variation residual wins
RvFit rv_index_fit(const Fn1& f, Direction dir, double x_lo, double x_hi,
                   int per_decade = 8, const std::vector<double>& lambda_set = {2.0, 4.0, 8.0});

struct DiffLimit {
    double beta = 0.0;
    double max_residual = 0.0;          // worst per-lambda deviation from beta*log(lambda)
    bool converged = true;              // per-lambda limits stopped drifting along probes
    std::vector<double> per_lambda;     // estimated lim G(lambda x) - G(x)
};

// slope of lim_x [G(lambda x) - G(x)] over log lambda; the limit per lambda is
// read at the most extreme probe, with the drift across probes reported
DiffLimit difference_limit(const Fn1& G, const std::vector<double>& lambda_set,
                           Direction dir, const std::vector<double>& probes,
                           double converge_tol = 0.05);

// max over probes of |Ghat(th) - G(th) - beta * gamma|, standard-sign Euler
// constant; for kernel/transform pairs the difference tends to beta * gamma
double abelian_shift_check(const Fn1& G, const Fn1& Ghat, double beta,
                           const std::vector<double>& probes);

}  // namespace fluctlab
