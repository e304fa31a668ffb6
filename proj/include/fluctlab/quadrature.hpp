#pragma once
// 1-D quadrature helpers shared across the library: adaptive Gauss-Kronrod
// panels, fixed geometric grids for dt/t kernels, alternating-panel summation
// for oscillatory tails, and a couple of small numeric utilities.

#include <functional>
#include <vector>

namespace fluctlab {

using Fn1 = std::function<double(double)>;

struct QuadratureSpec {
    double rel_tol = 1e-9;
    double abs_tol = 1e-13;
    int max_panels = 4000;
    // geometric-grid controls for dt/t integrals; the window [t_lo, t_hi] is
    // deliberately generous, callers check the endpoint fractions below
    double t_lo = 1e-8;
    double t_hi = 1e8;
    int per_decade = 96;
};

struct QuadResult {
    double value = 0.0;
    double abs_err = 0.0;
    int panels = 0;
    bool converged = true;
};

// single Gauss7/Kronrod15 rule on [a,b]; *err is the |K15-G7| based estimate
void gk15(const Fn1& f, double a, double b, double* value, double* err);

// adaptive bisection until the per-panel error estimates meet the tolerances
QuadResult integrate(const Fn1& f, double a, double b, const QuadratureSpec& spec = {});

// adaptive integration of f over [a,b] with panels split on a log axis;
// requires 0 < a < b, intended for integrands spanning many scales
QuadResult integrate_log(const Fn1& f, double a, double b, const QuadratureSpec& spec = {});

struct GridIntegral {
    double value = 0.0;
    double head_fraction = 0.0;  // first-cell contribution relative to |value|
    double tail_fraction = 0.0;  // last-cell contribution relative to |value|
    bool truncation_suspect = false;
};

// trapezoid in log t of  int g(t) dt/t  over [spec.t_lo, spec.t_hi] on the
// shared geometric grid (spec.per_decade nodes per decade); the endpoint
// fractions expose mass pushed against either cutoff
GridIntegral dtt_integral(const Fn1& g, const QuadratureSpec& spec = {});

// sum of consecutive signed panels f over [a, a+h], [a+h, a+2h], ...; meant
// for integrands whose sign alternates panel to panel (trig x decreasing
// envelope), stops once a panel is negligible against the running total
double sum_alternating_panels(const Fn1& f, double a, double h,
                              int max_panels = 400, double rel_tol = 1e-10);

// bisection root of f on [lo, hi]; f(lo) and f(hi) must bracket a sign change
double find_root(const Fn1& f, double lo, double hi, double tol = 1e-12);

// tabulated function on a geometric x-grid, linear interpolation in log x;
// used to cache expensive kernels (e.g. Frullani integrals) before transforms
class LogGridFn {
  public:
    LogGridFn() = default;
    LogGridFn(double x_lo, double x_hi, int per_decade, const Fn1& f);
    double operator()(double x) const;  // clamps outside the tabulated range
    double x_lo() const { return x_lo_; }
    double x_hi() const { return x_hi_; }

  private:
    double x_lo_ = 1.0, x_hi_ = 1.0, du_ = 1.0;
    std::vector<double> vals_;
};

}  // namespace fluctlab
