#include "fluctlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fluctlab {

namespace {

// Kronrod 15 abscissae/weights on [-1,1] (positive half), Gauss 7 embedded
const double xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
const double wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
const double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, err;
};

}  // namespace

void gk15(const Fn1& f, double a, double b, double* value, double* err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * xgk[i]);
        fv[14 - i] = f(c + h * xgk[i]);
    }
    fv[7] = f(c);
    double resk = wgk[7] * fv[7];
    double resg = wg[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        resk += wgk[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1)  // xgk[1], xgk[3], xgk[5] are the Gauss nodes
            resg += wg[i / 2] * (fv[i] + fv[14 - i]);
    }
    *value = resk * h;
    const double diff = (resk - resg) * h;
    *err = std::abs(diff);
}

QuadResult integrate(const Fn1& f, double a, double b, const QuadratureSpec& spec) {
    QuadResult out;
    if (a == b) return out;
    std::vector<Panel> stack;
    double v0, e0;
    gk15(f, a, b, &v0, &e0);
    stack.push_back({a, b, v0, e0});
    out.value = v0;
    out.abs_err = e0;
    out.panels = 1;
    while (out.abs_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value)) &&
           out.panels < spec.max_panels) {
        // split the worst panel
        size_t worst = 0;
        for (size_t i = 1; i < stack.size(); ++i)
            if (stack[i].err > stack[worst].err) worst = i;
        Panel p = stack[worst];
        stack.erase(stack.begin() + static_cast<long>(worst));
        const double m = 0.5 * (p.a + p.b);
        Panel l{p.a, m, 0, 0}, r{m, p.b, 0, 0};
        gk15(f, l.a, l.b, &l.value, &l.err);
        gk15(f, r.a, r.b, &r.value, &r.err);
        out.value += l.value + r.value - p.value;
        out.abs_err += l.err + r.err - p.err;
        stack.push_back(l);
        stack.push_back(r);
        ++out.panels;
    }
    out.converged =
        out.abs_err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value)) * 4.0 + 1e-300;
    return out;
}

QuadResult integrate_log(const Fn1& f, double a, double b, const QuadratureSpec& spec) {
    if (!(a > 0.0) || !(b > a)) throw std::invalid_argument("integrate_log: need 0 < a < b");
    auto g = [&f](double u) {
        const double x = std::exp(u);
        return f(x) * x;
    };
    return integrate(g, std::log(a), std::log(b), spec);
}

GridIntegral dtt_integral(const Fn1& g, const QuadratureSpec& spec) {
    GridIntegral out;
    const double u_lo = std::log(spec.t_lo);
    const double u_hi = std::log(spec.t_hi);
    const int n = std::max(2, static_cast<int>(std::ceil(
                                  (u_hi - u_lo) / std::log(10.0) * spec.per_decade)));
    const double h = (u_hi - u_lo) / n;
    // int g(t) dt/t = int g(e^u) du, trapezoid on the fixed grid
    double acc = 0.0;
    double first = 0.0, last = 0.0, prev = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double gi = g(std::exp(u_lo + h * i));
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        acc += w * gi;
        if (i == 0) first = 0.5 * gi;
        if (i == n) last = 0.5 * gi;
        prev = gi;
    }
    (void)prev;
    out.value = acc * h;
    const double scale = std::abs(out.value) + 1e-300;
    out.head_fraction = std::abs(first * h) / scale;
    out.tail_fraction = std::abs(last * h) / scale;
    out.truncation_suspect = out.head_fraction > 1e-3 || out.tail_fraction > 1e-3;
    return out;
}

double sum_alternating_panels(const Fn1& f, double a, double h, int max_panels,
                              double rel_tol) {
    // partial sums of sign-alternating panels converge slowly for power-law
    // envelopes; iterated averaging of the trailing partial sums (Euler
    // acceleration) recovers fast convergence without more panels
    std::vector<double> tail_sums;
    double acc = 0.0;
    double panel = 0.0, err = 0.0;
    const int keep = 14;
    for (int k = 0; k < max_panels; ++k) {
        gk15(f, a + k * h, a + (k + 1) * h, &panel, &err);
        acc += panel;
        tail_sums.push_back(acc);
        if (static_cast<int>(tail_sums.size()) > keep)
            tail_sums.erase(tail_sums.begin());
        if (k > 2 && std::abs(panel) < rel_tol * std::abs(acc) + 1e-300) break;
    }
    while (tail_sums.size() > 1) {
        for (size_t i = 0; i + 1 < tail_sums.size(); ++i)
            tail_sums[i] = 0.5 * (tail_sums[i] + tail_sums[i + 1]);
        tail_sums.pop_back();
    }
    return tail_sums.empty() ? acc : tail_sums.front();
}

double find_root(const Fn1& f, double lo, double hi, double tol) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw std::invalid_argument("find_root: endpoints do not bracket a root");
    for (int it = 0; it < 500 && (hi - lo) > tol * (1.0 + std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

LogGridFn::LogGridFn(double x_lo, double x_hi, int per_decade, const Fn1& f)
    : x_lo_(x_lo), x_hi_(x_hi) {
    if (!(x_lo > 0.0) || !(x_hi > x_lo) || per_decade < 1)
        throw std::invalid_argument("LogGridFn: bad grid");
    const double u_lo = std::log(x_lo), u_hi = std::log(x_hi);
    const int n = std::max(2, static_cast<int>(std::ceil(
                                  (u_hi - u_lo) / std::log(10.0) * per_decade)));
    du_ = (u_hi - u_lo) / n;
    vals_.resize(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) vals_[static_cast<size_t>(i)] = f(std::exp(u_lo + du_ * i));
}

double LogGridFn::operator()(double x) const {
    const double u = std::log(std::min(std::max(x, x_lo_), x_hi_));
    const double s = (u - std::log(x_lo_)) / du_;
    const auto i = static_cast<size_t>(std::min(std::max(0.0, std::floor(s)),
                                                static_cast<double>(vals_.size() - 2)));
    const double w = s - static_cast<double>(i);
    return vals_[i] * (1.0 - w) + vals_[i + 1] * w;
}

}  // namespace fluctlab
