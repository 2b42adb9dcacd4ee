#include "dha/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dha {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// One quadrature node: abscissa, weight (Jacobian included), and the signed
// distances to the finite endpoints (+-inf when the endpoint is infinite).
struct Node {
    double x;
    double w;
    double dist_lo;  // x - lo, exact where it matters
    double dist_hi;  // x - hi (negative)
    bool valid;
};

// tanh-sinh: x = c + r*tanh((pi/2) sinh t) on a finite interval [lo, hi].
struct TanhSinh {
    double c, r, lo, hi;
    TanhSinh(double lo_, double hi_)
        : c(0.5 * (lo_ + hi_)), r(0.5 * (hi_ - lo_)), lo(lo_), hi(hi_) {}
    Node operator()(double t) const {
        const double s = 0.5 * kPi * std::sinh(t);
        const double e = std::exp(-2.0 * std::abs(s));
        const double one_m = 2.0 * e / (1.0 + e);       // 1 - |u|
        const double u = std::copysign(1.0 - one_m, s); // tanh(s)
        const double sech = 2.0 * std::exp(-std::abs(s)) / (1.0 + e);
        const double w = 0.5 * kPi * std::cosh(t) * sech * sech * r;
        double x = c + r * u;
        if (one_m == 0.0 || w == 0.0) return {0.0, 0.0, 0.0, 0.0, false};
        // keep the abscissa strictly interior; the exact offset is dnear
        if (x >= hi) x = std::nextafter(hi, lo);
        if (x <= lo) x = std::nextafter(lo, hi);
        // distances from the transform, immune to the c + r*u rounding
        const double dnear = r * one_m;
        if (s >= 0.0)
            return {x, w, hi - lo - dnear, -dnear, true};
        return {x, w, dnear, -(hi - lo - dnear), true};
    }
};

// exp-sinh: x = lo + exp((pi/2) sinh t) on [lo, inf), mirrored for (-inf, hi].
struct ExpSinh {
    double base;
    double sign;  // +1: [lo, inf), -1: (-inf, hi]
    Node operator()(double t) const {
        const double s = 0.5 * kPi * std::sinh(sign > 0 ? t : -t);
        if (s > 700.0) return {0.0, 0.0, 0.0, 0.0, false};  // overflow guard
        const double ex = std::exp(s);
        const double w = ex * 0.5 * kPi * std::cosh(t);
        if (ex == 0.0 || w == 0.0) return {0.0, 0.0, 0.0, 0.0, false};
        const double x = base + sign * ex;
        if (sign > 0) return {x, w, ex, kInf, true};
        return {x, w, -kInf, -ex, true};
    }
};

// sinh-sinh: x = sinh((pi/2) sinh t) on the whole real line.
struct SinhSinh {
    Node operator()(double t) const {
        const double s = 0.5 * kPi * std::sinh(t);
        if (std::abs(s) > 700.0) return {0.0, 0.0, 0.0, 0.0, false};
        const double x = std::sinh(s);
        const double w = std::cosh(s) * 0.5 * kPi * std::cosh(t);
        return {x, w, -kInf, kInf, true};
    }
};

using Fn2 = std::function<double(double, double)>;

struct LevelSum {
    double sum = 0.0;
    double comp = 0.0;  // Kahan compensation
    void add(double v) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

template <class Transform>
class DeIntegrator {
  public:
    DeIntegrator(const Fn2& fn, Transform tr, double endpoint_scale)
        : fn_(fn), tr_(tr), endpoint_scale_(endpoint_scale) {}

    QuadratureResult run(const QuadratureSpec& spec) {
        const double t_max = 6.8;
        LevelSum acc;
        // level 0, h = 1
        sample_direction(acc, 0.0, 1.0, t_max, +1.0);
        sample_direction(acc, -1.0, 1.0, t_max, -1.0);
        double prev = acc.sum;  // times h = 1
        double value = prev;
        double err = kInf;
        int level = 0;
        double h = 1.0;
        while (level < spec.max_levels) {
            ++level;
            h *= 0.5;
            // new nodes are the odd multiples of h
            sample_direction(acc, h, 2.0 * h, t_max, +1.0);
            sample_direction(acc, -h, 2.0 * h, t_max, -1.0);
            value = h * acc.sum;
            err = std::abs(value - prev);
            const double goal = std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
            if (level >= 2 && err <= goal) {
                err = std::max(err, 1e-15 * std::abs(value) + 1e-300);
                return {value, err, level};
            }
            prev = value;
        }
        throw QuadratureError("quadrature did not converge within max_levels (error estimate " +
                              std::to_string(err) + ")");
    }

  private:
    void sample_direction(LevelSum& acc, double t0, double step, double t_max, double dir) {
        int underflows = 0;
        for (double t = t0; std::abs(t) <= t_max; t += dir * step) {
            const Node n = tr_(t);
            if (!n.valid) {
                if (++underflows >= 2) break;
                continue;
            }
            const double d = std::abs(n.dist_lo) < std::abs(n.dist_hi) ? n.dist_lo : n.dist_hi;
            double fv = fn_(n.x, d);
            if (!std::isfinite(fv)) {
                // a blow-up glued to an endpoint is an integrable-singularity
                // artifact of one-argument evaluation; anything else is an error
                if (std::abs(d) <= 1e-12 * endpoint_scale_ || std::abs(n.x) >= 1e250) {
                    fv = 0.0;
                } else {
                    throw QuadratureError("integrand returned a non-finite value at x = " +
                                          std::to_string(n.x));
                }
            }
            const double contrib = n.w * fv;
            if (std::abs(contrib) < 1e-290) {
                if (++underflows >= 3) break;
            } else {
                underflows = 0;
            }
            acc.add(contrib);
        }
    }

    const Fn2& fn_;
    Transform tr_;
    double endpoint_scale_;
};

QuadratureResult integrate_impl(const Fn2& fn, double lo, double hi,
                                const QuadratureSpec& spec) {
    if (spec.rel_tol <= 0.0 || spec.rel_tol >= 1.0 || spec.abs_tol <= 0.0 ||
        spec.abs_tol >= 1.0 || spec.max_levels < 3)
        throw DomainError("invalid QuadratureSpec");
    if (std::isnan(lo) || std::isnan(hi)) throw DomainError("NaN integration bound");
    if (lo == hi) return {0.0, 0.0, 0};
    if (lo > hi) {
        QuadratureResult r = integrate_impl(fn, hi, lo, spec);
        r.value = -r.value;
        return r;
    }
    const bool lo_inf = std::isinf(lo);
    const bool hi_inf = std::isinf(hi);
    if (!lo_inf && !hi_inf) {
        DeIntegrator<TanhSinh> de(fn, TanhSinh(lo, hi), hi - lo);
        return de.run(spec);
    }
    if (!lo_inf) {
        DeIntegrator<ExpSinh> de(fn, ExpSinh{lo, +1.0}, 1.0 + std::abs(lo));
        return de.run(spec);
    }
    if (!hi_inf) {
        DeIntegrator<ExpSinh> de(fn, ExpSinh{hi, -1.0}, 1.0 + std::abs(hi));
        return de.run(spec);
    }
    DeIntegrator<SinhSinh> de(fn, SinhSinh{}, 1.0);
    return de.run(spec);
}

}  // namespace

QuadratureResult integrate(const std::function<double(double, double)>& fn,
                           double lo, double hi, const QuadratureSpec& spec) {
    return integrate_impl(fn, lo, hi, spec);
}

QuadratureResult integrate(const std::function<double(double)>& fn,
                           double lo, double hi, const QuadratureSpec& spec) {
    Fn2 wrapped = [&fn](double x, double) { return fn(x); };
    return integrate_impl(wrapped, lo, hi, spec);
}

double solve_root_bracketed(const std::function<double(double)>& fn,
                            double a, double b, const RootSpec& spec) {
    double fa = fn(a), fb = fn(b);
    if (std::isnan(fa) || std::isnan(fb)) throw NumericsError("root function returned NaN");
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw RootBracketError("solve_root_bracketed: no sign change on [a, b]");

    // Brent: inverse quadratic / secant with bisection fallback
    double c = a, fc = fa, d = b - a, e = d;
    for (int iter = 0; iter < spec.max_iter; ++iter) {
        if (fb * fc > 0.0) {
            c = a;
            fc = fa;
            e = d = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * spec.tol * (std::abs(b) + 1.0);
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : std::copysign(tol1, xm);
        fb = fn(b);
        if (std::isnan(fb)) throw NumericsError("root function returned NaN");
    }
    throw RootBracketError("solve_root_bracketed: max_iter exceeded");
}

double solve_root(const std::function<double(double)>& fn, double seed,
                  const RootSpec& spec) {
    if (spec.tol <= 0.0 || spec.max_iter < 10 || spec.bracket_growth <= 1.0)
        throw DomainError("invalid RootSpec");
    double f0 = fn(seed);
    if (std::isnan(f0)) throw NumericsError("root function returned NaN at seed");
    if (f0 == 0.0) return seed;

    const bool multiplicative = seed != 0.0;
    double lo = seed, hi = seed, flo = f0, fhi = f0;
    double step = 1.0;
    for (int iter = 0; iter < spec.max_iter; ++iter) {
        double next_hi, next_lo;
        if (multiplicative) {
            next_hi = seed > 0.0 ? hi * spec.bracket_growth : hi / spec.bracket_growth;
            next_lo = seed > 0.0 ? lo / spec.bracket_growth : lo * spec.bracket_growth;
        } else {
            next_hi = hi + step;
            next_lo = lo - step;
            step *= spec.bracket_growth;
        }
        double f = fn(next_hi);
        if (std::isnan(f)) throw NumericsError("root function returned NaN");
        if (f == 0.0) return next_hi;
        if (f * fhi < 0.0) return solve_root_bracketed(fn, hi, next_hi, spec);
        hi = next_hi;
        fhi = f;
        f = fn(next_lo);
        if (std::isnan(f)) throw NumericsError("root function returned NaN");
        if (f == 0.0) return next_lo;
        if (f * flo < 0.0) return solve_root_bracketed(fn, next_lo, lo, spec);
        lo = next_lo;
        flo = f;
    }
    throw RootBracketError("solve_root: no sign change found within max_iter expansions");
}

}  // namespace dha
