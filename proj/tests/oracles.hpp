#pragma once

// Independent reference computations used only by the tests. Nothing here
// touches the finite element path.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace coreshell::oracle {

/// u(outer) for u'' = -(lambda / b) u on (0, outer), u(0) = 0, u'(0) = 1,
/// with u and b u' continuous at the interface. Classical RK4 per subdomain.
inline double shoot(double lambda, double b1, double b2, double interface, double outer, int steps = 20000) {
    auto integrate = [&](double x0, double x1, double b, double& u, double& du) {
        const double h = (x1 - x0) / steps;
        const double k = lambda / b;
        for (int i = 0; i < steps; ++i) {
            const double k1u = du, k1v = -k * u;
            const double k2u = du + 0.5 * h * k1v, k2v = -k * (u + 0.5 * h * k1u);
            const double k3u = du + 0.5 * h * k2v, k3v = -k * (u + 0.5 * h * k2u);
            const double k4u = du + h * k3v, k4v = -k * (u + h * k3u);
            u += h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
            du += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        }
    };
    double u = 0.0, du = 1.0;
    integrate(0.0, interface, b1, u, du);
    du *= b1 / b2;  // flux continuity
    integrate(interface, outer, b2, u, du);
    return u;
}

/// Smallest lambda with shoot(lambda) = 0, by scanning for the first sign
/// change and bisecting.
inline double first_eigenvalue_by_shooting(double b1, double b2, double interface, double outer) {
    double lo = 1e-6;
    const double f_lo = shoot(lo, b1, b2, interface, outer);
    double hi = lo;
    double step = 0.5;
    for (;;) {
        hi = lo + step;
        if (shoot(hi, b1, b2, interface, outer) * f_lo < 0.0) break;
        lo = hi;
        if (lo > 1e6) throw std::runtime_error("no sign change found");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (shoot(mid, b1, b2, interface, outer) * f_lo > 0.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// -u'' = 1 on (0, 1), u(0) = u(1) = 0.
inline double poisson_unit(double x) { return 0.5 * x * (1.0 - x); }

/// Composite Simpson rule, used to integrate weights independently of the
/// Gauss rules in the assembly.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels = 2000) {
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

}  // namespace coreshell::oracle
