#ifndef QOSC_QHYPER_HPP
#define QOSC_QHYPER_HPP

#include "qosc/qcore.hpp"

namespace qosc {

// Basic hypergeometric series in the convention where
//   1phi1(a; c; b, z) = sum_n (a;b)_n / ((b;b)_n (c;b)_n) (-1)^n b^{n(n-1)/2} z^n
//   2phi1(a1,a2; c; b, z) = sum_n (a1;b)_n (a2;b)_n / ((b;b)_n (c;b)_n) z^n
// with (0;b)_n = 1 when c = 0.  The 1phi1 convention is pinned by the
// three-term relation (c - a z) f(bz) + (z - c - b) f(z) + b f(z/b) = 0,
// certified by phi11_recurrence_residual.

struct Phi11Spec {
    Complex a;
    Complex c;
    double base;  // in (0,1)
    Complex z;
};

struct Phi21Spec {
    Complex a1;
    Complex a2;
    Complex c;    // c = 0 permitted
    double base;  // in (0,1)
    Complex z;    // |z| < 1 required
};

// Entire in z; stops after three consecutive terms below rel * |partial sum|.
Complex phi11(const Phi11Spec& spec, const Tolerance& tol);

// Convergent for |z| < 1; refuses |z| >= 0.99 (callers switch representation).
Complex phi21(const Phi21Spec& spec, const Tolerance& tol);

// | (c - a z) f(bz) + (-(c+b) + z) f(z) + b f(z/b) |  for f = 1phi1(a;c;b,.)
double phi11_recurrence_residual(const Phi11Spec& spec, const Tolerance& tol);

}  // namespace qosc

#endif
