#ifndef QOSC_EIGENBASIS_HPP
#define QOSC_EIGENBASIS_HPP

#include "qosc/oscillator.hpp"
#include "qosc/qhyper.hpp"

namespace qosc {

// Eigenproblem arena: lattice constant c and the spectral label gamma with
// c = q^{-2 gamma} in the calibrated case.  The calibrated realization is the
// natural one (psi0(x) = e_q(-i x)); with it the h/k families evaluated at the
// bare lattice coordinate x = sigma sqrt(c) q^n solve the difference equation.
struct EigenproblemParams {
    OscillatorParams op;
    double c = 1.0;
    double gamma = 0.0;  // spectral gamma
    bool calibrated = false;

    double sqrt_c() const;

    static EigenproblemParams make_calibrated(QParams qp, double gamma_spec);
    // c = q^{-2 gamma_op - 1} xi0^2 lambda^2 for an arbitrary realization/lattice.
    static EigenproblemParams make_general(OscillatorParams op, double xi0);
};

struct ConnectionCoefficients {
    Complex C_e;
    Complex C_o;
};

// Sign/magnitude pair for values with large dynamic range.
struct ScaledReal {
    double log_abs;  // log |v|; -inf encodes zero
    double sign;     // +1 / -1 / 0

    double value() const;
    static ScaledReal from_value(double v);
    static ScaledReal from_parts(double sign, double log_abs);
};

// log of the orthogonality weight 1/(-x^2; q^-4)_inf  (always <= 0 for real x).
double log_orthogonality_weight(double x2, const QParams& qp, const Tolerance& tol);

// ---------------------------------------------------------------------------
// Difference-equation solutions (entire 1phi1 route)
//   phi_e(x) = 1phi1(-1/eps; q^-2; q^-4, eps q^{-2g-3} lam^2 x^2)
//   phi_o(x) = 1phi1(-q^-2/eps; q^-6; q^-4, eps q^{-2g-5} lam^2 x^2)
// g(x) = phi_e(x) and g(x) = x phi_o(x) solve the eigenvalue equation at eps,
// for the realization gamma carried by ep.op.

Complex phi_even(double x, double eps, const EigenproblemParams& ep, const Tolerance& tol);
Complex phi_odd(double x, double eps, const EigenproblemParams& ep, const Tolerance& tol);

// ---------------------------------------------------------------------------
// q-Hermite II polynomials  h_m(x) = x^m 2phi1(q^{2m-2}, q^{2m}; 0; q^-4, -q^-4/x^2).
// Dual route: the (terminating) 2phi1 series for |q^-4/x^2| < 0.9, otherwise the
// 1phi1 representation coming from the connection formula.

double htilde(int m, double x, const EigenproblemParams& ep, const Tolerance& tol);
ScaledReal htilde_scaled(int m, double x, const QParams& qp, const Tolerance& tol);

// The 1phi1 (connection-formula) representation of h_m, valid for every x:
//   m = 2n:   (-1)^n q^{4n^2-2n} (q^-2;q^-4)_n 1phi1(q^{4n}; q^-2; q^-4, -q^{-4n-2} x^2)
//   m = 2n+1: (-1)^n q^{4n^2+2n} (q^-6;q^-4)_n x 1phi1(q^{4n}; q^-6; q^-4, -q^{-4n-6} x^2)
double htilde_via_connection(int m, double x, const QParams& qp, const Tolerance& tol);

// ---------------------------------------------------------------------------
// Non-Fock family
//   k_m(x) = sigma^m (|x|/sqrt(c))^{m-gamma} 2phi1(-q^{2m-2g-2}, -q^{2m-2g}; 0; q^-4, -q^-4/x^2)
// at lattice points x = sigma sqrt(c) q^{2j}; for |q^-4/x^2| >= 0.9 the value is
// continued through the connection formula, which carries an alternating (-1)^j.
// Requires calibrated parameters.  The magnitude must be an (even-index) lattice
// point of the sqrt(c)-anchored lattice.

double ktilde(int m, int sign, double magnitude, const EigenproblemParams& ep,
              const Tolerance& tol);
ScaledReal ktilde_scaled(int m, int sign, int j, const EigenproblemParams& ep,
                         const Tolerance& tol);

// Internal workhorse with explicit lattice constant (used for the odd-parity
// sublattice via c -> c q^2, gamma -> gamma - 1, m -> m - 1).
ScaledReal ktilde_on(double c, double gamma, int m, int sign, int j,
                     const QParams& qp, const Tolerance& tol);

// ---------------------------------------------------------------------------
// Connection coefficients of
//   (-eps)^k 2phi1(-1/(eps q^2), -1/eps; 0; q^-4, -q^{4(k-1)}/c)
//     = C_e phi_e + C_o q^{-2k} phi_o
// as infinite products.  When eps sits in one of the four special families the
// closed-form specialization is also evaluated and must agree to rel 1e-8.

ConnectionCoefficients connection_coeffs(double eps, const EigenproblemParams& ep,
                                         const Tolerance& tol);

// Closed-form specializations (eps = -q^{-4n}, -q^{-4n-2}, c^-1 q^{-4p-2}, c^-1 q^{-4p}).
ConnectionCoefficients connection_coeffs_fock_even(int n, const EigenproblemParams& ep,
                                                   const Tolerance& tol);
ConnectionCoefficients connection_coeffs_fock_odd(int n, const EigenproblemParams& ep,
                                                  const Tolerance& tol);
ConnectionCoefficients connection_coeffs_nonfock_odd(int p, const EigenproblemParams& ep,
                                                     const Tolerance& tol);
ConnectionCoefficients connection_coeffs_nonfock_even(int p, const EigenproblemParams& ep,
                                                      const Tolerance& tol);

// ---------------------------------------------------------------------------
// Closed-form squared norms of the sign-doubled orthogonality sums
//   Fock:    2 N_c (q^-2; q^-2)_m q^{2m^2}
//   NonFock: 2 M_c c^m q^{2m^2} / (-c^-1 q^{-2m-2}; q^-2)_inf

double norm_closed_form(const SpectrumLabel& label, const EigenproblemParams& ep,
                        const Tolerance& tol);

// N_c and M_c constants (exposed for tests).
double fock_norm_constant(double c, const QParams& qp, const Tolerance& tol);
double nonfock_norm_constant(double c, const QParams& qp, const Tolerance& tol);

// ---------------------------------------------------------------------------
// Full eigenfunctions psi0 * (h_m or k_m) on a lattice with xi0 = sqrt(c).
// Fock labels fill every lattice point.  Non-Fock labels carry the alternating
// lattice sign (-1)^{floor(n/2)} that makes them solve the difference equation;
// odd-parity points use the gamma-shifted sublattice continuation.

LatticeFunction eigenfunction(const SpectrumLabel& label, const Lattice& lat,
                              const EigenproblemParams& ep, const Tolerance& tol);

}  // namespace qosc

#endif
