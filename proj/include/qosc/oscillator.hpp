#ifndef QOSC_OSCILLATOR_HPP
#define QOSC_OSCILLATOR_HPP

#include "qosc/lattice.hpp"

namespace qosc {

// Realization of the q-oscillator a = alpha U^-2 + beta U^-1 P,
// a+ = conj(alpha) U^2 + conj(beta) P U on the quantum line, with
// alpha conj(alpha) = q/lambda and beta = alpha q^gamma (alpha/beta = q^-gamma).

struct OscillatorParams {
    QParams qp;
    double gamma = 0.0;
    double theta = 0.0;  // phase of alpha; drops out of every verifiable identity

    Complex alpha() const;
    Complex beta() const;
    double alpha_abs2() const { return qp.q / qp.lambda; }
    double beta_abs2() const;
    Complex alpha_betabar() const;  // alpha conj(beta), real by construction

    static OscillatorParams make(QParams qp, double gamma, double theta = 0.0);

    // The realization whose ground state is e_q(-i x), i.e. q^gamma = lambda/sqrt(q).
    // In it the eigenfunction families evaluate at the bare lattice coordinate.
    static OscillatorParams natural(QParams qp);
};

// Two-part spectrum labels.  epsilon = -q^{-2m} (Fock, m >= 0) or
// +q^{2 gamma - 2m} (non-Fock, m in Z); E = (1 + epsilon)/(1 - q^-2).
struct SpectrumLabel {
    enum class Kind { Fock, NonFock };
    Kind kind;
    int m;
    double gamma = 0.0;  // spectral label, used by NonFock only

    static SpectrumLabel fock(int m);
    static SpectrumLabel non_fock(int m, double gamma);
};

double epsilon(const SpectrumLabel& label, const QParams& qp);
double energy(const SpectrumLabel& label, const QParams& qp);
double accumulation_point(const QParams& qp);

// ---------------------------------------------------------------------------
// Operator actions (compositions of the lattice primitives; window shrinks).

LatticeFunction apply_a(const LatticeFunction& f, const OscillatorParams& op);
LatticeFunction apply_adag(const LatticeFunction& f, const OscillatorParams& op);

// H = a+ a = alpha conj(alpha) - beta conj(beta) D_q^2
//            - i alpha conj(beta) (U + q U^-1) D_q   (closed form; the
// composition apply_adag(apply_a(f)) is an independent cross-check path).
LatticeFunction apply_H(const LatticeFunction& f, const OscillatorParams& op);

// psi0(x) = e_q(-i (alpha/beta) lambda q^{-1/2} x), N = 1.
LatticeFunction ground_state(const Lattice& lat, const OscillatorParams& op,
                             const Tolerance& tol);

// Pointwise residual of the eigenvalue difference equation
//   E x^2 lam^2 f(x) = f(x) {|a|^2 x^2 lam^2 + |b|^2 (q + 1/q)}
//                    + f(q^2 x) {-|b|^2/q - i a bbar q^{1/2} x lam}
//                    + f(q^-2 x) {-q |b|^2 + i a bbar q^{1/2} x lam},
// reported as max over interior points of |LHS-RHS| / local term scale.
// Independent of the operator-composition route.
double ev_difference_residual(const LatticeFunction& f, double E,
                              const OscillatorParams& op);

}  // namespace qosc

#endif
