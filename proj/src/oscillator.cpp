#include "qosc/oscillator.hpp"

#include <cmath>

namespace qosc {

Complex OscillatorParams::alpha() const {
    const double r = std::sqrt(qp.q / qp.lambda);
    return Complex{r * std::cos(theta), r * std::sin(theta)};
}

Complex OscillatorParams::beta() const {
    return alpha() * std::pow(qp.q, gamma);
}

double OscillatorParams::beta_abs2() const {
    return alpha_abs2() * std::pow(qp.q, 2.0 * gamma);
}

Complex OscillatorParams::alpha_betabar() const {
    return Complex{alpha_abs2() * std::pow(qp.q, gamma), 0.0};
}

OscillatorParams OscillatorParams::make(QParams qp, double gamma, double theta) {
    OscillatorParams op;
    op.qp = qp;
    op.gamma = gamma;
    op.theta = theta;
    return op;
}

OscillatorParams OscillatorParams::natural(QParams qp) {
    // q^gamma = lambda / sqrt(q)  <=>  (alpha/beta) lambda q^{-1/2} = 1
    const double gamma = std::log(qp.lambda * qp.lambda / qp.q) / (2.0 * std::log(qp.q));
    return make(qp, gamma, 0.0);
}

SpectrumLabel SpectrumLabel::fock(int m) {
    if (m < 0) {
        throw DomainError("SpectrumLabel: Fock index must be >= 0");
    }
    return SpectrumLabel{Kind::Fock, m, 0.0};
}

SpectrumLabel SpectrumLabel::non_fock(int m, double gamma) {
    return SpectrumLabel{Kind::NonFock, m, gamma};
}

double epsilon(const SpectrumLabel& label, const QParams& qp) {
    if (label.kind == SpectrumLabel::Kind::Fock) {
        return -std::pow(qp.q, -2.0 * label.m);
    }
    return std::pow(qp.q, 2.0 * label.gamma - 2.0 * label.m);
}

double energy(const SpectrumLabel& label, const QParams& qp) {
    if (label.kind == SpectrumLabel::Kind::Fock) {
        // (1 - q^-2m)/(1 - q^-2), stable for large m
        return (1.0 - std::pow(qp.q, -2.0 * label.m)) / (1.0 - qp.base2);
    }
    return (1.0 + std::pow(qp.q, 2.0 * label.gamma - 2.0 * label.m)) / (1.0 - qp.base2);
}

double accumulation_point(const QParams& qp) {
    return 1.0 / (1.0 - qp.base2);
}

LatticeFunction apply_a(const LatticeFunction& f, const OscillatorParams& op) {
    // a = alpha U^-2 + beta U^-1 P
    const LatticeFunction t1 = lf_scale(apply_U(f, -2), op.alpha());
    const LatticeFunction t2 = lf_scale(apply_U(apply_P(f), -1), op.beta());
    return lf_add(t1, t2);
}

LatticeFunction apply_adag(const LatticeFunction& f, const OscillatorParams& op) {
    // a+ = conj(alpha) U^2 + conj(beta) P U
    const LatticeFunction t1 = lf_scale(apply_U(f, 2), std::conj(op.alpha()));
    const LatticeFunction t2 = lf_scale(apply_P(apply_U(f, 1)), std::conj(op.beta()));
    return lf_add(t1, t2);
}

LatticeFunction apply_H(const LatticeFunction& f, const OscillatorParams& op) {
    // H = |alpha|^2 - |beta|^2 D_q^2 - i alpha conj(beta) (U + q U^-1) D_q,
    // with D_q = i P on the lattice realization.
    const Complex i{0.0, 1.0};
    const LatticeFunction dq = lf_scale(apply_P(f), i);           // D_q f
    const LatticeFunction dq2 = lf_scale(apply_P(dq), i);         // D_q^2 f
    const LatticeFunction u_dq = apply_U(dq, 1);
    const LatticeFunction uinv_dq = apply_U(dq, -1);
    LatticeFunction out = lf_scale(f, Complex{op.alpha_abs2(), 0.0});
    out = lf_sub(out, lf_scale(dq2, Complex{op.beta_abs2(), 0.0}));
    const Complex c = -i * op.alpha_betabar();
    out = lf_add(out, lf_scale(lf_add(u_dq, lf_scale(uinv_dq, op.qp.q)), c));
    return out;
}

LatticeFunction ground_state(const Lattice& lat, const OscillatorParams& op,
                             const Tolerance& tol) {
    // psi0(x) = e_q(mu x), mu = -i q^{-gamma} lambda q^{-1/2}; evaluated through
    // the log form so deep-tail values underflow to zero instead of overflowing.
    const Complex mu{0.0, -std::pow(op.qp.q, -op.gamma) * op.qp.lambda /
                              std::sqrt(op.qp.q)};
    return LatticeFunction(lat, [&](int, double x) {
        const Complex lg = q_exponential_log(mu * x, op.qp, tol);
        return std::exp(lg);
    });
}

double ev_difference_residual(const LatticeFunction& f, double E,
                              const OscillatorParams& op) {
    const Lattice& lat = f.lattice();
    const Window w = f.valid_window().shrink(2, 2);
    if (w.empty()) {
        throw DomainError("ev_difference_residual: window exhausted");
    }
    const double q = op.qp.q;
    const double lam = op.qp.lambda;
    const double aa = op.alpha_abs2();
    const double bb = op.beta_abs2();
    const Complex ab = op.alpha_betabar();
    const Complex i{0.0, 1.0};
    const double rq = std::sqrt(q);

    // First pass records the per-point term scale; the residual pass then skips
    // points far below the peak, where values sit at the underflow frontier and
    // carry no information about the identity.
    auto point_terms = [&](int sigma, int n, Complex* lhs, Complex* rhs,
                           double* scale) {
        const double x = lat.point(sigma, n);
        const double x2l2 = x * x * lam * lam;
        const Complex f0 = f.at(sigma, n);
        const Complex fp = f.at(sigma, n + 2);  // f(q^2 x)
        const Complex fm = f.at(sigma, n - 2);  // f(q^-2 x)
        const Complex c0 = Complex{aa * x2l2 + bb * (q + 1.0 / q), 0.0};
        const Complex cp = Complex{-bb / q, 0.0} - i * ab * rq * x * lam;
        const Complex cm = Complex{-q * bb, 0.0} + i * ab * rq * x * lam;
        *lhs = E * x2l2 * f0;
        *rhs = f0 * c0 + fp * cp + fm * cm;
        *scale = std::abs(*lhs) + std::abs(f0 * c0) + std::abs(fp * cp) +
                 std::abs(fm * cm);
    };
    double peak = 0.0;
    for (int n = w.lo; n <= w.hi; ++n) {
        for (int sigma : {+1, -1}) {
            if (!lat.signs().contains(sigma)) continue;
            Complex lhs, rhs;
            double scale;
            point_terms(sigma, n, &lhs, &rhs, &scale);
            peak = std::max(peak, scale);
        }
    }
    const double scale_floor = std::max(1e-30 * peak, 1e-220);
    double worst = 0.0;
    for (int n = w.lo; n <= w.hi; ++n) {
        for (int sigma : {+1, -1}) {
            if (!lat.signs().contains(sigma)) continue;
            Complex lhs, rhs;
            double scale;
            point_terms(sigma, n, &lhs, &rhs, &scale);
            if (scale <= scale_floor) continue;
            worst = std::max(worst, std::abs(lhs - rhs) / scale);
        }
    }
    return worst;
}

}  // namespace qosc
