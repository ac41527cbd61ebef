#include "qosc/eigenbasis.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qosc {

namespace {
constexpr double kRouteCrossover = 0.9;  // |q^-4/x^2| below: 2phi1 route
constexpr double kInf = std::numeric_limits<double>::infinity();

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }
}  // namespace

double EigenproblemParams::sqrt_c() const { return std::sqrt(c); }

EigenproblemParams EigenproblemParams::make_calibrated(QParams qp, double gamma_spec) {
    EigenproblemParams ep;
    ep.op = OscillatorParams::natural(qp);
    ep.gamma = gamma_spec;
    ep.c = std::pow(qp.q, -2.0 * gamma_spec);
    ep.calibrated = true;
    return ep;
}

EigenproblemParams EigenproblemParams::make_general(OscillatorParams op, double xi0) {
    if (!(xi0 > 0.0)) {
        throw DomainError("EigenproblemParams: xi0 must be > 0");
    }
    EigenproblemParams ep;
    ep.op = op;
    ep.c = std::pow(op.qp.q, -2.0 * op.gamma - 1.0) * xi0 * xi0 * op.qp.lambda *
           op.qp.lambda;
    ep.gamma = -std::log(ep.c) / (2.0 * std::log(op.qp.q));
    ep.calibrated = false;
    return ep;
}

double ScaledReal::value() const {
    return sign == 0.0 ? 0.0 : sign * std::exp(log_abs);
}

ScaledReal ScaledReal::from_value(double v) {
    if (v == 0.0) return ScaledReal{-kInf, 0.0};
    return ScaledReal{std::log(std::abs(v)), sign_of(v)};
}

ScaledReal ScaledReal::from_parts(double sign, double log_abs) {
    if (sign == 0.0) return ScaledReal{-kInf, 0.0};
    return ScaledReal{log_abs, sign};
}

double log_orthogonality_weight(double x2, const QParams& qp, const Tolerance& tol) {
    if (!(x2 >= 0.0)) {
        throw DomainError("log_orthogonality_weight: x^2 must be >= 0");
    }
    double lg = 0.0;
    double t = x2;
    for (int i = 0; i < tol.max_terms; ++i) {
        if (t < tol.rel * (1.0 - qp.base4)) {
            return -lg;
        }
        lg += std::log1p(t);
        t *= qp.base4;
    }
    throw ConvergenceError("log_orthogonality_weight: cap exceeded", Complex{-lg, 0.0});
}

Complex phi_even(double x, double eps, const EigenproblemParams& ep, const Tolerance& tol) {
    if (eps == 0.0) {
        throw DomainError("phi_even: eps must be nonzero");
    }
    const QParams& qp = ep.op.qp;
    const double g = ep.op.gamma;
    const double z = eps * std::pow(qp.q, -2.0 * g - 3.0) * qp.lambda * qp.lambda * x * x;
    return phi11(Phi11Spec{Complex{-1.0 / eps, 0.0}, Complex{qp.base2, 0.0}, qp.base4,
                           Complex{z, 0.0}},
                 tol);
}

Complex phi_odd(double x, double eps, const EigenproblemParams& ep, const Tolerance& tol) {
    if (eps == 0.0) {
        throw DomainError("phi_odd: eps must be nonzero");
    }
    const QParams& qp = ep.op.qp;
    const double g = ep.op.gamma;
    const double z = eps * std::pow(qp.q, -2.0 * g - 5.0) * qp.lambda * qp.lambda * x * x;
    return phi11(Phi11Spec{Complex{-qp.base2 / eps, 0.0},
                           Complex{std::pow(qp.q, -6.0), 0.0}, qp.base4,
                           Complex{z, 0.0}},
                 tol);
}

namespace {

// Terminating 2phi1 series of the q-Hermite II polynomial, summed in
// w = -q^-4/x^2; exactly floor(m/2)+1 terms.
double htilde_series(int m, double w, const QParams& qp) {
    const double b = qp.base4;
    double sum = 1.0;
    double term = 1.0;
    double a1 = std::pow(qp.q, 2.0 * m - 2.0);
    double a2 = std::pow(qp.q, 2.0 * m);
    double bp = b;
    for (int j = 1; j <= m / 2; ++j) {
        term *= (1.0 - a1) * (1.0 - a2) / (1.0 - bp) * w;
        sum += term;
        a1 *= b;
        a2 *= b;
        bp *= b;
    }
    return sum;
}

// 1phi1 representation constants of h_m (connection-formula route):
//   m = 2n:   (-1)^n q^{4n^2-2n} (q^-2;q^-4)_n 1phi1(q^{4n}; q^-2; q^-4, -q^{-4n-2} x^2)
//   m = 2n+1: (-1)^n q^{4n^2+2n} (q^-6;q^-4)_n x 1phi1(q^{4n}; q^-6; q^-4, -q^{-4n-6} x^2)
double htilde_small_x(int m, double x, const QParams& qp, const Tolerance& tol) {
    const double b = qp.base4;
    if (m % 2 == 0) {
        const int n = m / 2;
        const double pref = (n % 2 == 0 ? 1.0 : -1.0) *
                            std::pow(qp.q, 4.0 * n * n - 2.0 * n) *
                            qpoch_finite(Complex{qp.base2, 0.0}, b, n).real();
        const double z = -std::pow(qp.q, -4.0 * n - 2.0) * x * x;
        const Complex f = phi11(Phi11Spec{Complex{std::pow(qp.q, 4.0 * n), 0.0},
                                          Complex{qp.base2, 0.0}, b, Complex{z, 0.0}},
                                tol);
        return pref * f.real();
    }
    const int n = (m - 1) / 2;
    const double pref = (n % 2 == 0 ? 1.0 : -1.0) *
                        std::pow(qp.q, 4.0 * n * n + 2.0 * n) *
                        qpoch_finite(Complex{std::pow(qp.q, -6.0), 0.0}, b, n).real();
    const double z = -std::pow(qp.q, -4.0 * n - 6.0) * x * x;
    const Complex f = phi11(Phi11Spec{Complex{std::pow(qp.q, 4.0 * n), 0.0},
                                      Complex{std::pow(qp.q, -6.0), 0.0}, b,
                                      Complex{z, 0.0}},
                            tol);
    return pref * x * f.real();
}

}  // namespace

double htilde_via_connection(int m, double x, const QParams& qp, const Tolerance& tol) {
    if (m < 0) {
        throw DomainError("htilde_via_connection: m must be >= 0");
    }
    return htilde_small_x(m, x, qp, tol);
}

ScaledReal htilde_scaled(int m, double x, const QParams& qp, const Tolerance& tol) {
    if (m < 0) {
        throw DomainError("htilde: m must be >= 0");
    }
    if (x == 0.0) {
        return ScaledReal::from_value(htilde_small_x(m, 0.0, qp, tol));
    }
    const double w = -qp.base4 / (x * x);
    if (std::abs(w) < kRouteCrossover) {
        const double series = htilde_series(m, w, qp);
        return ScaledReal::from_parts(sign_of(series) * (x < 0.0 && m % 2 != 0 ? -1.0 : 1.0),
                                      m * std::log(std::abs(x)) + std::log(std::abs(series)));
    }
    return ScaledReal::from_value(htilde_small_x(m, x, qp, tol));
}

double htilde(int m, double x, const EigenproblemParams& ep, const Tolerance& tol) {
    return htilde_scaled(m, x, ep.op.qp, tol).value();
}

namespace {

Complex qpoch_ratio(std::initializer_list<Complex> num, std::initializer_list<Complex> den,
                    double base, const Tolerance& tol) {
    return qpoch_inf_many(num, base, tol) / qpoch_inf_many(den, base, tol);
}

ConnectionCoefficients connection_coeffs_on(double eps, double c, const QParams& qp,
                                            const Tolerance& tol) {
    const double b = qp.base4;
    const double q2 = qp.q * qp.q;
    // C_e numerator (-1/(eps q^2), q^-4/(eps c), eps c; q^-4)_inf over
    // (q^-2, -c, -q^-4/c; q^-4)_inf.
    const Complex Ce = qpoch_ratio({Complex{-qp.base2 / eps, 0.0},
                                    Complex{b / (eps * c), 0.0}, Complex{eps * c, 0.0}},
                                   {Complex{qp.base2, 0.0}, Complex{-c, 0.0},
                                    Complex{-b / c, 0.0}},
                                   b, tol);
    // C_o carries (q^2; q^-4)_inf in the denominator; the first factor of that
    // symbol is (1 - q^2) < 0.
    const Complex Co = qpoch_ratio({Complex{-1.0 / eps, 0.0},
                                    Complex{std::pow(qp.q, -6.0) / (eps * c), 0.0},
                                    Complex{eps * c * q2, 0.0}},
                                   {Complex{q2, 0.0}, Complex{-c, 0.0},
                                    Complex{-b / c, 0.0}},
                                   b, tol);
    return ConnectionCoefficients{Ce, Co};
}

// Detect eps in one of the four special families; returns the matched integer.
bool match_power(double value, double base_log, double* out_m) {
    // value = exp(m * base_log) for integer m?
    const double m_real = std::log(value) / base_log;
    const double m_round = std::round(m_real);
    if (std::abs(m_real - m_round) < 1e-9) {
        *out_m = m_round;
        return true;
    }
    return false;
}

}  // namespace

ConnectionCoefficients connection_coeffs_fock_even(int n, const EigenproblemParams& ep,
                                                   const Tolerance&) {
    const QParams& qp = ep.op.qp;
    const double pref = std::pow(-ep.c, -n) * std::pow(qp.q, 4.0 * n * n - 2.0 * n);
    const Complex poch = qpoch_finite(Complex{qp.base2, 0.0}, qp.base4, n);
    return ConnectionCoefficients{pref * poch, Complex{0.0, 0.0}};
}

ConnectionCoefficients connection_coeffs_fock_odd(int n, const EigenproblemParams& ep,
                                                  const Tolerance&) {
    const QParams& qp = ep.op.qp;
    const double pref = std::pow(-ep.c, -n) * std::pow(qp.q, 4.0 * n * n + 2.0 * n);
    const Complex poch = qpoch_finite(Complex{std::pow(qp.q, -6.0), 0.0}, qp.base4, n);
    return ConnectionCoefficients{Complex{0.0, 0.0}, pref * poch};
}

ConnectionCoefficients connection_coeffs_nonfock_odd(int p, const EigenproblemParams& ep,
                                                     const Tolerance& tol) {
    const QParams& qp = ep.op.qp;
    const double c = ep.c;
    const Complex pref{std::pow(-c, p) * std::pow(qp.q, 4.0 * p * p + 2.0 * p), 0.0};
    const Complex ratio =
        qpoch_inf(Complex{qp.base2, 0.0}, qp.base4, tol) /
        qpoch_inf(Complex{-std::pow(qp.q, -4.0 * p - 4.0) / c, 0.0}, qp.base4, tol);
    return ConnectionCoefficients{pref * ratio, Complex{0.0, 0.0}};
}

ConnectionCoefficients connection_coeffs_nonfock_even(int p, const EigenproblemParams& ep,
                                                      const Tolerance& tol) {
    const QParams& qp = ep.op.qp;
    const double c = ep.c;
    const Complex pref{std::pow(-c, p) * std::pow(qp.q, 4.0 * p * p - 2.0 * p), 0.0};
    const Complex ratio =
        qpoch_inf(Complex{std::pow(qp.q, -6.0), 0.0}, qp.base4, tol) /
        qpoch_inf(Complex{-std::pow(qp.q, -4.0 * p - 4.0) / c, 0.0}, qp.base4, tol);
    return ConnectionCoefficients{Complex{0.0, 0.0}, pref * ratio};
}

ConnectionCoefficients connection_coeffs(double eps, const EigenproblemParams& ep,
                                         const Tolerance& tol) {
    if (eps == 0.0) {
        throw DomainError("connection_coeffs: eps must be nonzero");
    }
    const QParams& qp = ep.op.qp;
    const ConnectionCoefficients general = connection_coeffs_on(eps, ep.c, qp, tol);

    // Cross-check against the closed-form specialization when eps is special.
    const double lnq4 = -4.0 * std::log(qp.q);
    double idx;
    ConnectionCoefficients special{};
    bool have_special = false;
    if (eps < 0.0) {
        if (match_power(-eps, lnq4, &idx) && idx >= 0.0) {
            special = connection_coeffs_fock_even(static_cast<int>(idx), ep, tol);
            have_special = true;
        } else if (match_power(-eps * qp.q * qp.q, lnq4, &idx) && idx >= 0.0) {
            special = connection_coeffs_fock_odd(static_cast<int>(idx), ep, tol);
            have_special = true;
        }
    } else {
        if (match_power(eps * ep.c * qp.q * qp.q, lnq4, &idx)) {
            special = connection_coeffs_nonfock_odd(static_cast<int>(idx), ep, tol);
            have_special = true;
        } else if (match_power(eps * ep.c, lnq4, &idx)) {
            special = connection_coeffs_nonfock_even(static_cast<int>(idx), ep, tol);
            have_special = true;
        }
    }
    if (have_special) {
        const double se = std::abs(general.C_e - special.C_e);
        const double so = std::abs(general.C_o - special.C_o);
        const double scale =
            std::max({std::abs(general.C_e), std::abs(general.C_o), 1e-300});
        if (se / scale > 1e-8 || so / scale > 1e-8) {
            std::ostringstream os;
            os << "connection_coeffs: general product and closed-form specialization "
                  "disagree at eps = "
               << eps;
            throw ConvergenceError(os.str(), general.C_e);
        }
    }
    return general;
}

double fock_norm_constant(double c, const QParams& qp, const Tolerance& tol) {
    const double b = qp.base4;
    const Complex n = qpoch_inf_many({Complex{b, 0.0}, Complex{-c * qp.base2, 0.0},
                                      Complex{-qp.base2 / c, 0.0}},
                                     b, tol);
    const Complex d = qpoch_inf_many({Complex{qp.base2, 0.0}, Complex{-c, 0.0},
                                      Complex{-b / c, 0.0}},
                                     b, tol);
    return (n / d).real();
}

double nonfock_norm_constant(double c, const QParams& qp, const Tolerance& tol) {
    const double b = qp.base4;
    const Complex n = qpoch_inf_many({Complex{b, 0.0}, Complex{b, 0.0},
                                      Complex{-qp.base2 / c, 0.0},
                                      Complex{-c * qp.base2, 0.0}},
                                     b, tol);
    const Complex d = qpoch_inf_many({Complex{-c, 0.0}, Complex{-b / c, 0.0}}, b, tol);
    return (n / d).real();
}

double norm_closed_form(const SpectrumLabel& label, const EigenproblemParams& ep,
                        const Tolerance& tol) {
    const QParams& qp = ep.op.qp;
    const double m = label.m;
    if (label.kind == SpectrumLabel::Kind::Fock) {
        const double nc = fock_norm_constant(ep.c, qp, tol);
        const double poch = qpoch_finite(Complex{qp.base2, 0.0}, qp.base2, label.m).real();
        return 2.0 * nc * poch * std::pow(qp.q, 2.0 * m * m);
    }
    if (!ep.calibrated) {
        throw ParameterError("norm_closed_form: non-Fock norms require calibrated params");
    }
    const double mc = nonfock_norm_constant(ep.c, qp, tol);
    const Complex tail = qpoch_inf(
        Complex{-std::pow(qp.q, -2.0 * m - 2.0) / ep.c, 0.0}, qp.base2, tol);
    return 2.0 * mc * std::pow(ep.c, m) * std::pow(qp.q, 2.0 * m * m) / tail.real();
}

ScaledReal ktilde_on(double c, double gamma, int m, int sign, int j,
                     const QParams& qp, const Tolerance& tol) {
    const double sqc = std::sqrt(c);
    const double log_xabs = std::log(sqc) + 2.0 * j * std::log(qp.q);
    const double x_abs = std::exp(log_xabs);
    const double w = -qp.base4 / (x_abs * x_abs);
    const double sigma_m = (sign < 0 && m % 2 != 0) ? -1.0 : 1.0;
    const double eps = std::pow(qp.q, -2.0 * m) / c;

    if (std::abs(w) < kRouteCrossover) {
        // 2phi1 parameters -1/(eps q^2) = -c q^{2m-2} and -1/eps = -c q^{2m}
        const Complex f = phi21(
            Phi21Spec{Complex{-c * std::pow(qp.q, 2.0 * m) * qp.base2, 0.0},
                      Complex{-c * std::pow(qp.q, 2.0 * m), 0.0}, Complex{0.0, 0.0},
                      qp.base4, Complex{w, 0.0}},
            tol);
        const double series = f.real();
        if (series == 0.0) return ScaledReal{-kInf, 0.0};
        // prefactor (|x|/sqrt(c))^{m-gamma} = q^{2j(m-gamma)}
        const double log_pref = 2.0 * j * (m - gamma) * std::log(qp.q);
        return ScaledReal::from_parts(sigma_m * sign_of(series),
                                      log_pref + std::log(std::abs(series)));
    }

    // Connection-formula route, carrying the lattice alternation (-1)^j.
    EigenproblemParams ep_local;
    ep_local.op = OscillatorParams::natural(qp);
    ep_local.c = c;
    ep_local.gamma = gamma;
    ep_local.calibrated = true;
    const ConnectionCoefficients cc = connection_coeffs(eps, ep_local, tol);
    const double z_e = eps * c * std::pow(qp.q, 4.0 * j - 2.0);
    const double z_o = eps * c * std::pow(qp.q, 4.0 * j - 4.0);
    const Complex fe = phi11(Phi11Spec{Complex{-1.0 / eps, 0.0}, Complex{qp.base2, 0.0},
                                       qp.base4, Complex{z_e, 0.0}},
                             tol);
    const Complex fo = phi11(Phi11Spec{Complex{-qp.base2 / eps, 0.0},
                                       Complex{std::pow(qp.q, -6.0), 0.0}, qp.base4,
                                       Complex{z_o, 0.0}},
                             tol);
    const double twist = (j % 2 == 0) ? 1.0 : -1.0;
    const double v =
        sigma_m * twist *
        (cc.C_e.real() * fe.real() + cc.C_o.real() * std::pow(qp.q, 2.0 * j) * fo.real());
    return ScaledReal::from_value(v);
}

ScaledReal ktilde_scaled(int m, int sign, int j, const EigenproblemParams& ep,
                         const Tolerance& tol) {
    if (!ep.calibrated) {
        throw ParameterError("ktilde: requires calibrated eigenproblem parameters");
    }
    return ktilde_on(ep.c, ep.gamma, m, sign, j, ep.op.qp, tol);
}

double ktilde(int m, int sign, double magnitude, const EigenproblemParams& ep,
              const Tolerance& tol) {
    if (!(magnitude > 0.0)) {
        throw DomainError("ktilde: magnitude must be > 0");
    }
    const QParams& qp = ep.op.qp;
    const double j_real =
        std::log(magnitude / ep.sqrt_c()) / (2.0 * std::log(qp.q));
    const double j_round = std::round(j_real);
    if (std::abs(j_real - j_round) > 1e-9) {
        throw ParameterError("ktilde: magnitude is not an even-index lattice point");
    }
    return ktilde_scaled(m, sign, static_cast<int>(j_round), ep, tol).value();
}

LatticeFunction eigenfunction(const SpectrumLabel& label, const Lattice& lat,
                              const EigenproblemParams& ep, const Tolerance& tol) {
    const QParams& qp = ep.op.qp;
    if (std::abs(lat.xi0() - ep.sqrt_c()) > 1e-12 * ep.sqrt_c()) {
        throw ParameterError("eigenfunction: lattice scale must equal sqrt(c)");
    }
    if (label.kind == SpectrumLabel::Kind::NonFock && !ep.calibrated) {
        throw ParameterError("eigenfunction: non-Fock labels require calibrated params");
    }
    const Complex mu{0.0, -std::pow(qp.q, -ep.op.gamma) * qp.lambda / std::sqrt(qp.q)};

    return LatticeFunction(lat, [&](int sigma, double x) -> Complex {
        const Complex lpsi = q_exponential_log(mu * x, qp, tol);
        ScaledReal g;
        if (label.kind == SpectrumLabel::Kind::Fock) {
            g = htilde_scaled(label.m, x, qp, tol);
        } else {
            // lattice index of x: x = sigma xi0 q^n
            const double n_real = std::log(std::abs(x) / lat.xi0()) / std::log(qp.q);
            const int n = static_cast<int>(std::lround(n_real));
            ScaledReal raw;
            if (n % 2 == 0) {
                const int j = n / 2;
                raw = ktilde_on(ep.c, ep.gamma, label.m, sigma, j, qp, tol);
                const double twist = (j % 2 == 0) ? 1.0 : -1.0;
                g = ScaledReal::from_parts(raw.sign * twist, raw.log_abs);
            } else {
                // odd-parity point: x = sigma sqrt(c q^2) q^{2j}; the same
                // eigenvalue belongs to label m-1 of the shifted constant.
                const int j = (n - 1) / 2;
                raw = ktilde_on(ep.c * qp.q * qp.q, ep.gamma - 1.0, label.m - 1, sigma,
                                j, qp, tol);
                const double twist = (j % 2 == 0) ? 1.0 : -1.0;
                const double pref = sigma * std::pow(qp.q, label.m - ep.gamma);
                g = ScaledReal::from_parts(raw.sign * twist * sign_of(pref),
                                           raw.log_abs + std::log(std::abs(pref)));
            }
        }
        if (g.sign == 0.0) return Complex{0.0, 0.0};
        const double re = lpsi.real() + g.log_abs;
        if (re < -700.0) return Complex{0.0, 0.0};
        return g.sign * std::exp(Complex{re, lpsi.imag()});
    });
}

}  // namespace qosc
