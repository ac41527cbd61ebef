#include "qosc/qcore.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qosc {

namespace {
constexpr double kPoleGuard = 1e-300;
constexpr double kQMin = 1.0 + 1e-6;
constexpr double kQMax = 1e6;
}  // namespace

QParams QParams::make(double q) {
    if (!(q >= kQMin) || !(q <= kQMax)) {
        std::ostringstream os;
        os << "QParams: q must lie in [1 + 1e-6, 1e6], got " << q;
        throw DomainError(os.str());
    }
    QParams p;
    p.q = q;
    p.lambda = q - 1.0 / q;
    p.base2 = 1.0 / (q * q);
    p.base4 = p.base2 * p.base2;
    return p;
}

Tolerance Tolerance::make(double rel, int max_terms) {
    if (!(rel > 0.0) || !(rel < 1.0)) {
        throw ParameterError("Tolerance: rel must be in (0,1)");
    }
    if (max_terms < 1) {
        throw ParameterError("Tolerance: max_terms must be >= 1");
    }
    Tolerance t;
    t.rel = rel;
    t.max_terms = max_terms;
    return t;
}

Complex qpoch_finite(Complex a, double base, int n) {
    if (n < 0) {
        throw DomainError("qpoch_finite: n must be >= 0");
    }
    Complex p{1.0, 0.0};
    Complex f = a;
    for (int i = 0; i < n; ++i) {
        p *= (1.0 - f);
        f *= base;
    }
    return p;
}

Complex qpoch_inf(Complex a, double base, const Tolerance& tol) {
    const double ab = std::abs(base);
    if (ab >= 1.0) {
        throw DomainError("qpoch_inf: |base| must be < 1");
    }
    Complex p{1.0, 0.0};
    Complex f = a;
    const double cutoff = tol.rel * (1.0 - ab);
    for (int i = 0; i < tol.max_terms; ++i) {
        if (std::abs(f) < cutoff) {
            return p;
        }
        p *= (1.0 - f);
        f *= base;
    }
    throw ConvergenceError("qpoch_inf: truncation cap exceeded", p);
}

Complex qpoch_inf_many(std::initializer_list<Complex> as, double base,
                       const Tolerance& tol) {
    Complex p{1.0, 0.0};
    for (Complex a : as) {
        p *= qpoch_inf(a, base, tol);
    }
    return p;
}

Complex qpoch_inf_log(Complex a, double base, const Tolerance& tol) {
    const double ab = std::abs(base);
    if (ab >= 1.0) {
        throw DomainError("qpoch_inf_log: |base| must be < 1");
    }
    Complex lg{0.0, 0.0};
    Complex f = a;
    const double cutoff = tol.rel * (1.0 - ab);
    for (int i = 0; i < tol.max_terms; ++i) {
        if (std::abs(f) < cutoff) {
            return lg;
        }
        const Complex factor = 1.0 - f;
        if (std::abs(factor) < kPoleGuard) {
            throw PoleError("qpoch_inf_log: vanishing factor", i);
        }
        lg += std::log(factor);
        f *= base;
    }
    throw ConvergenceError("qpoch_inf_log: truncation cap exceeded", lg);
}

Complex q_exponential(Complex z, const QParams& qp, const Tolerance& tol) {
    // e_q(z) = 1 / (z; q^-2)_inf, with a pole whenever a factor 1 - z q^-2i vanishes.
    Complex p{1.0, 0.0};
    Complex f = z;
    const double cutoff = tol.rel * (1.0 - qp.base2);
    for (int i = 0; i < tol.max_terms; ++i) {
        if (std::abs(f) < cutoff) {
            return 1.0 / p;
        }
        const Complex factor = 1.0 - f;
        if (std::abs(factor) < kPoleGuard) {
            std::ostringstream os;
            os << "q_exponential: pole, factor (1 - z q^-2i) vanishes at i = " << i;
            throw PoleError(os.str(), i);
        }
        p *= factor;
        f *= qp.base2;
    }
    throw ConvergenceError("q_exponential: truncation cap exceeded", 1.0 / p);
}

Complex q_exponential_log(Complex z, const QParams& qp, const Tolerance& tol) {
    return -qpoch_inf_log(z, qp.base2, tol);
}

Complex q_derivative_at(const std::function<Complex(double)>& f, double x,
                        const QParams& qp) {
    if (x == 0.0) {
        throw DomainError("q_derivative_at: x must be nonzero");
    }
    return (f(qp.q * x) - f(x / qp.q)) / (x * qp.lambda);
}

JacksonResult jackson_sum(const std::function<Complex(int)>& values, double base,
                          int n_min, int n_max) {
    if (!(base > 0.0)) {
        throw DomainError("jackson_sum: base must be > 0");
    }
    JacksonResult r;
    if (n_min > n_max) {
        r.empty_window = true;
        return r;
    }
    KahanSum<Complex> acc;
    for (int n = n_min; n <= n_max; ++n) {
        acc.add(values(n) * std::pow(base, n));
    }
    r.value = acc.value();
    return r;
}

}  // namespace qosc
