#include "qosc/qhyper.hpp"

#include <cmath>

namespace qosc {

namespace {
constexpr double kTermOverflow = 1e280;
constexpr double kSumFloor = 1e-290;

void check_base(double base, const char* who) {
    if (!(base > 0.0) || !(base < 1.0)) {
        throw ParameterError(std::string(who) + ": base must lie in (0,1)");
    }
}
}  // namespace

Complex phi11(const Phi11Spec& spec, const Tolerance& tol) {
    check_base(spec.base, "phi11");
    const double b = spec.base;
    KahanSum<Complex> acc;
    Complex term{1.0, 0.0};  // n = 0
    acc.add(term);
    Complex a_pow = spec.a;  // a b^{n-1} at step n
    Complex c_pow = spec.c;
    double b_pow = b;        // b^n at step n
    double b_tri = 1.0;      // b^{n-1} at step n (triangular factor increment)
    int small_streak = 0;
    for (int n = 1; n <= tol.max_terms; ++n) {
        const Complex cden = 1.0 - c_pow;
        if (std::abs(cden) < 1e-300) {
            throw ParameterError("phi11: denominator factor (c;b)_n vanishes");
        }
        // term_n = term_{n-1} * (1 - a b^{n-1}) / ((1 - b^n)(1 - c b^{n-1})) * (-1) b^{n-1} z
        term *= (1.0 - a_pow) / ((1.0 - b_pow) * cden) * (-b_tri) * spec.z;
        if (std::abs(term) > kTermOverflow) {
            throw ConvergenceError("phi11: term overflow", acc.value());
        }
        acc.add(term);
        if (std::abs(term) < tol.rel * std::max(std::abs(acc.value()), kSumFloor)) {
            if (++small_streak >= 3) {
                return acc.value();
            }
        } else {
            small_streak = 0;
        }
        a_pow *= b;
        c_pow *= b;
        b_pow *= b;
        b_tri *= b;
    }
    throw ConvergenceError("phi11: truncation cap exceeded", acc.value());
}

Complex phi21(const Phi21Spec& spec, const Tolerance& tol) {
    check_base(spec.base, "phi21");
    if (std::abs(spec.z) >= 0.99) {
        throw DomainError("phi21: |z| >= 0.99, series diverges; use the connection formula");
    }
    const double b = spec.base;
    const bool c_zero = (spec.c == Complex{0.0, 0.0});
    KahanSum<Complex> acc;
    Complex term{1.0, 0.0};
    acc.add(term);
    Complex a1_pow = spec.a1;
    Complex a2_pow = spec.a2;
    Complex c_pow = spec.c;
    double b_pow = b;
    int small_streak = 0;
    for (int n = 1; n <= tol.max_terms; ++n) {
        Complex cden{1.0, 0.0};
        if (!c_zero) {
            cden = 1.0 - c_pow;
            if (std::abs(cden) < 1e-300) {
                throw ParameterError("phi21: denominator factor (c;b)_n vanishes");
            }
        }
        term *= (1.0 - a1_pow) * (1.0 - a2_pow) / ((1.0 - b_pow) * cden) * spec.z;
        if (std::abs(term) > kTermOverflow) {
            throw ConvergenceError("phi21: term overflow", acc.value());
        }
        acc.add(term);
        if (std::abs(term) < tol.rel * std::max(std::abs(acc.value()), kSumFloor)) {
            if (++small_streak >= 3) {
                return acc.value();
            }
        } else {
            small_streak = 0;
        }
        a1_pow *= b;
        a2_pow *= b;
        c_pow *= b;
        b_pow *= b;
    }
    throw ConvergenceError("phi21: truncation cap exceeded", acc.value());
}

double phi11_recurrence_residual(const Phi11Spec& spec, const Tolerance& tol) {
    const double b = spec.base;
    Phi11Spec up = spec;
    up.z = spec.z * b;
    Phi11Spec dn = spec;
    dn.z = spec.z / b;
    const Complex f_up = phi11(up, tol);
    const Complex f_mid = phi11(spec, tol);
    const Complex f_dn = phi11(dn, tol);
    const Complex r = (spec.c - spec.a * spec.z) * f_up +
                      (spec.z - spec.c - b) * f_mid + b * f_dn;
    return std::abs(r);
}

}  // namespace qosc
