#ifndef QOSC_QCORE_HPP
#define QOSC_QCORE_HPP

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

namespace qosc {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Errors

class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Truncation cap exceeded; carries the partial value accumulated so far.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& msg, Complex partial)
        : std::runtime_error(msg), partial_value(partial) {}
    Complex partial_value;
};

// A factor of an infinite product vanished (below the underflow guard).
class PoleError : public std::runtime_error {
public:
    PoleError(const std::string& msg, int factor_index)
        : std::runtime_error(msg), factor_index(factor_index) {}
    int factor_index;
};

// ---------------------------------------------------------------------------
// Deformation parameter and truncation control

struct QParams {
    double q;
    double lambda;  // q - 1/q
    double base2;   // q^-2
    double base4;   // q^-4

    static QParams make(double q);
};

struct Tolerance {
    double rel = 1e-12;
    int max_terms = 10000;

    static Tolerance make(double rel, int max_terms = 10000);
};

// ---------------------------------------------------------------------------
// Compensated accumulation (Kahan). Works for double and Complex.

template <typename T>
struct KahanSum {
    T sum{};
    T comp{};

    void add(T value) {
        const T y = value - comp;
        const T t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    T value() const { return sum; }
};

// ---------------------------------------------------------------------------
// q-Pochhammer symbols

// (a; base)_n = prod_{i=0}^{n-1} (1 - a base^i).  Total function, n >= 0.
Complex qpoch_finite(Complex a, double base, int n);

// (a; base)_inf, |base| < 1.  Stops once |a| |base|^N < rel (1 - |base|).
Complex qpoch_inf(Complex a, double base, const Tolerance& tol);

// Convenience: product of several infinite symbols with a common base.
Complex qpoch_inf_many(std::initializer_list<Complex> as, double base,
                       const Tolerance& tol);

// log (a; base)_inf as a complex number (sum of principal per-factor logs).
// Usable when the plain product would over/underflow, e.g. a = -x^2 at large x.
Complex qpoch_inf_log(Complex a, double base, const Tolerance& tol);

// ---------------------------------------------------------------------------
// q-exponential  e_q(z) = 1 / (z; q^-2)_inf

Complex q_exponential(Complex z, const QParams& qp, const Tolerance& tol);

// log e_q(z); safe for large |z| where the product itself overflows.
Complex q_exponential_log(Complex z, const QParams& qp, const Tolerance& tol);

// ---------------------------------------------------------------------------
// q-derivative  D_q f(x) = (f(qx) - f(x/q)) / (x (q - 1/q)),  x != 0

Complex q_derivative_at(const std::function<Complex(double)>& f, double x,
                        const QParams& qp);

// ---------------------------------------------------------------------------
// Jackson-type weighted sum  sum_{n=n_min}^{n_max} v(n) base^n

struct JacksonResult {
    Complex value{0.0, 0.0};
    bool empty_window = false;
};

JacksonResult jackson_sum(const std::function<Complex(int)>& values, double base,
                          int n_min, int n_max);

}  // namespace qosc

#endif
