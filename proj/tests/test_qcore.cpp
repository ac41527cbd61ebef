#include <cmath>
#include <random>

#include "doctest.h"
#include "qosc/qcore.hpp"

using namespace qosc;

namespace {
const Tolerance kTol = Tolerance::make(1e-12);

double rel(Complex a, Complex b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}
}  // namespace

TEST_CASE("QParams validates the range and the derived constants") {
    CHECK_THROWS_AS(QParams::make(1.0), DomainError);
    CHECK_THROWS_AS(QParams::make(0.5), DomainError);
    CHECK_THROWS_AS(QParams::make(2e6), DomainError);
    const QParams qp = QParams::make(2.0);
    CHECK(qp.lambda == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(qp.base2 == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(qp.base4 == doctest::Approx(0.0625).epsilon(1e-15));
    // lambda = q (1 - q^-2) to machine precision
    CHECK(std::abs(qp.lambda - qp.q * (1.0 - qp.base2)) <= 1e-15 * qp.lambda);
}

TEST_CASE("Tolerance invariants") {
    CHECK_THROWS_AS(Tolerance::make(0.0), ParameterError);
    CHECK_THROWS_AS(Tolerance::make(1.0), ParameterError);
    CHECK_THROWS_AS(Tolerance::make(0.5, 0), ParameterError);
}

TEST_CASE("qpoch_finite basic values") {
    CHECK(qpoch_finite({0.3, 0.0}, 0.5, 0) == Complex{1.0, 0.0});
    CHECK(qpoch_finite({0.5, 0.0}, 0.25, 2).real() == doctest::Approx(0.4375).epsilon(1e-15));
    CHECK(std::abs(qpoch_finite({1.0, 0.0}, 0.25, 3)) == 0.0);
}

TEST_CASE("qpoch_finite product recurrence") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        const Complex a{u(rng), u(rng)};
        const double b = 0.5 * (u(rng) + 1.0) * 0.9;
        const int n = t % 12;
        const Complex lhs = qpoch_finite(a, b, n + 1);
        const Complex rhs = qpoch_finite(a, b, n) * (1.0 - a * std::pow(b, n));
        CHECK(std::abs(lhs - rhs) <= 1e-14 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("qpoch_inf edge cases and oracle") {
    CHECK(qpoch_inf({0.0, 0.0}, 0.5, kTol) == Complex{1.0, 0.0});
    CHECK(qpoch_inf({0.5, 0.0}, 0.0, kTol).real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(qpoch_inf({0.5, 0.0}, 1.0, kTol), DomainError);

    // oracle: direct 200-factor product
    Complex direct{1.0, 0.0};
    for (int i = 0; i < 200; ++i) direct *= (1.0 - 0.9 * std::pow(0.5, i));
    CHECK(rel(qpoch_inf({0.9, 0.0}, 0.5, kTol), direct) < 1e-10);
    // frozen reference value
    CHECK(qpoch_inf({0.9, 0.0}, 0.5, kTol).real() ==
          doctest::Approx(0.033730895914003115).epsilon(1e-13));
}

TEST_CASE("qpoch_inf truncation cap carries the partial value") {
    const Tolerance tight{1e-15, 3};
    try {
        qpoch_inf({0.999, 0.0}, 0.99, tight);
        CHECK(false);
    } catch (const ConvergenceError& e) {
        CHECK(std::isfinite(e.partial_value.real()));
    }
}

TEST_CASE("square product identity (x;b)(−x;b) = (x^2;b^2)") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int t = 0; t < 40; ++t) {
        const double x = u(rng), b = u(rng);
        const Complex lhs = qpoch_inf({x, 0.0}, b, kTol) * qpoch_inf({-x, 0.0}, b, kTol);
        const Complex rhs = qpoch_inf({x * x, 0.0}, b * b, kTol);
        CHECK(rel(lhs, rhs) < 1e-10);
    }
}

TEST_CASE("qpoch_inf_log matches the plain product") {
    const Complex lg = qpoch_inf_log({-3.7, 0.0}, 0.0625, kTol);
    const Complex direct = qpoch_inf({-3.7, 0.0}, 0.0625, kTol);
    CHECK(rel(std::exp(lg), direct) < 1e-13);
}

TEST_CASE("q_exponential values, modulus identity and pole") {
    const QParams qp = QParams::make(2.0);
    CHECK(q_exponential({0.0, 0.0}, qp, kTol) == Complex{1.0, 0.0});
    CHECK_THROWS_AS(q_exponential({1.0, 0.0}, qp, kTol), PoleError);

    // |e_q(iy)|^2 = 1/(-y^2; q^-4)_inf
    for (double y : {0.3, 0.9, 2.4}) {
        const Complex v = q_exponential({0.0, y}, qp, kTol);
        const double lhs = std::norm(v);
        const double rhs = 1.0 / qpoch_inf({-y * y, 0.0}, qp.base4, kTol).real();
        CHECK(std::abs(lhs - rhs) < 1e-10 * rhs);
    }
}

TEST_CASE("q_derivative edge cases and the q-exponential shift relation") {
    const QParams qp = QParams::make(1.7);
    auto constant = [](double) { return Complex{3.25, -1.0}; };
    CHECK(std::abs(q_derivative_at(constant, 0.8, qp)) == 0.0);
    auto linear = [](double x) { return Complex{x, 0.0}; };
    CHECK(rel(q_derivative_at(linear, 0.8, qp), Complex{1.0, 0.0}) < 1e-14);
    CHECK_THROWS_AS(q_derivative_at(linear, 0.0, qp), DomainError);

    // D_q e_q(c x) = c (q/lambda) e_q(q c x)
    const Complex c{0.21, 0.13};
    auto f = [&](double x) { return q_exponential(c * x, qp, kTol); };
    for (double x : {0.4, 1.1, 2.0}) {
        const Complex lhs = q_derivative_at(f, x, qp);
        const Complex rhs = c * (qp.q / qp.lambda) * q_exponential(qp.q * c * x, qp, kTol);
        CHECK(rel(lhs, rhs) < 1e-10);
    }
}

TEST_CASE("jackson_sum geometry, edge cases and linearity") {
    auto zero = [](int) { return Complex{0.0, 0.0}; };
    CHECK(std::abs(jackson_sum(zero, 0.25, -3, 5).value) == 0.0);

    const QParams qp = QParams::make(2.0);
    auto one = [](int) { return Complex{1.0, 0.0}; };
    const int N = 9;
    const JacksonResult r = jackson_sum(one, qp.base2, 0, N);
    const double closed = (1.0 - std::pow(qp.base2, N + 1)) / (1.0 - qp.base2);
    CHECK(r.value.real() == doctest::Approx(closed).epsilon(1e-14));
    CHECK_FALSE(r.empty_window);

    auto point = [](int n) { return n == 3 ? Complex{2.0, 1.0} : Complex{0.0, 0.0}; };
    const JacksonResult rp = jackson_sum(point, 0.5, 3, 3);
    CHECK(rel(rp.value, Complex{2.0, 1.0} * 0.125) < 1e-15);

    CHECK(jackson_sum(one, 0.5, 4, 2).empty_window);
    CHECK_THROWS_AS(jackson_sum(one, -1.0, 0, 3), DomainError);

    // linearity
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Complex> va(11), vb(11);
    for (auto& v : va) v = Complex{u(rng), u(rng)};
    for (auto& v : vb) v = Complex{u(rng), u(rng)};
    const Complex s{1.7, -0.3};
    auto fa = [&](int n) { return va[n]; };
    auto fb = [&](int n) { return vb[n]; };
    auto fc = [&](int n) { return va[n] + s * vb[n]; };
    const Complex lhs = jackson_sum(fc, 0.7, 0, 10).value;
    const Complex rhs = jackson_sum(fa, 0.7, 0, 10).value + s * jackson_sum(fb, 0.7, 0, 10).value;
    CHECK(std::abs(lhs - rhs) < 1e-14 * std::abs(rhs));
}
