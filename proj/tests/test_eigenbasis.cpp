#include <cmath>

#include "doctest.h"
#include "qosc/eigenbasis.hpp"

using namespace qosc;

namespace {
const Tolerance kTol = Tolerance::make(1e-13);

double rel(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

// Residual of the reduced eigenvalue equation at eps for g given as a callable,
// evaluated at x (off-lattice allowed): the direct three-point check.
double ev_eq_residual(const std::function<double(double)>& g, double eps, double gamma,
                      const QParams& qp, double x) {
    const double t = std::pow(qp.q, -2.0 * gamma) * qp.lambda * qp.lambda * x * x;
    const double r = g(x) * (qp.q + 1.0 / qp.q - eps * t) - g(qp.q * qp.q * x) / qp.q -
                     qp.q * g(x / (qp.q * qp.q)) * (1.0 + t / qp.q);
    const double scale = std::abs(g(x)) * (qp.q + 1.0 / qp.q + std::abs(eps) * t) +
                         std::abs(g(qp.q * qp.q * x)) / qp.q +
                         qp.q * std::abs(g(x / (qp.q * qp.q))) * (1.0 + t / qp.q);
    return std::abs(r) / std::max(scale, 1e-300);
}
}  // namespace

TEST_CASE("calibrated parameters") {
    const QParams qp = QParams::make(2.0);
    const EigenproblemParams ep = EigenproblemParams::make_calibrated(qp, 0.0);
    CHECK(ep.c == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ep.calibrated);
    // the general lattice-constant formula reproduces c for the natural realization
    const EigenproblemParams gen = EigenproblemParams::make_general(ep.op, ep.sqrt_c());
    CHECK(gen.c == doctest::Approx(ep.c).epsilon(1e-12));
}

TEST_CASE("phi_even / phi_odd degenerate values") {
    const QParams qp = QParams::make(2.0);
    const EigenproblemParams ep = EigenproblemParams::make_calibrated(qp, 0.0);
    CHECK(phi_even(0.0, 0.37, ep, kTol) == Complex{1.0, 0.0});
    CHECK(phi_odd(0.0, 0.37, ep, kTol) == Complex{1.0, 0.0});
    // eps = -1: a-parameter -1/eps = 1 kills every term beyond n = 0
    CHECK(std::abs(phi_even(1.3, -1.0, ep, kTol) - Complex{1.0, 0.0}) < 1e-13);
    CHECK(std::abs(phi_odd(0.9, -qp.base2, ep, kTol) - Complex{1.0, 0.0}) < 1e-13);
    CHECK_THROWS_AS(phi_even(1.0, 0.0, ep, kTol), DomainError);
}

TEST_CASE("phi_even and x*phi_odd solve the eigenvalue equation") {
    for (double q : {1.5, 2.0}) {
        const QParams qp = QParams::make(q);
        for (double gamma : {0.0, 0.3}) {
            const OscillatorParams op = OscillatorParams::make(qp, gamma);
            const EigenproblemParams ep = EigenproblemParams::make_general(op, 1.0);
            for (double eps : {-std::pow(q, -4.0), 0.37, 2.1}) {
                auto ge = [&](double x) { return phi_even(x, eps, ep, kTol).real(); };
                auto go = [&](double x) {
                    return x * phi_odd(x, eps, ep, kTol).real();
                };
                for (double x : {0.4, 1.3}) {
                    CHECK(ev_eq_residual(ge, eps, gamma, qp, x) < 1e-11);
                    CHECK(ev_eq_residual(go, eps, gamma, qp, x) < 1e-11);
                }
            }
        }
    }
}

TEST_CASE("q-Hermite II: low orders in closed form") {
    const QParams qp = QParams::make(2.0);
    const EigenproblemParams ep = EigenproblemParams::make_calibrated(qp, 0.0);
    for (double x : {0.2, 0.7, 1.7, -2.4}) {
        CHECK(htilde(0, x, ep, kTol) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(htilde(1, x, ep, kTol) == doctest::Approx(x).epsilon(1e-12));
        // h2 = x^2 - (q^2 - 1), h3 = x^3 - q^2 lambda q ... = x^3 - 63/ (q=2): x^3 - 63 x/16*16
        CHECK(htilde(2, x, ep, kTol) ==
              doctest::Approx(x * x - 3.0).epsilon(1e-12));
    }
    CHECK(htilde(3, 1.7, ep, kTol) == doctest::Approx(-102.187).epsilon(1e-12));
    CHECK(htilde(6, 0.9, ep, kTol) ==
          doctest::Approx(-564106828.500459).epsilon(1e-10));
}

TEST_CASE("q-Hermite II: parity and dual-route agreement") {
    const QParams qp = QParams::make(2.0);
    const EigenproblemParams ep = EigenproblemParams::make_calibrated(qp, 0.0);
    for (int m = 0; m <= 7; ++m) {
        for (double x : {0.17, 0.4, 0.9, 2.3}) {
            const double plus = htilde(m, x, ep, kTol);
            const double minus = htilde(m, -x, ep, kTol);
            CHECK(rel(minus, (m % 2 == 0 ? 1.0 : -1.0) * plus) < 1e-12);
        }
    }
    // routes: terminating series against the 1phi1 representation, both sides
    // of the crossover
    for (int m = 2; m <= 6; ++m) {
        for (double x : {0.3, 0.5, 0.8, 1.2}) {
            const double w = qp.base4 / (x * x);
            Phi21Spec spec{{std::pow(qp.q, 2.0 * m - 2.0), 0.0},
                           {std::pow(qp.q, 2.0 * m), 0.0},
                           {0.0, 0.0},
                           qp.base4,
                           {-w, 0.0}};
            if (w < 0.9) {
                const double via_series = std::pow(x, m) * phi21(spec, kTol).real();
                CHECK(rel(via_series, htilde(m, x, ep, kTol)) < 1e-8);
            }
        }
    }
}

TEST_CASE("k-family: parity convention, boundedness, and route splice") {
    const QParams qp = QParams::make(2.0);
    const EigenproblemParams ep = EigenproblemParams::make_calibrated(qp, 0.0);
    for (int m : {-2, -1, 0, 1, 2}) {
        for (int j : {-3, 0, 2}) {
            const double vp = ktilde_scaled(m, +1, j, ep, kTol).value();
            const double vm = ktilde_scaled(m, -1, j, ep, kTol).value();
            CHECK(rel(vm, (m % 2 == 0 ? 1.0 : -1.0) * vp) < 1e-12);
        }
    }
    // k_0 is bounded on the lattice; the small-x end tends to zero and the
    // large-x end tends to one
    double kmax = 0.0;
    for (int j = -25; j <= 25; ++j) {
        kmax = std::max(kmax, std::abs(ktilde_scaled(0, +1, j, ep, kTol).value()));
    }
    CHECK(kmax < 2.0);
    CHECK(std::abs(ktilde_scaled(0, +1, -25, ep, kTol).value()) < 1e-10);
    CHECK(ktilde_scaled(0, +1, 25, ep, kTol).value() == doctest::Approx(1.0).epsilon(1e-8));

    // frozen high-precision references
    CHECK(ktilde_scaled(0, +1, 0, ep, kTol).value() ==
          doctest::Approx(0.84395085500495154).epsilon(1e-12));
    CHECK(ktilde_scaled(0, +1, -2, ep, kTol).value() ==
          doctest::Approx(0.057584974122228686).epsilon(1e-11));
    CHECK(ktilde_scaled(1, +1, -3, ep, kTol).value() ==
          doctest::Approx(-0.69117326815207735).epsilon(1e-11));
    CHECK(ktilde_scaled(-2, +1, 1, ep, kTol).value() ==
          doctest::Approx(0.062220087065581388).epsilon(1e-11));

    // the public x-signed entry point validates lattice membership
    CHECK(ktilde(0, +1, 1.0, ep, kTol) ==
          doctest::Approx(0.84395085500495154).epsilon(1e-12));
    CHECK_THROWS_AS(ktilde(0, +1, 1.3, ep, kTol), ParameterError);

    EigenproblemParams uncal = ep;
    uncal.calibrated = false;
    CHECK_THROWS_AS(ktilde_scaled(0, +1, 0, uncal, kTol), ParameterError);
}

TEST_CASE("connection coefficients: general product vs frozen values and specializations") {
    const QParams qp = QParams::make(2.0);
    const EigenproblemParams ep = EigenproblemParams::make_calibrated(qp, 0.0);
    const ConnectionCoefficients cc = connection_coeffs(0.37, ep, kTol);
    CHECK(cc.C_e.real() == doctest::Approx(0.52667506564398098).epsilon(1e-12));
    CHECK(cc.C_o.real() == doctest::Approx(0.35926798180877305).epsilon(1e-12));

    // Fock even: C_o = 0 through a vanishing factor; n = 0 gives C_e = 1
    const ConnectionCoefficients f0 = connection_coeffs(-1.0, ep, kTol);
    CHECK(std::abs(f0.C_o) < 1e-14);
    CHECK(f0.C_e.real() == doctest::Approx(1.0).epsilon(1e-12));
    for (int n : {1, 2}) {
        const double eps = -std::pow(qp.q, -4.0 * n);
        const ConnectionCoefficients g = connection_coeffs(eps, ep, kTol);
        const ConnectionCoefficients s = connection_coeffs_fock_even(n, ep, kTol);
        CHECK(std::abs(g.C_o) < 1e-12 * std::abs(g.C_e));
        CHECK(rel(g.C_e.real(), s.C_e.real()) < 1e-10);
    }
    // Fock odd: C_e = 0
    for (int n : {0, 1}) {
        const double eps = -std::pow(qp.q, -4.0 * n - 2.0);
        const ConnectionCoefficients g = connection_coeffs(eps, ep, kTol);
        const ConnectionCoefficients s = connection_coeffs_fock_odd(n, ep, kTol);
        CHECK(std::abs(g.C_e) < 1e-12 * std::abs(g.C_o));
        CHECK(rel(g.C_o.real(), s.C_o.real()) < 1e-10);
    }
    // non-Fock specializations, both parities, including negative p
    for (int p : {-1, 0, 1}) {
        const double eps_odd = std::pow(qp.q, -4.0 * p - 2.0) / ep.c;
        const ConnectionCoefficients g1 = connection_coeffs(eps_odd, ep, kTol);
        const ConnectionCoefficients s1 = connection_coeffs_nonfock_odd(p, ep, kTol);
        CHECK(std::abs(g1.C_o) < 1e-12 * std::abs(g1.C_e));
        CHECK(rel(g1.C_e.real(), s1.C_e.real()) < 1e-10);

        const double eps_even = std::pow(qp.q, -4.0 * p) / ep.c;
        const ConnectionCoefficients g2 = connection_coeffs(eps_even, ep, kTol);
        const ConnectionCoefficients s2 = connection_coeffs_nonfock_even(p, ep, kTol);
        CHECK(std::abs(g2.C_e) < 1e-12 * std::abs(g2.C_o));
        CHECK(rel(g2.C_o.real(), s2.C_o.real()) < 1e-10);
    }
}

TEST_CASE("closed-form norms: frozen references") {
    const QParams qp = QParams::make(2.0);
    const EigenproblemParams ep = EigenproblemParams::make_calibrated(qp, 0.0);
    CHECK(fock_norm_constant(ep.c, qp, kTol) ==
          doctest::Approx(0.89800744664758583).epsilon(1e-13));
    CHECK(nonfock_norm_constant(ep.c, qp, kTol) ==
          doctest::Approx(0.61831183563045361).epsilon(1e-13));
    CHECK(norm_closed_form(SpectrumLabel::fock(0), ep, kTol) ==
          doctest::Approx(1.7960148932951717).epsilon(1e-11));
    CHECK(norm_closed_form(SpectrumLabel::fock(3), ep, kTol) ==
          doctest::Approx(325868.94223947595).epsilon(1e-11));
    CHECK(norm_closed_form(SpectrumLabel::non_fock(-2, 0.0), ep, kTol) ==
          doctest::Approx(23.347842850088469).epsilon(1e-11));
    CHECK(norm_closed_form(SpectrumLabel::non_fock(2, 0.0), ep, kTol) ==
          doctest::Approx(310.08853785273748).epsilon(1e-11));
    // m = 0 shapes
    CHECK(norm_closed_form(SpectrumLabel::fock(0), ep, kTol) ==
          doctest::Approx(2.0 * fock_norm_constant(ep.c, qp, kTol)).epsilon(1e-14));
    const double m0 = 2.0 * nonfock_norm_constant(ep.c, qp, kTol) /
                      qpoch_inf({-qp.base2 / ep.c, 0.0}, qp.base2, kTol).real();
    CHECK(norm_closed_form(SpectrumLabel::non_fock(0, 0.0), ep, kTol) ==
          doctest::Approx(m0).epsilon(1e-13));
}

TEST_CASE("single-sign orthogonality sums of the phi-normalized solutions") {
    // sum_n phi^r(n) phi^s(n) / (-c q^{4n}; q^-4)_inf q^{2n} against the
    // displayed right-hand sides, even and odd families, r <= 5.
    for (double q : {1.5, 2.0}) {
        const QParams qp = QParams::make(q);
        const double c = (q == 2.0) ? 1.0 : 0.8;
        const double b4 = qp.base4;
        auto phe = [&](int p, int n) {
            return phi11({{std::pow(q, 4.0 * p), 0.0},
                          {qp.base2, 0.0},
                          b4,
                          {-std::pow(q, -4.0 * p - 2.0) * c * std::pow(q, 4.0 * n), 0.0}},
                         kTol)
                .real();
        };
        auto pho = [&](int p, int n) {
            return std::pow(q, 2.0 * n) *
                   phi11({{std::pow(q, 4.0 * p), 0.0},
                          {std::pow(q, -6.0), 0.0},
                          b4,
                          {-std::pow(q, -4.0 * p - 6.0) * c * std::pow(q, 4.0 * n), 0.0}},
                         kTol)
                .real();
        };
        // upper limit 18: the sums converge by n ~ 12 and the bare 1phi1
        // values overflow further out (the weight would tame them, but the
        // test evaluates the factors separately)
        const int K = 40, K_up = 18;
        auto weighted_sum = [&](const std::function<double(int)>& v) {
            KahanSum<double> acc;
            for (int n = -K; n <= K_up; ++n) {
                const double lw =
                    -log_orthogonality_weight(c * std::pow(q, 4.0 * n), qp, kTol);
                acc.add(v(n) * std::exp(-lw + 2.0 * n * std::log(q)));
            }
            return acc.value();
        };
        const double even_tail =
            (qpoch_inf({b4, 0.0}, b4, kTol) * qpoch_inf({-c * qp.base2, 0.0}, b4, kTol) *
             qpoch_inf({-qp.base2 / c, 0.0}, b4, kTol) /
             (qpoch_inf({qp.base2, 0.0}, b4, kTol) * qpoch_inf({-c, 0.0}, b4, kTol) *
              qpoch_inf({-b4 / c, 0.0}, b4, kTol)))
                .real();
        const double odd_tail =
            (qpoch_inf({b4, 0.0}, b4, kTol) *
             qpoch_inf({-c * std::pow(q, -6.0), 0.0}, b4, kTol) *
             qpoch_inf({-q * q / c, 0.0}, b4, kTol) /
             (qpoch_inf({std::pow(q, -6.0), 0.0}, b4, kTol) *
              qpoch_inf({-c, 0.0}, b4, kTol) * qpoch_inf({-b4 / c, 0.0}, b4, kTol)))
                .real();
        for (int r = 0; r <= 5; ++r) {
            const double se = weighted_sum([&](int n) { return phe(r, n) * phe(r, n); });
            const double rhs_e = std::pow(q, 4.0 * r) *
                                 qpoch_finite({b4, 0.0}, b4, r).real() /
                                 qpoch_finite({qp.base2, 0.0}, b4, r).real() * even_tail;
            CHECK(std::abs(se - rhs_e) < 1e-7 * rhs_e);
            const double so = weighted_sum([&](int n) { return pho(r, n) * pho(r, n); });
            const double rhs_o = std::pow(q, 4.0 * r) *
                                 qpoch_finite({b4, 0.0}, b4, r).real() /
                                 qpoch_finite({std::pow(q, -6.0), 0.0}, b4, r).real() *
                                 odd_tail;
            CHECK(std::abs(so - rhs_o) < 1e-7 * rhs_o);
        }
        const double cross_e = weighted_sum([&](int n) { return phe(0, n) * phe(2, n); });
        CHECK(std::abs(cross_e) < 1e-9 * even_tail);
        const double cross_o = weighted_sum([&](int n) { return pho(1, n) * pho(3, n); });
        CHECK(std::abs(cross_o) < 1e-9 * std::pow(q, 8.0) * odd_tail);
    }
}

TEST_CASE("eigenfunction: Fock 0 reduces to the ground state") {
    const QParams qp = QParams::make(2.0);
    const EigenproblemParams ep = EigenproblemParams::make_calibrated(qp, 0.0);
    const Lattice lat(qp, ep.sqrt_c(), -20, 20);
    const LatticeFunction f0 = eigenfunction(SpectrumLabel::fock(0), lat, ep, kTol);
    const LatticeFunction psi0 = ground_state(lat, ep.op, kTol);
    for (int n = -20; n <= 20; ++n) {
        CHECK(std::abs(f0.at(+1, n) - psi0.at(+1, n)) <=
              1e-12 * std::abs(psi0.at(+1, n)));
    }
    // wrong lattice scale is rejected
    const Lattice bad(qp, 1.3, -20, 20);
    CHECK_THROWS_AS(eigenfunction(SpectrumLabel::fock(0), bad, ep, kTol), ParameterError);
}

TEST_CASE("eigenfunction: difference-equation residuals on both parities") {
    for (double q : {1.5, 2.0}) {
        const QParams qp = QParams::make(q);
        const EigenproblemParams ep = EigenproblemParams::make_calibrated(qp, 0.0);
        const int K = 36;
        const Lattice lat(qp, ep.sqrt_c(), -K, K);
        for (int m : {0, 3, 8}) {
            const SpectrumLabel l = SpectrumLabel::fock(m);
            const LatticeFunction f = eigenfunction(l, lat, ep, kTol);
            CHECK(ev_difference_residual(f, energy(l, qp), ep.op) < 1e-8);
        }
        for (int m : {-3, 0, 3}) {
            const SpectrumLabel l = SpectrumLabel::non_fock(m, 0.0);
            const LatticeFunction f = eigenfunction(l, lat, ep, kTol);
            CHECK(ev_difference_residual(f, energy(l, qp), ep.op) < 1e-8);
        }
    }
}
