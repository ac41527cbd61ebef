#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "qosc/verify.hpp"

using namespace qosc;

namespace {
const Tolerance kTol = Tolerance::make(1e-13);
}

TEST_CASE("gram matrix: Fock block against closed forms, parity zeros") {
    const QParams qp = QParams::make(2.0);
    const EigenproblemParams ep = EigenproblemParams::make_calibrated(qp, 0.0);
    std::vector<SpectrumLabel> labels;
    for (int m = 0; m <= 5; ++m) labels.push_back(SpectrumLabel::fock(m));
    const auto g = gram_matrix(labels, 80, ep, kTol);
    for (int m = 0; m <= 5; ++m) {
        const double closed = norm_closed_form(labels[m], ep, kTol);
        CHECK(std::abs(g[m][m].real() - closed) < 1e-7 * closed);
        CHECK(g[m][m].imag() == 0.0);  // real summands by construction
        CHECK(g[m][m].real() > 0.0);
    }
    // off-diagonals vanish: opposite parity exactly by the sigma sum, same
    // parity to truncation level
    const double scale01 = std::sqrt(g[0][0].real() * g[1][1].real());
    CHECK(std::abs(g[0][1].real()) < 1e-12 * scale01);
    const double scale02 = std::sqrt(g[0][0].real() * g[2][2].real());
    CHECK(std::abs(g[0][2].real()) < 1e-9 * scale02);
}

TEST_CASE("gram matrix: non-Fock block and the c != 1 arena") {
    for (double gamma_spec : {0.0, 0.25}) {
        const QParams qp = QParams::make(gamma_spec == 0.0 ? 2.0 : 1.5);
        const EigenproblemParams ep = EigenproblemParams::make_calibrated(qp, gamma_spec);
        std::vector<SpectrumLabel> labels;
        for (int m = -3; m <= 3; ++m) {
            labels.push_back(SpectrumLabel::non_fock(m, gamma_spec));
        }
        const int K = Lattice::default_half_width(qp);
        const auto g = gram_matrix(labels, K, ep, kTol);
        for (size_t i = 0; i < labels.size(); ++i) {
            const double closed = norm_closed_form(labels[i], ep, kTol);
            CHECK(std::abs(g[i][i].real() - closed) < 1e-7 * closed);
            for (size_t j = i + 1; j < labels.size(); ++j) {
                const double scale = std::sqrt(
                    g[i][i].real() * g[j][j].real());
                CHECK(std::abs(g[i][j].real()) < 1e-9 * scale);
            }
        }
    }
}

TEST_CASE("weight-division sums equal the |psi0|^2-dressed inner products") {
    const QParams qp = QParams::make(2.0);
    const EigenproblemParams ep = EigenproblemParams::make_calibrated(qp, 0.0);
    const int K = 60;
    const Lattice lat(qp, ep.sqrt_c(), -K, K);
    const LatticeFunction psi0 = ground_state(lat, ep.op, kTol);
    std::vector<SpectrumLabel> labels{SpectrumLabel::fock(1), SpectrumLabel::fock(3)};
    const auto g = gram_matrix(labels, K, ep, kTol);
    // dressed route: sum over even-parity points of conj(psi0 h_i) psi0 h_j q^n
    for (size_t i = 0; i < 2; ++i) {
        for (size_t j = 0; j < 2; ++j) {
            KahanSum<double> acc;
            for (int n = -K; n <= K; n += 2) {
                for (int sigma : {+1, -1}) {
                    const double x = lat.point(sigma, n);
                    const double hi = htilde(labels[i].m, x, ep, kTol);
                    const double hj = htilde(labels[j].m, x, ep, kTol);
                    acc.add(std::norm(psi0.at(sigma, n)) * hi * hj * std::pow(qp.q, n));
                }
            }
            CHECK(std::abs(acc.value() - g[i][j].real()) <=
                  1e-12 * std::max(std::abs(g[i][j].real()), 1.0));
        }
    }
}

TEST_CASE("connection check passes at q = 1.5 and q = 2") {
    for (double q : {1.5, 2.0}) {
        const QParams qp = QParams::make(q);
        const EigenproblemParams ep = EigenproblemParams::make_calibrated(qp, 0.0);
        const VerificationReport rep = connection_check(3, ep, kTol);
        for (const auto& c : rep.checks) {
            INFO(c.id);
            CHECK(c.pass);
        }
    }
}

TEST_CASE("moment drift mechanics: the drift equals the k-moment cross sum") {
    // The j-th drift is C^-1 |sum x^j k_s w| / max(1, mu_j) by construction; for
    // s = 0, j = 0 that cross sum is the (nonvanishing) k_0 total mass.  The
    // mechanism is verified here; the magnitude question is criterion 8's.
    const QParams qp = QParams::make(2.0);
    const EigenproblemParams ep = EigenproblemParams::make_calibrated(qp, 0.0);
    const int K = 60;
    const VerificationReport rep = moment_indeterminacy(0, 2, K, ep, kTol);
    // independent evaluation of mu_0, drift_0
    KahanSum<double> mass, mu0;
    for (int j = -K / 2; j <= K / 2; ++j) {
        for (int sigma : {+1, -1}) {
            const double x2 = ep.c * std::pow(qp.q, 4.0 * j);
            const double w =
                std::exp(log_orthogonality_weight(x2, qp, kTol)) * std::pow(qp.q, 2.0 * j);
            mu0.add(w);
            mass.add(ktilde_scaled(0, sigma, j, ep, kTol).value() * w);
        }
    }
    double kmax = 0.0;
    for (int j = -K / 2; j <= K / 2; ++j) {
        kmax = std::max(kmax, std::abs(ktilde_scaled(0, +1, j, ep, kTol).value()));
    }
    const double want = std::abs(mass.value()) / (1.01 * kmax) /
                        std::max(1.0, std::abs(mu0.value()));
    const auto& c0 = rep.checks.front();
    CHECK(c0.id == "moments.drift.s=0.j=0");
    CHECK(c0.value == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("two gamma-shifted lattices share all normalized moments") {
    const QParams qp = QParams::make(2.0);
    const EigenproblemParams ep = EigenproblemParams::make_calibrated(qp, 0.0);
    const VerificationReport rep = moment_indeterminacy(1, 10, 80, ep, kTol);
    bool found = false;
    for (const auto& c : rep.checks) {
        if (c.id == "moments.two_lattice_agreement") {
            found = true;
            CHECK(c.value < 1e-10);
        }
    }
    CHECK(found);
}

TEST_CASE("completeness projection: family members are reproduced exactly") {
    const QParams qp = QParams::make(2.0);
    const EigenproblemParams ep = EigenproblemParams::make_calibrated(qp, 0.0);
    const Lattice lat(qp, ep.sqrt_c(), -60, 60);
    LatticeFunction f(lat, [&](int, double x) {
        return Complex{htilde_scaled(2, x, qp, kTol).value(), 0.0};
    });
    const CompletenessResult r = completeness_projection(f, 4, 2, ep, kTol);
    CHECK(r.residual_fraction < 1e-8);
    // the combined family is *not* orthogonal across the blocks
    CHECK(r.gram_max_cross > 0.1);
    CHECK_FALSE(r.gram_diagonal);
}

TEST_CASE("completeness projection: shell residual decreases and settles") {
    const QParams qp = QParams::make(2.0);
    const EigenproblemParams ep = EigenproblemParams::make_calibrated(qp, 0.0);
    const Lattice lat(qp, ep.sqrt_c(), -60, 60);
    LatticeFunction f(lat, [&](int, double x) {
        const int n = static_cast<int>(
            std::lround(std::log(std::abs(x) / lat.xi0()) / std::log(qp.q)));
        return n == 0 ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
    });
    double prev = 2.0;
    for (const auto& [mf, mn] :
         std::vector<std::pair<int, int>>{{2, 1}, {4, 2}, {8, 4}}) {
        const CompletenessResult r = completeness_projection(f, mf, mn, ep, kTol);
        CHECK(r.residual_fraction <= prev + 1e-10);
        prev = r.residual_fraction;
    }
    // frozen calibration of the truncated-family shell residual
    CHECK(prev < 0.20);
    CHECK(prev > 0.10);
}

TEST_CASE("Fock-only expansion leaves a large part of k_0 unexplained") {
    const QParams qp = QParams::make(2.0);
    const EigenproblemParams ep = EigenproblemParams::make_calibrated(qp, 0.0);
    const Lattice lat(qp, ep.sqrt_c(), -60, 60);
    LatticeFunction f(lat, [&](int sigma, double x) {
        const int n = static_cast<int>(
            std::lround(std::log(std::abs(x) / lat.xi0()) / std::log(qp.q)));
        if (n % 2 != 0) return Complex{0.0, 0.0};
        return Complex{ktilde_scaled(0, sigma, n / 2, ep, kTol).value(), 0.0};
    });
    const CompletenessResult r = completeness_projection(f, 12, -1, ep, kTol);
    CHECK(r.residual_fraction > 0.3);   // incompleteness of the Fock family
    CHECK(r.residual_fraction < 0.99);  // but k_0 is not orthogonal to it either
}

TEST_CASE("reports: JSON is well-formed, reruns are bit-identical") {
    VerifyConfig cfg;
    cfg.qp = QParams::make(2.0);
    cfg.gamma = 0.0;
    cfg.half_width = 40;
    cfg.tol = Tolerance::make(1e-12);
    const VerificationReport a = connection_suite(cfg);
    const VerificationReport b = connection_suite(cfg);
    REQUIRE(a.checks.size() == b.checks.size());
    for (size_t i = 0; i < a.checks.size(); ++i) {
        CHECK(a.checks[i].value == b.checks[i].value);
    }
    const auto parsed = nlohmann::json::parse(a.to_json());
    CHECK(parsed.contains("checks"));
    CHECK(parsed.contains("pass"));
    CHECK(parsed["checks"].size() == a.checks.size());
}
