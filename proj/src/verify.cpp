#include "qosc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "json.hpp"

namespace qosc {

namespace {

// Deterministic iteration over the sign-doubled even sublattice: ascending |j|,
// then sigma = +1, -1.
template <typename F>
void for_even_sublattice(int j_max, F&& body) {
    for (int a = 0; a <= j_max; ++a) {
        const int js[2] = {a, -a};
        const int count = (a == 0) ? 1 : 2;
        for (int t = 0; t < count; ++t) {
            body(js[t], +1);
            body(js[t], -1);
        }
    }
}

ScaledReal basis_scaled(const SpectrumLabel& label, int sigma, int j,
                        const EigenproblemParams& ep, const Tolerance& tol) {
    if (label.kind == SpectrumLabel::Kind::Fock) {
        const double x = (sigma > 0 ? 1.0 : -1.0) * ep.sqrt_c() *
                         std::pow(ep.op.qp.q, 2.0 * j);
        return htilde_scaled(label.m, x, ep.op.qp, tol);
    }
    return ktilde_scaled(label.m, sigma, j, ep, tol);
}

struct BasisTable {
    // values[(j + j_max) * 2 + (sigma<0)):  ScaledReal at x = sigma sqrt(c) q^{2j}
    std::vector<ScaledReal> values;
    int j_max;

    const ScaledReal& at(int sigma, int j) const {
        return values[static_cast<size_t>((j + j_max) * 2 + (sigma < 0 ? 1 : 0))];
    }
};

BasisTable tabulate(const SpectrumLabel& label, int j_max, const EigenproblemParams& ep,
                    const Tolerance& tol) {
    BasisTable t;
    t.j_max = j_max;
    t.values.resize(static_cast<size_t>(2 * (2 * j_max + 1)));
    for (int j = -j_max; j <= j_max; ++j) {
        for (int sigma : {+1, -1}) {
            t.values[static_cast<size_t>((j + j_max) * 2 + (sigma < 0 ? 1 : 0))] =
                basis_scaled(label, sigma, j, ep, tol);
        }
    }
    return t;
}

std::vector<double> log_weights(int j_max, const EigenproblemParams& ep,
                                const Tolerance& tol) {
    // log [ q^{2j} / (-c q^{4j}; q^-4)_inf ]
    std::vector<double> lw(static_cast<size_t>(2 * j_max + 1));
    const double lnq = std::log(ep.op.qp.q);
    for (int j = -j_max; j <= j_max; ++j) {
        const double x2 = ep.c * std::pow(ep.op.qp.q, 4.0 * j);
        lw[static_cast<size_t>(j + j_max)] =
            log_orthogonality_weight(x2, ep.op.qp, tol) + 2.0 * j * lnq;
    }
    return lw;
}

double gram_entry(const BasisTable& a, const BasisTable& b,
                  const std::vector<double>& lw, int j_max) {
    KahanSum<double> acc;
    for_even_sublattice(j_max, [&](int j, int sigma) {
        const ScaledReal& va = a.at(sigma, j);
        const ScaledReal& vb = b.at(sigma, j);
        if (va.sign == 0.0 || vb.sign == 0.0) return;
        const double lg = va.log_abs + vb.log_abs + lw[static_cast<size_t>(j + j_max)];
        if (lg < -700.0) return;
        acc.add(va.sign * vb.sign * std::exp(lg));
    });
    return acc.value();
}

std::string label_name(const SpectrumLabel& l) {
    std::ostringstream os;
    os << (l.kind == SpectrumLabel::Kind::Fock ? "h" : "k") << l.m;
    return os.str();
}

}  // namespace

void VerificationReport::add(const std::string& id, double value, double tolerance) {
    checks.push_back(CheckResult{id, value, tolerance, value <= tolerance});
}

bool VerificationReport::pass() const {
    for (const auto& c : checks) {
        if (!c.pass) return false;
    }
    return true;
}

std::string VerificationReport::to_text() const {
    std::ostringstream os;
    os << "== " << name << "\n";
    for (const auto& [k, v] : params) {
        os << "   " << k << " = " << std::setprecision(17) << v << "\n";
    }
    for (const auto& c : checks) {
        os << "   " << (c.pass ? "[pass] " : "[FAIL] ") << c.id << "  value="
           << std::setprecision(6) << std::scientific << c.value
           << "  tol=" << c.tolerance << std::defaultfloat << "\n";
    }
    os << "   => " << (pass() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

std::string VerificationReport::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["params"] = nlohmann::json::object();
    for (const auto& [k, v] : params) {
        j["params"][k] = v;
    }
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        j["checks"].push_back({{"id", c.id},
                               {"value", c.value},
                               {"tolerance", c.tolerance},
                               {"pass", c.pass}});
    }
    j["pass"] = pass();
    return j.dump(2);
}

std::vector<std::vector<Complex>> gram_matrix(const std::vector<SpectrumLabel>& labels,
                                              int half_width,
                                              const EigenproblemParams& ep,
                                              const Tolerance& tol) {
    for (const auto& l : labels) {
        if (l.kind == SpectrumLabel::Kind::NonFock && !ep.calibrated) {
            throw ParameterError("gram_matrix: non-Fock labels need calibrated params");
        }
    }
    const int j_max = half_width / 2;
    const auto lw = log_weights(j_max, ep, tol);
    std::vector<BasisTable> tabs;
    tabs.reserve(labels.size());
    for (const auto& l : labels) {
        tabs.push_back(tabulate(l, j_max, ep, tol));
    }
    const size_t n = labels.size();
    std::vector<std::vector<Complex>> g(n, std::vector<Complex>(n));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i; j < n; ++j) {
            const double v = gram_entry(tabs[i], tabs[j], lw, j_max);
            g[i][j] = Complex{v, 0.0};
            g[j][i] = Complex{v, 0.0};
        }
    }
    return g;
}

VerificationReport connection_check(int n_max, const EigenproblemParams& ep,
                                    const Tolerance& tol) {
    VerificationReport rep;
    rep.name = "connection";
    const QParams& qp = ep.op.qp;
    rep.params["q"] = qp.q;
    rep.params["c"] = ep.c;
    const double lnq = std::log(qp.q);
    const double sqc = ep.sqrt_c();

    // Dual-route residuals of the q-Hermite identities: the 2phi1 form against
    // the independent 1phi1 (connection-formula) form, at every lattice point
    // where the 2phi1 series converges.
    for (int m = 0; m <= 2 * n_max + 1; ++m) {
        double worst = 0.0;
        int tested = 0;
        for (int j = -12; j <= 12; ++j) {
            const double x = sqc * std::pow(qp.q, 2.0 * j);
            const double w = qp.base4 / (x * x);
            if (w >= 0.9) continue;
            const Phi21Spec spec{Complex{std::pow(qp.q, 2.0 * m - 2.0), 0.0},
                                 Complex{std::pow(qp.q, 2.0 * m), 0.0},
                                 Complex{0.0, 0.0}, qp.base4, Complex{-w, 0.0}};
            const double lhs = std::pow(x, m) * phi21(spec, tol).real();
            const double rhs = htilde_via_connection(m, x, qp, tol);
            worst = std::max(worst,
                             std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
            ++tested;
        }
        std::ostringstream id;
        id << "connection.hermite_dual_route.m=" << m << ".points=" << tested;
        rep.add(id.str(), worst, 1e-8);
    }

    // Generic-parameter combination formula:
    //   (-eps)^k 2phi1(-1/(eps q^2), -1/eps; 0; q^-4, -q^{4(k-1)}/c)
    //     = C_e 1phi1(...) + C_o q^{-2k} 1phi1(...)
    const double epss[3] = {0.37 * std::pow(qp.q, 2.0 * ep.gamma), -0.21,
                            1.9 * std::pow(qp.q, 2.0 * ep.gamma)};
    for (double eps : epss) {
        const ConnectionCoefficients cc = connection_coeffs(eps, ep, tol);
        double worst = 0.0;
        int tested = 0;
        for (int k = 2; k >= -14 && tested < 5; --k) {
            const double arg = -std::pow(qp.q, 4.0 * (k - 1)) / ep.c;
            if (std::abs(arg) >= 0.9) continue;
            // For eps > 0 the 1phi1 series alternate and the two sides of the
            // combination cancel; past |z| ~ 60 that costs more than the 1e-8
            // target in double precision, so the sample set stops there.
            if (std::abs(eps * ep.c * std::pow(qp.q, -4.0 * k - 2.0)) > 60.0) break;
            const Complex lhs_phi =
                phi21(Phi21Spec{Complex{-1.0 / (eps * qp.q * qp.q), 0.0},
                                Complex{-1.0 / eps, 0.0}, Complex{0.0, 0.0},
                                qp.base4, Complex{arg, 0.0}},
                      tol);
            const double pref = (eps < 0.0)
                                    ? std::pow(-eps, k)
                                    : (k % 2 == 0 ? 1.0 : -1.0) * std::pow(eps, k);
            const double lhs = pref * lhs_phi.real();
            const Complex fe =
                phi11(Phi11Spec{Complex{-1.0 / eps, 0.0}, Complex{qp.base2, 0.0},
                                qp.base4,
                                Complex{eps * ep.c * std::pow(qp.q, -4.0 * k - 2.0), 0.0}},
                      tol);
            const Complex fo =
                phi11(Phi11Spec{Complex{-qp.base2 / eps, 0.0},
                                Complex{std::pow(qp.q, -6.0), 0.0}, qp.base4,
                                Complex{eps * ep.c * std::pow(qp.q, -4.0 * k - 4.0), 0.0}},
                      tol);
            const double rhs = cc.C_e.real() * fe.real() +
                               cc.C_o.real() * std::pow(qp.q, -2.0 * k) * fo.real();
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-30));
            ++tested;
        }
        std::ostringstream id;
        id << "connection.general.eps=" << eps << ".points=" << tested;
        rep.add(id.str(), worst, 1e-8);
    }
    (void)lnq;
    return rep;
}

VerificationReport moment_indeterminacy(int s, int J, int half_width,
                                        const EigenproblemParams& ep,
                                        const Tolerance& tol) {
    if (!ep.calibrated) {
        throw ParameterError("moment_indeterminacy: requires calibrated params");
    }
    VerificationReport rep;
    rep.name = "moments";
    const QParams& qp = ep.op.qp;
    rep.params["q"] = qp.q;
    rep.params["s"] = s;
    rep.params["J"] = J;
    rep.params["K"] = half_width;
    const int j_max = half_width / 2;
    const double lnq = std::log(qp.q);
    const auto lw = log_weights(j_max, ep, tol);
    const BasisTable ks = tabulate(SpectrumLabel::non_fock(s, ep.gamma), j_max, ep, tol);

    double kmax = 0.0;
    for (const auto& v : ks.values) {
        if (v.sign != 0.0) kmax = std::max(kmax, v.log_abs);
    }
    const double C = 1.01 * std::exp(kmax);

    double worst = 0.0;
    for (int jj = 0; jj <= J; ++jj) {
        KahanSum<double> mu, dmu;
        for_even_sublattice(j_max, [&](int j, int sigma) {
            const double log_xj =
                jj * (std::log(ep.sqrt_c()) + 2.0 * j * lnq);
            const double xj_sign = (sigma < 0 && jj % 2 != 0) ? -1.0 : 1.0;
            const double base = log_xj + lw[static_cast<size_t>(j + j_max)];
            if (base > -700.0) {
                mu.add(xj_sign * std::exp(base));
            }
            const ScaledReal& kv = ks.at(sigma, j);
            if (kv.sign != 0.0) {
                const double lg = base + kv.log_abs - std::log(C);
                if (lg > -700.0) {
                    dmu.add(xj_sign * kv.sign * std::exp(lg));
                }
            }
        });
        const double drift = std::abs(dmu.value()) / std::max(1.0, std::abs(mu.value()));
        std::ostringstream id;
        id << "moments.drift.s=" << s << ".j=" << jj;
        rep.add(id.str(), drift, 1e-7);
        worst = std::max(worst, drift);
    }
    rep.params["max_drift"] = worst;

    // Independent indeterminacy evidence: a genuinely different lattice
    // (gamma shifted by 0.31) carries the same normalized moments.
    {
        const double c2 = std::pow(qp.q, -2.0 * (ep.gamma + 0.31));
        double worst2 = 0.0;
        const int n_max = half_width;
        auto moments_on = [&](double cc, int jj) {
            KahanSum<double> acc;
            const double sq = std::sqrt(cc);
            for (int n = -n_max; n <= n_max; ++n) {
                for (int sigma : {+1, -1}) {
                    const double x = (sigma > 0 ? 1.0 : -1.0) * sq * std::pow(qp.q, n);
                    const double lg = jj * std::log(std::abs(x)) +
                                      log_orthogonality_weight(x * x, qp, tol) +
                                      n * lnq;
                    if (lg < -700.0) continue;
                    acc.add((x < 0.0 && jj % 2 != 0 ? -1.0 : 1.0) * std::exp(lg));
                }
            }
            return acc.value();
        };
        const double m0a = moments_on(ep.c, 0);
        const double m0b = moments_on(c2, 0);
        for (int jj = 2; jj <= J; jj += 2) {
            const double a = moments_on(ep.c, jj) / m0a;
            const double b = moments_on(c2, jj) / m0b;
            worst2 = std::max(worst2, std::abs(a - b) / std::max(1.0, std::abs(a)));
        }
        rep.add("moments.two_lattice_agreement", worst2, 1e-10);
    }
    return rep;
}

CompletenessResult completeness_projection(const LatticeFunction& f, int M_fock,
                                           int M_nonfock,
                                           const EigenproblemParams& ep,
                                           const Tolerance& tol) {
    const Lattice& lat = f.lattice();
    if (std::abs(lat.xi0() - ep.sqrt_c()) > 1e-12 * ep.sqrt_c()) {
        throw ParameterError("completeness_projection: lattice scale must be sqrt(c)");
    }
    // even-sublattice indices reachable from f's window
    const Window w = f.valid_window();
    const int j_lo = (w.lo + (w.lo % 2 != 0 ? 1 : 0)) / 2;
    const int j_hi = (w.hi - (w.hi % 2 != 0 ? 1 : 0)) / 2;
    const int j_max = std::max(std::abs(j_lo), std::abs(j_hi));

    std::vector<SpectrumLabel> labels;
    for (int m = 0; m <= M_fock; ++m) labels.push_back(SpectrumLabel::fock(m));
    for (int m = -M_nonfock; m <= M_nonfock; ++m) {
        labels.push_back(SpectrumLabel::non_fock(m, ep.gamma));
    }
    const size_t n = labels.size();

    const auto lw = log_weights(j_max, ep, tol);
    std::vector<BasisTable> tabs;
    tabs.reserve(n);
    std::vector<double> norms(n);
    for (size_t i = 0; i < n; ++i) {
        tabs.push_back(tabulate(labels[i], j_max, ep, tol));
        norms[i] = std::sqrt(norm_closed_form(labels[i], ep, tol));
    }

    auto f_at = [&](int sigma, int j) -> double {
        const int nn = 2 * j;
        if (nn < w.lo || nn > w.hi) return 0.0;
        return f.at(sigma, nn).real();
    };

    // Gram of the norm-scaled family and right-hand side <e_i, f>.
    std::vector<std::vector<double>> G(n, std::vector<double>(n, 0.0));
    std::vector<double> rhs(n, 0.0);
    double f2 = 0.0;
    {
        KahanSum<double> f2acc;
        for_even_sublattice(j_max, [&](int j, int sigma) {
            const double wgt = std::exp(lw[static_cast<size_t>(j + j_max)]);
            const double fv = f_at(sigma, j);
            f2acc.add(fv * fv * wgt);
        });
        f2 = f2acc.value();
    }
    for (size_t i = 0; i < n; ++i) {
        for (size_t k = i; k < n; ++k) {
            const double v = gram_entry(tabs[i], tabs[k], lw, j_max) / (norms[i] * norms[k]);
            G[i][k] = v;
            G[k][i] = v;
        }
        KahanSum<double> racc;
        for_even_sublattice(j_max, [&](int j, int sigma) {
            const ScaledReal& bv = tabs[i].at(sigma, j);
            if (bv.sign == 0.0) return;
            const double fv = f_at(sigma, j);
            if (fv == 0.0) return;
            const double lg = bv.log_abs + lw[static_cast<size_t>(j + j_max)];
            if (lg < -700.0) return;
            racc.add(bv.sign * std::exp(lg) * fv);
        });
        rhs[i] = racc.value() / norms[i];
    }

    double max_cross = 0.0;
    for (size_t i = 0; i < n; ++i) {
        for (size_t k = i + 1; k < n; ++k) {
            max_cross = std::max(max_cross,
                                 std::abs(G[i][k]) / std::sqrt(G[i][i] * G[k][k]));
        }
    }

    // The normalized family is close to linearly dependent once both blocks are
    // present, so the projection uses a spectral pseudo-inverse of the Gram
    // (cyclic Jacobi on the symmetric matrix, eigenvalues below threshold
    // treated as null directions).
    std::vector<std::vector<double>> A = G;
    std::vector<std::vector<double>> V(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i) V[i][i] = 1.0;
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (size_t p = 0; p < n; ++p) {
            for (size_t r = p + 1; r < n; ++r) off = std::max(off, std::abs(A[p][r]));
        }
        if (off < 1e-15) break;
        for (size_t p = 0; p < n; ++p) {
            for (size_t r = p + 1; r < n; ++r) {
                if (std::abs(A[p][r]) < 1e-18) continue;
                const double theta = 0.5 * std::atan2(2.0 * A[p][r], A[r][r] - A[p][p]);
                const double cth = std::cos(theta), sth = std::sin(theta);
                for (size_t k = 0; k < n; ++k) {
                    const double akp = A[k][p], akr = A[k][r];
                    A[k][p] = cth * akp - sth * akr;
                    A[k][r] = sth * akp + cth * akr;
                }
                for (size_t k = 0; k < n; ++k) {
                    const double apk = A[p][k], ark = A[r][k];
                    A[p][k] = cth * apk - sth * ark;
                    A[r][k] = sth * apk + cth * ark;
                }
                for (size_t k = 0; k < n; ++k) {
                    const double vkp = V[k][p], vkr = V[k][r];
                    V[k][p] = cth * vkp - sth * vkr;
                    V[k][r] = sth * vkp + cth * vkr;
                }
            }
        }
    }
    double lam_max = 0.0;
    for (size_t i = 0; i < n; ++i) lam_max = std::max(lam_max, A[i][i]);
    const double lam_cut = 1e-11 * lam_max;
    std::vector<double> coef(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        if (A[i][i] <= lam_cut) continue;
        double vb = 0.0;
        for (size_t k = 0; k < n; ++k) vb += V[k][i] * rhs[k];
        const double scale = vb / A[i][i];
        for (size_t k = 0; k < n; ++k) coef[k] += scale * V[k][i];
    }

    // residual^2 = ||f||^2 - 2 c.b + c^T G c
    double quad = 0.0, lin = 0.0;
    for (size_t i = 0; i < n; ++i) {
        lin += coef[i] * rhs[i];
        for (size_t k = 0; k < n; ++k) quad += coef[i] * G[i][k] * coef[k];
    }
    double res2 = f2 - 2.0 * lin + quad;
    if (res2 < 0.0 && res2 > -1e-8 * f2) res2 = 0.0;

    CompletenessResult out;
    out.residual_fraction = f2 > 0.0 ? res2 / f2 : 0.0;
    out.gram_max_cross = max_cross;
    out.gram_diagonal = max_cross < 1e-8;
    return out;
}

// ---------------------------------------------------------------------------
// Suites

namespace {

// Random lattice function; pad > 0 zeroes the values within pad of the window
// edges, so quadratic-form identities telescope without boundary terms.
LatticeFunction random_function(const Lattice& lat, std::mt19937_64& rng, int pad) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Complex> draws;
    for (int n = lat.n_min(); n <= lat.n_max(); ++n) {
        const bool inside = n >= lat.n_min() + pad && n <= lat.n_max() - pad;
        for (int s = 0; s < 2; ++s) {
            draws.push_back(inside ? Complex{u(rng), u(rng)} : Complex{0.0, 0.0});
        }
    }
    size_t idx = 0;
    return LatticeFunction(lat, [&, draws](int, double) mutable -> Complex {
        return draws[idx++ % draws.size()];
    });
}

double osc_relation_residual(const LatticeFunction& f, const OscillatorParams& op) {
    // ||(a a+ - q^-2 a+ a - 1) f||_inf / ||f||_inf
    const LatticeFunction t1 = apply_a(apply_adag(f, op), op);
    const LatticeFunction t2 = apply_adag(apply_a(f, op), op);
    const LatticeFunction lhs =
        lf_sub(lf_sub(t1, lf_scale(t2, Complex{op.qp.base2, 0.0})), f);
    return lhs.max_abs() / std::max(f.max_abs(), 1e-300);
}

}  // namespace

VerificationReport algebra_suite(const VerifyConfig& cfg) {
    VerificationReport rep;
    rep.name = "algebra";
    const QParams& qp = cfg.qp;
    rep.params["q"] = qp.q;
    rep.params["gamma"] = cfg.gamma;
    const Tolerance tol = cfg.tol;
    std::mt19937_64 rng(20240911u);
    std::uniform_real_distribution<double> ug(-1.0, 1.0);
    std::uniform_real_distribution<double> uth(0.0, 2.0 * 3.141592653589793);

    // Oscillator relation and Heisenberg relations on random data.  The window
    // keeps |x| >= q^-3 so the 1/x^2 amplification stays below the tolerance.
    const Lattice lat_alg(qp, 1.0, -3, 20);
    {
        double worst = 0.0;
        for (int t = 0; t < 10; ++t) {
            const OscillatorParams op = OscillatorParams::make(qp, ug(rng), uth(rng));
            const LatticeFunction f = random_function(lat_alg, rng, 0);
            worst = std::max(worst, osc_relation_residual(f, op));
        }
        rep.add("algebra.oscillator_relation", worst, 1e-10);
    }
    {
        double worst = 0.0;
        for (int t = 0; t < 10; ++t) {
            const LatticeFunction f = random_function(lat_alg, rng, 0);
            worst = std::max(worst, heisenberg_residual(f).max_relative());
        }
        rep.add("algebra.heisenberg_relations", worst, 1e-11);
    }
    {
        // 1phi1 contiguous relation on random admissible draws
        std::uniform_real_distribution<double> ua(-3.0, 3.0);
        std::uniform_real_distribution<double> uc(0.05, 0.9);
        std::uniform_real_distribution<double> uz(-2.0, 2.0);
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const Phi11Spec spec{Complex{ua(rng), 0.0}, Complex{uc(rng), 0.0}, qp.base4,
                                 Complex{uz(rng), 0.0}};
            const double fmag = std::abs(phi11(spec, tol));
            const double r = phi11_recurrence_residual(spec, tol) / std::max(1.0, fmag);
            worst = std::max(worst, r);
        }
        rep.add("algebra.phi11_recurrence", worst, 1e-9);
    }

    // Calibrated eigenproblem arena.  Operator application divides by x, so
    // checks that run a, a+ or H keep |x| >= ~1e-5: below that the difference
    // quotients are rounding-dominated.  The difference-equation residuals have
    // no such division and use the full window.
    const EigenproblemParams ep = EigenproblemParams::make_calibrated(qp, cfg.gamma);
    const int K = cfg.half_width > 0 ? cfg.half_width : Lattice::default_half_width(qp);
    const Lattice lat_cal(qp, ep.sqrt_c(), -K, K);
    const int n_op_lo = -static_cast<int>(std::ceil(5.0 * std::log(10.0) / std::log(qp.q)));
    const Lattice lat_op(qp, ep.sqrt_c(), n_op_lo, K);
    {
        const LatticeFunction psi0 = ground_state(lat_op, ep.op, tol);
        const LatticeFunction apsi = apply_a(psi0, ep.op);
        rep.add("algebra.ground_state_annihilation",
                apsi.max_abs() / std::max(psi0.max_abs(), 1e-300), 1e-10);

        // H closed form vs composition a+ (a f)
        double worst = 0.0;
        for (int t = 0; t < 5; ++t) {
            const LatticeFunction f = random_function(lat_alg, rng, 0);
            const OscillatorParams op = OscillatorParams::make(qp, ug(rng), uth(rng));
            const LatticeFunction h1 = apply_H(f, op);
            const LatticeFunction h2 = apply_adag(apply_a(f, op), op);
            const LatticeFunction d = lf_sub(h1, h2);
            worst = std::max(worst, d.max_abs() / std::max(h1.max_abs(), 1e-300));
        }
        rep.add("algebra.hamiltonian_path_equivalence", worst, 1e-12);
    }
    {
        // adjointness and positivity on enveloped data
        const Lattice lat_env(qp, 1.0, -12, 16);
        double worst = 0.0;
        double neg = 0.0;
        for (int t = 0; t < 5; ++t) {
            const OscillatorParams op = OscillatorParams::make(qp, ug(rng), uth(rng));
            const LatticeFunction f = random_function(lat_env, rng, 3);
            const LatticeFunction g = random_function(lat_env, rng, 3);
            const Complex l = inner_product(apply_adag(f, op), g);
            const Complex r = inner_product(f, apply_a(g, op));
            worst = std::max(worst, std::abs(l - r) / std::max(std::abs(l), 1e-300));
            const Complex e = inner_product(f, apply_H(f, op));
            const double nrm = inner_product(f, f).real();
            neg = std::max(neg, -e.real() / std::max(nrm, 1e-300));
        }
        rep.add("algebra.adjointness", worst, 1e-9);
        rep.add("algebra.positivity", neg, 1e-10);
    }

    // Eigenvalue residuals for both spectral families.
    {
        double worst = 0.0;
        for (int m = 0; m <= 8; ++m) {
            const SpectrumLabel l = SpectrumLabel::fock(m);
            const LatticeFunction f = eigenfunction(l, lat_cal, ep, tol);
            worst = std::max(worst, ev_difference_residual(f, energy(l, qp), ep.op));
        }
        rep.add("algebra.ev_residual_fock_m<=8", worst, 1e-8);
    }
    {
        double worst = 0.0;
        for (int m = -4; m <= 4; ++m) {
            const SpectrumLabel l = SpectrumLabel::non_fock(m, ep.gamma);
            const LatticeFunction f = eigenfunction(l, lat_cal, ep, tol);
            worst = std::max(worst, ev_difference_residual(f, energy(l, qp), ep.op));
        }
        rep.add("algebra.ev_residual_nonfock_|m|<=4", worst, 1e-8);
    }

    // Spectrum ordering around the accumulation point.
    {
        const double acc = accumulation_point(qp);
        double viol = 0.0;
        double prev = -1.0;
        for (int m = 0; m <= 30; ++m) {
            const double e = energy(SpectrumLabel::fock(m), qp);
            if (e <= prev) viol = std::max(viol, prev - e);
            if (e >= acc) viol = std::max(viol, e - acc);
            prev = e;
        }
        prev = 1e308;
        for (int m = -5; m <= 30; ++m) {
            const double e = energy(SpectrumLabel::non_fock(m, cfg.gamma), qp);
            if (e >= prev) viol = std::max(viol, e - prev);
            if (e <= acc) viol = std::max(viol, acc - e);
            prev = e;
        }
        rep.add("algebra.spectrum_ordering", viol, 0.0);
    }

    // Ladder structure: a+ raises Fock; a raises non-Fock energies.  The
    // quotient inner products run over one common window, else the fitted
    // coefficient is biased by the boundary shells the narrower factor misses.
    {
        double worst = 0.0;
        for (int m = 0; m <= 3; ++m) {
            const LatticeFunction fm =
                eigenfunction(SpectrumLabel::fock(m), lat_op, ep, tol);
            const LatticeFunction fm1 =
                eigenfunction(SpectrumLabel::fock(m + 1), lat_op, ep, tol);
            const LatticeFunction af = apply_adag(fm, ep.op);
            const LatticeFunction fm1w = fm1.with_window(af.valid_window());
            const Complex c = inner_product(fm1w, af) / inner_product(fm1w, fm1w);
            const LatticeFunction d = lf_sub(af, lf_scale(fm1w, c));
            worst = std::max(worst, d.max_abs() / std::max(af.max_abs(), 1e-300));
        }
        rep.add("algebra.fock_raising", worst, 1e-8);
    }
    {
        double worst = 0.0;
        for (int m = 0; m <= 2; ++m) {
            const SpectrumLabel l = SpectrumLabel::non_fock(m, ep.gamma);
            const LatticeFunction f = eigenfunction(l, lat_op, ep, tol);
            const LatticeFunction af = apply_a(f, ep.op);
            const LatticeFunction haf = apply_H(af, ep.op);
            const LatticeFunction afw = af.with_window(haf.valid_window());
            const double ray =
                (inner_product(afw, haf) / inner_product(afw, afw)).real();
            const double target = energy(SpectrumLabel::non_fock(m - 1, ep.gamma), qp);
            worst = std::max(worst, std::abs(ray / target - 1.0));
        }
        rep.add("algebra.nonfock_raising_rayleigh", worst, 1e-6);
    }
    return rep;
}

VerificationReport orthogonality_suite(const VerifyConfig& cfg) {
    VerificationReport rep;
    rep.name = "orthogonality";
    const QParams& qp = cfg.qp;
    rep.params["q"] = qp.q;
    rep.params["gamma"] = cfg.gamma;
    const Tolerance tol = cfg.tol;
    const EigenproblemParams ep = EigenproblemParams::make_calibrated(qp, cfg.gamma);
    const int K = cfg.half_width > 0 ? cfg.half_width : Lattice::default_half_width(qp);

    std::vector<SpectrumLabel> labels;
    for (int m = 0; m <= 5; ++m) labels.push_back(SpectrumLabel::fock(m));
    for (int m = -3; m <= 3; ++m) labels.push_back(SpectrumLabel::non_fock(m, ep.gamma));

    const auto g = gram_matrix(labels, K, ep, tol);
    std::vector<double> diag_closed(labels.size());
    for (size_t i = 0; i < labels.size(); ++i) {
        diag_closed[i] = norm_closed_form(labels[i], ep, tol);
    }
    double worst_diag = 0.0;
    for (size_t i = 0; i < labels.size(); ++i) {
        const double rel = std::abs(g[i][i].real() - diag_closed[i]) / diag_closed[i];
        worst_diag = std::max(worst_diag, rel);
        rep.add("orthogonality.diagonal." + label_name(labels[i]), rel, 1e-7);
    }
    double worst_same = 0.0;
    double worst_cross = 0.0;
    for (size_t i = 0; i < labels.size(); ++i) {
        for (size_t j = i + 1; j < labels.size(); ++j) {
            const double scale = std::sqrt(diag_closed[i] * diag_closed[j]);
            const double v = std::abs(g[i][j].real()) / scale;
            const bool cross = labels[i].kind != labels[j].kind;
            if (cross) {
                worst_cross = std::max(worst_cross, v);
            } else {
                worst_same = std::max(worst_same, v);
            }
        }
    }
    rep.add("orthogonality.offdiag_within_family", worst_same, 1e-9);
    // The blanket vanishing of the Fock x non-Fock products holds only for
    // Fock index below the non-Fock index; see the ledger analysis.  Reported
    // at the stated tolerance regardless.
    rep.add("orthogonality.offdiag_cross_family", worst_cross, 1e-8);
    return rep;
}

VerificationReport connection_suite(const VerifyConfig& cfg) {
    const EigenproblemParams ep = EigenproblemParams::make_calibrated(cfg.qp, cfg.gamma);
    return connection_check(3, ep, cfg.tol);
}

VerificationReport moments_suite(const VerifyConfig& cfg) {
    const EigenproblemParams ep = EigenproblemParams::make_calibrated(cfg.qp, cfg.gamma);
    const int K = cfg.half_width > 0 ? cfg.half_width : Lattice::default_half_width(cfg.qp);
    VerificationReport rep0 = moment_indeterminacy(0, 10, K, ep, cfg.tol);
    VerificationReport rep1 = moment_indeterminacy(1, 10, K, ep, cfg.tol);
    VerificationReport rep;
    rep.name = "moments";
    rep.params = rep0.params;
    for (const auto& c : rep0.checks) rep.checks.push_back(c);
    for (const auto& c : rep1.checks) {
        if (c.id.find("two_lattice") == std::string::npos) rep.checks.push_back(c);
    }
    return rep;
}

VerificationReport completeness_suite(const VerifyConfig& cfg) {
    VerificationReport rep;
    rep.name = "completeness";
    const QParams& qp = cfg.qp;
    rep.params["q"] = qp.q;
    rep.params["gamma"] = cfg.gamma;
    const Tolerance tol = cfg.tol;
    const EigenproblemParams ep = EigenproblemParams::make_calibrated(qp, cfg.gamma);
    const int K = std::min(cfg.half_width > 0 ? cfg.half_width
                                              : Lattice::default_half_width(qp),
                           70);
    const Lattice lat(qp, ep.sqrt_c(), -K, K);

    // Family member: the projection must reproduce it exactly.
    {
        LatticeFunction f(lat, [&](int, double x) {
            return Complex{htilde_scaled(2, x, qp, tol).value(), 0.0};
        });
        const CompletenessResult r = completeness_projection(f, 4, 2, ep, tol);
        rep.add("completeness.family_member_h2", r.residual_fraction, 1e-8);
    }
    {
        LatticeFunction f(lat, [&](int sigma, double x) {
            const double n_real = std::log(std::abs(x) / lat.xi0()) / std::log(qp.q);
            const int n = static_cast<int>(std::lround(n_real));
            if (n % 2 != 0) return Complex{0.0, 0.0};
            return Complex{ktilde_scaled(1, sigma, n / 2, ep, tol).value(), 0.0};
        });
        const CompletenessResult r = completeness_projection(f, 2, 1, ep, tol);
        rep.add("completeness.family_member_k1", r.residual_fraction, 1e-8);
    }

    // Symmetrized one-shell indicator: residual decreases with the cutoffs.
    // Calibrated against the brute-force expansion (shell at n = 0, gamma = 0):
    // 0.186 at (8,4) for q = 2 and 0.311 for q = 1.5; frozen bounds 0.20 and
    // 0.35.  At other q the value is reported without a frozen bound.
    {
        LatticeFunction f(lat, [&](int, double x) {
            const double n_real = std::log(std::abs(x) / lat.xi0()) / std::log(qp.q);
            const int n = static_cast<int>(std::lround(n_real));
            return n == 0 ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
        });
        double prev = 2.0;
        double grow = 0.0;
        double at84 = 1.0;
        for (const auto& [mf, mn] : std::vector<std::pair<int, int>>{
                 {2, 1}, {4, 2}, {8, 4}}) {
            const CompletenessResult r = completeness_projection(f, mf, mn, ep, tol);
            grow = std::max(grow, r.residual_fraction - prev);
            prev = r.residual_fraction;
            if (mf == 8) at84 = r.residual_fraction;
        }
        rep.add("completeness.shell_monotone_decrease", grow, 1e-10);
        rep.params["shell_residual_at_8_4"] = at84;
        if (std::abs(qp.q - 2.0) < 0.25) {
            rep.add("completeness.shell_residual_at_8_4", at84, 0.20);
        } else if (std::abs(qp.q - 1.5) < 0.25) {
            rep.add("completeness.shell_residual_at_8_4", at84, 0.35);
        }
    }

    // Fock-only expansion of k0 leaves most of the norm unexplained; the
    // Fock family alone is not complete.
    {
        LatticeFunction f(lat, [&](int sigma, double x) {
            const double n_real = std::log(std::abs(x) / lat.xi0()) / std::log(qp.q);
            const int n = static_cast<int>(std::lround(n_real));
            if (n % 2 != 0) return Complex{0.0, 0.0};
            return Complex{ktilde_scaled(0, sigma, n / 2, ep, tol).value(), 0.0};
        });
        const CompletenessResult r = completeness_projection(f, 12, -1, ep, tol);
        rep.params["fock_only_k0_retained"] = r.residual_fraction;
        // incompleteness evidence: a substantial fraction must survive
        rep.add("completeness.fock_only_k0_surviving_fraction_above_0.3",
                0.3 - r.residual_fraction, 0.0);
        // the stated >99% retention target; see ledger for why it cannot hold
        rep.add("completeness.fock_only_k0_retained_above_0.99",
                0.99 - r.residual_fraction, 0.0);
    }
    return rep;
}

std::vector<VerificationReport> run_suites(const VerifyConfig& cfg,
                                           const std::string& which) {
    std::vector<VerificationReport> out;
    const bool all = which == "all";
    if (all || which == "algebra") out.push_back(algebra_suite(cfg));
    if (all || which == "orthogonality") out.push_back(orthogonality_suite(cfg));
    if (all || which == "connection") out.push_back(connection_suite(cfg));
    if (all || which == "moments") out.push_back(moments_suite(cfg));
    if (all || which == "completeness") out.push_back(completeness_suite(cfg));
    if (out.empty()) {
        throw ParameterError("run_suites: unknown suite '" + which + "'");
    }
    return out;
}

}  // namespace qosc
