#ifndef QOSC_VERIFY_HPP
#define QOSC_VERIFY_HPP

#include <map>
#include <string>
#include <vector>

#include "qosc/eigenbasis.hpp"

namespace qosc {

struct CheckResult {
    std::string id;
    double value;
    double tolerance;
    bool pass;
};

struct VerificationReport {
    std::string name;
    std::map<std::string, double> params;
    std::vector<CheckResult> checks;

    void add(const std::string& id, double value, double tolerance);
    bool pass() const;
    std::string to_text() const;
    std::string to_json() const;
};

// ---------------------------------------------------------------------------
// Gram matrix of the orthogonality sums
//   G[i][j] = sum_{sigma, k} v_i v_j / (-c q^{4k}; q^-4)_inf q^{2k}
// over the sign-doubled even sublattice x = sigma sqrt(c) q^{2k}, |2k| <= K.
// v = h_m for Fock labels, the k_m family functions for non-Fock labels.
// Summed ascending |k| then sigma, compensated.  Entries are real; returned
// complex so rounding-level imaginary parts (here exactly zero by construction)
// can be asserted by tests.

std::vector<std::vector<Complex>> gram_matrix(const std::vector<SpectrumLabel>& labels,
                                              int half_width,
                                              const EigenproblemParams& ep,
                                              const Tolerance& tol);

// ---------------------------------------------------------------------------
// Connection-formula checks: dual-route residuals of the q-Hermite identities
// (both parities, orders <= n_max) plus the generic-parameter combination
// formula at three non-special eps samples.

VerificationReport connection_check(int n_max, const EigenproblemParams& ep,
                                    const Tolerance& tol);

// ---------------------------------------------------------------------------
// Moment drift under the perturbed weight (1 + C^-1 k_s(x)) w(x) with
// C = 1.01 max |k_s| over the window; moments mu_j for j = 0..J over the
// sign-doubled even sublattice.  Also reports the two-lattice moment
// comparison (same normalized moments on a gamma-shifted lattice), which
// demonstrates the indeterminacy of the weight's moment problem.

VerificationReport moment_indeterminacy(int s, int J, int half_width,
                                        const EigenproblemParams& ep,
                                        const Tolerance& tol);

// ---------------------------------------------------------------------------
// Least-squares projection of f onto span{psi0 h_m : m <= M_fock} union
// {psi0 k_m : |m| <= M_nonfock} (M_nonfock < 0 excludes the non-Fock family).
// f holds the coefficient table against the ground-state weight on the even
// sublattice of its lattice.  The expansion solves the true Gram system; the
// family is not orthogonal across the two blocks, which gram_max_cross flags.

struct CompletenessResult {
    double residual_fraction;  // ||f - proj||^2 / ||f||^2
    double gram_max_cross;     // max off-diagonal of the normalized Gram
    bool gram_diagonal;        // gram_max_cross below the diagonality tolerance
};

CompletenessResult completeness_projection(const LatticeFunction& f, int M_fock,
                                           int M_nonfock,
                                           const EigenproblemParams& ep,
                                           const Tolerance& tol);

// ---------------------------------------------------------------------------
// Suite runners (used by the CLI and the acceptance tests).

struct VerifyConfig {
    QParams qp;
    double gamma = 0.0;   // spectral gamma; c = q^{-2 gamma}
    int half_width = 0;   // 0: default window rule
    Tolerance tol;
};

VerificationReport algebra_suite(const VerifyConfig& cfg);
VerificationReport orthogonality_suite(const VerifyConfig& cfg);
VerificationReport connection_suite(const VerifyConfig& cfg);
VerificationReport moments_suite(const VerifyConfig& cfg);
VerificationReport completeness_suite(const VerifyConfig& cfg);

// which: algebra | orthogonality | connection | moments | completeness | all
std::vector<VerificationReport> run_suites(const VerifyConfig& cfg,
                                           const std::string& which);

}  // namespace qosc

#endif
