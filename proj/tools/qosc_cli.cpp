#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qosc/verify.hpp"

namespace {

struct CliConfig {
    double q = 2.0;
    double gamma = 0.0;
    double xi0 = 1.0;
    int window = 0;  // 0: default rule
    double tol = 1e-10;
    std::string format = "text";
    std::string out;
};

std::ostream& output_stream(const CliConfig& cfg, std::ofstream& file) {
    if (cfg.out.empty()) return std::cout;
    file.open(cfg.out);
    if (!file) {
        throw qosc::ParameterError("cannot open output file: " + cfg.out);
    }
    return file;
}

void check_calibrated_scale(const CliConfig& cfg) {
    const double sqc = std::pow(cfg.q, -cfg.gamma);
    if (std::abs(cfg.xi0 - sqc) > 1e-9 * sqc) {
        std::ostringstream os;
        os << "xi0 = " << cfg.xi0 << " is not the calibrated scale q^-gamma = " << sqc;
        throw qosc::ParameterError(os.str());
    }
}

int cmd_spectrum(const CliConfig& cfg, int mmax) {
    const qosc::QParams qp = qosc::QParams::make(cfg.q);
    std::ofstream file;
    std::ostream& os = output_stream(cfg, file);
    char buf[160];
    if (cfg.format == "csv" || cfg.format == "text") {
        os << "family,m,epsilon,E\n";
        for (int m = 0; m <= mmax; ++m) {
            const auto l = qosc::SpectrumLabel::fock(m);
            std::snprintf(buf, sizeof buf, "Fock,%d,%.17g,%.17g\n", m,
                          qosc::epsilon(l, qp), qosc::energy(l, qp));
            os << buf;
        }
        std::snprintf(buf, sizeof buf, "accumulation,,,%.17g\n",
                      qosc::accumulation_point(qp));
        os << buf;
        for (int m = -mmax; m <= mmax; ++m) {
            const auto l = qosc::SpectrumLabel::non_fock(m, cfg.gamma);
            std::snprintf(buf, sizeof buf, "NonFock,%d,%.17g,%.17g\n", m,
                          qosc::epsilon(l, qp), qosc::energy(l, qp));
            os << buf;
        }
    } else {
        nlohmann::json j;
        j["params"] = {{"q", cfg.q}, {"gamma", cfg.gamma}};
        j["accumulation"] = qosc::accumulation_point(qp);
        j["levels"] = nlohmann::json::array();
        for (int m = 0; m <= mmax; ++m) {
            const auto l = qosc::SpectrumLabel::fock(m);
            j["levels"].push_back({{"family", "Fock"},
                                   {"m", m},
                                   {"epsilon", qosc::epsilon(l, qp)},
                                   {"E", qosc::energy(l, qp)}});
        }
        for (int m = -mmax; m <= mmax; ++m) {
            const auto l = qosc::SpectrumLabel::non_fock(m, cfg.gamma);
            j["levels"].push_back({{"family", "NonFock"},
                                   {"m", m},
                                   {"epsilon", qosc::epsilon(l, qp)},
                                   {"E", qosc::energy(l, qp)}});
        }
        os << j.dump(2) << "\n";
    }
    return 0;
}

int cmd_eigfn(const CliConfig& cfg, const std::string& family, int m) {
    const qosc::QParams qp = qosc::QParams::make(cfg.q);
    check_calibrated_scale(cfg);
    const qosc::Tolerance tol = qosc::Tolerance::make(cfg.tol);
    const auto ep = qosc::EigenproblemParams::make_calibrated(qp, cfg.gamma);
    const int K = cfg.window > 0 ? cfg.window : qosc::Lattice::default_half_width(qp);
    const qosc::Lattice lat(qp, ep.sqrt_c(), -K, K);
    const qosc::SpectrumLabel label =
        family == "fock" ? qosc::SpectrumLabel::fock(m)
                         : qosc::SpectrumLabel::non_fock(m, cfg.gamma);
    const qosc::LatticeFunction f = qosc::eigenfunction(label, lat, ep, tol);
    std::ofstream file;
    std::ostream& os = output_stream(cfg, file);
    qosc::write_csv(os, f);
    return 0;
}

int cmd_verify(const CliConfig& cfg, const std::string& suite) {
    const qosc::QParams qp = qosc::QParams::make(cfg.q);
    check_calibrated_scale(cfg);
    qosc::VerifyConfig vc;
    vc.qp = qp;
    vc.gamma = cfg.gamma;
    vc.half_width = cfg.window;
    vc.tol = qosc::Tolerance::make(cfg.tol);
    const auto reports = qosc::run_suites(vc, suite);
    std::ofstream file;
    std::ostream& os = output_stream(cfg, file);
    bool all_pass = true;
    if (cfg.format == "json") {
        os << "[\n";
        for (size_t i = 0; i < reports.size(); ++i) {
            os << reports[i].to_json() << (i + 1 < reports.size() ? ",\n" : "\n");
            all_pass = all_pass && reports[i].pass();
        }
        os << "]\n";
    } else {
        for (const auto& r : reports) {
            os << r.to_text();
            all_pass = all_pass && r.pass();
        }
    }
    return all_pass ? 0 : 1;
}

int cmd_moments(const CliConfig& cfg, int s, int jmax) {
    const qosc::QParams qp = qosc::QParams::make(cfg.q);
    check_calibrated_scale(cfg);
    const qosc::Tolerance tol = qosc::Tolerance::make(cfg.tol);
    const auto ep = qosc::EigenproblemParams::make_calibrated(qp, cfg.gamma);
    const int K = cfg.window > 0 ? cfg.window : qosc::Lattice::default_half_width(qp);
    const auto rep = qosc::moment_indeterminacy(s, jmax, K, ep, tol);
    std::ofstream file;
    std::ostream& os = output_stream(cfg, file);
    if (cfg.format == "json") {
        os << rep.to_json() << "\n";
    } else {
        os << rep.to_text();
    }
    return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"q-deformed harmonic oscillator on the quantum line"};
    app.require_subcommand(1);
    app.fallthrough();

    CliConfig cfg;
    app.add_option("--q", cfg.q, "deformation parameter, q > 1");
    app.add_option("--gamma", cfg.gamma, "spectral gamma; lattice constant c = q^-2gamma");
    app.add_option("--xi0", cfg.xi0, "lattice scale (must equal q^-gamma)");
    app.add_option("--window", cfg.window, "lattice half-width K (0: automatic)");
    app.add_option("--tol", cfg.tol, "relative series tolerance");
    app.add_option("--format", cfg.format, "text | csv | json")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    app.add_option("--out", cfg.out, "output file (default stdout)");

    int mmax = 8;
    auto* spectrum = app.add_subcommand("spectrum", "tabulate both spectral families");
    spectrum->add_option("--mmax", mmax, "largest |m| tabulated");

    std::string family = "fock";
    int m = 0;
    auto* eigfn = app.add_subcommand("eigfn", "export an eigenfunction as CSV");
    eigfn->add_option("--family", family, "fock | nonfock")
        ->check(CLI::IsMember({"fock", "nonfock"}));
    eigfn->add_option("--m", m, "level index");

    std::string suite = "all";
    auto* verify = app.add_subcommand("verify", "run verification suites");
    verify->add_option("--suite", suite,
                       "algebra | orthogonality | connection | moments | completeness | all")
        ->check(CLI::IsMember({"algebra", "orthogonality", "connection", "moments",
                               "completeness", "all"}));

    int s = 0, jmax = 10;
    auto* moments = app.add_subcommand("moments", "moment drift under the perturbed weight");
    moments->add_option("--s", s, "non-Fock perturbation index");
    moments->add_option("--jmax", jmax, "largest moment order");

    try {
        app.parse(argc, argv);
        if (*spectrum) return cmd_spectrum(cfg, mmax);
        if (*eigfn) return cmd_eigfn(cfg, family, m);
        if (*verify) return cmd_verify(cfg, suite);
        if (*moments) return cmd_moments(cfg, s, jmax);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
