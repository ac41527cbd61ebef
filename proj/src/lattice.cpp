#include "qosc/lattice.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace qosc {

Lattice::Lattice(QParams qp, double xi0, int n_min, int n_max, SignSet signs)
    : qp_(qp), xi0_(xi0), n_min_(n_min), n_max_(n_max), signs_(signs) {
    if (!(xi0 > 0.0) || !std::isfinite(xi0)) {
        throw DomainError("Lattice: xi0 must be positive and finite");
    }
    if (n_min > n_max) {
        throw DomainError("Lattice: n_min must be <= n_max");
    }
    if (signs.count() == 0) {
        throw DomainError("Lattice: sign set must be nonempty");
    }
}

double Lattice::point(int sigma, int n) const {
    if (!signs_.contains(sigma)) {
        throw DomainError("Lattice::point: sign not carried by this lattice");
    }
    if (n < n_min_ || n > n_max_) {
        throw DomainError("Lattice::point: index out of range");
    }
    return (sigma > 0 ? 1.0 : -1.0) * xi0_ * std::pow(qp_.q, n);
}

int Lattice::default_half_width(const QParams& qp) {
    const int k = static_cast<int>(std::ceil(60.0 / std::log(qp.q)));
    return k < 40 ? 40 : k;
}

bool Lattice::same_as(const Lattice& o) const {
    return qp_.q == o.qp_.q && xi0_ == o.xi0_ && n_min_ == o.n_min_ &&
           n_max_ == o.n_max_ && signs_.plus == o.signs_.plus &&
           signs_.minus == o.signs_.minus;
}

LatticeFunction::LatticeFunction(Lattice lat, std::function<Complex(int, double)> f)
    : lat_(lat), win_{lat.n_min(), lat.n_max()} {
    vals_.resize(static_cast<size_t>(2 * (lat.n_max() - lat.n_min() + 1)));
    for (int n = lat.n_min(); n <= lat.n_max(); ++n) {
        for (int sigma : {+1, -1}) {
            if (!lat.signs().contains(sigma)) continue;
            vals_[index(sigma, n)] = f(sigma, lat.point(sigma, n));
        }
    }
}

LatticeFunction::LatticeFunction(Lattice lat, Window win)
    : lat_(lat), win_(win) {
    if (win.lo < lat.n_min() || win.hi > lat.n_max()) {
        throw DomainError("LatticeFunction: window exceeds lattice range");
    }
    vals_.resize(static_cast<size_t>(2 * (lat.n_max() - lat.n_min() + 1)));
}

int LatticeFunction::index(int sigma, int n) const {
    const int row = sigma > 0 ? 0 : 1;
    return row * (lat_.n_max() - lat_.n_min() + 1) + (n - lat_.n_min());
}

Complex LatticeFunction::at(int sigma, int n) const {
    if (!win_.contains(n)) {
        throw DomainError("LatticeFunction::at: index outside valid window");
    }
    return vals_[index(sigma, n)];
}

void LatticeFunction::set(int sigma, int n, Complex v) {
    vals_[index(sigma, n)] = v;
}

double LatticeFunction::max_abs() const {
    double m = 0.0;
    for (int n = win_.lo; n <= win_.hi; ++n) {
        for (int sigma : {+1, -1}) {
            if (!lat_.signs().contains(sigma)) continue;
            m = std::max(m, std::abs(vals_[index(sigma, n)]));
        }
    }
    return m;
}

LatticeFunction LatticeFunction::with_window(Window w) const {
    LatticeFunction out = *this;
    out.win_ = win_.intersect(w);
    if (out.win_.empty()) {
        throw DomainError("LatticeFunction: window exhausted");
    }
    return out;
}

LatticeFunction apply_X(const LatticeFunction& f) {
    const Lattice& lat = f.lattice();
    LatticeFunction out(lat, f.valid_window());
    for (int n = f.valid_window().lo; n <= f.valid_window().hi; ++n) {
        for (int sigma : {+1, -1}) {
            if (!lat.signs().contains(sigma)) continue;
            out.set(sigma, n, lat.point(sigma, n) * f.at(sigma, n));
        }
    }
    return out;
}

LatticeFunction apply_P(const LatticeFunction& f) {
    const Lattice& lat = f.lattice();
    const Window w = f.valid_window().shrink(1, 1);
    if (w.empty()) {
        throw DomainError("apply_P: window exhausted");
    }
    LatticeFunction out(lat, w);
    const double lam = lat.qp().lambda;
    const Complex minus_i{0.0, -1.0};
    for (int n = w.lo; n <= w.hi; ++n) {
        for (int sigma : {+1, -1}) {
            if (!lat.signs().contains(sigma)) continue;
            const double x = lat.point(sigma, n);
            out.set(sigma, n, minus_i * (f.at(sigma, n + 1) - f.at(sigma, n - 1)) / (x * lam));
        }
    }
    return out;
}

LatticeFunction apply_U(const LatticeFunction& f, int power) {
    const Lattice& lat = f.lattice();
    if (power == 0) {
        return f;
    }
    // (U^p f)(sigma xi0 q^n) = q^{-p/2} f(sigma xi0 q^{n-p})
    const Window w = power > 0 ? f.valid_window().shrink(power, 0)
                               : f.valid_window().shrink(0, -power);
    if (w.empty()) {
        throw DomainError("apply_U: window exhausted");
    }
    LatticeFunction out(lat, w);
    const double amp = std::pow(lat.qp().q, -0.5 * power);
    for (int n = w.lo; n <= w.hi; ++n) {
        for (int sigma : {+1, -1}) {
            if (!lat.signs().contains(sigma)) continue;
            out.set(sigma, n, amp * f.at(sigma, n - power));
        }
    }
    return out;
}

namespace {
LatticeFunction combine(const LatticeFunction& a, const LatticeFunction& b,
                        double sb) {
    if (!a.lattice().same_as(b.lattice())) {
        throw DomainError("lattice function combination: mismatched lattices");
    }
    const Window w = a.valid_window().intersect(b.valid_window());
    if (w.empty()) {
        throw DomainError("lattice function combination: empty window");
    }
    LatticeFunction out(a.lattice(), w);
    for (int n = w.lo; n <= w.hi; ++n) {
        for (int sigma : {+1, -1}) {
            if (!a.lattice().signs().contains(sigma)) continue;
            out.set(sigma, n, a.at(sigma, n) + sb * b.at(sigma, n));
        }
    }
    return out;
}
}  // namespace

LatticeFunction lf_add(const LatticeFunction& a, const LatticeFunction& b) {
    return combine(a, b, 1.0);
}

LatticeFunction lf_sub(const LatticeFunction& a, const LatticeFunction& b) {
    return combine(a, b, -1.0);
}

LatticeFunction lf_scale(const LatticeFunction& a, Complex s) {
    LatticeFunction out(a.lattice(), a.valid_window());
    for (int n = a.valid_window().lo; n <= a.valid_window().hi; ++n) {
        for (int sigma : {+1, -1}) {
            if (!a.lattice().signs().contains(sigma)) continue;
            out.set(sigma, n, s * a.at(sigma, n));
        }
    }
    return out;
}

Complex inner_product(const LatticeFunction& f, const LatticeFunction& g) {
    const Lattice& lat = f.lattice();
    if (!lat.same_as(g.lattice())) {
        throw DomainError("inner_product: mismatched lattices");
    }
    const Window w = f.valid_window().intersect(g.valid_window());
    if (w.empty()) {
        throw DomainError("inner_product: empty window");
    }
    const double pref = lat.xi0() * lat.qp().lambda;
    KahanSum<Complex> acc;
    for (int n = w.lo; n <= w.hi; ++n) {
        const double qn = std::pow(lat.qp().q, n);
        for (int sigma : {+1, -1}) {
            if (!lat.signs().contains(sigma)) continue;
            acc.add(std::conj(f.at(sigma, n)) * g.at(sigma, n) * qn);
        }
    }
    return pref * acc.value();
}

double HeisenbergResiduals::max_residual() const {
    return std::max(xp.residual, std::max(ux.residual, up.residual));
}

double HeisenbergResiduals::max_relative() const {
    auto rel = [](const RelationResidual& r) {
        return r.residual / std::max(r.scale, 1e-300);
    };
    return std::max(rel(xp), std::max(rel(ux), rel(up)));
}

HeisenbergResiduals heisenberg_residual(const LatticeFunction& f) {
    const double q = f.lattice().qp().q;
    const double rq = std::sqrt(q);
    const Complex iu{0.0, 1.0};

    auto diff = [&](const LatticeFunction& lhs, const LatticeFunction& rhs) {
        const Window w = lhs.valid_window().intersect(rhs.valid_window());
        RelationResidual rr{0.0, 0.0};
        for (int n = w.lo; n <= w.hi; ++n) {
            for (int sigma : {+1, -1}) {
                if (!f.lattice().signs().contains(sigma)) continue;
                const Complex l = lhs.at(sigma, n);
                const Complex r = rhs.at(sigma, n);
                rr.residual = std::max(rr.residual, std::abs(l - r));
                rr.scale = std::max(rr.scale, std::abs(l) + std::abs(r));
            }
        }
        return rr;
    };

    HeisenbergResiduals out{};
    {
        const LatticeFunction lhs =
            lf_sub(lf_scale(apply_X(apply_P(f)), rq), lf_scale(apply_P(apply_X(f)), 1.0 / rq));
        const LatticeFunction rhs = lf_scale(apply_U(f, 1), iu);
        out.xp = diff(lhs, rhs);
    }
    {
        const LatticeFunction lhs = apply_U(apply_X(f), 1);
        const LatticeFunction rhs = lf_scale(apply_X(apply_U(f, 1)), 1.0 / q);
        out.ux = diff(lhs, rhs);
    }
    {
        const LatticeFunction lhs = apply_U(apply_P(f), 1);
        const LatticeFunction rhs = lf_scale(apply_P(apply_U(f, 1)), q);
        out.up = diff(lhs, rhs);
    }
    return out;
}

void write_csv(std::ostream& os, const LatticeFunction& f) {
    os << "sign,n,x,re,im\n";
    char buf[96];
    const Window& w = f.valid_window();
    for (int n = w.lo; n <= w.hi; ++n) {
        for (int sigma : {+1, -1}) {
            if (!f.lattice().signs().contains(sigma)) continue;
            const double x = f.lattice().point(sigma, n);
            const Complex v = f.at(sigma, n);
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g\n", sigma, n, x,
                          v.real(), v.imag());
            os << buf;
        }
    }
}

LatticeFunction read_csv(std::istream& is, const Lattice& lat) {
    std::string line;
    if (!std::getline(is, line)) {
        throw ParameterError("read_csv: empty stream");
    }
    LatticeFunction out(lat, Window{lat.n_min(), lat.n_max()});
    int lo = lat.n_max() + 1, hi = lat.n_min() - 1;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        int sigma, n;
        double x, re, im;
        char comma;
        if (!(ls >> sigma >> comma >> n >> comma >> x >> comma >> re >> comma >> im)) {
            throw ParameterError("read_csv: malformed row: " + line);
        }
        out.set(sigma, n, Complex{re, im});
        lo = std::min(lo, n);
        hi = std::max(hi, n);
    }
    if (lo > hi) {
        throw ParameterError("read_csv: no data rows");
    }
    return out.with_window(Window{lo, hi});
}

}  // namespace qosc
