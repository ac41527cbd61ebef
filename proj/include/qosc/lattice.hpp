#ifndef QOSC_LATTICE_HPP
#define QOSC_LATTICE_HPP

#include <iosfwd>
#include <vector>

#include "qosc/qcore.hpp"

namespace qosc {

// The quantum line as a two-sided geometric lattice {sigma xi0 q^n}.
// xi0 in [1,q) is the canonical representation label; any positive scale is
// accepted since eigenproblem lattices use xi0 = sqrt(c).

struct SignSet {
    bool plus = true;
    bool minus = true;

    int count() const { return (plus ? 1 : 0) + (minus ? 1 : 0); }
    bool contains(int sigma) const { return sigma > 0 ? plus : minus; }
};

struct Window {
    int lo;
    int hi;

    bool contains(int n) const { return n >= lo && n <= hi; }
    Window shrink(int d_lo, int d_hi) const { return Window{lo + d_lo, hi - d_hi}; }
    Window intersect(const Window& o) const {
        return Window{lo > o.lo ? lo : o.lo, hi < o.hi ? hi : o.hi};
    }
    bool empty() const { return lo > hi; }
};

class Lattice {
public:
    Lattice(QParams qp, double xi0, int n_min, int n_max, SignSet signs = {});

    const QParams& qp() const { return qp_; }
    double xi0() const { return xi0_; }
    int n_min() const { return n_min_; }
    int n_max() const { return n_max_; }
    const SignSet& signs() const { return signs_; }

    // sigma xi0 q^n
    double point(int sigma, int n) const;

    // Window rule K = max(40, ceil(60 / ln q)); pushes boundary weight below 1e-14.
    static int default_half_width(const QParams& qp);

    bool same_as(const Lattice& o) const;

private:
    QParams qp_;
    double xi0_;
    int n_min_, n_max_;
    SignSet signs_;
};

// Complex-valued function on a lattice.  Values are stored for every (sigma,n)
// of the underlying lattice; valid_window tracks the n-range where they are
// meaningful.  Operator application shrinks the window instead of zero-padding,
// so residuals computed on the window are trustworthy.
class LatticeFunction {
public:
    LatticeFunction(Lattice lat, std::function<Complex(int, double)> f);
    LatticeFunction(Lattice lat, Window win);  // zero values, given window

    const Lattice& lattice() const { return lat_; }
    const Window& valid_window() const { return win_; }

    Complex at(int sigma, int n) const;
    void set(int sigma, int n, Complex v);

    double max_abs() const;  // over the valid window

    LatticeFunction with_window(Window w) const;

private:
    int index(int sigma, int n) const;
    Lattice lat_;
    Window win_;
    std::vector<Complex> vals_;
};

// ---------------------------------------------------------------------------
// Operator actions (X f)(x) = x f(x), (P f)(x) = -i D_q f(x),
// (U^p f)(x) = q^{-p/2} f(q^{-p} x).

LatticeFunction apply_X(const LatticeFunction& f);
LatticeFunction apply_P(const LatticeFunction& f);
LatticeFunction apply_U(const LatticeFunction& f, int power);

// Pointwise combination helpers.
LatticeFunction lf_add(const LatticeFunction& a, const LatticeFunction& b);
LatticeFunction lf_sub(const LatticeFunction& a, const LatticeFunction& b);
LatticeFunction lf_scale(const LatticeFunction& a, Complex s);

// Jackson inner product  (f,g) = xi0 (q - 1/q) sum_{sigma,n} conj(f) g q^n,
// over the intersection of the valid windows.  Conjugate-linear in f.
Complex inner_product(const LatticeFunction& f, const LatticeFunction& g);

// ---------------------------------------------------------------------------
// Residuals of the three quantum-line relations applied to f:
//   q^{1/2} X P - q^{-1/2} P X = i U,   U X = q^{-1} X U,   U P = q P U.
struct RelationResidual {
    double residual;  // max |(LHS - RHS) f| over the common window
    double scale;     // max |LHS f| + |RHS f| over the same window
};

struct HeisenbergResiduals {
    RelationResidual xp;  // q^{1/2}XP - q^{-1/2}PX = iU
    RelationResidual ux;  // UX = q^{-1} XU
    RelationResidual up;  // UP = q PU

    double max_residual() const;
    double max_relative() const;
};

HeisenbergResiduals heisenberg_residual(const LatticeFunction& f);

// ---------------------------------------------------------------------------
// CSV serialization: header "sign,n,x,re,im", 17 significant digits.
void write_csv(std::ostream& os, const LatticeFunction& f);
LatticeFunction read_csv(std::istream& is, const Lattice& lat);

}  // namespace qosc

#endif
