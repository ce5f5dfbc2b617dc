#pragma once

/**
 * @file expectation.hpp
 *
 * The splitting expectation E = (h_C (x) id)(pi (x) id) Delta onto a right
 * coideal *-subalgebra, its positivity theory, and the phi-relative Fourier
 * transform with the Plancherel identity.
 *
 * phi = h_C o pi.  E(x) = phi(x1) x2.  E is positive iff S^2(A) = A; a
 * failure is witnessed by x with phi(x* x) < 0 at unit Haar norm.
 */

#include <cqg/coideal.hpp>
#include <cqg/haar.hpp>

#include <string>
#include <vector>

namespace cqg {

struct Expectation {
    Quotient qt;
    RowVec phi;  // h_C o pi on H
    Matrix map;  // n x n, E(x) = map x
    double idempotent = 0.0;
    double unital = 0.0;
    double range_residual = 0.0;
    bool range_is_subalgebra = false;
    double bimodule = 0.0;
    double haar_compat = 0.0;
};

/** Build E for the coideal A, with its defining residuals. */
inline Expectation build_expectation(const FiniteHopfStar& h, const Subspace& a,
                                     std::uint64_t seed = 1) {
    Expectation ex;
    ex.qt = quotient_coalgebra(h, a, seed);
    auto hc = coalgebra_integral(ex.qt.c, seed);
    ex.phi = hc.coords * ex.qt.pi;
    const int n = h.dim;
    ex.map = Matrix(n, n);
    for (int i = 0; i < n; ++i) ex.map.col(i) = (ex.phi * h.comult[i]).transpose();

    const double scale = std::max(1.0, structure_scale(h));
    ex.idempotent = max_abs(Matrix(ex.map * ex.map - ex.map)) / scale;
    ex.unital = max_abs(Vector(ex.map * h.unit - h.unit)) / scale;

    double rr = 0.0;
    for (int i = 0; i < n; ++i) {
        Vector v = ex.map.col(i);
        rr = std::max(rr, max_abs(Vector(v - a.project(v))));
    }
    ex.range_residual = rr / scale;
    ex.range_is_subalgebra = subspace_equal(Subspace::span_cols(ex.map, h.tol), a);

    double bm = 0.0;
    for (int t = 0; t < a.dim(); ++t) {
        Vector av = a.basis.col(t);
        for (int i = 0; i < n; ++i) {
            Vector ei = Vector::Unit(n, i);
            Vector lhs = ex.map * hopf_product(h, av, ei);
            Vector rhs = hopf_product(h, av, Vector(ex.map * ei));
            bm = std::max(bm, max_abs(Vector(lhs - rhs)));
            Vector lhs2 = ex.map * hopf_product(h, ei, av);
            Vector rhs2 = hopf_product(h, Vector(ex.map * ei), av);
            bm = std::max(bm, max_abs(Vector(lhs2 - rhs2)));
        }
    }
    ex.bimodule = bm / scale;

    auto haar = haar_state(h, seed);
    ex.haar_compat = max_abs(Vector((haar.state.coords * ex.map - haar.state.coords).transpose())) / scale;
    return ex;
}

/** Gram matrix of a functional: G_ij = f(e_i* e_j). */
inline Matrix functional_gram(const FiniteHopfStar& h, const RowVec& f) {
    const int n = h.dim;
    Matrix g(n, n);
    for (int i = 0; i < n; ++i) {
        Vector si = hopf_star(h, Vector::Unit(n, i));
        for (int j = 0; j < n; ++j) g(i, j) = (f * hopf_product(h, si, Vector::Unit(n, j)))(0);
    }
    return g;
}

/** E is a positive map iff phi is a positive functional. */
inline PsdResult positivity_check(const FiniteHopfStar& h, const Expectation& ex) {
    Matrix g = functional_gram(h, ex.phi);
    Matrix sym = 0.5 * (g + g.adjoint());
    if (max_abs(Matrix(g - sym)) > tol_at(h.tol, max_abs(g)))
        return PsdResult{false, -max_abs(Matrix(g - sym)), Vector::Zero(h.dim)};
    return psd_check(sym, h.tol);
}

/** Complete positivity through the faithful Haar state: the block operator
 *  matrix M_(ip),(jq) = h(e_p* E(e_i* e_j) e_q) must be PSD. */
inline PsdResult complete_positivity_check(const FiniteHopfStar& h, const Expectation& ex,
                                           std::uint64_t seed = 1) {
    const int n = h.dim;
    auto haar = haar_state(h, seed);
    std::vector<Vector> inner(n * n);
    for (int i = 0; i < n; ++i) {
        Vector si = hopf_star(h, Vector::Unit(n, i));
        for (int j = 0; j < n; ++j)
            inner[i * n + j] = ex.map * hopf_product(h, si, Vector::Unit(n, j));
    }
    Matrix m(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int p = 0; p < n; ++p) {
            Vector sp = hopf_star(h, Vector::Unit(n, p));
            for (int j = 0; j < n; ++j)
                for (int q = 0; q < n; ++q) {
                    Vector mid = hopf_product(h, sp, inner[i * n + j]);
                    m(i * n + p, j * n + q) = haar.state(hopf_product(h, mid, Vector::Unit(n, q)));
                }
        }
    Matrix sym = 0.5 * (m + m.adjoint());
    return psd_check(sym, h.tol);
}

struct S2Report {
    bool invariant = false;
    double residual = 0.0;
};

/** Does S^2 map A onto A? */
inline S2Report s2_invariance(const FiniteHopfStar& h, const Subspace& a) {
    Matrix s2 = antipode_square(h);
    S2Report rep;
    double r = 0.0;
    for (int i = 0; i < a.dim(); ++i) {
        Vector v = s2 * a.basis.col(i);
        r = std::max(r, max_abs(Vector(v - a.project(v))));
    }
    rep.residual = r / std::max(1.0, structure_scale(h));
    rep.invariant = subspace_equal(Subspace::span_cols(Matrix(s2 * a.basis), h.tol), a);
    return rep;
}

struct Decision {
    Expectation expectation;
    PsdResult gram;
    S2Report s2;
    bool positive = false;
    bool theorem_holds = false; // positivity of E  <=>  S^2(A) = A
    Vector witness;             // when not positive: phi(w* w) < 0, h(w* w) = 1
    double witness_value = 0.0;
};

/** Decide positivity of the expectation and compare with S^2-invariance. */
inline Decision decide_expected(const FiniteHopfStar& h, const Subspace& a, std::uint64_t seed = 1) {
    Decision d;
    d.expectation = build_expectation(h, a, seed);
    d.gram = positivity_check(h, d.expectation);
    d.s2 = s2_invariance(h, a);
    d.positive = d.gram.psd;
    d.theorem_holds = (d.positive == d.s2.invariant);
    if (!d.positive && d.gram.witness.size() == h.dim) {
        Vector w = d.gram.witness;
        Matrix hg = functional_gram(h, haar_state(h, seed).state.coords);
        Complex nrm = (w.adjoint() * hg * w)(0);
        if (nrm.real() > 0) w /= std::sqrt(nrm.real());
        d.witness = w;
        Matrix pg = functional_gram(h, d.expectation.phi);
        d.witness_value = (w.adjoint() * pg * w)(0).real();
    }
    return d;
}

struct Fourier {
    RowVec coords;      // functional on C
    double welldef = 0.0;
};

/** phi-relative Fourier transform: (F x)(pi y) = phi(S(x) y). */
inline Fourier fourier(const FiniteHopfStar& h, const Expectation& ex, const Vector& x) {
    const int nc = ex.qt.c.dim;
    Fourier f;
    f.coords = RowVec(nc);
    Vector sx = h.antipode * x;
    for (int a = 0; a < nc; ++a)
        f.coords(a) = (ex.phi * hopf_product(h, sx, Vector(ex.qt.section.col(a))))(0);
    double r = 0.0;
    for (int v = 0; v < ex.qt.kernel.dim(); ++v)
        r = std::max(r, std::abs((ex.phi * hopf_product(h, sx, Vector(ex.qt.kernel.basis.col(v))))(0)));
    f.welldef = r / std::max(1.0, max_abs(x));
    return f;
}

struct Theta {
    Vector trace_h; // full contraction <e^i, S^2 e_i(1)> e_i(2); classically |G| delta_e
    Vector on_c;    // quotient-level contraction over a basis of C, the Plancherel density
};

/** theta contracted over H, and over C through the section:
 *  theta_C = sum_a <f^a, pi S^2 (sigma c_a)(1)> pi((sigma c_a)(2)).
 *  The two agree (through pi) when A is the scalars. */
inline Theta theta(const FiniteHopfStar& h, const Quotient& qt) {
    const int n = h.dim, nc = qt.c.dim;
    Matrix s2 = antipode_square(h);
    Theta t;
    t.trace_h = Vector::Zero(n);
    for (int k = 0; k < n; ++k) {
        Complex acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) acc += h.comult[i](j, k) * s2(i, j);
        t.trace_h(k) = acc;
    }
    t.on_c = Vector::Zero(nc);
    Matrix pis2 = qt.pi * s2;
    for (int a = 0; a < nc; ++a) {
        Matrix m = pis2 * delta_mat(h, qt.section.col(a)) * qt.pi.transpose();
        t.on_c += m.row(a).transpose();
    }
    return t;
}

/** Positivity of theta as a functional on the dual convolution *-algebra of
 *  C: the Gram (a,b) -> (f_a^star f_b)(theta) over coordinate functionals is
 *  PSD exactly when every blockwise component of theta is PSD. */
inline PsdResult theta_positive(const FiniteHopfStar& h, const Quotient& qt) {
    if (!qt.star_descends)
        throw StarDescentFailure("the coalgebra involution does not descend to the quotient");
    auto th = theta(h, qt);
    const int nc = qt.c.dim;
    Matrix g(nc, nc);
    for (int a = 0; a < nc; ++a) {
        RowVec fa = RowVec::Zero(nc);
        fa(a) = 1.0;
        RowVec fas = (fa * qt.star_c).conjugate();
        for (int b = 0; b < nc; ++b) {
            RowVec fb = RowVec::Zero(nc);
            fb(b) = 1.0;
            RowVec conv = detail::coalgebra_convolve(qt.c.comult, fas, fb);
            g(a, b) = (conv * th.on_c)(0);
        }
    }
    Matrix sym = 0.5 * (g + g.adjoint());
    if (max_abs(Matrix(g - sym)) > tol_at(h.tol, std::max(1.0, max_abs(g))))
        return PsdResult{false, -max_abs(Matrix(g - sym)), Vector::Zero(nc)};
    return psd_check(sym, h.tol);
}

struct PlancherelReport {
    double max_gap = 0.0;
    int pairs = 0;
    bool pass = false;
};

/** Check phi((S^2 y)* S^2 x) = theta((F y)^star * F x) on random pairs.
 *  The C*-involution is f^star(c) = conj(f(c^star)) through the inherited
 *  coalgebra involution on C. */
inline PlancherelReport plancherel_check(const FiniteHopfStar& h, const Expectation& ex,
                                         std::uint64_t seed = 7, int pairs = 20,
                                         double tol = 1e-8) {
    if (!ex.qt.star_descends)
        throw StarDescentFailure("the coalgebra involution does not descend to the quotient");
    const int n = h.dim;
    Matrix s2 = antipode_square(h);
    auto th = theta(h, ex.qt);
    auto rng = seeded_rng(seed);
    PlancherelReport rep;
    rep.pairs = pairs;
    for (int p = 0; p < pairs; ++p) {
        Vector x = random_vector(rng, n), y = random_vector(rng, n);
        Vector sx = s2 * x, sy = s2 * y;
        Complex lhs = (ex.phi * hopf_product(h, hopf_star(h, sy), sx))(0);
        RowVec fx = fourier(h, ex, x).coords;
        RowVec fy = fourier(h, ex, y).coords;
        RowVec fys = (fy * ex.qt.star_c).conjugate();
        RowVec conv = detail::coalgebra_convolve(ex.qt.c.comult, fys, fx);
        Complex rhs = (conv * th.on_c)(0);
        double gap = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
        rep.max_gap = std::max(rep.max_gap, gap);
    }
    rep.pass = rep.max_gap <= tol;
    return rep;
}

} // namespace cqg
