#pragma once

/**
 * @file haar.hpp
 *
 * Haar functionals, cosemisimplicity, Peter-Weyl decomposition and
 * unitarization of corepresentations.
 *
 * The invariant functional is computed twice by independent routes: the
 * bi-invariance nullspace, and the trivial central idempotent of the dual
 * convolution algebra.  The routes must agree or construction fails.
 */

#include <cqg/hopf.hpp>
#include <cqg/linalg.hpp>

#include <Eigen/Eigenvalues>

#include <string>
#include <vector>

namespace cqg {

/** Counital coalgebra with a distinguished group-like element. */
struct Coalgebra {
    int dim = 0;
    std::vector<std::string> labels;
    double tol = 1e-9;
    std::vector<Matrix> comult; // comult[i](j,k) = coeff of e_j (x) e_k
    RowVec counit;
    Vector grouplike; // Delta(g) = g (x) g, eps(g) = 1
};

inline Coalgebra as_coalgebra(const FiniteHopfStar& h) {
    return Coalgebra{h.dim, h.labels, h.tol, h.comult, h.counit, h.unit};
}

namespace detail {

inline RowVec coalgebra_convolve(const std::vector<Matrix>& comult, const RowVec& f, const RowVec& g) {
    const int n = static_cast<int>(comult.size());
    RowVec out(n);
    for (int i = 0; i < n; ++i) out(i) = (f * comult[i] * g.transpose())(0);
    return out;
}

/** Trivial central idempotent of the convolution algebra C*, i.e. the
 *  functional p with p f = f(g) p, found from the eigendecomposition of a
 *  random central element.  No involution on C* is needed. */
inline RowVec trivial_convolution_idempotent(const Coalgebra& c, std::uint64_t seed) {
    const int n = c.dim;
    // Convolution algebra structure constants: cm[a](k,b) = coeff of f_k in f_a f_b.
    std::vector<Matrix> cm(n, Matrix::Zero(n, n));
    for (int a = 0; a < n; ++a)
        for (int k = 0; k < n; ++k)
            for (int b = 0; b < n; ++b) cm[a](k, b) = c.comult[k](a, b);
    // Center: [z, f_b] = 0 for all b.
    Matrix sys(n * n, n);
    for (int b = 0; b < n; ++b) {
        Matrix rb = Matrix::Zero(n, n), lb = Matrix::Zero(n, n);
        for (int a = 0; a < n; ++a) {
            rb.col(a) = cm[a].col(b);
            lb.col(a) = cm[b].col(a);
        }
        sys.middleRows(b * n, n) = rb - lb;
    }
    Subspace z = nullspace(sys, c.tol);
    const int r = z.dim();
    if (r == 0) throw NotCosemisimple("convolution algebra has empty center");
    std::string last = "no candidate";
    auto rng = seeded_rng(seed);
    for (int attempt = 0; attempt < 8; ++attempt) {
        Vector w = z.basis * random_vector(rng, r);
        // Multiplication by w restricted to the center, in the z basis.
        Matrix lw = Matrix::Zero(n, n);
        for (int a = 0; a < n; ++a) lw += w(a) * cm[a];
        Matrix lz = z.basis.adjoint() * (lw * z.basis);
        Eigen::ComplexEigenSolver<Matrix> es(lz);
        if (es.info() != Eigen::Success) { last = "eigensolver failed"; continue; }
        bool found = false;
        RowVec best;
        for (int e = 0; e < r; ++e) {
            Vector cand = z.basis * es.eigenvectors().col(e);
            RowVec f = cand.transpose();
            // Scale to an idempotent: f f = s f with s from least squares.
            RowVec ff = coalgebra_convolve(c.comult, f, f);
            Complex s = (f * f.adjoint())(0).real() > 0 ? (ff * f.adjoint())(0) / (f * f.adjoint())(0) : Complex(0);
            if (std::abs(s) < 1e-6) continue;
            f /= s;
            ff = coalgebra_convolve(c.comult, f, f);
            if (max_abs(Vector((ff - f).transpose())) > tol_at(c.tol, max_abs(Vector(f.transpose())))) continue;
            Complex at_g = (f * c.grouplike)(0);
            if (std::abs(at_g - 1.0) <= 1e-6) {
                if (found) { found = false; last = "trivial idempotent not unique"; break; }
                best = f;
                found = true;
            } else if (std::abs(at_g) > 1e-6) {
                last = "idempotent takes a non 0/1 value at the group-like";
            }
        }
        if (found) return best;
        if (last == "no candidate") last = "no idempotent evaluates to 1 at the group-like";
    }
    throw ConstructionFailure("trivial convolution idempotent: " + last + " after 8 attempts");
}

} // namespace detail

struct CoalgebraIntegral {
    RowVec coords;
    double invariance = 0.0; // residual of the bi-invariance system
    double route_gap = 0.0;  // disagreement between the two construction routes
};

/** Two-sided invariant functional h with (h (x) id) Delta = h(.) g = (id (x) h) Delta
 *  and h(g) = 1, for g the distinguished group-like. */
inline CoalgebraIntegral coalgebra_integral(const Coalgebra& c, std::uint64_t seed = 1) {
    const int n = c.dim;
    if (n <= 0 || static_cast<int>(c.comult.size()) != n || c.grouplike.size() != n)
        throw InvalidInput("coalgebra_integral: malformed coalgebra");
    double scale = 1.0;
    for (const auto& m : c.comult) scale = std::max(scale, max_abs(m));

    Matrix sys(2 * n * n, n);
    for (int i = 0; i < n; ++i) {
        // (id (x) h) Delta e_i = h(e_i) g : rows (i, j).
        sys.middleRows(i * n, n) = c.comult[i];
        sys.middleRows(i * n, n).col(i) -= c.grouplike;
        // (h (x) id) Delta e_i = h(e_i) g : rows (i, k).
        sys.middleRows(n * n + i * n, n) = c.comult[i].transpose();
        sys.middleRows(n * n + i * n, n).col(i) -= c.grouplike;
    }
    Subspace inv = nullspace(sys, c.tol);
    if (inv.dim() == 0) throw NotCosemisimple("no two-sided invariant functional");
    if (inv.dim() > 1)
        throw NotCosemisimple("invariant functional space has dimension " + std::to_string(inv.dim()));
    Vector v = inv.basis.col(0);
    Complex at_g = (v.transpose() * c.grouplike)(0);
    if (std::abs(at_g) <= tol_at(c.tol, max_abs(v)))
        throw NotCosemisimple("invariant functional vanishes at the group-like");
    RowVec h = (v / at_g).transpose();

    CoalgebraIntegral out;
    out.coords = h;
    out.invariance = max_abs(Vector(sys * h.transpose())) / std::max(1.0, scale);

    RowVec p = detail::trivial_convolution_idempotent(c, seed);
    out.route_gap = max_abs(Vector((p - h).transpose())) /
                    std::max(1.0, max_abs(Vector(h.transpose())));
    if (out.route_gap > tol_at(c.tol, scale) * 10)
        throw ConstructionFailure("invariant functional routes disagree by " +
                                  std::to_string(out.route_gap));
    return out;
}

struct HaarReport {
    Functional state;
    double invariance = 0.0;
    double route_gap = 0.0;
    Matrix gram;
    double min_gram_eig = 0.0;
    bool positive = false;
    bool faithful = false;
};

/** Haar state: two-sided invariant functional with h(1) = 1, plus the
 *  positivity data of the sesquilinear form h(x* y). */
inline HaarReport haar_state(const FiniteHopfStar& h, std::uint64_t seed = 1) {
    auto integral = coalgebra_integral(as_coalgebra(h), seed);
    HaarReport rep;
    rep.state = Functional{&h, integral.coords};
    rep.invariance = integral.invariance;
    rep.route_gap = integral.route_gap;
    const int n = h.dim;
    rep.gram = Matrix(n, n);
    for (int i = 0; i < n; ++i) {
        Vector si = hopf_star(h, Vector::Unit(n, i));
        for (int j = 0; j < n; ++j)
            rep.gram(i, j) = rep.state(hopf_product(h, si, Vector::Unit(n, j)));
    }
    Matrix sym = 0.5 * (rep.gram + rep.gram.adjoint());
    if (max_abs(Matrix(rep.gram - sym)) > tol_at(h.tol, max_abs(rep.gram))) {
        rep.positive = rep.faithful = false;
        rep.min_gram_eig = 0.0;
        return rep;
    }
    auto psd = psd_check(sym, h.tol);
    rep.min_gram_eig = psd.min_eig;
    rep.positive = psd.psd;
    rep.faithful = psd.psd && psd.min_eig > tol_at(h.tol, max_abs(rep.gram));
    return rep;
}

struct CqgReport {
    LawReport axioms;
    bool cosemisimple = false;
    bool positive = false;
    bool faithful = false;
    bool cqg = false;
    double haar_invariance = 0.0;
    std::string failure;
};

/** A finite-dimensional Hopf *-algebra is a CQG algebra iff its axioms hold,
 *  it is cosemisimple, and the Haar functional is a faithful state. */
inline CqgReport is_cqg(const FiniteHopfStar& h, std::uint64_t seed = 1) {
    CqgReport rep;
    rep.axioms = verify_hopf(h);
    try {
        auto haar = haar_state(h, seed);
        rep.cosemisimple = true;
        rep.positive = haar.positive;
        rep.faithful = haar.faithful;
        rep.haar_invariance = haar.invariance;
        if (!haar.positive) rep.failure = "haar functional is not positive";
        else if (!haar.faithful) rep.failure = "haar state is not faithful";
    } catch (const NotCosemisimple& e) {
        rep.failure = e.what();
    }
    if (!rep.axioms.pass && rep.failure.empty()) rep.failure = "hopf axioms fail";
    rep.cqg = rep.axioms.pass && rep.cosemisimple && rep.positive && rep.faithful;
    return rep;
}

/** Corepresentation X in M_n(H): Delta(X_vw) = sum_m X_vm (x) X_mw. */
struct Corep {
    const FiniteHopfStar* parent = nullptr;
    int size = 0;
    std::vector<std::vector<Vector>> entry; // entry[v][w] in H
};

inline double corep_residual(const FiniteHopfStar& h, const Corep& x) {
    if (x.parent != &h) throw InvalidInput("corep_residual: wrong parent");
    double r = 0.0;
    for (int v = 0; v < x.size; ++v)
        for (int w = 0; w < x.size; ++w) {
            Matrix lhs = delta_mat(h, x.entry[v][w]);
            Matrix rhs = Matrix::Zero(h.dim, h.dim);
            for (int m = 0; m < x.size; ++m) rhs += x.entry[v][m] * x.entry[m][w].transpose();
            r = std::max(r, max_abs(Matrix(lhs - rhs)));
            Complex eps = (h.counit * x.entry[v][w])(0);
            r = std::max(r, std::abs(eps - (v == w ? 1.0 : 0.0)));
        }
    return r;
}

inline Corep corep_from_comodule(const FiniteHopfStar& h, const Comodule& m) {
    if (m.parent != &h) throw InvalidInput("corep_from_comodule: wrong parent");
    Corep x;
    x.parent = &h;
    x.size = m.dim;
    x.entry.assign(m.dim, std::vector<Vector>(m.dim));
    for (int v = 0; v < m.dim; ++v)
        for (int w = 0; w < m.dim; ++w) {
            // rho(e_v) = sum_w e_w (x) X_wv
            Vector col(h.dim);
            for (int i = 0; i < h.dim; ++i) col(i) = m.coaction[v](w, i);
            x.entry[w][v] = col;
        }
    return x;
}

struct UnitarizeResult {
    Corep unitary;
    Matrix gram;          // invariant positive form used for the similarity
    double unitarity = 0.0;
    double corep_law = 0.0;
};

/** Average a positive form over the corepresentation with the Haar state and
 *  rescale: T X T^{-1} with T = G^{1/2} is unitary. */
inline UnitarizeResult unitarize(const FiniteHopfStar& h, const Corep& x, std::uint64_t seed = 1) {
    if (x.parent != &h) throw InvalidInput("unitarize: wrong parent");
    double law = corep_residual(h, x);
    if (law > tol_at(h.tol, structure_scale(h)) * 100)
        throw InvalidInput("unitarize: input is not a corepresentation (residual " +
                           std::to_string(law) + ")");
    auto haar = haar_state(h, seed);
    if (!haar.positive) throw ConstructionFailure("unitarize needs a positive haar state");
    const int n = x.size;
    Matrix g(n, n);
    for (int v = 0; v < n; ++v)
        for (int w = 0; w < n; ++w) {
            Complex s = 0.0;
            for (int m = 0; m < n; ++m)
                s += haar.state(hopf_product(h, hopf_star(h, x.entry[m][v]), x.entry[m][w]));
            g(v, w) = s;
        }
    g = 0.5 * (g + g.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(g);
    if (es.info() != Eigen::Success) throw ConstructionFailure("unitarize: eigensolver failed");
    double lo = es.eigenvalues().minCoeff();
    if (lo <= tol_at(h.tol, max_abs(g)))
        throw ConstructionFailure("unitarize: averaged form is singular");
    Matrix root = es.operatorSqrt();
    Matrix rootInv = es.operatorInverseSqrt();

    UnitarizeResult out;
    out.gram = g;
    out.unitary.parent = &h;
    out.unitary.size = n;
    out.unitary.entry.assign(n, std::vector<Vector>(n, Vector::Zero(h.dim)));
    for (int v = 0; v < n; ++v)
        for (int w = 0; w < n; ++w) {
            Vector acc = Vector::Zero(h.dim);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) acc += root(v, a) * rootInv(b, w) * x.entry[a][b];
            out.unitary.entry[v][w] = acc;
        }
    double r = 0.0;
    for (int v = 0; v < n; ++v)
        for (int w = 0; w < n; ++w) {
            Vector lhs = Vector::Zero(h.dim), rhs = Vector::Zero(h.dim);
            for (int m = 0; m < n; ++m) {
                lhs += hopf_product(h, hopf_star(h, out.unitary.entry[m][v]), out.unitary.entry[m][w]);
                rhs += hopf_product(h, out.unitary.entry[v][m], hopf_star(h, out.unitary.entry[w][m]));
            }
            Vector target = (v == w) ? Vector(h.unit) : Vector(Vector::Zero(h.dim));
            r = std::max(r, max_abs(Vector(lhs - target)));
            r = std::max(r, max_abs(Vector(rhs - target)));
        }
    out.unitarity = r;
    out.corep_law = corep_residual(h, out.unitary);
    return out;
}

struct PWBlock {
    int n = 0;
    std::vector<RowVec> dual_units; // n^2 functionals, row-major (i, j)
    Matrix coeffs;                  // dim x n^2, column i*n + j holds u_ij
};

struct PeterWeyl {
    std::vector<PWBlock> blocks;
    int trivial = -1;
    double coassoc_residual = 0.0;
    double counit_residual = 0.0;
};

/** Peter-Weyl decomposition: matrix units of the dual convolution algebra,
 *  inverted to a basis of matrix coefficients u^a_ij with
 *  Delta(u_ij) = sum_l u_il (x) u_lj. */
inline PeterWeyl peter_weyl(const FiniteHopfStar& h, std::uint64_t seed = 1) {
    auto dual = dual_hopf(h);
    WedderburnData wd;
    try {
        wd = wedderburn(dual.algebra(), dual.tol, seed);
    } catch (const NotSemisimple& e) {
        throw NotCosemisimple(std::string("dual convolution algebra is not semisimple: ") + e.what());
    }
    const int n = h.dim;
    Matrix uhat(n, n);
    int row = 0;
    for (const auto& b : wd.blocks)
        for (const auto& u : b.units) uhat.row(row++) = u.transpose();
    if (row != n) throw ConstructionFailure("matrix units do not form a basis");
    Eigen::FullPivLU<Matrix> lu(uhat);
    if (!lu.isInvertible()) throw ConstructionFailure("matrix units do not form a basis");
    Matrix coeff = lu.inverse();

    PeterWeyl pw;
    int offset = 0;
    for (const auto& b : wd.blocks) {
        PWBlock blk;
        blk.n = b.n;
        for (const auto& u : b.units) blk.dual_units.push_back(u.transpose());
        blk.coeffs = coeff.middleCols(offset, b.n * b.n);
        offset += b.n * b.n;
        pw.blocks.push_back(std::move(blk));
    }

    const double scale = std::max(1.0, structure_scale(h));
    double worst_triv = 1e300;
    for (int a = 0; a < static_cast<int>(pw.blocks.size()); ++a) {
        const auto& blk = pw.blocks[a];
        for (int i = 0; i < blk.n; ++i)
            for (int j = 0; j < blk.n; ++j) {
                Vector uij = blk.coeffs.col(i * blk.n + j);
                Matrix lhs = delta_mat(h, uij);
                Matrix rhs = Matrix::Zero(n, n);
                for (int l = 0; l < blk.n; ++l)
                    rhs += blk.coeffs.col(i * blk.n + l) * blk.coeffs.col(l * blk.n + j).transpose();
                pw.coassoc_residual = std::max(pw.coassoc_residual, max_abs(Matrix(lhs - rhs)) / scale);
                Complex eps = (h.counit * uij)(0);
                pw.counit_residual =
                    std::max(pw.counit_residual, std::abs(eps - (i == j ? 1.0 : 0.0)) / scale);
            }
        if (blk.n == 1) {
            Vector u = blk.coeffs.col(0);
            Complex c = h.unit.dot(u) / h.unit.squaredNorm(); // projection onto span(1)
            double res = max_abs(Vector(u - c * h.unit));
            if (res < worst_triv) {
                worst_triv = res;
                if (res <= tol_at(h.tol, max_abs(u))) pw.trivial = a;
            }
        }
    }
    if (pw.trivial < 0) throw ConstructionFailure("no trivial block among the matrix coefficients");
    return pw;
}

} // namespace cqg
