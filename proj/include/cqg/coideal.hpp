#pragma once

/**
 * @file coideal.hpp
 *
 * Right coideal *-subalgebras A of a finite-dimensional Hopf *-algebra H,
 * the quotient coalgebra C = H/HA+, the invariant subalgebra of a quotient,
 * and the Galois correspondence round trips, together with faithful-flatness
 * spot checks.
 *
 * Conventions: A is a unital *-subalgebra with Delta(A) in A (x) H.
 * A+ = A intersect ker(eps).  The quotient map is pi, with isometric
 * section sigma, so sigma pi is the orthogonal projection onto a complement
 * of HA+.  Invariants of C are cH = { x : pi(x1) (x) x2 = pi(1) (x) x }.
 */

#include <cqg/haar.hpp>
#include <cqg/hopf.hpp>
#include <cqg/linalg.hpp>

#include <string>
#include <vector>

namespace cqg {

struct CoidealReport {
    LawReport laws;
    int dim = 0;
};

/** Residuals: unit membership, closure under products and star, and the
 *  right-coideal condition Delta(A) in A (x) H. */
inline CoidealReport verify_coideal(const FiniteHopfStar& h, const Subspace& a) {
    if (a.ambient() != h.dim) throw InvalidInput("verify_coideal: wrong ambient dimension");
    if (a.dim() == 0) throw InvalidInput("verify_coideal: empty subspace");
    CoidealReport rep;
    rep.dim = a.dim();
    rep.laws.tol = h.tol;
    const double scale = std::max(1.0, structure_scale(h));
    auto push = [&](const std::string& name, double r) {
        rep.laws.residuals.emplace_back(name, r / scale);
    };
    {
        Vector u = h.unit;
        push("contains_unit", max_abs(Vector(u - a.project(u))));
    }
    {
        double r = 0.0;
        for (int i = 0; i < a.dim(); ++i)
            for (int j = 0; j < a.dim(); ++j) {
                Vector p = hopf_product(h, a.basis.col(i), a.basis.col(j));
                r = std::max(r, max_abs(Vector(p - a.project(p))));
            }
        push("product_closed", r);
    }
    {
        double r = 0.0;
        for (int i = 0; i < a.dim(); ++i) {
            Vector s = hopf_star(h, a.basis.col(i));
            r = std::max(r, max_abs(Vector(s - a.project(s))));
        }
        push("star_closed", r);
    }
    {
        double r = 0.0;
        for (int i = 0; i < a.dim(); ++i) {
            Matrix w = delta_mat(h, a.basis.col(i));
            for (int k = 0; k < h.dim; ++k) {
                Vector leg = w.col(k); // left tensor legs must lie in A
                r = std::max(r, max_abs(Vector(leg - a.project(leg))));
            }
        }
        push("right_coideal", r);
    }
    rep.laws.pass = true;
    for (auto& r : rep.laws.residuals)
        if (!(r.second <= rep.laws.tol)) rep.laws.pass = false;
    return rep;
}

/** Smallest right coideal *-subalgebra containing the generators: closes
 *  under products, star, the unit, and left Sweedler legs. */
inline Subspace coideal_closure(const FiniteHopfStar& h, const std::vector<Vector>& generators) {
    std::vector<Vector> pool = generators;
    pool.push_back(h.unit);
    Subspace cur = Subspace::span(pool, h.tol);
    for (int round = 0; round < h.dim + 2; ++round) {
        std::vector<Vector> next;
        for (int i = 0; i < cur.dim(); ++i) {
            next.push_back(cur.basis.col(i));
            next.push_back(hopf_star(h, cur.basis.col(i)));
            Matrix w = delta_mat(h, cur.basis.col(i));
            for (int k = 0; k < h.dim; ++k)
                if (max_abs(Vector(w.col(k))) > h.tol) next.push_back(w.col(k));
            for (int j = 0; j < cur.dim(); ++j)
                next.push_back(hopf_product(h, cur.basis.col(i), cur.basis.col(j)));
        }
        Subspace grown = Subspace::span(next, h.tol);
        if (grown.dim() == cur.dim()) return grown;
        cur = grown;
        if (cur.dim() == h.dim) return cur;
    }
    throw ConstructionFailure("coideal_closure did not stabilize");
}

struct Quotient {
    Coalgebra c;
    Matrix pi;       // n_c x n
    Matrix section;  // n x n_c, pi section = id
    Subspace kernel; // HA+
    Matrix star_c;   // conjugate-linear involution on C, valid when star_descends
    bool star_descends = false;
    double star_residual = 0.0;
    double welldef_residual = 0.0;
};

/** Quotient coalgebra C = H/HA+ with quotient map, section, the inherited
 *  coalgebra involution when it descends, and well-definedness residuals
 *  (including independence from a second, non-orthogonal section). */
inline Quotient quotient_coalgebra(const FiniteHopfStar& h, const Subspace& a,
                                   std::uint64_t seed = 1) {
    auto chk = verify_coideal(h, a);
    if (!chk.laws.pass)
        throw NotCoideal("input is not a right coideal *-subalgebra (worst residual " +
                         std::to_string(chk.laws.worst()) + ")");
    const int n = h.dim;
    Subspace kereps = nullspace(Matrix(h.counit), h.tol);
    Subspace aplus = subspace_intersect(a, kereps);
    if (aplus.dim() != a.dim() - 1)
        throw NotCoideal("counit does not split the subalgebra");

    std::vector<Vector> prods;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < aplus.dim(); ++j)
            prods.push_back(hopf_product(h, Vector::Unit(n, i), aplus.basis.col(j)));
    Subspace ker = prods.empty() ? Subspace::zero(n, h.tol) : Subspace::span(prods, h.tol);
    if (ker.dim() >= n) throw NotCoideal("HA+ is the whole algebra");

    Matrix q = ker.dim() == 0 ? Matrix(Matrix::Identity(n, n))
                              : nullspace(Matrix(ker.basis.adjoint()), h.tol).basis;
    const int nc = static_cast<int>(q.cols());
    Quotient out;
    out.pi = q.adjoint();
    out.section = q;
    out.kernel = ker;
    out.c.dim = nc;
    out.c.tol = h.tol;
    for (int i = 0; i < nc; ++i) out.c.labels.push_back("c" + std::to_string(i));
    out.c.counit = h.counit * q;
    out.c.grouplike = out.pi * h.unit;
    out.c.comult.assign(nc, Matrix::Zero(nc, nc));
    for (int i = 0; i < nc; ++i)
        out.c.comult[i] = out.pi * delta_mat(h, q.col(i)) * out.pi.transpose();

    double wd = 0.0;
    const double scale = std::max(1.0, structure_scale(h));
    for (int v = 0; v < ker.dim(); ++v) {
        wd = std::max(wd, max_abs(Matrix(out.pi * delta_mat(h, ker.basis.col(v)) * out.pi.transpose())));
        wd = std::max(wd, std::abs((h.counit * ker.basis.col(v))(0)));
    }
    if (ker.dim() > 0) {
        auto rng = seeded_rng(seed);
        Matrix r(ker.dim(), nc);
        for (int c = 0; c < nc; ++c) r.col(c) = random_vector(rng, ker.dim());
        Matrix sigma2 = q + ker.basis * r; // second section of pi
        for (int i = 0; i < nc; ++i) {
            Matrix alt = out.pi * delta_mat(h, sigma2.col(i)) * out.pi.transpose();
            wd = std::max(wd, max_abs(Matrix(alt - out.c.comult[i])));
        }
    }
    out.welldef_residual = wd / scale;
    if (out.welldef_residual > 100 * h.tol)
        throw ConstructionFailure("quotient comultiplication is not well-defined (residual " +
                                  std::to_string(out.welldef_residual) + ")");

    Matrix smap = star_coalgebra_map(h); // x -> (Sx)^* after conjugation
    double sr = 0.0;
    for (int v = 0; v < ker.dim(); ++v) {
        Vector w = smap * ker.basis.col(v).conjugate();
        sr = std::max(sr, max_abs(Vector(w - ker.project(w))));
    }
    out.star_residual = sr / scale;
    out.star_descends = out.star_residual <= h.tol;
    out.star_c = out.pi * smap * q.conjugate();
    return out;
}

/** Invariants of the quotient: cH = { x : pi(x1) (x) x2 = pi(1) (x) x }. */
inline Subspace invariants(const FiniteHopfStar& h, const Quotient& qt) {
    const int n = h.dim, nc = qt.c.dim;
    Matrix sys(nc * n, n);
    Vector pi1 = qt.pi * h.unit;
    for (int a = 0; a < nc; ++a)
        for (int k = 0; k < n; ++k) {
            int row = a * n + k;
            for (int i = 0; i < n; ++i) {
                Complex coef = 0.0;
                for (int j = 0; j < n; ++j) coef += qt.pi(a, j) * h.comult[i](j, k);
                if (i == k) coef -= pi1(a);
                sys(row, i) = coef;
            }
        }
    return nullspace(sys, h.tol);
}

struct RoundTrip {
    bool subalgebra_recovered = false; // invariants(quotient(A)) equals A
    bool quotient_recovered = false;   // kernel of the re-derived quotient matches
    int dim_a = 0, dim_c = 0, dim_invariants = 0;
};

/** The Galois round trip in both directions. */
inline RoundTrip galois_roundtrip(const FiniteHopfStar& h, const Subspace& a, std::uint64_t seed = 1) {
    RoundTrip rt;
    auto qt = quotient_coalgebra(h, a, seed);
    Subspace b = invariants(h, qt);
    rt.dim_a = a.dim();
    rt.dim_c = qt.c.dim;
    rt.dim_invariants = b.dim();
    rt.subalgebra_recovered = subspace_equal(a, b);
    auto qt2 = quotient_coalgebra(h, b, seed + 1);
    bool kernels = (qt.kernel.dim() == qt2.kernel.dim());
    if (kernels && qt.kernel.dim() > 0) kernels = subspace_equal(qt.kernel, qt2.kernel);
    rt.quotient_recovered = kernels && qt.c.dim == qt2.c.dim;
    return rt;
}

/** Cotensor product C square H inside C (x) H: the equalizer of
 *  DeltaC (x) id and id (x) (pi (x) id) Delta.  Coordinates (a, k) = a*n + k. */
inline Subspace cotensor(const FiniteHopfStar& h, const Quotient& qt) {
    const int n = h.dim, nc = qt.c.dim;
    Matrix sys(nc * nc * n, nc * n);
    sys.setZero();
    for (int a = 0; a < nc; ++a)
        for (int b = 0; b < nc; ++b)
            for (int k = 0; k < n; ++k) {
                int row = (a * nc + b) * n + k;
                // lhs: (DeltaC (x) id) t : sum_c comult_c[c](a,b) t_{c,k}
                for (int c = 0; c < nc; ++c) sys(row, c * n + k) += qt.c.comult[c](a, b);
                // rhs: sum_i t_{a,i} (pi (x) id)(Delta e_i)_{b,k}
                for (int i = 0; i < n; ++i) {
                    Complex coef = 0.0;
                    for (int j = 0; j < n; ++j) coef += qt.pi(b, j) * h.comult[i](j, k);
                    sys(row, a * n + i) -= coef;
                }
            }
    return nullspace(sys, h.tol);
}

struct AdjunctionReport {
    bool unit_iso = false;
    int dim_cotensor = 0;
    double comparison_residual = 0.0;
};

/** The comparison map H -> C square H, x -> pi(x1) (x) x2, must be a
 *  bijection onto the cotensor product. */
inline AdjunctionReport adjunction_check(const FiniteHopfStar& h, const Quotient& qt) {
    const int n = h.dim, nc = qt.c.dim;
    Matrix phi(nc * n, n);
    for (int a = 0; a < nc; ++a)
        for (int k = 0; k < n; ++k)
            for (int x = 0; x < n; ++x) {
                Complex coef = 0.0;
                for (int j = 0; j < n; ++j) coef += qt.pi(a, j) * h.comult[x](j, k);
                phi(a * n + k, x) = coef;
            }
    AdjunctionReport rep;
    Subspace image = Subspace::span_cols(phi, h.tol);
    Subspace ct = cotensor(h, qt);
    rep.dim_cotensor = ct.dim();
    double res = 0.0;
    for (int c = 0; c < image.dim(); ++c) {
        Vector v = image.basis.col(c);
        res = std::max(res, max_abs(Vector(v - ct.project(v))));
    }
    rep.comparison_residual = res;
    rep.unit_iso = (image.dim() == n) && (ct.dim() == n) && subspace_equal(image, ct);
    return rep;
}

struct FlatnessReport {
    bool free_rank = false;          // dim A * dim C == dim H
    bool canonical_bijective = false;// H (x)_A H -> C (x) H
    bool module_injectivity = true;  // regular elements of A stay regular in H
    int samples = 0;
    int dim_balanced = 0;
};

/** Finite spot checks for faithful flatness of H over A. */
inline FlatnessReport flatness_spotcheck(const FiniteHopfStar& h, const Subspace& a,
                                         std::uint64_t seed = 1, int samples = 5) {
    const int n = h.dim;
    auto qt = quotient_coalgebra(h, a, seed);
    const int nc = qt.c.dim;
    FlatnessReport rep;
    rep.free_rank = (a.dim() * nc == n);

    // Balanced tensor H (x)_A H: quotient of H (x) H by xa (x) y - x (x) ay.
    std::vector<Vector> rel;
    for (int x = 0; x < n; ++x)
        for (int t = 0; t < a.dim(); ++t) {
            Vector xa = hopf_product(h, Vector::Unit(n, x), a.basis.col(t));
            for (int y = 0; y < n; ++y) {
                Vector v = Vector::Zero(n * n);
                for (int k = 0; k < n; ++k) v(k * n + y) += xa(k);
                Vector ay = hopf_product(h, a.basis.col(t), Vector::Unit(n, y));
                for (int k = 0; k < n; ++k) v(x * n + k) -= ay(k);
                rel.push_back(v);
            }
        }
    Subspace relsp = Subspace::span(rel, h.tol);
    rep.dim_balanced = n * n - relsp.dim();

    // Canonical map can(x (x) y) = pi(x1) (x) x2 y.
    Matrix can(nc * n, n * n);
    for (int x = 0; x < n; ++x) {
        Matrix w = h.comult[x]; // (j, m)
        Matrix piw = qt.pi * w; // (a, m)
        for (int y = 0; y < n; ++y)
            for (int a2 = 0; a2 < nc; ++a2)
                for (int k = 0; k < n; ++k) {
                    Complex coef = 0.0;
                    for (int m = 0; m < n; ++m) coef += piw(a2, m) * h.mult[m](k, y);
                    can(a2 * n + k, x * n + y) = coef;
                }
    }
    double welldef = 0.0;
    for (int r = 0; r < relsp.dim(); ++r) welldef = std::max(welldef, max_abs(Vector(can * relsp.basis.col(r))));
    Matrix comp = relsp.dim() == 0 ? Matrix(Matrix::Identity(n * n, n * n))
                                   : nullspace(Matrix(relsp.basis.adjoint()), h.tol).basis;
    Subspace can_image = Subspace::span_cols(Matrix(can * comp), h.tol);
    rep.canonical_bijective = welldef <= tol_at(h.tol, structure_scale(h)) &&
                              rep.dim_balanced == nc * n && can_image.dim() == nc * n;

    // Flat modules preserve injectivity: left/right multiplication by a
    // sampled regular element of A must stay injective on H.  The right
    // module mirror uses the conjugate flip R_a = conj(L_{a*}).
    auto rng = seeded_rng(seed);
    for (int s = 0; s < samples; ++s) {
        Vector coef = random_vector(rng, a.dim());
        Vector elem = a.basis * coef;
        Matrix la = Matrix::Zero(n, n), ra = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i)
            if (elem(i) != 0.0) la += elem(i) * h.mult[i];
        for (int j = 0; j < n; ++j) ra.col(j) = hopf_product(h, Vector::Unit(n, j), elem);
        Matrix laA = Matrix(la * a.basis), raA = Matrix(ra * a.basis);
        auto rank_of = [&](const Matrix& m) { return Subspace::span_cols(m, h.tol).dim(); };
        ++rep.samples;
        if (rank_of(laA) == a.dim() && rank_of(Matrix(la)) != n) rep.module_injectivity = false;
        if (rank_of(raA) == a.dim() && rank_of(Matrix(ra)) != n) rep.module_injectivity = false;
    }
    return rep;
}

struct CoalgRoundTrip {
    bool quotient_recovered = false;
    int dim_invariants = 0;
    int dim_c = 0;
};

/** The coalgebra-side loop: take invariants, quotient by them afresh, and
 *  require the original kernel back. */
inline CoalgRoundTrip galois_roundtrip_coalg(const FiniteHopfStar& h, const Quotient& qt,
                                             std::uint64_t seed = 1) {
    CoalgRoundTrip rt;
    Subspace a = invariants(h, qt);
    rt.dim_invariants = a.dim();
    auto qt2 = quotient_coalgebra(h, a, seed);
    rt.dim_c = qt2.c.dim;
    bool kernels = qt.kernel.dim() == qt2.kernel.dim();
    if (kernels && qt.kernel.dim() > 0) kernels = subspace_equal(qt.kernel, qt2.kernel);
    rt.quotient_recovered = kernels && qt.c.dim == qt2.c.dim;
    return rt;
}

/** Right C-comodule: rho(n_v) = sum_{w,a} coaction[v](w,a) n_w (x) c_a. */
struct CoalgComodule {
    int dim = 0;
    std::vector<Matrix> coaction; // dim x (dim of C) each
};

/** The one-dimensional comodule on the distinguished group-like pi(1). */
inline CoalgComodule trivial_comodule(const Quotient& qt) {
    CoalgComodule m;
    m.dim = 1;
    m.coaction.assign(1, Matrix(qt.c.grouplike.transpose()));
    return m;
}

/** C as a right comodule over itself. */
inline CoalgComodule coregular_comodule(const Quotient& qt) {
    CoalgComodule m;
    m.dim = qt.c.dim;
    m.coaction = qt.c.comult;
    return m;
}

/** Coassociativity and counit residual of a right C-comodule. */
inline double coalg_comodule_residual(const Coalgebra& c, const CoalgComodule& m) {
    const int d = m.dim, nc = c.dim;
    double r = 0.0;
    for (int v = 0; v < d; ++v) {
        for (int w = 0; w < d; ++w)
            for (int a = 0; a < nc; ++a)
                for (int b = 0; b < nc; ++b) {
                    Complex lhs = 0.0, rhs = 0.0;
                    for (int u = 0; u < d; ++u) lhs += m.coaction[v](u, b) * m.coaction[u](w, a);
                    for (int i = 0; i < nc; ++i) rhs += m.coaction[v](w, i) * c.comult[i](a, b);
                    r = std::max(r, std::abs(lhs - rhs));
                }
        Vector back = m.coaction[v] * c.counit.transpose();
        r = std::max(r, max_abs(Vector(back - Vector::Unit(d, v))));
    }
    return r;
}

/** Cotensor product N square_C H inside N (x) H, coordinates (v,k) = v*n + k:
 *  the equalizer of rho_N (x) id and id (x) (pi (x) id) Delta. */
inline Subspace cotensor(const FiniteHopfStar& h, const Quotient& qt, const CoalgComodule& nn) {
    if (coalg_comodule_residual(qt.c, nn) > 100 * tol_at(h.tol, structure_scale(h)))
        throw InvalidInput("cotensor: input is not a comodule over the quotient");
    const int n = h.dim, nc = qt.c.dim, d = nn.dim;
    Matrix sys(d * nc * n, d * n);
    sys.setZero();
    for (int w = 0; w < d; ++w)
        for (int b = 0; b < nc; ++b)
            for (int k = 0; k < n; ++k) {
                int row = (w * nc + b) * n + k;
                for (int v = 0; v < d; ++v) sys(row, v * n + k) += nn.coaction[v](w, b);
                for (int i = 0; i < n; ++i) {
                    Complex coef = 0.0;
                    for (int j = 0; j < n; ++j) coef += qt.pi(b, j) * h.comult[i](j, k);
                    sys(row, w * n + i) -= coef;
                }
            }
    return nullspace(sys, h.tol);
}

/** H-equivariant right A-module: action[t] is right multiplication by the
 *  t-th basis column of A, and the coaction is a right H-comodule structure
 *  for which the action map is a comodule morphism. */
struct EquivModule {
    int dim = 0;
    std::vector<Matrix> action;   // each dim x dim
    std::vector<Matrix> coaction; // coaction[v](w,i) as in Comodule
};

/** M = H with right multiplication and Delta. */
inline EquivModule equiv_regular(const FiniteHopfStar& h, const Subspace& a) {
    EquivModule m;
    m.dim = h.dim;
    for (int t = 0; t < a.dim(); ++t) {
        Matrix r(h.dim, h.dim);
        for (int j = 0; j < h.dim; ++j)
            r.col(j) = hopf_product(h, Vector::Unit(h.dim, j), a.basis.col(t));
        m.action.push_back(r);
    }
    m.coaction = h.comult;
    return m;
}

/** M = A itself, coacting by the restriction of Delta. */
inline EquivModule equiv_coideal(const FiniteHopfStar& h, const Subspace& a) {
    EquivModule m;
    m.dim = a.dim();
    Matrix ad = a.basis.adjoint();
    for (int t = 0; t < a.dim(); ++t) {
        Matrix r(a.dim(), a.dim());
        for (int s = 0; s < a.dim(); ++s)
            r.col(s) = ad * hopf_product(h, a.basis.col(s), a.basis.col(t));
        m.action.push_back(r);
    }
    for (int v = 0; v < a.dim(); ++v)
        m.coaction.push_back(Matrix(ad * delta_mat(h, a.basis.col(v))));
    return m;
}

/** M = V (x) A with (v (x) a) . b = v (x) ab and the tensor coaction
 *  rho(v (x) a) = v0 (x) a1 (x) v1 a2.  Coordinates (u,s) = u*dim(A) + s. */
inline EquivModule equiv_tensor(const FiniteHopfStar& h, const Subspace& a, const Comodule& v) {
    const int n = h.dim, da = a.dim(), dv = v.dim, dm = dv * da;
    Matrix ad = a.basis.adjoint();
    EquivModule m;
    m.dim = dm;
    for (int t = 0; t < da; ++t) {
        Matrix r = Matrix::Zero(dm, dm);
        for (int s = 0; s < da; ++s) {
            Vector prod = ad * hopf_product(h, a.basis.col(s), a.basis.col(t));
            for (int u = 0; u < dv; ++u)
                for (int s2 = 0; s2 < da; ++s2) r(u * da + s2, u * da + s) = prod(s2);
        }
        m.action.push_back(r);
    }
    m.coaction.assign(dm, Matrix::Zero(dm, n));
    for (int u = 0; u < dv; ++u)
        for (int s = 0; s < da; ++s) {
            Matrix da_s = delta_mat(h, a.basis.col(s)); // (j2,k): legs of Delta a_s
            Matrix ca = ad * da_s;                      // (s2,k): left leg in A coords
            Matrix& out = m.coaction[u * da + s];
            for (int u2 = 0; u2 < dv; ++u2)
                for (int j = 0; j < n; ++j) {
                    if (v.coaction[u](u2, j) == 0.0) continue;
                    for (int s2 = 0; s2 < da; ++s2)
                        for (int k = 0; k < n; ++k) {
                            if (ca(s2, k) == 0.0) continue;
                            for (int i = 0; i < n; ++i)
                                out(u2 * da + s2, i) +=
                                    v.coaction[u](u2, j) * ca(s2, k) * h.mult[j](i, k);
                        }
                }
        }
    return m;
}

/** Law residuals: unitality and associativity of the action, the comodule
 *  laws, and equivariance rho(m.a) = m0 . a1 (x) m1 a2. */
inline double equiv_module_residual(const FiniteHopfStar& h, const Subspace& a,
                                    const EquivModule& m) {
    const int n = h.dim, da = a.dim(), dm = m.dim;
    if (static_cast<int>(m.action.size()) != da || static_cast<int>(m.coaction.size()) != dm)
        throw InvalidInput("equiv_module_residual: tensor sizes do not match");
    Matrix ad = a.basis.adjoint();
    double r = 0.0;
    Vector uc = ad * h.unit;
    Matrix actu = Matrix::Zero(dm, dm);
    for (int t = 0; t < da; ++t) actu += uc(t) * m.action[t];
    r = std::max(r, max_abs(Matrix(actu - Matrix::Identity(dm, dm))));
    for (int s = 0; s < da; ++s)
        for (int t = 0; t < da; ++t) {
            Vector prod = ad * hopf_product(h, a.basis.col(s), a.basis.col(t));
            Matrix rhs = Matrix::Zero(dm, dm);
            for (int u = 0; u < da; ++u) rhs += prod(u) * m.action[u];
            r = std::max(r, max_abs(Matrix(m.action[t] * m.action[s] - rhs)));
        }
    Comodule cm{&h, dm, m.coaction};
    r = std::max(r, comodule_residual(h, cm));
    for (int v = 0; v < dm; ++v)
        for (int t = 0; t < da; ++t) {
            Vector y = m.action[t].col(v); // m_v . a_t
            Matrix lhs = Matrix::Zero(dm, n);
            for (int x = 0; x < dm; ++x)
                if (y(x) != 0.0) lhs += y(x) * m.coaction[x];
            // rhs(w, i) = sum_{s,k,x,j} ca(s,k) coaction[v](x,j) action[s](w,x) mult[j](i,k)
            Matrix ca = ad * delta_mat(h, a.basis.col(t)); // (s,k)
            Matrix rhs = Matrix::Zero(dm, n);
            for (int s = 0; s < da; ++s)
                for (int x = 0; x < dm; ++x)
                    for (int j = 0; j < n; ++j) {
                        Complex c0 = m.coaction[v](x, j);
                        if (c0 == 0.0) continue;
                        for (int k = 0; k < n; ++k) {
                            Complex c1 = ca(s, k);
                            if (c1 == 0.0) continue;
                            rhs += (c0 * c1) * (m.action[s].col(x) * h.mult[j].col(k).transpose());
                        }
                    }
            r = std::max(r, max_abs(Matrix(lhs - rhs)));
        }
    return r / std::max(1.0, structure_scale(h));
}

/** Comparison M -> (M/MA+) square_C H, m -> class(m0) (x) m1, for an
 *  equivariant module; bijectivity is the adjunction unit check. */
inline AdjunctionReport adjunction_check(const FiniteHopfStar& h, const Subspace& a,
                                         const EquivModule& m, std::uint64_t seed = 1) {
    const int n = h.dim, dm = m.dim;
    const double gate = 100 * tol_at(h.tol, structure_scale(h));
    double laws = equiv_module_residual(h, a, m);
    if (laws > gate)
        throw InvalidInput("adjunction_check: not an equivariant module (residual " +
                           std::to_string(laws) + ")");
    auto qt = quotient_coalgebra(h, a, seed);

    Subspace kereps = nullspace(Matrix(h.counit), h.tol);
    Subspace aplus = subspace_intersect(a, kereps);
    Matrix apc = a.basis.adjoint() * aplus.basis;
    std::vector<Vector> rel;
    for (int j = 0; j < aplus.dim(); ++j) {
        Matrix actp = Matrix::Zero(dm, dm);
        for (int t = 0; t < a.dim(); ++t) actp += apc(t, j) * m.action[t];
        for (int v = 0; v < dm; ++v) rel.push_back(actp.col(v));
    }
    Subspace ma = rel.empty() ? Subspace::zero(dm, h.tol) : Subspace::span(rel, h.tol);
    Matrix q = ma.dim() == 0 ? Matrix(Matrix::Identity(dm, dm))
                             : nullspace(Matrix(ma.basis.adjoint()), h.tol).basis;
    const int dn = static_cast<int>(q.cols());
    Matrix pin = q.adjoint();

    // C-coaction on N = M/MA+ through the section; well-definedness is the
    // residual of (pin (x) pi) rho on MA+.
    double wd = 0.0;
    for (int j = 0; j < ma.dim(); ++j) {
        Matrix img = Matrix::Zero(dn, qt.c.dim);
        Vector u = ma.basis.col(j);
        for (int v = 0; v < dm; ++v)
            if (u(v) != 0.0) img += u(v) * (pin * m.coaction[v] * qt.pi.transpose());
        wd = std::max(wd, max_abs(img));
    }
    CoalgComodule nn;
    nn.dim = dn;
    nn.coaction.assign(dn, Matrix::Zero(dn, qt.c.dim));
    for (int x = 0; x < dn; ++x)
        for (int v = 0; v < dm; ++v)
            if (q(v, x) != 0.0) nn.coaction[x] += q(v, x) * (pin * m.coaction[v] * qt.pi.transpose());

    Subspace ct = cotensor(h, qt, nn);
    Matrix comp(dn * n, dm);
    for (int v = 0; v < dm; ++v) {
        Matrix img = pin * m.coaction[v]; // (y, i)
        for (int y = 0; y < dn; ++y)
            for (int i = 0; i < n; ++i) comp(y * n + i, v) = img(y, i);
    }
    AdjunctionReport rep;
    Subspace image = Subspace::span_cols(comp, h.tol);
    rep.dim_cotensor = ct.dim();
    double res = wd;
    for (int c = 0; c < image.dim(); ++c) {
        Vector v = image.basis.col(c);
        res = std::max(res, max_abs(Vector(v - ct.project(v))));
    }
    rep.comparison_residual = res / std::max(1.0, structure_scale(h));
    rep.unit_iso = image.dim() == dm && ct.dim() == dm && subspace_equal(image, ct);
    return rep;
}

/** Finite-dimensional A-module on abstract coordinates: act[t] is the action
 *  of the t-th basis column of A (a.m for left modules, m.a for right ones). */
struct AModule {
    int dim = 0;
    std::vector<Matrix> act;
};

/** Unit and associativity residuals; side selects the composition order. */
inline double amodule_residual(const FiniteHopfStar& h, const Subspace& a, const AModule& m,
                               bool left) {
    const int da = a.dim();
    if (static_cast<int>(m.act.size()) != da)
        throw InvalidInput("amodule_residual: one action matrix per basis column required");
    Matrix ad = a.basis.adjoint();
    Vector uc = ad * h.unit;
    double r = 0.0;
    Matrix actu = Matrix::Zero(m.dim, m.dim);
    for (int t = 0; t < da; ++t) actu += uc(t) * m.act[t];
    r = std::max(r, max_abs(Matrix(actu - Matrix::Identity(m.dim, m.dim))));
    for (int s = 0; s < da; ++s)
        for (int t = 0; t < da; ++t) {
            Vector prod = ad * hopf_product(h, a.basis.col(s), a.basis.col(t));
            Matrix rhs = Matrix::Zero(m.dim, m.dim);
            for (int u = 0; u < da; ++u) rhs += prod(u) * m.act[u];
            // left: (a_s a_t) m = a_s (a_t m); right: m (a_s a_t) = (m a_s) a_t
            Matrix lhs = left ? Matrix(m.act[s] * m.act[t]) : Matrix(m.act[t] * m.act[s]);
            r = std::max(r, max_abs(Matrix(lhs - rhs)));
        }
    return r / std::max(1.0, structure_scale(h));
}

/** A acting on itself on the chosen side. */
inline AModule regular_amodule(const FiniteHopfStar& h, const Subspace& a, bool left) {
    AModule m;
    m.dim = a.dim();
    Matrix ad = a.basis.adjoint();
    for (int t = 0; t < a.dim(); ++t) {
        Matrix r(a.dim(), a.dim());
        for (int s = 0; s < a.dim(); ++s)
            r.col(s) = left ? Vector(ad * hopf_product(h, a.basis.col(t), a.basis.col(s)))
                            : Vector(ad * hopf_product(h, a.basis.col(s), a.basis.col(t)));
        m.act.push_back(r);
    }
    return m;
}

/** The augmentation part A+ with the restricted action; incl (optional)
 *  receives the inclusion into the regular module's coordinates. */
inline AModule augmentation_amodule(const FiniteHopfStar& h, const Subspace& a, bool left,
                                    Matrix* incl = nullptr) {
    Subspace kereps = nullspace(Matrix(h.counit), h.tol);
    Subspace aplus = subspace_intersect(a, kereps);
    Matrix p = a.basis.adjoint() * aplus.basis; // isometric: columns orthonormal
    AModule reg = regular_amodule(h, a, left);
    AModule m;
    m.dim = aplus.dim();
    for (int t = 0; t < a.dim(); ++t) m.act.push_back(Matrix(p.adjoint() * reg.act[t] * p));
    if (incl) *incl = p;
    return m;
}

/** d-dimensional module with the counit action a.m = eps(a) m. */
inline AModule trivial_amodule(const FiniteHopfStar& h, const Subspace& a, int d) {
    AModule m;
    m.dim = d;
    for (int t = 0; t < a.dim(); ++t) {
        Complex e = (h.counit * a.basis.col(t))(0);
        m.act.push_back(Matrix(e * Matrix::Identity(d, d)));
    }
    return m;
}

inline AModule amodule_sum(const AModule& x, const AModule& y) {
    AModule m;
    m.dim = x.dim + y.dim;
    for (std::size_t t = 0; t < x.act.size(); ++t) {
        Matrix b = Matrix::Zero(m.dim, m.dim);
        b.topLeftCorner(x.dim, x.dim) = x.act[t];
        b.bottomRightCorner(y.dim, y.dim) = y.act[t];
        m.act.push_back(b);
    }
    return m;
}

/** Side swap m <| a = a* m on the conjugate space: the flipped action of a_t
 *  is conj(action of a_t*), and flipping twice restores the original. */
inline AModule conjugate_flip(const FiniteHopfStar& h, const Subspace& a, const AModule& m) {
    Matrix ad = a.basis.adjoint();
    AModule out;
    out.dim = m.dim;
    for (int t = 0; t < a.dim(); ++t) {
        Vector sc = ad * hopf_star(h, Vector(a.basis.col(t))); // a_t* in A coords
        Matrix acc = Matrix::Zero(m.dim, m.dim);
        for (int s = 0; s < a.dim(); ++s)
            if (sc(s) != 0.0) acc += sc(s) * m.act[s];
        out.act.push_back(acc.conjugate());
    }
    return out;
}

/** H (x)_A M for a left module (relations xa (x) m - x (x) am, coordinates
 *  (k,v) = k*dim + v) or M (x)_A H for a right module (relations
 *  ma (x) x - m (x) ax, coordinates (v,k) = v*n + k). */
struct BalancedTensor {
    int dim = 0;
    Matrix complement; // orthonormal columns spanning a complement of the relations
};

inline BalancedTensor tensor_with_h(const FiniteHopfStar& h, const Subspace& a, const AModule& m,
                                    bool left_module) {
    const int n = h.dim, dm = m.dim;
    BalancedTensor bt;
    if (dm == 0) {
        bt.complement = Matrix::Zero(0, 0);
        return bt;
    }
    std::vector<Vector> rel;
    for (int t = 0; t < a.dim(); ++t)
        for (int x = 0; x < n; ++x) {
            Vector xa = left_module ? hopf_product(h, Vector::Unit(n, x), a.basis.col(t))
                                    : hopf_product(h, a.basis.col(t), Vector::Unit(n, x));
            for (int v = 0; v < dm; ++v) {
                Vector r = Vector::Zero(n * dm);
                if (left_module) {
                    for (int k = 0; k < n; ++k) r(k * dm + v) += xa(k);
                    for (int w = 0; w < dm; ++w) r(x * dm + w) -= m.act[t](w, v);
                } else {
                    for (int w = 0; w < dm; ++w) r(w * n + x) += m.act[t](w, v);
                    for (int k = 0; k < n; ++k) r(v * n + k) -= xa(k);
                }
                rel.push_back(r);
            }
        }
    Subspace rsp = Subspace::span(rel, h.tol);
    bt.complement = rsp.dim() == 0 ? Matrix(Matrix::Identity(n * dm, n * dm))
                                   : nullspace(Matrix(rsp.basis.adjoint()), h.tol).basis;
    bt.dim = static_cast<int>(bt.complement.cols());
    return bt;
}

/** The map induced on balanced tensors by an A-linear map f: src -> dst. */
inline Matrix tensor_with_h_map(const FiniteHopfStar& h, const AModule& src, const AModule& dst,
                                const Matrix& f, const BalancedTensor& bsrc,
                                const BalancedTensor& bdst, bool left_module) {
    const int n = h.dim;
    if (src.dim == 0 || dst.dim == 0) return Matrix::Zero(bdst.dim, bsrc.dim);
    Matrix big = Matrix::Zero(n * dst.dim, n * src.dim);
    for (int k = 0; k < n; ++k)
        for (int v = 0; v < src.dim; ++v)
            for (int w = 0; w < dst.dim; ++w) {
                if (f(w, v) == 0.0) continue;
                if (left_module)
                    big(k * dst.dim + w, k * src.dim + v) = f(w, v);
                else
                    big(w * n + k, v * n + k) = f(w, v);
            }
    return Matrix(bdst.complement.adjoint() * big * bsrc.complement);
}

struct FlatItem {
    std::string name;
    bool injective = false;
    int dim_src = 0, dim_dst = 0; // balanced-tensor dimensions
};

struct FlatBattery {
    std::vector<FlatItem> items;
    int dim_counit_tensor = 0; // H (x)_A (A/A+), must equal dim C
    int dim_c = 0;
    bool nonzero = true; // nonzero modules stay nonzero after tensoring
    bool pass = false;
};

/** Exactness spot checks: a battery of injective A-module maps must remain
 *  injective after tensoring with H.  Right modules are reached from the
 *  left-module battery through conjugate_flip. */
inline FlatBattery flatness_battery(const FiniteHopfStar& h, const Subspace& a, bool left_modules,
                                    std::uint64_t seed = 1) {
    auto qt = quotient_coalgebra(h, a, seed);
    FlatBattery out;
    out.dim_c = qt.c.dim;
    const double gate = 100 * tol_at(h.tol, structure_scale(h));

    auto run = [&](const std::string& name, AModule src, AModule dst, Matrix f) {
        if (!left_modules) {
            src = conjugate_flip(h, a, src);
            dst = conjugate_flip(h, a, dst);
            f = f.conjugate();
        }
        if (src.dim > 0 && amodule_residual(h, a, src, left_modules) > gate)
            throw InvalidInput("flatness_battery: source module laws fail");
        if (amodule_residual(h, a, dst, left_modules) > gate)
            throw InvalidInput("flatness_battery: target module laws fail");
        if (src.dim > 0) {
            if (Subspace::span_cols(f, h.tol).dim() != src.dim)
                throw InvalidInput("flatness_battery: map is not injective");
            double lin = 0.0;
            for (std::size_t t = 0; t < src.act.size(); ++t)
                lin = std::max(lin, max_abs(Matrix(f * src.act[t] - dst.act[t] * f)));
            if (lin > gate) throw InvalidInput("flatness_battery: map is not module-linear");
        }
        BalancedTensor bs = tensor_with_h(h, a, src, left_modules);
        BalancedTensor bd = tensor_with_h(h, a, dst, left_modules);
        Matrix ind = tensor_with_h_map(h, src, dst, f, bs, bd, left_modules);
        FlatItem it;
        it.name = name;
        it.dim_src = bs.dim;
        it.dim_dst = bd.dim;
        it.injective = Subspace::span_cols(ind, h.tol).dim() == bs.dim;
        if (dst.dim > 0 && bd.dim == 0) out.nonzero = false;
        out.items.push_back(it);
    };

    AModule reg = regular_amodule(h, a, true);
    run("zero_into_regular", AModule{0, std::vector<Matrix>(a.dim(), Matrix::Zero(0, 0))}, reg,
        Matrix::Zero(reg.dim, 0));
    {
        Matrix incl;
        AModule ap = augmentation_amodule(h, a, true, &incl);
        run("augmentation_into_regular", ap, reg, incl);
    }
    {
        Matrix diag(2 * reg.dim, reg.dim);
        diag.topRows(reg.dim) = Matrix::Identity(reg.dim, reg.dim);
        diag.bottomRows(reg.dim) = Matrix::Identity(reg.dim, reg.dim);
        run("regular_into_double", reg, amodule_sum(reg, reg), diag);
    }
    auto rng = seeded_rng(seed);
    for (int s = 0; s < 5; ++s) {
        Matrix f(6, 3);
        for (int c = 0; c < 3; ++c) f.col(c) = random_vector(rng, 6);
        run("random_trivial_" + std::to_string(s), trivial_amodule(h, a, 3),
            trivial_amodule(h, a, 6), f);
    }
    out.dim_counit_tensor = tensor_with_h(h, a, trivial_amodule(h, a, 1), left_modules).dim;

    out.pass = out.nonzero && out.dim_counit_tensor == out.dim_c;
    for (const auto& it : out.items) out.pass = out.pass && it.injective;
    return out;
}

} // namespace cqg
