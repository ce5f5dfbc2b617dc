#pragma once

/**
 * @file hopf.hpp
 *
 * Finite-dimensional Hopf *-algebras over C in structure-constant form, the
 * axiom verifier, convolution calculus, duality, and comodules.
 *
 * Sweedler shorthand: Delta(x) = x1 (x) x2. Convolution of functionals is
 * (f g)(x) = f(x1) g(x2); functionals act by f*x = f(x2) x1 (left) and
 * x*f = f(x1) x2 (right).
 */

#include <cqg/linalg.hpp>

#include <string>
#include <utility>
#include <vector>

namespace cqg {

struct FiniteHopfStar {
    int dim = 0;
    std::vector<std::string> labels;
    double tol = 1e-9;
    std::vector<Matrix> mult;   // mult[i](k,j) = coeff of e_k in e_i e_j
    Vector unit;
    std::vector<Matrix> comult; // comult[i](j,k) = coeff of e_j (x) e_k in Delta(e_i)
    RowVec counit;
    Matrix antipode;            // S(x) = antipode x
    Matrix star;                // x^* = star conj(x)

    StarAlgebra algebra() const { return StarAlgebra{dim, mult, unit, star, tol}; }
};

struct Functional {
    const void* parent = nullptr;
    RowVec coords;

    Complex operator()(const Vector& x) const { return (coords * x)(0); }
};

inline Functional make_functional(const FiniteHopfStar& h, const RowVec& coords) {
    if (coords.size() != h.dim) throw InvalidInput("make_functional: coordinate size mismatch");
    return Functional{&h, coords};
}

/** Right H-comodule: rho(e_v) = sum_{w,i} coaction[v](w,i) e_w (x) e_i. */
struct Comodule {
    const FiniteHopfStar* parent = nullptr;
    int dim = 0;
    std::vector<Matrix> coaction;
};

inline Vector hopf_product(const FiniteHopfStar& h, const Vector& x, const Vector& y) {
    Vector out = Vector::Zero(h.dim);
    for (int i = 0; i < h.dim; ++i)
        if (x(i) != 0.0) out += x(i) * (h.mult[i] * y);
    return out;
}

/** Delta(x) as the matrix W with W(j,k) = coefficient of e_j (x) e_k. */
inline Matrix delta_mat(const FiniteHopfStar& h, const Vector& x) {
    Matrix w = Matrix::Zero(h.dim, h.dim);
    for (int i = 0; i < h.dim; ++i)
        if (x(i) != 0.0) w += x(i) * h.comult[i];
    return w;
}

inline Vector hopf_star(const FiniteHopfStar& h, const Vector& x) { return h.star * x.conjugate(); }

inline double structure_scale(const FiniteHopfStar& h) {
    double s = std::max(max_abs(h.unit), max_abs(Matrix(h.antipode)));
    s = std::max(s, max_abs(Matrix(h.star)));
    s = std::max(s, h.counit.cwiseAbs().maxCoeff());
    for (const auto& m : h.mult) s = std::max(s, max_abs(m));
    for (const auto& m : h.comult) s = std::max(s, max_abs(m));
    return s;
}

struct LawReport {
    std::vector<std::pair<std::string, double>> residuals;
    double tol = 1e-9;
    bool pass = false;

    double worst() const {
        double w = 0.0;
        for (auto& r : residuals) w = std::max(w, r.second);
        return w;
    }
    double residual(const std::string& name) const {
        for (auto& r : residuals)
            if (r.first == name) return r.second;
        throw InvalidInput("no residual named " + name);
    }
};

/** Check every Hopf *-algebra law; residuals are max-abs entry differences
 *  normalized by the largest structure constant. */
inline LawReport verify_hopf(const FiniteHopfStar& h) {
    const int n = h.dim;
    if (n <= 0) throw InvalidInput("verify_hopf: empty algebra");
    if (static_cast<int>(h.mult.size()) != n || static_cast<int>(h.comult.size()) != n ||
        h.unit.size() != n || h.counit.size() != n || h.antipode.rows() != n || h.star.rows() != n)
        throw InvalidInput("verify_hopf: tensor arities do not match dim");

    const double scale = std::max(1.0, structure_scale(h));
    LawReport rep;
    rep.tol = h.tol;
    auto basis = [&](int i) { return Vector(Vector::Unit(n, i)); };
    auto push = [&](const std::string& name, double maxDiff) {
        rep.residuals.emplace_back(name, maxDiff / scale);
    };

    {
        double r = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Vector ij = h.mult[i].col(j);
                for (int k = 0; k < n; ++k) {
                    Vector lhs = hopf_product(h, ij, basis(k));
                    Vector rhs = hopf_product(h, basis(i), h.mult[j].col(k));
                    r = std::max(r, max_abs(Vector(lhs - rhs)));
                }
            }
        push("associativity", r);
    }
    {
        double r = 0.0;
        for (int i = 0; i < n; ++i) {
            r = std::max(r, max_abs(Vector(hopf_product(h, h.unit, basis(i)) - basis(i))));
            r = std::max(r, max_abs(Vector(hopf_product(h, basis(i), h.unit) - basis(i))));
        }
        push("unit", r);
    }
    {
        double r = 0.0;
        for (int i = 0; i < n; ++i)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    for (int c = 0; c < n; ++c) {
                        Complex lhs = 0.0, rhs = 0.0;
                        for (int m = 0; m < n; ++m) {
                            lhs += h.comult[i](m, c) * h.comult[m](a, b);
                            rhs += h.comult[i](a, m) * h.comult[m](b, c);
                        }
                        r = std::max(r, std::abs(lhs - rhs));
                    }
        push("coassociativity", r);
    }
    {
        double r = 0.0;
        for (int i = 0; i < n; ++i) {
            Vector left = h.comult[i].transpose() * h.counit.transpose();  // eps(x1) x2
            Vector right = h.comult[i] * h.counit.transpose();             // x1 eps(x2)
            r = std::max(r, max_abs(Vector(left - basis(i))));
            r = std::max(r, max_abs(Vector(right - basis(i))));
        }
        push("counit", r);
    }
    {
        // Delta(xy) = Delta(x) Delta(y) and Delta(1) = 1 (x) 1.
        double r = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Matrix lhs = delta_mat(h, h.mult[i].col(j));
                Matrix rhs = Matrix::Zero(n, n);
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) {
                        if (h.comult[i](a, b) == 0.0) continue;
                        rhs += h.comult[i](a, b) *
                               (h.mult[a] * h.comult[j] * h.mult[b].transpose());
                    }
                r = std::max(r, max_abs(Matrix(lhs - rhs)));
            }
        r = std::max(r, max_abs(Matrix(delta_mat(h, h.unit) - h.unit * h.unit.transpose())));
        push("comultiplication_multiplicative", r);
    }
    {
        double r = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                r = std::max(r, std::abs((h.counit * h.mult[i].col(j))(0) - h.counit(i) * h.counit(j)));
        r = std::max(r, std::abs((h.counit * h.unit)(0) - 1.0));
        push("counit_multiplicative", r);
    }
    {
        double r = 0.0;
        for (int i = 0; i < n; ++i) {
            Vector lhs = Vector::Zero(n), rhs = Vector::Zero(n);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    if (h.comult[i](a, b) == 0.0) continue;
                    lhs += h.comult[i](a, b) * hopf_product(h, h.antipode * basis(a), basis(b));
                    rhs += h.comult[i](a, b) * hopf_product(h, basis(a), h.antipode * basis(b));
                }
            Vector target = h.counit(i) * h.unit;
            r = std::max(r, max_abs(Vector(lhs - target)));
            r = std::max(r, max_abs(Vector(rhs - target)));
        }
        push("antipode", r);
    }
    {
        push("star_involutive", max_abs(Matrix(h.star * h.star.conjugate() - Matrix::Identity(n, n))));
    }
    {
        double r = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Vector lhs = hopf_star(h, h.mult[i].col(j));
                Vector rhs = hopf_product(h, hopf_star(h, basis(j)), hopf_star(h, basis(i)));
                r = std::max(r, max_abs(Vector(lhs - rhs)));
            }
        push("star_antimultiplicative", r);
    }
    {
        // Delta(x^*) = (* (x) *) Delta(x); for basis x the right side is
        // conj(comult[i]) pushed through star on both legs.
        double r = 0.0;
        for (int i = 0; i < n; ++i) {
            Matrix lhs = delta_mat(h, hopf_star(h, basis(i)));
            Matrix rhs = h.star * h.comult[i].conjugate() * h.star.transpose();
            r = std::max(r, max_abs(Matrix(lhs - rhs)));
        }
        push("star_comultiplicative", r);
    }
    {
        double r = 0.0;
        for (int i = 0; i < n; ++i)
            r = std::max(r, std::abs((h.counit * hopf_star(h, basis(i)))(0) - std::conj(h.counit(i))));
        push("star_counit", r);
    }
    {
        // (S o *)^2 = id.
        Matrix sstar = h.antipode * h.star; // x -> S(x^*) on conjugated coords
        Matrix twice = sstar * sstar.conjugate();
        push("antipode_star_involutive", max_abs(Matrix(twice - Matrix::Identity(n, n))));
    }

    rep.pass = true;
    for (auto& r : rep.residuals)
        if (!(r.second <= rep.tol)) rep.pass = false;
    return rep;
}

/** Convolution product of functionals: (f g)(x) = f(x1) g(x2). */
inline Functional convolve(const FiniteHopfStar& h, const Functional& f, const Functional& g) {
    if (f.parent != static_cast<const void*>(&h) || g.parent != static_cast<const void*>(&h))
        throw InvalidInput("convolve: functional bound to a different object");
    RowVec out(h.dim);
    for (int i = 0; i < h.dim; ++i) out(i) = (f.coords * h.comult[i] * g.coords.transpose())(0);
    return Functional{&h, out};
}

enum class ActSide { Left, Right };

/** Convolution action: left is f*x = f(x2) x1, right is x*f = f(x1) x2. */
inline Vector convolve_act(const FiniteHopfStar& h, const Functional& f, const Vector& x, ActSide side) {
    if (f.parent != static_cast<const void*>(&h))
        throw InvalidInput("convolve_act: functional bound to a different object");
    Matrix w = delta_mat(h, x);
    if (side == ActSide::Left) return w * f.coords.transpose();
    return w.transpose() * f.coords.transpose();
}

inline Matrix antipode_square(const FiniteHopfStar& h) { return h.antipode * h.antipode; }

/** The conjugate-linear coalgebra involution x -> (S x)^*, returned as the
 *  matrix applied after coordinate conjugation. */
inline Matrix star_coalgebra_map(const FiniteHopfStar& h) { return h.star * h.antipode.conjugate(); }

/** Dual Hopf *-algebra on the dual basis. */
inline FiniteHopfStar dual_hopf(const FiniteHopfStar& h) {
    const int n = h.dim;
    FiniteHopfStar d;
    d.dim = n;
    d.tol = h.tol;
    d.labels.reserve(n);
    for (int i = 0; i < n; ++i)
        d.labels.push_back((i < static_cast<int>(h.labels.size()) ? h.labels[i] : std::to_string(i)) + "^");
    d.mult.assign(n, Matrix::Zero(n, n));
    for (int a = 0; a < n; ++a)
        for (int k = 0; k < n; ++k)
            for (int b = 0; b < n; ++b) d.mult[a](k, b) = h.comult[k](a, b);
    d.unit = h.counit.transpose();
    d.comult.assign(n, Matrix::Zero(n, n));
    for (int a = 0; a < n; ++a)
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) d.comult[a](p, q) = h.mult[p](a, q);
    d.counit = h.unit.transpose();
    d.antipode = h.antipode.transpose();
    d.star = (h.star * h.antipode.conjugate()).conjugate().transpose();
    return d;
}

/** Coassociativity and counit residual of a right comodule. */
inline double comodule_residual(const FiniteHopfStar& h, const Comodule& m) {
    if (m.parent != &h) throw InvalidInput("comodule_residual: wrong parent");
    const int d = m.dim, n = h.dim;
    double r = 0.0;
    for (int v = 0; v < d; ++v) {
        // (rho (x) id) rho = (id (x) Delta) rho
        for (int w = 0; w < d; ++w)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    Complex lhs = 0.0, rhs = 0.0;
                    for (int u = 0; u < d; ++u) lhs += m.coaction[v](u, b) * m.coaction[u](w, a);
                    for (int i = 0; i < n; ++i) rhs += m.coaction[v](w, i) * h.comult[i](a, b);
                    r = std::max(r, std::abs(lhs - rhs));
                }
        Vector back = m.coaction[v] * h.counit.transpose();
        r = std::max(r, max_abs(Vector(back - Vector::Unit(d, v))));
    }
    return r;
}

inline Comodule regular_comodule(const FiniteHopfStar& h) {
    Comodule m;
    m.parent = &h;
    m.dim = h.dim;
    m.coaction = h.comult;
    return m;
}

} // namespace cqg
