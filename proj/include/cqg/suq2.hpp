// Compact quantum SU(2) as a presented Hopf *-algebra, with the quantum
// sphere family of coideal subalgebras cut out by twisted-primitive
// functionals.
#pragma once

#include <cqg/presented.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

namespace cqg {

/** O(SU_q(2)) for real 0 < q <= 1, generators ordered b < c < a < d so the
 *  standard relations orient as deglex-decreasing rewrite rules. */
inline PresentedHopf suq2(double q) {
    if (!(q > 0.0) || q > 1.0) throw InvalidInput("suq2: q must lie in (0, 1]");
    PresentedHopf p;
    p.name = "suq2";
    p.gen_names = {"b", "c", "a", "d"};
    p.gen_degree = {1, 1, 1, 1};
    const int b = 0, c = 1, a = 2, d = 3;
    const Complex Q(q, 0.0), Qi(1.0 / q, 0.0);
    auto mono = [](std::initializer_list<int> w, Complex cc) { return Poly{{Word(w), cc}}; };
    auto one = [](Complex cc) { return Poly{{Word{}, cc}}; };

    p.rules = {
        {{a, b}, mono({b, a}, Q)},
        {{a, c}, mono({c, a}, Q)},
        {{c, b}, mono({b, c}, Complex(1))},
        {{d, b}, mono({b, d}, Qi)},
        {{d, c}, mono({c, d}, Qi)},
        {{a, d}, [&] { Poly f = one(Complex(1)); poly_axpy(f, mono({b, c}, Complex(1)), Q); return f; }()},
        {{d, a}, [&] { Poly f = one(Complex(1)); poly_axpy(f, mono({b, c}, Complex(1)), Qi); return f; }()},
    };

    auto g1 = [&](int g) { return mono({g}, Complex(1)); };
    p.delta.resize(4);
    p.delta[a] = {{g1(a), g1(a)}, {g1(b), g1(c)}};
    p.delta[b] = {{g1(a), g1(b)}, {g1(b), g1(d)}};
    p.delta[c] = {{g1(c), g1(a)}, {g1(d), g1(c)}};
    p.delta[d] = {{g1(c), g1(b)}, {g1(d), g1(d)}};

    p.counit = {Complex(0), Complex(0), Complex(1), Complex(1)};

    p.antipode.resize(4);
    p.antipode[a] = g1(d);
    p.antipode[b] = mono({b}, -Qi);
    p.antipode[c] = mono({c}, -Q);
    p.antipode[d] = g1(a);

    p.star.resize(4);
    p.star[a] = g1(d);
    p.star[b] = mono({c}, -Q);
    p.star[c] = mono({b}, -Qi);
    p.star[d] = g1(a);
    return p;
}

/** Twisted-primitive data (f, k): k is a character and f satisfies
 *  f(xy) = f(x) k(y) + k^{-1}(x) f(y), with k^{-1} = k . S. */
struct TwistedPrimitive {
    std::vector<Complex> f;    // values on generators
    std::vector<Complex> k;    // character on generators
    std::vector<Complex> kinv; // the convolution inverse, also a character
};

namespace detail {

inline Complex character_word(const std::vector<Complex>& vals, const Word& w) {
    Complex e(1);
    for (int g : w) e *= vals[g];
    return e;
}

inline Complex character_poly(const std::vector<Complex>& vals, const Poly& f) {
    Complex e(0);
    for (const auto& [w, c] : f) e += c * character_word(vals, w);
    return e;
}

inline Complex twisted_word(const PresentedHopf& p, const TwistedPrimitive& t, const Word& w) {
    Complex val(0), kleft(1);
    for (size_t i = 0; i < w.size(); ++i) {
        Complex kright(1);
        for (size_t j = i + 1; j < w.size(); ++j) kright *= t.k[w[j]];
        val += kleft * t.f[w[i]] * kright;
        kleft *= t.kinv[w[i]];
    }
    return val;
}

inline Complex twisted_poly(const PresentedHopf& p, const TwistedPrimitive& t, const Poly& f) {
    Complex e(0);
    for (const auto& [w, c] : f) e += c * twisted_word(p, t, w);
    return e;
}

} // namespace detail

/** Check that the characters and the twisted functional descend through the
 *  rewrite rules; returns the worst violation. */
inline double twisted_primitive_residual(const PresentedHopf& p, const TwistedPrimitive& t) {
    if (static_cast<int>(t.f.size()) != p.ngens() || static_cast<int>(t.k.size()) != p.ngens() ||
        static_cast<int>(t.kinv.size()) != p.ngens())
        throw InvalidInput("twisted primitive data size disagrees with the generator count");
    double r = 0.0;
    for (int g = 0; g < p.ngens(); ++g) {
        // k^{-1} must be k . S
        r = std::max(r, std::abs(t.kinv[g] - detail::character_poly(t.k, p.antipode[g])));
    }
    for (const auto& [lhs, rhs] : p.rules) {
        r = std::max(r, std::abs(detail::character_word(t.k, lhs) - detail::character_poly(t.k, rhs)));
        r = std::max(r, std::abs(detail::character_word(t.kinv, lhs) -
                                 detail::character_poly(t.kinv, rhs)));
        r = std::max(r, std::abs(detail::twisted_word(p, t, lhs) - detail::twisted_poly(p, t, rhs)));
    }
    return r;
}

/** Solutions of f(x_(1)) x_(2) = 0 in the degree window: always a right
 *  coideal subalgebra containing the unit.  Returns a basis with the unit
 *  direction projected out. */
inline std::vector<Poly> twisted_invariants(const PresentedHopf& p, const TwistedPrimitive& t,
                                            int degree) {
    double tr = twisted_primitive_residual(p, t);
    if (tr > tol_at(p.tol, 1.0) * 10)
        throw InvalidInput("twisted primitive data does not descend through the rules (residual " +
                           std::to_string(tr) + ")");
    Snapshot s = snapshot(p, degree);
    const int n = s.dim();
    Matrix sys = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (const auto& [uv, c] : delta_word(p, s.basis[j]))
            sys(s.index.at(uv.second), j) += c * detail::twisted_word(p, t, uv.first);
    Subspace sol = nullspace(sys, p.tol);

    Vector unit = Vector::Zero(n);
    unit(0) = Complex(1);
    if (!sol.contains(unit))
        throw ConstructionFailure("twisted invariants do not contain the unit");
    std::vector<Poly> out;
    for (int j = 0; j < sol.dim(); ++j) {
        Vector v = sol.basis.col(j);
        v -= unit * v(0);
        if (v.norm() <= tol_at(p.tol, 1.0)) continue;
        v /= v.cwiseAbs().maxCoeff();
        out.push_back(s.poly(v));
    }
    return out;
}

/** Quantum sphere data: the twisted-primitive functional and the derived
 *  coideal generators in the degree-two window. */
struct PodlesSphere {
    TwistedPrimitive tp;
    std::vector<Poly> gens;
};

namespace detail {

inline TwistedPrimitive suq2_twisted(double q, Complex fb, Complex fc, Complex fa) {
    // generator order b, c, a, d; the character weight is kappa = q^{-1/2}
    const Complex kappa(1.0 / std::sqrt(q), 0.0);
    TwistedPrimitive t;
    t.f = {fb, fc, fa, -fa};
    t.k = {Complex(0), Complex(0), kappa, Complex(1) / kappa};
    t.kinv = {Complex(0), Complex(0), Complex(1) / kappa, kappa};
    return t;
}

} // namespace detail

/** Standard quantum sphere: the classical-torus direction (f = 0 on b, c). */
inline PodlesSphere podles_standard(const PresentedHopf& p, double q) {
    PodlesSphere s;
    s.tp = detail::suq2_twisted(q, Complex(0), Complex(0), Complex(1));
    s.gens = twisted_invariants(p, s.tp, 2);
    return s;
}

/** Non-standard quantum sphere from the twisted direction f(b) = q,
 *  f(c) = 1, f(a) = lambda = -f(d). */
inline PodlesSphere podles_nonstandard(const PresentedHopf& p, double q, double lambda = 0.0) {
    PodlesSphere s;
    s.tp = detail::suq2_twisted(q, Complex(q, 0.0), Complex(1), Complex(lambda, 0.0));
    s.gens = twisted_invariants(p, s.tp, 2);
    return s;
}

} // namespace cqg
