// Hopf *-algebras presented by generators and oriented rewrite rules,
// truncated to degree windows: snapshot coalgebras, quotients by coideal
// relations, and the positivity decision for the induced expectation.
#pragma once

#include <cqg/haar.hpp>
#include <cqg/hopf.hpp>
#include <cqg/linalg.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace cqg {

using Word = std::vector<int>;
using Poly = std::map<Word, Complex>;
using Poly2 = std::map<std::pair<Word, Word>, Complex>;

/** Presentation of a Hopf *-algebra: free *-algebra on named generators
 *  modulo rewrite rules lhs -> rhs with every rhs monomial strictly smaller
 *  in degree-lexicographic order.  The costructure is given on generators;
 *  counit and comultiplication extend multiplicatively, antipode and star
 *  anti-multiplicatively (star conjugate-linearly). */
struct PresentedHopf {
    std::string name;
    std::vector<std::string> gen_names;
    std::vector<int> gen_degree;
    std::vector<std::pair<Word, Poly>> rules;
    std::vector<std::vector<std::pair<Poly, Poly>>> delta; // per generator, tensor summands
    std::vector<Complex> counit;
    std::vector<Poly> antipode;
    std::vector<Poly> star;
    double tol = 1e-9;

    int ngens() const { return static_cast<int>(gen_names.size()); }
};

inline int word_degree(const PresentedHopf& p, const Word& w) {
    int d = 0;
    for (int g : w) d += p.gen_degree[g];
    return d;
}

inline bool deglex_less(const PresentedHopf& p, const Word& u, const Word& v) {
    int du = word_degree(p, u), dv = word_degree(p, v);
    if (du != dv) return du < dv;
    return u < v;
}

inline std::string word_str(const PresentedHopf& p, const Word& w) {
    if (w.empty()) return "1";
    std::string s;
    for (int g : w) s += p.gen_names[g];
    return s;
}

inline int poly_degree(const PresentedHopf& p, const Poly& f) {
    int d = -1;
    for (const auto& [w, c] : f)
        if (c != Complex(0)) d = std::max(d, word_degree(p, w));
    return d;
}

inline double poly_scale(const Poly& f) {
    double s = 0.0;
    for (const auto& [w, c] : f) s = std::max(s, std::abs(c));
    return s;
}

namespace detail {

inline double chop_eps(double tol, double scale) { return tol_at(tol * 1e-4, scale); }

inline void poly_chop(Poly& f, double eps) {
    for (auto it = f.begin(); it != f.end();)
        it = (std::abs(it->second) <= eps) ? f.erase(it) : std::next(it);
}

inline void check_letters(const PresentedHopf& p, const Word& w, const char* where) {
    for (int g : w)
        if (g < 0 || g >= p.ngens())
            throw InvalidInput(std::string(where) + ": generator index out of range");
}

inline void check_letters(const PresentedHopf& p, const Poly& f, const char* where) {
    for (const auto& [w, c] : f) check_letters(p, w, where);
}

/** Leftmost redex of w: (position, rule index), or rule -1 when normal. */
inline std::pair<int, int> first_redex(const PresentedHopf& p, const Word& w) {
    const int nw = static_cast<int>(w.size());
    for (int pos = 0; pos < nw; ++pos)
        for (int r = 0; r < static_cast<int>(p.rules.size()); ++r) {
            const Word& l = p.rules[r].first;
            const int nl = static_cast<int>(l.size());
            if (pos + nl <= nw && std::equal(l.begin(), l.end(), w.begin() + pos))
                return {pos, r};
        }
    return {-1, -1};
}

} // namespace detail

inline void validate_presentation(const PresentedHopf& p) {
    const int n = p.ngens();
    if (n <= 0) throw InvalidInput("presentation needs at least one generator");
    if (static_cast<int>(p.gen_degree.size()) != n || static_cast<int>(p.delta.size()) != n ||
        static_cast<int>(p.counit.size()) != n || static_cast<int>(p.antipode.size()) != n ||
        static_cast<int>(p.star.size()) != n)
        throw InvalidInput("presentation: generator data sizes disagree");
    for (int g = 0; g < n; ++g) {
        if (p.gen_degree[g] < 1) throw InvalidInput("presentation: generator degrees must be >= 1");
        if (p.delta[g].empty()) throw InvalidInput("presentation: missing comultiplication summands");
        for (const auto& [l, r] : p.delta[g]) {
            detail::check_letters(p, l, "delta");
            detail::check_letters(p, r, "delta");
        }
        detail::check_letters(p, p.antipode[g], "antipode");
        detail::check_letters(p, p.star[g], "star");
    }
    for (const auto& [lhs, rhs] : p.rules) {
        if (lhs.empty()) throw InvalidInput("rule with empty left-hand side");
        detail::check_letters(p, lhs, "rule");
        detail::check_letters(p, rhs, "rule");
        for (const auto& [w, c] : rhs)
            if (c != Complex(0) && !deglex_less(p, w, lhs))
                throw InvalidInput("rule " + word_str(p, lhs) + " does not decrease in deglex order");
    }
}

inline void poly_axpy(Poly& dst, const Poly& src, Complex c) {
    for (const auto& [w, v] : src) {
        auto it = dst.emplace(w, Complex(0)).first;
        it->second += c * v;
        if (it->second == Complex(0)) dst.erase(it);
    }
}

/** Concatenation product in the free algebra, no rewriting applied. */
inline Poly poly_concat(const Poly& f, const Poly& g) {
    Poly out;
    for (const auto& [u, cu] : f)
        for (const auto& [v, cv] : g) {
            Word uv = u;
            uv.insert(uv.end(), v.begin(), v.end());
            out[uv] += cu * cv;
        }
    return out;
}

inline Poly normal_form(const PresentedHopf& p, Poly f) {
    double scale = std::max(1.0, poly_scale(f));
    const double eps = detail::chop_eps(p.tol, scale);
    long guard = 0;
    for (;;) {
        if (++guard > 2000000)
            throw ConstructionFailure("rewriting did not terminate; check rule orientation");
        auto hit = f.end();
        std::pair<int, int> redex{-1, -1};
        for (auto it = f.begin(); it != f.end(); ++it) {
            redex = detail::first_redex(p, it->first);
            if (redex.second >= 0) {
                hit = it;
                break;
            }
        }
        if (hit == f.end()) break;
        const Word w = hit->first;
        const Complex c = hit->second;
        f.erase(hit);
        const auto& [lhs, rhs] = p.rules[redex.second];
        const Word prefix(w.begin(), w.begin() + redex.first);
        const Word suffix(w.begin() + redex.first + lhs.size(), w.end());
        for (const auto& [rw, rc] : rhs) {
            Word nw = prefix;
            nw.insert(nw.end(), rw.begin(), rw.end());
            nw.insert(nw.end(), suffix.begin(), suffix.end());
            auto it = f.emplace(std::move(nw), Complex(0)).first;
            it->second += c * rc;
            if (std::abs(it->second) <= eps) f.erase(it);
        }
    }
    detail::poly_chop(f, eps);
    return f;
}

inline Poly poly_mul(const PresentedHopf& p, const Poly& f, const Poly& g) {
    return normal_form(p, poly_concat(f, g));
}

inline Complex counit_word(const PresentedHopf& p, const Word& w) {
    Complex e(1);
    for (int g : w) e *= p.counit[g];
    return e;
}

inline Complex counit_poly(const PresentedHopf& p, const Poly& f) {
    Complex e(0);
    for (const auto& [w, c] : f) e += c * counit_word(p, w);
    return e;
}

inline Poly antipode_word(const PresentedHopf& p, const Word& w) {
    Poly out{{Word{}, Complex(1)}};
    for (auto it = w.rbegin(); it != w.rend(); ++it) out = poly_mul(p, out, p.antipode[*it]);
    return out;
}

inline Poly antipode_poly(const PresentedHopf& p, const Poly& f) {
    Poly out;
    for (const auto& [w, c] : f) poly_axpy(out, antipode_word(p, w), c);
    return normal_form(p, out);
}

inline Poly star_word(const PresentedHopf& p, const Word& w) {
    Poly out{{Word{}, Complex(1)}};
    for (auto it = w.rbegin(); it != w.rend(); ++it) out = poly_mul(p, out, p.star[*it]);
    return out;
}

inline Poly star_poly(const PresentedHopf& p, const Poly& f) {
    Poly out;
    for (const auto& [w, c] : f) poly_axpy(out, star_word(p, w), std::conj(c));
    return normal_form(p, out);
}

/** Inverse antipode through the star structure, S^{-1} = * . S . *. */
inline Poly antipode_inv_poly(const PresentedHopf& p, const Poly& f) {
    return star_poly(p, antipode_poly(p, star_poly(p, f)));
}

inline bool word_normal(const PresentedHopf& p, const Word& w) {
    return detail::first_redex(p, w).second < 0;
}

/** All rewriting-normal monomials of degree <= degree, deglex sorted.
 *  Guards against runaway enumeration with a hard cap. */
inline std::vector<Word> normal_monomials(const PresentedHopf& p, int degree, int cap = 20000) {
    std::vector<Word> out{Word{}};
    std::vector<Word> frontier{Word{}};
    while (!frontier.empty()) {
        std::vector<Word> next;
        for (const auto& w : frontier) {
            const int dw = word_degree(p, w);
            for (int g = 0; g < p.ngens(); ++g) {
                if (dw + p.gen_degree[g] > degree) continue;
                Word e = w;
                e.push_back(g);
                bool reducible = false;
                for (const auto& [l, r] : p.rules) {
                    if (l.size() > e.size()) continue;
                    if (std::equal(l.begin(), l.end(), e.end() - l.size())) {
                        reducible = true;
                        break;
                    }
                }
                if (reducible) continue;
                next.push_back(e);
                out.push_back(std::move(e));
                if (static_cast<int>(out.size()) > cap)
                    throw CutoffExceeded("monomial basis exceeds " + std::to_string(cap) +
                                         " elements at degree " + std::to_string(degree));
            }
        }
        frontier = std::move(next);
    }
    std::sort(out.begin(), out.end(),
              [&](const Word& a, const Word& b) { return deglex_less(p, a, b); });
    return out;
}

inline Poly2 delta_word(const PresentedHopf& p, const Word& w) {
    Poly2 cur;
    cur[{Word{}, Word{}}] = Complex(1);
    for (int g : w) {
        Poly2 next;
        for (const auto& [uv, c] : cur)
            for (const auto& [lf, rf] : p.delta[g]) {
                Poly lu = poly_mul(p, Poly{{uv.first, Complex(1)}}, lf);
                Poly rv = poly_mul(p, Poly{{uv.second, Complex(1)}}, rf);
                for (const auto& [u2, cu] : lu)
                    for (const auto& [v2, cv] : rv) next[{u2, v2}] += c * cu * cv;
            }
        double scale = 0.0;
        for (const auto& [k, c] : next) scale = std::max(scale, std::abs(c));
        const double eps = detail::chop_eps(p.tol, scale);
        for (auto it = next.begin(); it != next.end();)
            it = (std::abs(it->second) <= eps) ? next.erase(it) : std::next(it);
        cur = std::move(next);
    }
    return cur;
}

inline Poly2 delta_poly(const PresentedHopf& p, const Poly& f) {
    Poly2 out;
    for (const auto& [w, c] : f) {
        for (const auto& [uv, cc] : delta_word(p, w)) {
            auto it = out.emplace(uv, Complex(0)).first;
            it->second += c * cc;
            if (it->second == Complex(0)) out.erase(it);
        }
    }
    return out;
}

namespace detail {

struct DeltaCache {
    const PresentedHopf* p = nullptr;
    std::map<Word, Poly2> memo;

    const Poly2& of(const Word& w) {
        auto it = memo.find(w);
        if (it != memo.end()) return it->second;
        return memo.emplace(w, delta_word(*p, w)).first->second;
    }
};

} // namespace detail

struct CriticalPair {
    Word overlap;
    double residual = 0.0;
};

/** Overlap and containment ambiguities of the rule set, each resolved both
 *  ways and normal-formed; the residual is the largest surviving
 *  coefficient of the difference. */
inline std::vector<CriticalPair> critical_pairs(const PresentedHopf& p) {
    std::vector<CriticalPair> out;
    const int nr = static_cast<int>(p.rules.size());
    auto record = [&](const Word& w, const Poly& a, const Poly& b) {
        Poly d = normal_form(p, a);
        poly_axpy(d, normal_form(p, b), Complex(-1));
        d = normal_form(p, d);
        out.push_back({w, poly_scale(d)});
    };
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nr; ++j) {
            const auto& [li, ri] = p.rules[i];
            const auto& [lj, rj] = p.rules[j];
            const int ni = static_cast<int>(li.size()), nj = static_cast<int>(lj.size());
            // proper overlap: a suffix of li is a prefix of lj
            for (int k = 1; k < std::min(ni, nj); ++k) {
                if (!std::equal(li.end() - k, li.end(), lj.begin())) continue;
                Word w = li;
                w.insert(w.end(), lj.begin() + k, lj.end());
                Poly a = poly_concat(ri, Poly{{Word(lj.begin() + k, lj.end()), Complex(1)}});
                Poly b = poly_concat(Poly{{Word(li.begin(), li.end() - k), Complex(1)}}, rj);
                record(w, a, b);
            }
            // containment: lj sits strictly inside li
            if (i != j && nj < ni)
                for (int pos = 0; pos + nj <= ni; ++pos) {
                    if (!std::equal(lj.begin(), lj.end(), li.begin() + pos)) continue;
                    Poly b = poly_concat(Poly{{Word(li.begin(), li.begin() + pos), Complex(1)}}, rj);
                    b = poly_concat(b, Poly{{Word(li.begin() + pos + nj, li.end()), Complex(1)}});
                    record(li, ri, b);
                }
        }
    return out;
}

/** Law battery for a presentation: local confluence of the rewrite system
 *  (throws NotConfluent on failure), compatibility of the costructure with
 *  the rules, Hopf laws on generators, and the antipode/counit/involution
 *  laws on every normal monomial up to the given degree. */
inline LawReport verify_presented(const PresentedHopf& p, int degree = 3) {
    validate_presentation(p);
    double scale = 1.0;
    for (const auto& [l, r] : p.rules) scale = std::max(scale, poly_scale(r));
    for (int g = 0; g < p.ngens(); ++g) {
        for (const auto& [l, r] : p.delta[g])
            scale = std::max({scale, poly_scale(l), poly_scale(r)});
        scale = std::max({scale, poly_scale(p.antipode[g]), poly_scale(p.star[g])});
    }

    LawReport rep;
    rep.tol = p.tol;

    double conf = 0.0;
    Word worst_overlap;
    for (const auto& cp : critical_pairs(p))
        if (cp.residual > conf) {
            conf = cp.residual;
            worst_overlap = cp.overlap;
        }
    if (conf > tol_at(p.tol, scale))
        throw NotConfluent("critical pair at " + word_str(p, worst_overlap) +
                           " fails to resolve (residual " + std::to_string(conf) + ")");
    rep.residuals.push_back({"confluence", conf / scale});

    double dr = 0, er = 0, sr = 0, tr = 0;
    for (const auto& [lhs, rhs] : p.rules) {
        Poly2 dd = delta_word(p, lhs);
        for (const auto& [uv, c] : delta_poly(p, rhs)) dd[uv] -= c;
        for (const auto& [uv, c] : dd) dr = std::max(dr, std::abs(c));
        er = std::max(er, std::abs(counit_word(p, lhs) - counit_poly(p, rhs)));
        Poly ds = antipode_word(p, lhs);
        poly_axpy(ds, antipode_poly(p, rhs), Complex(-1));
        sr = std::max(sr, poly_scale(normal_form(p, ds)));
        Poly dt = star_word(p, lhs);
        poly_axpy(dt, star_poly(p, rhs), Complex(-1));
        tr = std::max(tr, poly_scale(normal_form(p, dt)));
    }
    rep.residuals.push_back({"comultiplication_respects_rules", dr / scale});
    rep.residuals.push_back({"counit_respects_rules", er / scale});
    rep.residuals.push_back({"antipode_respects_rules", sr / scale});
    rep.residuals.push_back({"star_respects_rules", tr / scale});

    using Poly3 = std::map<std::tuple<Word, Word, Word>, Complex>;
    double coas = 0.0;
    for (int g = 0; g < p.ngens(); ++g) {
        Poly3 lhs3, rhs3;
        for (const auto& [l, r] : p.delta[g]) {
            for (const auto& [uv, c] : delta_poly(p, l))
                for (const auto& [rw, rc] : normal_form(p, r))
                    lhs3[{uv.first, uv.second, rw}] += c * rc;
            for (const auto& [lw, lc] : normal_form(p, l))
                for (const auto& [uv, c] : delta_poly(p, r))
                    rhs3[{lw, uv.first, uv.second}] += lc * c;
        }
        for (const auto& [k, c] : rhs3) lhs3[k] -= c;
        for (const auto& [k, c] : lhs3) coas = std::max(coas, std::abs(c));
    }
    rep.residuals.push_back({"coassociativity", coas / scale});

    double cl = 0.0;
    for (int g = 0; g < p.ngens(); ++g) {
        Poly left, right, target{{Word{g}, Complex(1)}};
        for (const auto& [l, r] : p.delta[g]) {
            poly_axpy(left, normal_form(p, r), counit_poly(p, l));
            poly_axpy(right, normal_form(p, l), counit_poly(p, r));
        }
        poly_axpy(left, target, Complex(-1));
        poly_axpy(right, target, Complex(-1));
        cl = std::max({cl, poly_scale(normal_form(p, left)), poly_scale(normal_form(p, right))});
    }
    rep.residuals.push_back({"counit_law", cl / scale});

    const auto battery = normal_monomials(p, degree);
    double al = 0, inv = 0, sd = 0;
    for (const auto& m : battery) {
        const Poly2 dm = delta_word(p, m);
        Poly accl, accr;
        for (const auto& [uv, c] : dm) {
            poly_axpy(accl, poly_mul(p, antipode_word(p, uv.first), Poly{{uv.second, Complex(1)}}), c);
            poly_axpy(accr, poly_mul(p, Poly{{uv.first, Complex(1)}}, antipode_word(p, uv.second)), c);
        }
        Poly target{{Word{}, counit_word(p, m)}};
        poly_axpy(accl, target, Complex(-1));
        poly_axpy(accr, target, Complex(-1));
        al = std::max({al, poly_scale(normal_form(p, accl)), poly_scale(normal_form(p, accr))});

        Poly twice = star_poly(p, star_word(p, m));
        poly_axpy(twice, Poly{{m, Complex(1)}}, Complex(-1));
        inv = std::max(inv, poly_scale(normal_form(p, twice)));

        Poly2 lhs2 = delta_poly(p, star_word(p, m));
        for (const auto& [uv, c] : dm)
            for (const auto& [u2, cu] : star_word(p, uv.first))
                for (const auto& [v2, cv] : star_word(p, uv.second))
                    lhs2[{u2, v2}] -= std::conj(c) * cu * cv;
        for (const auto& [uv, c] : lhs2) sd = std::max(sd, std::abs(c));
    }
    rep.residuals.push_back({"antipode_law", al / scale});
    rep.residuals.push_back({"star_involution", inv / scale});
    rep.residuals.push_back({"star_comultiplicative", sd / scale});

    rep.pass = rep.worst() <= p.tol;
    return rep;
}

/** Degree window of a presentation: the span of rewriting-normal monomials
 *  of degree <= degree.  Comultiplication preserves total degree, so the
 *  window is a subcoalgebra of the presented algebra. */
struct Snapshot {
    PresentedHopf alg;
    int degree = 0;
    std::vector<Word> basis;
    std::map<Word, int> index;

    int dim() const { return static_cast<int>(basis.size()); }

    Vector vec(const Poly& f) const {
        Vector v = Vector::Zero(dim());
        Poly nf = normal_form(alg, f);
        const double scale = poly_scale(nf);
        for (const auto& [w, c] : nf) {
            auto it = index.find(w);
            if (it == index.end()) {
                if (std::abs(c) > tol_at(alg.tol, scale))
                    throw InvalidInput("polynomial leaves the degree-" + std::to_string(degree) +
                                       " window at " + word_str(alg, w));
                continue;
            }
            v(it->second) += c;
        }
        return v;
    }

    Poly poly(const Vector& v) const {
        if (v.size() != dim()) throw InvalidInput("coordinate vector has the wrong length");
        Poly f;
        for (int i = 0; i < dim(); ++i)
            if (v(i) != Complex(0)) f[basis[i]] = v(i);
        return f;
    }
};

inline Snapshot snapshot(const PresentedHopf& p, int degree, int cap = 20000) {
    validate_presentation(p);
    if (degree < 0) throw InvalidInput("snapshot degree must be nonnegative");
    Snapshot s;
    s.alg = p;
    s.degree = degree;
    s.basis = normal_monomials(p, degree, cap);
    for (int i = 0; i < static_cast<int>(s.basis.size()); ++i) s.index[s.basis[i]] = i;
    if (s.basis.empty() || !s.basis[0].empty())
        throw ConstructionFailure("monomial basis does not start at the unit");
    return s;
}

/** Dense coalgebra of a degree window; memory grows cubically with the
 *  window dimension, intended for small windows. */
inline Coalgebra snapshot_coalgebra(const Snapshot& s) {
    const int n = s.dim();
    Coalgebra c;
    c.dim = n;
    c.tol = s.alg.tol;
    c.labels.reserve(n);
    for (const auto& w : s.basis) c.labels.push_back(word_str(s.alg, w));
    c.comult.assign(n, Matrix::Zero(n, n));
    c.counit = RowVec::Zero(n);
    for (int i = 0; i < n; ++i) {
        for (const auto& [uv, cc] : delta_word(s.alg, s.basis[i]))
            c.comult[i](s.index.at(uv.first), s.index.at(uv.second)) += cc;
        c.counit(i) = counit_word(s.alg, s.basis[i]);
    }
    c.grouplike = Vector::Zero(n);
    c.grouplike(0) = Complex(1);
    return c;
}

/** Quotient of a degree window by the coideal relations.  Relation products
 *  are formed through the full requested degree, but the quotient, its
 *  invariant functional, and everything downstream live on the smaller
 *  window where the relation span is saturated: killing a degree-k element
 *  can take relation products of formal degree up to k plus the generator
 *  degree, so only degrees <= degree - max generator degree are kept. */
struct TruncatedQuotient {
    Snapshot snap; // the saturated window
    std::vector<Poly> coideal_gens;
    int degree = 0;         // requested degree, used for relation products
    int window = 0;         // saturated window degree carried by snap
    int witness_degree = 0; // Gram window, floor(window / 2)
    Subspace aspan;         // multiplicative closure of {1, g, g*} in the window
    double coideal_residual = 0.0;
    Subspace kernel;        // relations supported inside the window
    Matrix pi, section;
    Coalgebra c;
    double welldef_residual = 0.0;
    Matrix star_c;
    bool star_descends = false;
    double star_residual = 0.0;
    CoalgebraIntegral integral; // valid only when integral_ok
    RowVec phi;                 // integral . pi, a functional on the window
    bool integral_ok = false;
    std::string integral_note; // failure reason when !integral_ok
};

inline TruncatedQuotient truncated_quotient(const PresentedHopf& p, const std::vector<Poly>& gens,
                                            int degree, std::uint64_t seed = 1) {
    TruncatedQuotient t;
    t.degree = degree;
    if (gens.empty()) throw InvalidInput("no coideal generators given");
    int maxg = 0;
    for (const auto& g0 : gens) {
        Poly g = normal_form(p, g0);
        const int dg = poly_degree(p, g);
        if (dg >= 1) maxg = std::max(maxg, dg);
        t.coideal_gens.push_back(std::move(g));
    }
    if (maxg == 0) throw InvalidInput("coideal generators span only scalars");
    if (degree < 2 * maxg)
        throw InvalidInput("degree window must be at least twice the generator degree");
    t.window = degree - maxg;
    t.witness_degree = t.window / 2;

    Snapshot full = snapshot(p, degree);
    const int nfull = full.dim();

    t.snap.alg = p;
    t.snap.degree = t.window;
    t.snap.basis = normal_monomials(p, t.window);
    const int n = t.snap.dim();
    for (int i = 0; i < n; ++i) {
        if (full.basis[i] != t.snap.basis[i])
            throw ConstructionFailure("window bases are not nested");
        t.snap.index[t.snap.basis[i]] = i;
    }

    // multiplicative closure of {1, g, g*} inside the window, then the right
    // coideal property of the generators: left coproduct legs stay in the span
    {
        std::vector<Poly> apolys{Poly{{Word{}, Complex(1)}}};
        for (const auto& g : t.coideal_gens) {
            apolys.push_back(g);
            apolys.push_back(star_poly(p, g));
        }
        std::vector<Vector> avecs;
        for (const auto& f : apolys)
            if (poly_degree(p, f) <= t.window) avecs.push_back(t.snap.vec(f));
        t.aspan = Subspace::span(avecs, p.tol);
        for (bool grew = true; grew;) {
            grew = false;
            std::vector<Poly> fresh;
            for (size_t i = 0; i < apolys.size(); ++i)
                for (size_t j = 0; j < apolys.size(); ++j) {
                    if (poly_degree(p, apolys[i]) + poly_degree(p, apolys[j]) > t.window) continue;
                    Poly prod = poly_mul(p, apolys[i], apolys[j]);
                    Vector v = t.snap.vec(prod);
                    if (!t.aspan.contains(v)) {
                        t.aspan = subspace_sum(t.aspan, Subspace::span({v}, p.tol));
                        fresh.push_back(std::move(prod));
                        grew = true;
                    }
                }
            for (auto& f : fresh) apolys.push_back(std::move(f));
        }
        double coid = 0.0;
        for (const auto& g : t.coideal_gens) {
            std::map<Word, Poly> by_right;
            for (const auto& [uv, c] : delta_poly(p, g)) by_right[uv.second][uv.first] += c;
            for (const auto& [v, left] : by_right) {
                Vector lv = t.snap.vec(left);
                coid = std::max(coid, (lv - t.aspan.project(lv)).norm() / std::max(1.0, lv.norm()));
            }
        }
        t.coideal_residual = coid;
        if (coid > 1e-6)
            throw NotCoideal("generator coproducts leave the subalgebra span (residual " +
                             std::to_string(coid) + ")");
    }

    std::vector<Vector> kvecs;
    for (const auto& g : t.coideal_gens) {
        Poly aug = g;
        poly_axpy(aug, Poly{{Word{}, Complex(1)}}, -counit_poly(p, g));
        const int dg = poly_degree(p, aug);
        if (dg < 1) continue;
        for (const auto& m : normal_monomials(p, degree - dg))
            kvecs.push_back(full.vec(poly_mul(p, Poly{{m, Complex(1)}}, aug)));
    }
    if (kvecs.empty()) throw InvalidInput("coideal generators have no augmented part");
    Subspace kfull = Subspace::span(kvecs, p.tol);

    // relations supported inside the saturated window
    if (kfull.dim() > 0) {
        Matrix tail = kfull.basis.bottomRows(nfull - n);
        Subspace inwin = nullspace(tail, p.tol);
        Matrix cols = kfull.basis * inwin.basis;
        t.kernel = Subspace::span_cols(cols.topRows(n), p.tol);
    } else {
        t.kernel = Subspace::zero(n, p.tol);
    }
    if (t.kernel.dim() >= n) throw ConstructionFailure("coideal relations exhaust the window");

    Subspace comp = nullspace(t.kernel.basis.adjoint(), p.tol);
    t.pi = comp.basis.adjoint();
    t.section = comp.basis;
    const int nc = n - t.kernel.dim();

    detail::DeltaCache cache{&p, {}};
    auto project_delta = [&](const Vector& x) {
        Matrix m = Matrix::Zero(nc, nc);
        const double xs = std::max(1.0, max_abs(x));
        for (int i = 0; i < n; ++i) {
            if (std::abs(x(i)) <= detail::chop_eps(p.tol, xs)) continue;
            for (const auto& [uv, c] : cache.of(t.snap.basis[i]))
                m += (x(i) * c) * (t.pi.col(t.snap.index.at(uv.first)) *
                                   t.pi.col(t.snap.index.at(uv.second)).transpose());
        }
        return m;
    };

    t.c.dim = nc;
    t.c.tol = p.tol;
    t.c.labels.reserve(nc);
    for (int i = 0; i < nc; ++i) t.c.labels.push_back("q" + std::to_string(i));
    t.c.comult.reserve(nc);
    for (int i = 0; i < nc; ++i) t.c.comult.push_back(project_delta(t.section.col(i)));
    t.c.counit = RowVec::Zero(nc);
    for (int i = 0; i < nc; ++i) {
        t.c.counit(i) = counit_poly(p, t.snap.poly(t.section.col(i)));
    }
    t.c.grouplike = t.pi * t.snap.vec(Poly{{Word{}, Complex(1)}});

    double wd = 0.0;
    for (int j = 0; j < t.kernel.dim(); ++j)
        wd = std::max(wd, max_abs(project_delta(t.kernel.basis.col(j))));
    // second route: a different linear section must induce the same coproduct
    {
        auto rng = seeded_rng(seed + 17);
        for (int i = 0; i < nc; ++i) {
            Vector alt = t.section.col(i);
            if (t.kernel.dim() > 0) alt += t.kernel.basis * random_vector(rng, t.kernel.dim());
            wd = std::max(wd, max_abs(Matrix(project_delta(alt) - t.c.comult[i])));
        }
    }
    t.welldef_residual = wd;
    if (wd > tol_at(p.tol, 1.0) * 100)
        throw ConstructionFailure("window quotient coproduct is not well defined (residual " +
                                  std::to_string(wd) + ")");

    // star descent through tau(x) = S(x)^*, a degree-preserving algebra map
    Matrix tau = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        tau.col(i) = t.snap.vec(star_poly(p, antipode_word(p, t.snap.basis[i])));
    double sres = 0.0;
    for (int j = 0; j < t.kernel.dim(); ++j) {
        Vector img = tau * t.kernel.basis.col(j).conjugate();
        sres = std::max(sres, (img - t.kernel.project(img)).norm());
    }
    t.star_residual = sres;
    t.star_descends = sres <= tol_at(p.tol, max_abs(tau)) * 10;
    if (t.star_descends) t.star_c = t.pi * tau * t.section.conjugate();

    // At a cutoff, a failed invariant-functional construction (no functional,
    // or the two routes disagreeing) is a boundary artifact of the window, not
    // an established property; it is recorded and surfaces as "inconclusive".
    try {
        t.integral = coalgebra_integral(t.c, seed);
        t.phi = t.integral.coords * t.pi;
        t.integral_ok = true;
    } catch (const NotCosemisimple& e) {
        t.integral_note = e.what();
    } catch (const ConstructionFailure& e) {
        t.integral_note = e.what();
    }
    return t;
}

/** Outcome of the positivity decision for the expectation induced by a
 *  truncated quotient.  A negative Gram direction is a definite failure of
 *  positivity; PSD together with two-sided S^2 stability of the generators
 *  is a definite pass; PSD without stability stays inconclusive, as does any
 *  window whose invariant functional fails its dual-route validation. */
struct TruncatedDecision {
    int degree = 0; // requested degree for relation products
    int window = 0; // saturated window everything is computed on
    int witness_degree = 0;
    int quotient_dim = 0;
    double phi_invariance = 0.0, phi_route_gap = 0.0;
    double welldef_residual = 0.0;
    bool star_descends = false;
    Matrix expectation; // on the window
    double coideal_residual = 0.0;
    double e_idempotent = 0.0, e_unital = 0.0, e_range = 0.0;
    double s2_forward = 0.0, s2_backward = 0.0;
    bool s2_invariant = false;
    Matrix gram;
    double gram_herm = 0.0;
    PsdResult gram_psd;
    std::vector<Word> gram_words;
    Poly witness;
    bool positive = false;
    bool conclusive = false;
    std::string verdict; // "positive" | "not_positive" | "inconclusive"
    std::string reason;
};

inline TruncatedDecision decide_truncated(const PresentedHopf& p, const std::vector<Poly>& gens,
                                          int degree, std::uint64_t seed = 1) {
    auto tq = truncated_quotient(p, gens, degree, seed);
    TruncatedDecision d;
    d.degree = degree;
    d.window = tq.window;
    d.witness_degree = tq.witness_degree;
    d.quotient_dim = tq.c.dim;
    d.welldef_residual = tq.welldef_residual;
    d.star_descends = tq.star_descends;

    detail::DeltaCache cache{&p, {}};
    const int ng = tq.snap.dim();

    d.coideal_residual = tq.coideal_residual;
    const Subspace& aspan = tq.aspan;

    // two-sided S^2 stability of the generators inside the coideal span
    {
        double fwd = 0, bwd = 0;
        for (const auto& g : tq.coideal_gens) {
            Vector v2 = tq.snap.vec(antipode_poly(p, antipode_poly(p, g)));
            Vector vm = tq.snap.vec(antipode_inv_poly(p, antipode_inv_poly(p, g)));
            fwd = std::max(fwd, (v2 - aspan.project(v2)).norm() / std::max(1.0, v2.norm()));
            bwd = std::max(bwd, (vm - aspan.project(vm)).norm() / std::max(1.0, vm.norm()));
        }
        d.s2_forward = fwd;
        d.s2_backward = bwd;
        d.s2_invariant = std::max(fwd, bwd) <= tol_at(p.tol, 1.0) * 100;
    }

    // without a validated invariant state, this cutoff decides nothing
    if (!tq.integral_ok) {
        d.conclusive = false;
        d.verdict = "inconclusive";
        d.reason = "no validated invariant state at this cutoff (" + tq.integral_note + ")";
        return d;
    }
    d.phi_invariance = tq.integral.invariance;
    d.phi_route_gap = tq.integral.route_gap;

    // conditional expectation x -> phi(x_(1)) x_(2) on the window
    d.expectation = Matrix::Zero(ng, ng);
    for (int j = 0; j < ng; ++j)
        for (const auto& [uv, c] : cache.of(tq.snap.basis[j]))
            d.expectation(tq.snap.index.at(uv.second), j) += c * tq.phi(tq.snap.index.at(uv.first));
    const double escale = std::max(1.0, max_abs(d.expectation));
    d.e_idempotent = max_abs(Matrix(d.expectation * d.expectation - d.expectation)) / escale;
    Vector unit = Vector::Zero(ng);
    unit(0) = Complex(1);
    d.e_unital = max_abs(Vector(d.expectation * unit - unit));
    double er = 0.0;
    for (int j = 0; j < ng; ++j) {
        Vector col = d.expectation.col(j);
        const double cs = std::max(1.0, col.norm());
        er = std::max(er, (col - aspan.project(col)).norm() / cs);
    }
    d.e_range = er;

    // Gram form of the induced state on the witness window
    d.gram_words = normal_monomials(p, tq.witness_degree);
    const int nw = static_cast<int>(d.gram_words.size());
    d.gram = Matrix::Zero(nw, nw);
    for (int i = 0; i < nw; ++i) {
        const Poly si = star_word(p, d.gram_words[i]);
        for (int j = 0; j < nw; ++j) {
            Poly prod = poly_mul(p, si, Poly{{d.gram_words[j], Complex(1)}});
            d.gram(i, j) = (tq.phi * tq.snap.vec(prod))(0);
        }
    }
    const double gscale = std::max(1.0, max_abs(d.gram));
    d.gram_herm = max_abs(Matrix(d.gram - d.gram.adjoint())) / gscale;
    d.gram_psd = psd_check(Matrix(0.5 * (d.gram + d.gram.adjoint())), p.tol);
    d.positive = d.gram_psd.psd && d.gram_herm <= 1e-6;
    std::string failure;
    Vector wit;
    if (!d.gram_psd.psd) {
        // negative direction of the hermitian part: Re phi(x*x) < 0
        wit = d.gram_psd.witness;
        failure = "negative Gram direction (eigenvalue " + std::to_string(d.gram_psd.min_eig) +
                  ") at window degree " + std::to_string(d.witness_degree);
    } else if (d.gram_herm > 1e-6) {
        // a positive state is real on x*x; a non-hermitian Gram refutes that
        Eigen::SelfAdjointEigenSolver<Matrix> es(
            Matrix((d.gram - d.gram.adjoint()) / Complex(0.0, 2.0)));
        const int lo = 0, hi = static_cast<int>(es.eigenvalues().size()) - 1;
        const int pick =
            std::abs(es.eigenvalues()(lo)) >= std::abs(es.eigenvalues()(hi)) ? lo : hi;
        wit = es.eigenvectors().col(pick);
        failure = "state takes non-real values on x*x (imaginary part " +
                  std::to_string(es.eigenvalues()(pick)) + ")";
    }
    if (!d.positive)
        for (int i = 0; i < nw; ++i)
            if (wit(i) != Complex(0)) d.witness[d.gram_words[i]] = wit(i);

    if (!d.positive) {
        if (d.s2_invariant)
            throw ConstructionFailure("positivity criterion contradiction: stable generators with a "
                                      "failed Gram form");
        d.conclusive = true;
        d.verdict = "not_positive";
        d.reason = failure;
        return d;
    }
    if (d.s2_invariant) {
        d.conclusive = true;
        d.verdict = "positive";
        d.reason = "generators are two-sidedly stable under the squared antipode";
        return d;
    }
    d.conclusive = false;
    d.verdict = "inconclusive";
    d.reason = "state is PSD on the window but the generators are not stable under the squared "
               "antipode";
    return d;
}

/** Escalating decision: try successive degree windows until one is
 *  conclusive, returning the last outcome otherwise. */
inline TruncatedDecision decide_presented(const PresentedHopf& p, const std::vector<Poly>& gens,
                                          std::vector<int> degrees = {4, 6, 8},
                                          std::uint64_t seed = 1) {
    if (degrees.empty()) throw InvalidInput("no degree windows to try");
    TruncatedDecision last;
    for (int deg : degrees) {
        last = decide_truncated(p, gens, deg, seed);
        if (last.conclusive) return last;
    }
    return last;
}

} // namespace cqg
