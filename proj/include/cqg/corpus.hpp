#pragma once

/**
 * @file corpus.hpp
 *
 * Built-in example objects: finite group tables, their function algebras
 * O(G) and group algebras C[G], the Kac-Paljutkin algebra, and Sweedler's
 * 4-dimensional algebra (a valid Hopf *-algebra that is not a CQG algebra).
 */

#include <cqg/hopf.hpp>

#include <algorithm>
#include <string>
#include <vector>

namespace cqg {

struct GroupTable {
    std::string name;
    int order = 0;
    std::vector<std::vector<int>> mul; // mul[a][b] = index of ab
    std::vector<int> inv;
    std::vector<std::string> elem;
    int identity = 0;
};

inline GroupTable cyclic_group(int n) {
    GroupTable g;
    g.name = "z" + std::to_string(n);
    g.order = n;
    g.mul.assign(n, std::vector<int>(n));
    g.inv.assign(n, 0);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) g.mul[a][b] = (a + b) % n;
        g.inv[a] = (n - a) % n;
        g.elem.push_back(a == 0 ? "e" : (a == 1 ? "g" : "g" + std::to_string(a)));
    }
    return g;
}

namespace detail {

inline GroupTable table_from_perms(const std::string& name,
                                   const std::vector<std::vector<int>>& perms,
                                   const std::vector<std::string>& elem) {
    GroupTable g;
    g.name = name;
    g.order = static_cast<int>(perms.size());
    g.elem = elem;
    g.mul.assign(g.order, std::vector<int>(g.order, -1));
    g.inv.assign(g.order, -1);
    const int pts = static_cast<int>(perms[0].size());
    auto find = [&](const std::vector<int>& p) {
        for (int i = 0; i < g.order; ++i)
            if (perms[i] == p) return i;
        throw ConstructionFailure("group table is not closed");
    };
    for (int a = 0; a < g.order; ++a)
        for (int b = 0; b < g.order; ++b) {
            std::vector<int> ab(pts);
            for (int t = 0; t < pts; ++t) ab[t] = perms[a][perms[b][t]]; // (ab)(t) = a(b(t))
            g.mul[a][b] = find(ab);
        }
    for (int a = 0; a < g.order; ++a)
        for (int b = 0; b < g.order; ++b)
            if (g.mul[a][b] == g.identity) g.inv[a] = b;
    return g;
}

} // namespace detail

inline GroupTable symmetric_s3() {
    std::vector<std::vector<int>> perms = {
        {0, 1, 2}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1}};
    return detail::table_from_perms(
        "s3", perms, {"e", "(12)", "(13)", "(23)", "(123)", "(132)"});
}

inline GroupTable dihedral_d4() {
    // r = rotation of the square, s = reflection; elements r^i s^j.
    std::vector<std::vector<int>> perms;
    std::vector<std::string> names;
    std::vector<int> r = {1, 2, 3, 0}, s = {1, 0, 3, 2};
    std::vector<int> cur = {0, 1, 2, 3};
    for (int i = 0; i < 4; ++i) {
        std::vector<int> base = cur;
        perms.push_back(base);
        std::vector<int> flip(4);
        for (int t = 0; t < 4; ++t) flip[t] = base[s[t]];
        perms.push_back(flip);
        std::string ri = i == 0 ? "" : (i == 1 ? "r" : "r" + std::to_string(i));
        names.push_back(ri.empty() ? "e" : ri);
        names.push_back(ri + "s");
        std::vector<int> next(4);
        for (int t = 0; t < 4; ++t) next[t] = base[r[t]];
        cur = next;
    }
    return detail::table_from_perms("d4", perms, names);
}

/** All subgroups as sorted element-index lists, ordered by (size, lex). */
inline std::vector<std::vector<int>> all_subgroups(const GroupTable& g) {
    if (g.order > 16) throw InvalidInput("all_subgroups: group too large for subset scan");
    std::vector<std::vector<int>> out;
    for (unsigned mask = 1; mask < (1u << g.order); ++mask) {
        if (!(mask & (1u << g.identity))) continue;
        std::vector<int> elts;
        for (int i = 0; i < g.order; ++i)
            if (mask & (1u << i)) elts.push_back(i);
        bool closed = true;
        for (int a : elts) {
            if (!(mask & (1u << g.inv[a]))) { closed = false; break; }
            for (int b : elts)
                if (!(mask & (1u << g.mul[a][b]))) { closed = false; break; }
            if (!closed) break;
        }
        if (closed) out.push_back(elts);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

/** Coideal of O(G) attached to a subgroup K: indicators of the right cosets
 *  Kg, i.e. the left-K-invariant functions. */
inline std::vector<Vector> coset_coideal(const GroupTable& g, const std::vector<int>& sub) {
    std::vector<bool> in(g.order, false);
    for (int k : sub) in[k] = true;
    std::vector<Vector> out;
    std::vector<bool> seen(g.order, false);
    for (int x = 0; x < g.order; ++x) {
        if (seen[x]) continue;
        Vector v = Vector::Zero(g.order);
        for (int k : sub) {
            int kx = g.mul[k][x];
            v(kx) = 1.0;
            seen[kx] = true;
        }
        out.push_back(v);
    }
    return out;
}

/** Coideal of C[G] attached to a subgroup K: the span of u_k, k in K. */
inline std::vector<Vector> subgroup_coideal(const GroupTable& g, const std::vector<int>& sub) {
    std::vector<Vector> out;
    for (int k : sub) out.push_back(Vector::Unit(g.order, k));
    return out;
}

/** O(G): functions on G with pointwise product, basis of indicators d_g. */
inline FiniteHopfStar function_algebra(const GroupTable& g) {
    const int n = g.order;
    FiniteHopfStar h;
    h.dim = n;
    for (int i = 0; i < n; ++i) h.labels.push_back("d_" + g.elem[i]);
    h.mult.assign(n, Matrix::Zero(n, n));
    for (int i = 0; i < n; ++i) h.mult[i](i, i) = 1.0;
    h.unit = Vector::Ones(n);
    h.comult.assign(n, Matrix::Zero(n, n));
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (g.mul[a][b] == i) h.comult[i](a, b) = 1.0;
    h.counit = RowVec::Zero(n);
    h.counit(g.identity) = 1.0;
    h.antipode = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) h.antipode(g.inv[i], i) = 1.0;
    h.star = Matrix::Identity(n, n);
    return h;
}

/** C[G]: the group algebra with group-like basis u_g. */
inline FiniteHopfStar group_algebra(const GroupTable& g) {
    const int n = g.order;
    FiniteHopfStar h;
    h.dim = n;
    for (int i = 0; i < n; ++i) h.labels.push_back("u_" + g.elem[i]);
    h.mult.assign(n, Matrix::Zero(n, n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) h.mult[a](g.mul[a][b], b) = 1.0;
    h.unit = Vector::Unit(n, g.identity);
    h.comult.assign(n, Matrix::Zero(n, n));
    for (int i = 0; i < n; ++i) h.comult[i](i, i) = 1.0;
    h.counit = RowVec::Ones(n);
    h.antipode = Matrix::Zero(n, n);
    h.star = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        h.antipode(g.inv[i], i) = 1.0;
        h.star(g.inv[i], i) = 1.0;
    }
    return h;
}

namespace detail {

/** Product in H (x) H of two leg-matrices W(j,k). */
inline Matrix tensor_square_product(const std::vector<Matrix>& mult, const Matrix& w1,
                                    const Matrix& w2) {
    const int n = w1.rows();
    Matrix out = Matrix::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (w1(a, b) == 0.0) continue;
            out += w1(a, b) * (mult[a] * w2 * mult[b].transpose());
        }
    return out;
}

/** Kac-Paljutkin algebra in the presentation with generators x, y, z:
 *  x^2 = y^2 = 1, xy = yx, zx = yz, zy = xz, z^2 = (1 + x + y - xy)/2,
 *  Delta(z) = (z (x) z + z (x) xz + yz (x) z - yz (x) xz)/2.
 *  Basis monomials x^a y^b z^c at index a + 2b + 4c.
 *  star_inverse selects z^* = z^{-1} rather than z^* = z.
 */
inline FiniteHopfStar kac_paljutkin_with_star(bool star_inverse) {
    const int n = 8;
    FiniteHopfStar h;
    h.dim = n;
    h.labels = {"1", "x", "y", "xy", "z", "xz", "yz", "xyz"};

    auto idx = [](int a, int b, int c) { return a + 2 * b + 4 * c; };
    Matrix rx = Matrix::Zero(n, n), ry = Matrix::Zero(n, n), rz = Matrix::Zero(n, n);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            rx(idx(a ^ 1, b, 0), idx(a, b, 0)) = 1.0;
            rx(idx(a, b ^ 1, 1), idx(a, b, 1)) = 1.0;
            ry(idx(a, b ^ 1, 0), idx(a, b, 0)) = 1.0;
            ry(idx(a ^ 1, b, 1), idx(a, b, 1)) = 1.0;
            rz(idx(a, b, 1), idx(a, b, 0)) = 1.0;
            // m z^2 = m (1 + x + y - xy)/2
            rz(idx(a, b, 0), idx(a, b, 1)) = 0.5;
            rz(idx(a ^ 1, b, 0), idx(a, b, 1)) = 0.5;
            rz(idx(a, b ^ 1, 0), idx(a, b, 1)) = 0.5;
            rz(idx(a ^ 1, b ^ 1, 0), idx(a, b, 1)) = -0.5;
        }
    auto right_word = [&](Vector v, int a, int b, int c) {
        for (int t = 0; t < a; ++t) v = rx * v;
        for (int t = 0; t < b; ++t) v = ry * v;
        for (int t = 0; t < c; ++t) v = rz * v;
        return v;
    };
    h.mult.assign(n, Matrix::Zero(n, n));
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c)
                    h.mult[i].col(idx(a, b, c)) = right_word(Vector::Unit(n, i), a, b, c);
    h.unit = Vector::Unit(n, 0);

    Matrix dx = Matrix::Zero(n, n), dy = Matrix::Zero(n, n), dz = Matrix::Zero(n, n);
    dx(1, 1) = 1.0;
    dy(2, 2) = 1.0;
    dz(4, 4) = 0.5;
    dz(4, 5) = 0.5;
    dz(6, 4) = 0.5;
    dz(6, 5) = -0.5;
    h.comult.assign(n, Matrix::Zero(n, n));
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                Matrix w = Matrix::Zero(n, n);
                w(0, 0) = 1.0;
                for (int t = 0; t < a; ++t) w = tensor_square_product(h.mult, w, dx);
                for (int t = 0; t < b; ++t) w = tensor_square_product(h.mult, w, dy);
                for (int t = 0; t < c; ++t) w = tensor_square_product(h.mult, w, dz);
                h.comult[idx(a, b, c)] = w;
            }
    h.counit = RowVec::Ones(n);

    // S and * both reverse words; S fixes the generators, * sends z to the
    // selected candidate.
    h.antipode = Matrix::Zero(n, n);
    h.star = Matrix::Zero(n, n);
    Vector zstar;
    if (star_inverse) {
        zstar = Vector::Zero(n); // z^{-1} = z (1 + x + y - xy)/2
        zstar(4) = 0.5;
        zstar(5) = 0.5;
        zstar(6) = 0.5;
        zstar(7) = -0.5;
    } else {
        zstar = Vector::Unit(n, 4);
    }
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                // reversed monomial z^c y^b x^a
                Vector rev = right_word(Vector::Unit(n, 0), 0, 0, c);
                for (int t = 0; t < b; ++t) rev = ry * rev;
                for (int t = 0; t < a; ++t) rev = rx * rev;
                h.antipode.col(idx(a, b, c)) = rev;
                Vector sv = c ? zstar : Vector(Vector::Unit(n, 0));
                for (int t = 0; t < b; ++t) sv = ry * sv;
                for (int t = 0; t < a; ++t) sv = rx * sv;
                h.star.col(idx(a, b, c)) = sv;
            }
    return h;
}

} // namespace detail

inline FiniteHopfStar kac_paljutkin() { return detail::kac_paljutkin_with_star(true); }

/** Sweedler's 4-dimensional Hopf *-algebra: g^2 = 1, x^2 = 0, xg = -gx,
 *  Delta(x) = x (x) 1 + g (x) x.  Valid Hopf *-algebra, not cosemisimple. */
inline FiniteHopfStar sweedler_h4() {
    const int n = 4;
    FiniteHopfStar h;
    h.dim = n;
    h.labels = {"1", "g", "x", "gx"};
    auto idx = [](int a, int b) { return a + 2 * b; }; // g^a x^b
    h.mult.assign(n, Matrix::Zero(n, n));
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) {
                    if (b + d >= 2) continue;
                    double sign = (b && c) ? -1.0 : 1.0;
                    h.mult[idx(a, b)](idx(a ^ c, b + d), idx(c, d)) = sign;
                }
    h.unit = Vector::Unit(n, 0);
    h.comult.assign(n, Matrix::Zero(n, n));
    h.comult[0](0, 0) = 1.0;
    h.comult[1](1, 1) = 1.0;
    h.comult[2](2, 0) = 1.0; // x (x) 1
    h.comult[2](1, 2) = 1.0; // g (x) x
    h.comult[3](3, 1) = 1.0; // gx (x) g
    h.comult[3](0, 3) = 1.0; // 1 (x) gx
    h.counit = RowVec::Zero(n);
    h.counit(0) = 1.0;
    h.counit(1) = 1.0;
    h.antipode = Matrix::Zero(n, n);
    h.antipode(0, 0) = 1.0;
    h.antipode(1, 1) = 1.0;
    h.antipode(3, 2) = -1.0; // S(x) = -gx
    h.antipode(2, 3) = 1.0;  // S(gx) = x
    h.star = Matrix::Identity(n, n);
    h.star(3, 3) = -1.0;
    return h;
}

} // namespace cqg
