#pragma once

/**
 * @file io.hpp
 *
 * JSON serialization.  hopf.v1 stores dense structure constants; readers
 * also accept sparse {"entries": [[indices..., re, im], ...]} blocks.
 * Complex scalars are [re, im] pairs (bare reals accepted on input).
 */

#include <cqg/hopf.hpp>
#include <cqg/presented.hpp>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <string>

namespace cqg {

using Json = nlohmann::json;

inline Json json_complex(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2) return Complex(j[0].get<double>(), j[1].get<double>());
    throw InvalidInput("expected a complex scalar ([re, im] or number)");
}

inline Json json_vector(const Vector& v) {
    Json out = Json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(json_complex(v(i)));
    return out;
}

inline Vector vector_from_json(const Json& j, int expect = -1) {
    if (!j.is_array()) throw InvalidInput("expected a vector");
    Vector v(j.size());
    for (int i = 0; i < static_cast<int>(j.size()); ++i) v(i) = complex_from_json(j[i]);
    if (expect >= 0 && v.size() != expect) throw InvalidInput("vector has wrong length");
    return v;
}

inline Json json_matrix(const Matrix& m) {
    Json out = Json::array();
    for (int r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(json_complex(m(r, c)));
        out.push_back(row);
    }
    return out;
}

inline Matrix matrix_from_json(const Json& j, int rows, int cols) {
    Matrix m = Matrix::Zero(rows, cols);
    if (j.is_object() && j.contains("entries")) {
        for (const auto& e : j["entries"]) {
            if (!e.is_array() || e.size() != 4) throw InvalidInput("matrix entry must be [row, col, re, im]");
            int r = e[0].get<int>(), c = e[1].get<int>();
            if (r < 0 || r >= rows || c < 0 || c >= cols) throw InvalidInput("matrix entry out of range");
            m(r, c) = Complex(e[2].get<double>(), e[3].get<double>());
        }
        return m;
    }
    if (!j.is_array() || static_cast<int>(j.size()) != rows) throw InvalidInput("matrix has wrong shape");
    for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(j[r].size()) != cols) throw InvalidInput("matrix has wrong shape");
        for (int c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
    }
    return m;
}

/** hopf.v1: mult[i][j][k] = coeff of e_k in e_i e_j;
 *  comult[i][j][k] = coeff of e_j (x) e_k in Delta(e_i). */
inline Json hopf_to_json(const FiniteHopfStar& h) {
    Json j;
    j["schema"] = "hopf.v1";
    j["dim"] = h.dim;
    j["labels"] = h.labels;
    j["tol"] = h.tol;
    j["unit"] = json_vector(h.unit);
    j["counit"] = json_vector(h.counit.transpose());
    Json mult = Json::array(), comult = Json::array();
    for (int i = 0; i < h.dim; ++i) {
        Json mi = Json::array(), ci = Json::array();
        for (int a = 0; a < h.dim; ++a) {
            Json mrow = Json::array(), crow = Json::array();
            for (int b = 0; b < h.dim; ++b) {
                mrow.push_back(json_complex(h.mult[i](b, a))); // e_i e_a = sum_b (...) e_b
                crow.push_back(json_complex(h.comult[i](a, b)));
            }
            mi.push_back(mrow);
            ci.push_back(crow);
        }
        mult.push_back(mi);
        comult.push_back(ci);
    }
    j["mult"] = mult;
    j["comult"] = comult;
    j["antipode"] = json_matrix(h.antipode);
    j["star"] = json_matrix(h.star);
    return j;
}

inline FiniteHopfStar hopf_from_json(const Json& j) {
    if (!j.is_object() || j.value("schema", "") != std::string("hopf.v1"))
        throw InvalidInput("not a hopf.v1 document");
    FiniteHopfStar h;
    h.dim = j.at("dim").get<int>();
    if (h.dim <= 0) throw InvalidInput("dim must be positive");
    const int n = h.dim;
    h.labels = j.value("labels", std::vector<std::string>{});
    if (h.labels.empty())
        for (int i = 0; i < n; ++i) h.labels.push_back("e" + std::to_string(i));
    if (static_cast<int>(h.labels.size()) != n) throw InvalidInput("labels length mismatch");
    h.tol = j.value("tol", 1e-9);
    h.unit = vector_from_json(j.at("unit"), n);
    h.counit = vector_from_json(j.at("counit"), n).transpose();
    h.mult.assign(n, Matrix::Zero(n, n));
    h.comult.assign(n, Matrix::Zero(n, n));
    const Json& mult = j.at("mult");
    const Json& comult = j.at("comult");
    auto load_tensor = [&](const Json& src, bool is_mult) {
        if (src.is_object() && src.contains("entries")) {
            for (const auto& e : src["entries"]) {
                if (!e.is_array() || e.size() != 5) throw InvalidInput("tensor entry must be [i, j, k, re, im]");
                int i = e[0].get<int>(), a = e[1].get<int>(), b = e[2].get<int>();
                if (i < 0 || i >= n || a < 0 || a >= n || b < 0 || b >= n)
                    throw InvalidInput("tensor entry out of range");
                Complex z(e[3].get<double>(), e[4].get<double>());
                if (is_mult)
                    h.mult[i](b, a) = z;
                else
                    h.comult[i](a, b) = z;
            }
            return;
        }
        if (!src.is_array() || static_cast<int>(src.size()) != n) throw InvalidInput("tensor has wrong shape");
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(src[i].size()) != n) throw InvalidInput("tensor has wrong shape");
            for (int a = 0; a < n; ++a) {
                if (static_cast<int>(src[i][a].size()) != n) throw InvalidInput("tensor has wrong shape");
                for (int b = 0; b < n; ++b) {
                    Complex z = complex_from_json(src[i][a][b]);
                    if (is_mult)
                        h.mult[i](b, a) = z;
                    else
                        h.comult[i](a, b) = z;
                }
            }
        }
    };
    load_tensor(mult, true);
    load_tensor(comult, false);
    h.antipode = matrix_from_json(j.at("antipode"), n, n);
    h.star = matrix_from_json(j.at("star"), n, n);
    return h;
}

/** coideal.v1: a coideal *-subalgebra, either as a dense basis (columns over
 *  a dim-n algebra) or as generator polynomials of a presented algebra. */
inline Json coideal_to_json(const std::string& name, const Matrix& basis) {
    Json j;
    j["schema"] = "coideal.v1";
    j["name"] = name;
    j["kind"] = "basis";
    j["ambient_dim"] = static_cast<int>(basis.rows());
    j["dim"] = static_cast<int>(basis.cols());
    Json cols = Json::array();
    for (int c = 0; c < basis.cols(); ++c) cols.push_back(json_vector(basis.col(c)));
    j["basis"] = cols;
    return j;
}

inline Json json_poly(const Poly& f) {
    Json out = Json::array();
    for (const auto& [w, c] : f) out.push_back(Json::array({Json(w), json_complex(c)}));
    return out;
}

inline Poly poly_from_json(const Json& j) {
    if (!j.is_array()) throw InvalidInput("expected a polynomial (array of [word, coeff])");
    Poly f;
    for (const auto& t : j) {
        if (!t.is_array() || t.size() != 2) throw InvalidInput("polynomial term must be [word, coeff]");
        Word w = t[0].get<Word>();
        f[w] += complex_from_json(t[1]);
    }
    return f;
}

inline Json coideal_to_json(const std::string& name, const std::vector<Poly>& gens) {
    Json j;
    j["schema"] = "coideal.v1";
    j["name"] = name;
    j["kind"] = "polynomial";
    Json gs = Json::array();
    for (const auto& g : gens) gs.push_back(json_poly(g));
    j["generators"] = gs;
    return j;
}

/** Either form of a stored coideal. */
struct CoidealFile {
    std::string name;
    bool polynomial = false;
    Matrix basis;            // kind = "basis"
    std::vector<Poly> gens;  // kind = "polynomial"
};

inline CoidealFile coideal_from_json(const Json& j) {
    if (!j.is_object() || j.value("schema", "") != std::string("coideal.v1"))
        throw InvalidInput("not a coideal.v1 document");
    CoidealFile f;
    f.name = j.value("name", "");
    const std::string kind = j.value("kind", "basis");
    if (kind == "basis") {
        const int n = j.at("ambient_dim").get<int>();
        const auto& cols = j.at("basis");
        if (!cols.is_array() || cols.empty()) throw InvalidInput("coideal basis is empty");
        f.basis = Matrix(n, cols.size());
        for (int c = 0; c < static_cast<int>(cols.size()); ++c)
            f.basis.col(c) = vector_from_json(cols[c], n);
    } else if (kind == "polynomial") {
        f.polynomial = true;
        for (const auto& g : j.at("generators")) f.gens.push_back(poly_from_json(g));
        if (f.gens.empty()) throw InvalidInput("coideal has no generators");
    } else {
        throw InvalidInput("unknown coideal kind: " + kind);
    }
    return f;
}

/** presented.v1: generators with degrees, oriented rewrite rules, the Hopf
 *  structure on generators, a default cutoff, and named scalar parameters. */
inline Json presented_to_json(const PresentedHopf& p, int cutoff,
                              const std::map<std::string, double>& scalars) {
    Json j;
    j["schema"] = "presented.v1";
    j["name"] = p.name;
    j["tol"] = p.tol;
    Json gens = Json::array();
    for (size_t i = 0; i < p.gen_names.size(); ++i)
        gens.push_back(Json{{"name", p.gen_names[i]}, {"degree", p.gen_degree[i]}});
    j["generators"] = gens;
    Json rules = Json::array();
    for (const auto& [lhs, rhs] : p.rules)
        rules.push_back(Json{{"lhs", lhs}, {"rhs", json_poly(rhs)}});
    j["rules"] = rules;
    Json delta = Json::array();
    for (const auto& terms : p.delta) {
        Json dg = Json::array();
        for (const auto& [l, r] : terms) dg.push_back(Json::array({json_poly(l), json_poly(r)}));
        delta.push_back(dg);
    }
    j["delta"] = delta;
    Json eps = Json::array();
    for (const auto& c : p.counit) eps.push_back(json_complex(c));
    j["eps"] = eps;
    Json anti = Json::array(), star = Json::array();
    for (const auto& f : p.antipode) anti.push_back(json_poly(f));
    for (const auto& f : p.star) star.push_back(json_poly(f));
    j["antipode"] = anti;
    j["star"] = star;
    j["cutoff"] = cutoff;
    j["scalars"] = scalars;
    return j;
}

struct PresentedFile {
    PresentedHopf p;
    int cutoff = 4;
    std::map<std::string, double> scalars;
};

inline PresentedFile presented_from_json(const Json& j) {
    if (!j.is_object() || j.value("schema", "") != std::string("presented.v1"))
        throw InvalidInput("not a presented.v1 document");
    PresentedFile f;
    f.p.name = j.value("name", "");
    f.p.tol = j.value("tol", 1e-9);
    for (const auto& g : j.at("generators")) {
        f.p.gen_names.push_back(g.at("name").get<std::string>());
        f.p.gen_degree.push_back(g.at("degree").get<int>());
    }
    for (const auto& r : j.at("rules"))
        f.p.rules.push_back({r.at("lhs").get<Word>(), poly_from_json(r.at("rhs"))});
    for (const auto& dg : j.at("delta")) {
        std::vector<std::pair<Poly, Poly>> terms;
        for (const auto& t : dg) {
            if (!t.is_array() || t.size() != 2)
                throw InvalidInput("delta term must be [left poly, right poly]");
            terms.push_back({poly_from_json(t[0]), poly_from_json(t[1])});
        }
        f.p.delta.push_back(std::move(terms));
    }
    for (const auto& c : j.at("eps")) f.p.counit.push_back(complex_from_json(c));
    for (const auto& g : j.at("antipode")) f.p.antipode.push_back(poly_from_json(g));
    for (const auto& g : j.at("star")) f.p.star.push_back(poly_from_json(g));
    f.cutoff = j.value("cutoff", 4);
    if (j.contains("scalars"))
        for (const auto& [k, v] : j.at("scalars").items()) f.scalars[k] = v.get<double>();
    validate_presentation(f.p);
    return f;
}

/** FNV-1a 64-bit content checksum, as "fnv1a:<hex>". */
inline std::string checksum(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline void save_json(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

/** Serialize exactly as save_json writes it (for checksums). */
inline std::string json_bytes(const Json& j) { return j.dump(2) + "\n"; }

inline Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InvalidInput(std::string("malformed JSON in ") + path + ": " + e.what());
    }
    return j;
}

} // namespace cqg
