#pragma once

/**
 * @file linalg.hpp
 *
 * Dense complex linear algebra kernel: tolerance-aware nullspaces, subspace
 * arithmetic, PSD certification with witnesses, and Wedderburn decomposition
 * of finite-dimensional semisimple *-algebras given by structure constants.
 *
 * Conventions used throughout the library:
 *  - an algebra with basis e_0..e_{n-1} is stored as mult[i](k,j) =
 *    coefficient of e_k in e_i e_j, so the left-multiplication operator of a
 *    coordinate vector x is sum_i x_i mult[i];
 *  - conjugate-linear maps (the star) are stored as the matrix applied after
 *    entrywise conjugation of coordinates: star(x) = S conj(x);
 *  - tolerances are relative to the largest magnitude in the data, with an
 *    absolute floor of the tolerance itself.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace cqg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RowVec = Eigen::RowVectorXcd;

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};
struct InvalidInput : Error {
    using Error::Error;
};
struct NotSemisimple : Error {
    using Error::Error;
};
struct NotCosemisimple : Error {
    using Error::Error;
};
struct NotCoideal : Error {
    using Error::Error;
};
struct NotConfluent : Error {
    using Error::Error;
};
struct CutoffExceeded : Error {
    using Error::Error;
};
struct StarDescentFailure : Error {
    using Error::Error;
};
struct ConstructionFailure : Error {
    using Error::Error;
};

/** Scale-aware comparison threshold: tol relative to scale, floored at tol. */
inline double tol_at(double tol, double scale) { return tol * std::max(1.0, scale); }

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
inline double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

/** Deterministic RNG stream for a given seed. */
inline std::mt19937_64 seeded_rng(std::uint64_t seed) {
    return std::mt19937_64(seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
}

inline Vector random_vector(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(n);
    for (int i = 0; i < n; ++i) {
        double re = gauss(rng), im = gauss(rng);
        v(i) = Complex(re, im);
    }
    return v;
}

/** Subspace of C^n carried by a matrix with orthonormal columns. */
struct Subspace {
    Matrix basis; // ambient x dim, orthonormal columns
    double tol = 1e-9;

    int ambient() const { return static_cast<int>(basis.rows()); }
    int dim() const { return static_cast<int>(basis.cols()); }

    /** Orthonormalize the given spanning columns, dropping rank deficiency. */
    static Subspace span_cols(const Matrix& cols, double tol) {
        if (cols.cols() == 0) return Subspace{Matrix::Zero(cols.rows(), 0), tol};
        Eigen::JacobiSVD<Matrix> svd(cols, Eigen::ComputeThinU);
        const auto& sv = svd.singularValues();
        double cut = tol_at(tol, sv.size() ? sv(0) : 0.0);
        int rank = 0;
        for (int i = 0; i < sv.size(); ++i)
            if (sv(i) > cut) ++rank;
        Subspace s{svd.matrixU().leftCols(rank), tol};
        return s;
    }
    static Subspace span(const std::vector<Vector>& vecs, double tol) {
        if (vecs.empty()) throw InvalidInput("span: empty generator list needs an ambient dimension");
        Matrix cols(vecs[0].size(), static_cast<Eigen::Index>(vecs.size()));
        for (size_t i = 0; i < vecs.size(); ++i) cols.col(static_cast<Eigen::Index>(i)) = vecs[i];
        return span_cols(cols, tol);
    }
    static Subspace zero(int ambient, double tol) { return Subspace{Matrix::Zero(ambient, 0), tol}; }
    static Subspace full(int ambient, double tol) { return Subspace{Matrix::Identity(ambient, ambient), tol}; }

    Vector project(const Vector& v) const { return basis * (basis.adjoint() * v); }

    bool contains(const Vector& v) const {
        double scale = std::max(1.0, v.norm());
        return (v - project(v)).norm() <= tol * scale;
    }
};

/** Right nullspace {x : Mx = 0} via SVD with a relative singular-value cut. */
inline Subspace nullspace(const Matrix& m, double tol) {
    if (m.cols() == 0) return Subspace::zero(0, tol);
    if (m.rows() == 0) return Subspace::full(static_cast<int>(m.cols()), tol);
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double cut = tol_at(tol, sv.size() ? sv(0) : 0.0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++rank;
    Subspace s{svd.matrixV().rightCols(m.cols() - rank), tol};
    s.tol = tol;
    return s;
}

inline Subspace subspace_sum(const Subspace& a, const Subspace& b) {
    if (a.ambient() != b.ambient()) throw InvalidInput("subspace_sum: ambient dimensions differ");
    Matrix cols(a.ambient(), a.dim() + b.dim());
    cols << a.basis, b.basis;
    return Subspace::span_cols(cols, std::min(a.tol, b.tol));
}

inline Subspace subspace_intersect(const Subspace& a, const Subspace& b) {
    if (a.ambient() != b.ambient()) throw InvalidInput("subspace_intersect: ambient dimensions differ");
    if (a.dim() == 0 || b.dim() == 0) return Subspace::zero(a.ambient(), std::min(a.tol, b.tol));
    Matrix glue(a.ambient(), a.dim() + b.dim());
    glue << a.basis, -b.basis;
    Subspace ker = nullspace(glue, std::min(a.tol, b.tol));
    Matrix cols(a.ambient(), ker.dim());
    for (int i = 0; i < ker.dim(); ++i) cols.col(i) = a.basis * ker.basis.col(i).head(a.dim());
    return Subspace::span_cols(cols, std::min(a.tol, b.tol));
}

inline bool subspace_contains(const Subspace& big, const Subspace& small) {
    for (int i = 0; i < small.dim(); ++i)
        if (!big.contains(small.basis.col(i))) return false;
    return true;
}

inline bool subspace_equal(const Subspace& a, const Subspace& b) {
    return a.dim() == b.dim() && subspace_contains(a, b) && subspace_contains(b, a);
}

inline Matrix gram_matrix(const Matrix& cols) { return cols.adjoint() * cols; }

inline Subspace subspace_sum_cols(const Matrix& a, const Matrix& b, double tol) {
    Matrix cols(a.rows(), a.cols() + b.cols());
    cols << a, b;
    return Subspace::span_cols(cols, tol);
}

struct PsdResult {
    bool psd = false;
    double min_eig = 0.0;
    Vector witness; // unit eigenvector for min_eig when not PSD
};

/** Certify a hermitian matrix PSD within tol, or produce the most negative
 *  eigenvector as witness. Rejects non-hermitian input. */
inline PsdResult psd_check(const Matrix& g, double tol) {
    if (g.rows() != g.cols()) throw InvalidInput("psd_check: matrix not square");
    double scale = max_abs(g);
    if (max_abs(Matrix(g - g.adjoint())) > tol_at(tol, scale))
        throw InvalidInput("psd_check: matrix not hermitian within tolerance");
    if (g.rows() == 0) return PsdResult{true, 0.0, Vector()};
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(0.5 * (g + g.adjoint())));
    PsdResult r;
    r.min_eig = es.eigenvalues()(0);
    r.psd = r.min_eig >= -tol_at(tol, scale);
    if (!r.psd) r.witness = es.eigenvectors().col(0);
    return r;
}

/** Finite-dimensional associative *-algebra over C in structure constants. */
struct StarAlgebra {
    int dim = 0;
    std::vector<Matrix> mult; // mult[i](k,j) = coeff of e_k in e_i e_j
    Vector unit;
    Matrix star; // conjugate-linear: star(x) = star * conj(x)
    double tol = 1e-9;
};

inline Matrix left_mult(const StarAlgebra& a, const Vector& x) {
    Matrix l = Matrix::Zero(a.dim, a.dim);
    for (int i = 0; i < a.dim; ++i)
        if (x(i) != 0.0) l += x(i) * a.mult[i];
    return l;
}

inline Matrix right_mult(const StarAlgebra& a, const Vector& y) {
    Matrix r = Matrix::Zero(a.dim, a.dim);
    for (int i = 0; i < a.dim; ++i)
        for (int k = 0; k < a.dim; ++k) r(k, i) = (a.mult[i].row(k) * y)(0);
    return r;
}

inline Vector algebra_product(const StarAlgebra& a, const Vector& x, const Vector& y) {
    return left_mult(a, x) * y;
}

inline Vector algebra_star(const StarAlgebra& a, const Vector& x) { return a.star * x.conjugate(); }

/** Matrix units of one simple block, expressed in ambient coordinates. */
struct MatrixUnits {
    int n = 0;
    std::vector<Vector> units;        // units[i*n+j] = E_{ij}
    Vector central_idempotent;        // sum of the diagonal units
    const Vector& unit(int i, int j) const { return units[static_cast<size_t>(i) * n + j]; }
};

struct WedderburnData {
    std::vector<MatrixUnits> blocks; // sorted by size, then by idempotent coordinates
};

namespace detail {

inline bool lex_less(const Vector& a, const Vector& b, double tol) {
    for (int i = 0; i < a.size(); ++i) {
        Complex x = a(i), y = b(i);
        if (std::abs(x - y) <= tol) continue;
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    }
    return false;
}

inline std::vector<Complex> cluster_representatives(const Vector& eigs, double sep) {
    std::vector<Complex> reps;
    std::vector<int> count;
    for (int i = 0; i < eigs.size(); ++i) {
        bool placed = false;
        for (size_t r = 0; r < reps.size(); ++r) {
            if (std::abs(eigs(i) - reps[r]) <= sep) {
                reps[r] = (reps[r] * static_cast<double>(count[r]) + eigs(i)) /
                          static_cast<double>(count[r] + 1);
                ++count[r];
                placed = true;
                break;
            }
        }
        if (!placed) {
            reps.push_back(eigs(i));
            count.push_back(1);
        }
    }
    return reps;
}

} // namespace detail

/** Split a semisimple *-algebra into matrix blocks with explicit matrix
 *  units. Uses a seeded random self-adjoint central element; retries with a
 *  fresh draw if spectra collide, and fails after eight attempts. */
inline WedderburnData wedderburn(const StarAlgebra& a, double tol, std::uint64_t seed) {
    const int n = a.dim;
    if (n == 0) throw InvalidInput("wedderburn: zero-dimensional algebra");
    if (static_cast<int>(a.mult.size()) != n) throw InvalidInput("wedderburn: tensor arity mismatch");

    // Semisimplicity via nondegeneracy of the trace form of the regular rep.
    std::vector<Matrix> lops(n);
    for (int i = 0; i < n; ++i) lops[i] = left_mult(a, Vector::Unit(n, i));
    Matrix trace_form(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) trace_form(i, j) = (lops[i] * lops[j]).trace();
    {
        Eigen::JacobiSVD<Matrix> svd(trace_form);
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) <= tol_at(tol, sv(0)))
            throw NotSemisimple("wedderburn: degenerate trace form");
    }

    // Center: commutant of all left/right multiplications.
    Matrix comm(static_cast<Eigen::Index>(n) * n, n);
    for (int i = 0; i < n; ++i) comm.middleRows(static_cast<Eigen::Index>(i) * n, n) = lops[i] - right_mult(a, Vector::Unit(n, i));
    Subspace center = nullspace(comm, tol);
    const int k = center.dim();
    if (k == 0) throw ConstructionFailure("wedderburn: empty center");

    auto rng = seeded_rng(seed);
    std::string last_err = "wedderburn: no attempt made";
    for (int attempt = 0; attempt < 8; ++attempt) {
        Vector w = center.basis * random_vector(rng, k);
        Vector z = w + algebra_star(a, w);

        // Spectrum of z on the center; Lagrange interpolation gives the
        // central primitive idempotents.
        Matrix lz = left_mult(a, z);
        Matrix zc = center.basis.adjoint() * (lz * center.basis);
        Eigen::ComplexEigenSolver<Matrix> es(zc);
        Vector lam = es.eigenvalues();
        double scale = std::max(1.0, max_abs(lam));
        bool collide = false;
        for (int i = 0; i < k && !collide; ++i)
            for (int j = i + 1; j < k; ++j)
                if (std::abs(lam(i) - lam(j)) < 1e-6 * scale) {
                    collide = true;
                    break;
                }
        if (collide) {
            last_err = "wedderburn: central spectrum collided";
            continue;
        }

        std::vector<Vector> idems;
        bool ok = true;
        for (int al = 0; al < k && ok; ++al) {
            Vector p = a.unit;
            for (int be = 0; be < k; ++be) {
                if (be == al) continue;
                p = (algebra_product(a, z, p) - lam(be) * p) / (lam(al) - lam(be));
            }
            for (int it = 0; it < 2; ++it) {
                Vector p2 = algebra_product(a, p, p);
                p = 3.0 * p2 - 2.0 * algebra_product(a, p, p2);
            }
            if ((algebra_product(a, p, p) - p).norm() > 1e-7 * std::max(1.0, p.norm())) ok = false;
            idems.push_back(p);
        }
        if (!ok) {
            last_err = "wedderburn: idempotent refinement failed";
            continue;
        }

        WedderburnData out;
        for (int al = 0; al < k && ok; ++al) {
            Subspace block = Subspace::span_cols(left_mult(a, idems[al]), tol);
            const int m = block.dim();
            int bn = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
            if (bn * bn != m) {
                ok = false;
                last_err = "wedderburn: block dimension is not a perfect square";
                break;
            }
            MatrixUnits mu;
            mu.n = bn;
            mu.central_idempotent = idems[al];
            if (bn == 1) {
                mu.units = {idems[al]};
                out.blocks.push_back(std::move(mu));
                continue;
            }

            const Matrix& bb = block.basis;
            auto bprod = [&](const Vector& x, const Vector& y) { return algebra_product(a, x, y); };

            // Generic element of the block; joint left/right eigenspaces of it
            // pin the diagonal units.
            Vector y = bb * random_vector(rng, m);
            Matrix ly(m, m), ry(m, m);
            for (int c = 0; c < m; ++c) {
                ly.col(c) = bb.adjoint() * bprod(y, bb.col(c));
                ry.col(c) = bb.adjoint() * bprod(bb.col(c), y);
            }
            Eigen::ComplexEigenSolver<Matrix> bes(ly);
            Vector beig = bes.eigenvalues();
            double bscale = std::max(1.0, max_abs(beig));
            std::vector<Complex> reps = detail::cluster_representatives(beig, 1e-6 * bscale);
            if (static_cast<int>(reps.size()) != bn) {
                ok = false;
                last_err = "wedderburn: block spectrum did not split";
                break;
            }
            std::sort(reps.begin(), reps.end(), [](Complex x, Complex yv) {
                if (x.real() != yv.real()) return x.real() < yv.real();
                return x.imag() < yv.imag();
            });

            std::vector<Vector> diag;
            for (int i = 0; i < bn && ok; ++i) {
                Matrix joint(2 * m, m);
                joint.topRows(m) = ly - reps[i] * Matrix::Identity(m, m);
                joint.bottomRows(m) = ry - reps[i] * Matrix::Identity(m, m);
                Subspace es1 = nullspace(joint, 1e-7);
                if (es1.dim() != 1) {
                    ok = false;
                    last_err = "wedderburn: joint eigenspace not one-dimensional";
                    break;
                }
                Vector v = bb * es1.basis.col(0);
                Vector v2 = bprod(v, v);
                Complex s = v.dot(v2) / v.dot(v);
                if (std::abs(s) < 1e-10) {
                    ok = false;
                    last_err = "wedderburn: nilpotent eigenvector";
                    break;
                }
                Vector e = v / s;
                Vector e2 = bprod(e, e);
                e = 3.0 * e2 - 2.0 * bprod(e, e2);
                diag.push_back(e);
            }
            if (!ok) break;

            Vector mixer = bb * random_vector(rng, m);
            std::vector<Vector> e1j(bn), ej1(bn);
            for (int j = 1; j < bn && ok; ++j) {
                Vector t = bprod(bprod(diag[0], mixer), diag[j]);
                Vector s = bprod(bprod(diag[j], mixer), diag[0]);
                if (t.norm() < 1e-10 || s.norm() < 1e-10) {
                    ok = false;
                    last_err = "wedderburn: vanishing transition element";
                    break;
                }
                Vector st = bprod(s, t);
                Complex c = diag[j].dot(st) / diag[j].dot(diag[j]);
                if (std::abs(c) < 1e-12) {
                    ok = false;
                    last_err = "wedderburn: degenerate transition normalization";
                    break;
                }
                e1j[j] = t;
                ej1[j] = s / c;
            }
            if (!ok) break;

            mu.units.assign(static_cast<size_t>(bn) * bn, Vector());
            for (int i = 0; i < bn; ++i)
                for (int j = 0; j < bn; ++j) {
                    Vector u;
                    if (i == j)
                        u = diag[i];
                    else if (i == 0)
                        u = e1j[j];
                    else if (j == 0)
                        u = ej1[i];
                    else
                        u = bprod(ej1[i], e1j[j]);
                    mu.units[static_cast<size_t>(i) * bn + j] = u;
                }

            double resid = 0.0;
            for (int i = 0; i < bn; ++i)
                for (int j = 0; j < bn; ++j)
                    for (int u = 0; u < bn; ++u)
                        for (int v = 0; v < bn; ++v) {
                            Vector p = bprod(mu.unit(i, j), mu.unit(u, v));
                            if (j == u) p -= mu.unit(i, v);
                            resid = std::max(resid, p.norm());
                        }
            if (resid > 1e-7) {
                ok = false;
                last_err = "wedderburn: matrix unit relations failed";
                break;
            }
            out.blocks.push_back(std::move(mu));
        }
        if (!ok) continue;

        std::sort(out.blocks.begin(), out.blocks.end(), [&](const MatrixUnits& x, const MatrixUnits& y) {
            if (x.n != y.n) return x.n < y.n;
            return detail::lex_less(x.central_idempotent, y.central_idempotent, 1e-8);
        });
        return out;
    }
    throw ConstructionFailure(last_err + " after 8 attempts");
}

} // namespace cqg
