#include <cqg/corpus.hpp>
#include <cqg/expectation.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace cqg;

namespace {

Matrix coset_average_matrix(const GroupTable& g, const std::vector<int>& sub) {
    Matrix e = Matrix::Zero(g.order, g.order);
    for (int col = 0; col < g.order; ++col)
        for (int k : sub) e(g.mul[k][col], col) += 1.0 / static_cast<double>(sub.size());
    return e;
}

} // namespace

TEST_CASE("the expectation on O(G) is averaging over subgroup translates") {
    for (auto g : {symmetric_s3(), dihedral_d4()}) {
        auto h = function_algebra(g);
        for (const auto& sub : all_subgroups(g)) {
            auto a = Subspace::span(coset_coideal(g, sub), h.tol);
            auto ex = build_expectation(h, a);
            INFO(g.name << " subgroup of order " << sub.size());
            CHECK(max_abs(Matrix(ex.map - coset_average_matrix(g, sub))) <= 1e-12);
            CHECK(ex.idempotent <= 1e-12);
            CHECK(ex.unital <= 1e-12);
            CHECK(ex.range_residual <= 1e-12);
            CHECK(ex.range_is_subalgebra);
            CHECK(ex.bimodule <= 1e-12);
            CHECK(ex.haar_compat <= 1e-12);
        }
    }
}

TEST_CASE("the expectation onto the scalars is the haar state") {
    auto h = kac_paljutkin();
    auto a = coideal_closure(h, {});
    auto ex = build_expectation(h, a);
    auto haar = haar_state(h);
    Matrix expect = h.unit * haar.state.coords;
    CHECK(max_abs(Matrix(ex.map - expect)) <= 1e-12);
}

TEST_CASE("E agrees with the right convolution action by phi") {
    auto h = kac_paljutkin();
    auto a = coideal_closure(h, {Vector::Unit(8, 1)});
    auto ex = build_expectation(h, a);
    auto f = make_functional(h, ex.phi);
    for (int i = 0; i < h.dim; ++i) {
        Vector via_act = convolve_act(h, f, Vector::Unit(8, i), ActSide::Right);
        CHECK(max_abs(Vector(via_act - ex.map.col(i))) <= 1e-13);
    }
}

TEST_CASE("positivity holds throughout the finite corpus and matches S^2-invariance") {
    auto g = symmetric_s3();
    auto h = function_algebra(g);
    for (const auto& sub : all_subgroups(g)) {
        auto a = Subspace::span(coset_coideal(g, sub), h.tol);
        auto d = decide_expected(h, a);
        INFO("O(S3) subgroup of order " << sub.size());
        CHECK(d.positive);
        CHECK(d.s2.invariant);
        CHECK(d.theorem_holds);
        CHECK(d.gram.min_eig >= -1e-12);
    }
    auto kp = kac_paljutkin();
    for (auto seeds : std::vector<std::vector<int>>{{1}, {2}, {1, 2}}) {
        std::vector<Vector> gens;
        for (int i : seeds) gens.push_back(Vector::Unit(8, i));
        auto a = coideal_closure(kp, gens);
        auto d = decide_expected(kp, a);
        CHECK(d.positive);
        CHECK(d.theorem_holds);
    }
}

TEST_CASE("complete positivity through the haar state") {
    auto g = symmetric_s3();
    auto h = function_algebra(g);
    auto a = Subspace::span(coset_coideal(g, {0, 1}), h.tol);
    auto ex = build_expectation(h, a);
    auto cp = complete_positivity_check(h, ex);
    CHECK(cp.psd);
    CHECK(cp.min_eig >= -1e-12);

    auto kp = kac_paljutkin();
    auto akp = coideal_closure(kp, {Vector::Unit(8, 1), Vector::Unit(8, 2)});
    auto exkp = build_expectation(kp, akp);
    CHECK(complete_positivity_check(kp, exkp).psd);
}

TEST_CASE("gram assembly flags a signed functional with an explicit witness") {
    auto h = function_algebra(cyclic_group(2));
    RowVec bad(2);
    bad << 1.0, -1.0;
    Matrix g = functional_gram(h, bad);
    Matrix expect(2, 2);
    expect << 1.0, 0.0, 0.0, -1.0;
    CHECK(max_abs(Matrix(g - expect)) <= 1e-14);
    auto psd = psd_check(g, 1e-9);
    CHECK_FALSE(psd.psd);
    CHECK(psd.min_eig == Catch::Approx(-1.0));
}

TEST_CASE("fourier transform of the unit is the coalgebra integral") {
    auto g = symmetric_s3();
    auto h = function_algebra(g);
    auto a = Subspace::span(coset_coideal(g, {0, 4, 5}), h.tol);
    auto ex = build_expectation(h, a);
    auto hc = coalgebra_integral(ex.qt.c);
    auto f1 = fourier(h, ex, h.unit);
    CHECK(max_abs(Vector((f1.coords - hc.coords).transpose())) <= 1e-12);
    CHECK(f1.welldef <= 1e-12);

    auto kp = kac_paljutkin();
    auto akp = coideal_closure(kp, {Vector::Unit(8, 1)});
    auto exkp = build_expectation(kp, akp);
    auto fkp = fourier(kp, exkp, kp.unit);
    CHECK(max_abs(Vector((fkp.coords - coalgebra_integral(exkp.qt.c).coords).transpose())) <= 1e-12);
    CHECK(fkp.welldef <= 1e-12);
}

TEST_CASE("theta densities match the classical counting measures") {
    auto g = symmetric_s3();
    auto h = function_algebra(g);
    auto a = Subspace::span(coset_coideal(g, {0, 1}), h.tol);
    auto qt = quotient_coalgebra(h, a);
    auto th = theta(h, qt);
    Vector full = Vector::Zero(6);
    full(0) = 6.0; // |G| delta_e over H
    CHECK(max_abs(Vector(th.trace_h - full)) <= 1e-12);
    Vector sub = Vector::Zero(6);
    sub(0) = 2.0; // |K| delta_e pushed to C
    CHECK(max_abs(Vector(th.on_c - qt.pi * sub)) <= 1e-12);

    // for A = C1 the two contractions agree through pi
    auto triv = Subspace::span({h.unit}, h.tol);
    auto qtriv = quotient_coalgebra(h, triv);
    auto th2 = theta(h, qtriv);
    CHECK(max_abs(Vector(th2.on_c - qtriv.pi * th2.trace_h)) <= 1e-12);
}

TEST_CASE("plancherel identity on classical and kac-paljutkin instances") {
    auto g = symmetric_s3();
    auto h = function_algebra(g);
    for (auto sub : std::vector<std::vector<int>>{{0, 1}, {0, 4, 5}}) {
        auto a = Subspace::span(coset_coideal(g, sub), h.tol);
        auto ex = build_expectation(h, a);
        auto rep = plancherel_check(h, ex);
        INFO("subgroup of order " << sub.size());
        CHECK(rep.pass);
        CHECK(rep.max_gap <= 1e-8);
    }
    auto gd = dihedral_d4();
    auto hd = function_algebra(gd);
    auto ad = Subspace::span(coset_coideal(gd, all_subgroups(gd)[3]), hd.tol);
    CHECK(plancherel_check(hd, build_expectation(hd, ad)).pass);

    auto hc = group_algebra(g);
    auto ac = Subspace::span(subgroup_coideal(g, {0, 4, 5}), hc.tol);
    CHECK(plancherel_check(hc, build_expectation(hc, ac)).pass);

    auto kp = kac_paljutkin();
    auto akp = coideal_closure(kp, {Vector::Unit(8, 1)});
    auto exkp = build_expectation(kp, akp);
    auto rep = plancherel_check(kp, exkp);
    CHECK(rep.pass);
    CHECK(rep.max_gap <= 1e-8);
}

TEST_CASE("theta is positive on the dual convolution algebra of each quotient") {
    auto g = symmetric_s3();
    auto h = function_algebra(g);
    for (const auto& sub : all_subgroups(g)) {
        auto qt = quotient_coalgebra(h, Subspace::span(coset_coideal(g, sub), h.tol));
        auto tp = theta_positive(h, qt);
        INFO("subgroup of order " << sub.size());
        CHECK(tp.psd);
        // classical density: theta_C weights every block of C = O(K) by |K|
        CHECK(tp.min_eig == Catch::Approx(static_cast<double>(sub.size())).margin(1e-9));
    }
    auto kp = kac_paljutkin();
    for (auto gens : {std::vector<int>{1}, std::vector<int>{1, 2}}) {
        std::vector<Vector> vecs;
        for (int i : gens) vecs.push_back(Vector::Unit(8, i));
        auto qt = quotient_coalgebra(kp, coideal_closure(kp, vecs));
        auto tp = theta_positive(kp, qt);
        INFO("kp quotient dim " << qt.c.dim);
        CHECK(tp.psd);
        CHECK(tp.min_eig > 0.0);
    }
}
