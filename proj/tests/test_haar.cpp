#include <cqg/corpus.hpp>
#include <cqg/haar.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

using namespace cqg;

namespace {

std::vector<int> block_sizes(const PeterWeyl& pw) {
    std::vector<int> out;
    for (const auto& b : pw.blocks) out.push_back(b.n);
    return out;
}

} // namespace

TEST_CASE("haar on O(S3) is the uniform average") {
    auto h = function_algebra(symmetric_s3());
    auto rep = haar_state(h);
    RowVec expect = RowVec::Constant(6, 1.0 / 6.0);
    CHECK(max_abs(Vector((rep.state.coords - expect).transpose())) <= 1e-12);
    CHECK(rep.invariance <= 1e-12);
    CHECK(rep.route_gap <= 1e-9);
    CHECK(rep.positive);
    CHECK(rep.faithful);
}

TEST_CASE("haar on C[D4] is evaluation at the identity") {
    auto h = group_algebra(dihedral_d4());
    auto rep = haar_state(h);
    CHECK(max_abs(Vector((rep.state.coords - RowVec::Unit(8, 0)).transpose())) <= 1e-12);
    CHECK(rep.positive);
    CHECK(rep.faithful);
    CHECK(max_abs(Matrix(rep.gram - Matrix::Identity(8, 8))) <= 1e-12);
}

TEST_CASE("haar on kac-paljutkin picks out the coefficient of 1") {
    auto h = kac_paljutkin();
    auto rep = haar_state(h);
    CHECK(max_abs(Vector((rep.state.coords - RowVec::Unit(8, 0)).transpose())) <= 1e-12);
    CHECK(rep.invariance <= 1e-12);
    CHECK(rep.positive);
    CHECK(rep.faithful);
    CHECK(max_abs(Matrix(rep.gram - Matrix::Identity(8, 8))) <= 1e-12);
    // invariant under the antipode
    RowVec hs = rep.state.coords * h.antipode;
    CHECK(max_abs(Vector((hs - rep.state.coords).transpose())) <= 1e-12);
}

TEST_CASE("sweedler's algebra has no haar state") {
    auto h = sweedler_h4();
    CHECK_THROWS_AS(haar_state(h), NotCosemisimple);
    auto rep = is_cqg(h);
    CHECK(rep.axioms.pass);
    CHECK_FALSE(rep.cosemisimple);
    CHECK_FALSE(rep.cqg);
    CHECK_FALSE(rep.failure.empty());
}

TEST_CASE("is_cqg accepts the classical corpus and kac-paljutkin") {
    CHECK(is_cqg(function_algebra(dihedral_d4())).cqg);
    CHECK(is_cqg(group_algebra(symmetric_s3())).cqg);
    CHECK(is_cqg(kac_paljutkin()).cqg);
}

TEST_CASE("peter-weyl block sizes distinguish O(S3), C[S3], kac-paljutkin") {
    auto pw1 = peter_weyl(function_algebra(symmetric_s3()));
    CHECK(block_sizes(pw1) == std::vector<int>{1, 1, 2});
    auto pw2 = peter_weyl(group_algebra(symmetric_s3()));
    CHECK(block_sizes(pw2) == std::vector<int>{1, 1, 1, 1, 1, 1});
    auto pw3 = peter_weyl(kac_paljutkin());
    CHECK(block_sizes(pw3) == std::vector<int>{1, 1, 1, 1, 2});
    for (const auto* pw : {&pw1, &pw2, &pw3}) {
        CHECK(pw->coassoc_residual <= 1e-9);
        CHECK(pw->counit_residual <= 1e-9);
        CHECK(pw->trivial >= 0);
    }
    CHECK_THROWS_AS(peter_weyl(sweedler_h4()), NotCosemisimple);
}

TEST_CASE("haar kills every nontrivial matrix coefficient") {
    auto h = kac_paljutkin();
    auto haar = haar_state(h);
    auto pw = peter_weyl(h);
    for (int a = 0; a < static_cast<int>(pw.blocks.size()); ++a) {
        const auto& blk = pw.blocks[a];
        for (int c = 0; c < blk.n * blk.n; ++c) {
            Complex v = haar.state(Vector(blk.coeffs.col(c)));
            if (a == pw.trivial)
                CHECK(std::abs(v - 1.0) <= 1e-9);
            else
                CHECK(std::abs(v) <= 1e-9);
        }
    }
}

TEST_CASE("unitarize restores unitarity after a similarity twist") {
    auto h = kac_paljutkin();
    auto pw = peter_weyl(h);
    const auto& blk = pw.blocks.back();
    REQUIRE(blk.n == 2);
    Corep x;
    x.parent = &h;
    x.size = 2;
    x.entry.assign(2, std::vector<Vector>(2));
    Matrix t(2, 2), tinv(2, 2);
    t << 1.0, 0.7, 0.0, 1.0;
    tinv << 1.0, -0.7, 0.0, 1.0;
    for (int v = 0; v < 2; ++v)
        for (int w = 0; w < 2; ++w) {
            Vector acc = Vector::Zero(h.dim);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) acc += t(v, a) * tinv(b, w) * blk.coeffs.col(a * 2 + b);
            x.entry[v][w] = acc;
        }
    CHECK(corep_residual(h, x) <= 1e-10);
    auto res = unitarize(h, x);
    CHECK(res.unitarity <= 1e-9);
    CHECK(res.corep_law <= 1e-9);

    auto bad = x;
    bad.entry[0][0] += Vector::Unit(h.dim, 3);
    CHECK_THROWS_AS(unitarize(h, bad), InvalidInput);
}

TEST_CASE("the regular comodule of O(Z3) is already unitary") {
    auto h = function_algebra(cyclic_group(3));
    auto x = corep_from_comodule(h, regular_comodule(h));
    CHECK(corep_residual(h, x) <= 1e-14);
    auto res = unitarize(h, x);
    CHECK(res.unitarity <= 1e-12);
    for (int v = 0; v < 3; ++v)
        for (int w = 0; w < 3; ++w)
            CHECK(max_abs(Vector(res.unitary.entry[v][w] - x.entry[v][w])) <= 1e-10);
}

TEST_CASE("coalgebra integral cross-route agreement and rejection") {
    auto h = function_algebra(dihedral_d4());
    auto ci = coalgebra_integral(as_coalgebra(h));
    CHECK(max_abs(Vector((ci.coords - RowVec::Constant(8, 1.0 / 8.0)).transpose())) <= 1e-12);
    CHECK(ci.route_gap <= 1e-9);
    CHECK_THROWS_AS(coalgebra_integral(as_coalgebra(sweedler_h4())), NotCosemisimple);
}
