#include <cqg/corpus.hpp>
#include <cqg/io.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

using namespace cqg;

namespace {

int label_index(const FiniteHopfStar& h, const std::string& lab) {
    for (int i = 0; i < h.dim; ++i)
        if (h.labels[i] == lab) return i;
    FAIL("no label " + lab);
    return -1;
}

} // namespace

TEST_CASE("axioms hold exactly on the built-in corpus") {
    auto check = [](const FiniteHopfStar& h) {
        auto rep = verify_hopf(h);
        INFO("worst residual " << rep.worst());
        CHECK(rep.pass);
        CHECK(rep.worst() <= 1e-14);
    };
    check(function_algebra(cyclic_group(4)));
    check(function_algebra(symmetric_s3()));
    check(function_algebra(dihedral_d4()));
    check(group_algebra(cyclic_group(4)));
    check(group_algebra(symmetric_s3()));
    check(group_algebra(dihedral_d4()));
    check(kac_paljutkin());
    check(sweedler_h4());
}

TEST_CASE("a perturbed comultiplication is rejected with a matching residual") {
    auto h = function_algebra(cyclic_group(2));
    h.comult[1](0, 0) += 1e-3;
    auto rep = verify_hopf(h);
    CHECK_FALSE(rep.pass);
    CHECK(rep.residual("coassociativity") >= 1e-4);
    CHECK(rep.residual("coassociativity") <= 1e-2);
}

TEST_CASE("kac-paljutkin star alternatives violate exactly the star laws") {
    auto bad = detail::kac_paljutkin_with_star(false); // z* = z
    auto rep = verify_hopf(bad);
    CHECK_FALSE(rep.pass);
    CHECK(rep.residual("star_comultiplicative") == Catch::Approx(0.5));
    CHECK(rep.residual("associativity") <= 1e-14);
    CHECK(rep.residual("antipode") <= 1e-14);
}

TEST_CASE("convolution of evaluation functionals follows the group law") {
    auto h = function_algebra(cyclic_group(2));
    auto f_e = make_functional(h, RowVec::Unit(2, 0));
    auto f_g = make_functional(h, RowVec::Unit(2, 1));
    auto prod = convolve(h, f_g, f_g); // g . g = e in Z/2
    CHECK(max_abs(Vector((prod.coords - f_e.coords).transpose())) <= 1e-15);
    auto eps = make_functional(h, h.counit);
    auto same = convolve(h, eps, f_g);
    CHECK(max_abs(Vector((same.coords - f_g.coords).transpose())) <= 1e-15);
}

TEST_CASE("convolution actions on O(S3) translate indicators") {
    auto g = symmetric_s3();
    auto h = function_algebra(g);
    int i12 = label_index(h, "d_(12)");
    int i123 = label_index(h, "d_(123)");
    int i13 = label_index(h, "d_(13)");
    int i23 = label_index(h, "d_(23)");
    auto f = make_functional(h, RowVec::Unit(6, i12)); // evaluation at (12)
    Vector x = Vector::Unit(6, i123);
    // f*x = f(x2) x1 picks u with u(12) = (123), i.e. u = (13)
    Vector left = convolve_act(h, f, x, ActSide::Left);
    CHECK(max_abs(Vector(left - Vector::Unit(6, i13))) <= 1e-15);
    // x*f = f(x1) x2 picks v with (12)v = (123), i.e. v = (23)
    Vector right = convolve_act(h, f, x, ActSide::Right);
    CHECK(max_abs(Vector(right - Vector::Unit(6, i23))) <= 1e-15);
}

TEST_CASE("the dual of O(Z3) is C[Z3] and the double dual returns") {
    auto g = cyclic_group(3);
    auto d = dual_hopf(function_algebra(g));
    auto cg = group_algebra(g);
    REQUIRE(d.dim == cg.dim);
    double r = 0.0;
    for (int i = 0; i < d.dim; ++i) {
        r = std::max(r, max_abs(Matrix(d.mult[i] - cg.mult[i])));
        r = std::max(r, max_abs(Matrix(d.comult[i] - cg.comult[i])));
    }
    r = std::max(r, max_abs(Vector(d.unit - cg.unit)));
    r = std::max(r, max_abs(Vector((d.counit - cg.counit).transpose())));
    r = std::max(r, max_abs(Matrix(d.antipode - cg.antipode)));
    r = std::max(r, max_abs(Matrix(d.star - cg.star)));
    CHECK(r <= 1e-15);

    auto h = function_algebra(symmetric_s3());
    auto dd = dual_hopf(dual_hopf(h));
    double rr = 0.0;
    for (int i = 0; i < h.dim; ++i) {
        rr = std::max(rr, max_abs(Matrix(dd.mult[i] - h.mult[i])));
        rr = std::max(rr, max_abs(Matrix(dd.comult[i] - h.comult[i])));
    }
    rr = std::max(rr, max_abs(Matrix(dd.star - h.star)));
    CHECK(rr <= 1e-15);

    CHECK(verify_hopf(dual_hopf(kac_paljutkin())).pass);
    CHECK(verify_hopf(dual_hopf(sweedler_h4())).pass);
}

TEST_CASE("antipode square is trivial on kac types and not on sweedler") {
    auto kp = kac_paljutkin();
    CHECK(max_abs(Matrix(antipode_square(kp) - Matrix::Identity(8, 8))) <= 1e-15);
    auto sw = sweedler_h4();
    Matrix s2 = antipode_square(sw);
    int ix = label_index(sw, "x");
    CHECK(max_abs(Vector(s2.col(ix) + Vector::Unit(4, ix))) <= 1e-15); // S^2(x) = -x
}

TEST_CASE("star coalgebra map on O(Z3) inverts group elements") {
    auto h = function_algebra(cyclic_group(3));
    Matrix c = star_coalgebra_map(h);
    CHECK(max_abs(Matrix(c - h.antipode)) <= 1e-15);
    CHECK(max_abs(Matrix(c * c.conjugate() - Matrix::Identity(3, 3))) <= 1e-15);
}

TEST_CASE("functionals are bound to their object") {
    auto h2 = function_algebra(cyclic_group(2));
    auto h3 = function_algebra(cyclic_group(3));
    auto f = make_functional(h2, RowVec::Unit(2, 0));
    CHECK_THROWS_AS(convolve(h3, f, f), InvalidInput);
    CHECK_THROWS_AS(make_functional(h2, RowVec::Unit(3, 0)), InvalidInput);
}

TEST_CASE("comodule residual vanishes for the regular coaction") {
    auto kp = kac_paljutkin();
    auto reg = regular_comodule(kp);
    CHECK(comodule_residual(kp, reg) <= 1e-14);
    reg.coaction[4](0, 0) += 1e-3;
    CHECK(comodule_residual(kp, reg) >= 1e-4);
}

TEST_CASE("hopf.v1 round trip preserves every structure constant") {
    auto kp = kac_paljutkin();
    Json j = hopf_to_json(kp);
    std::string path = "roundtrip_hopf.json";
    save_json(path, j);
    auto back = hopf_from_json(load_json(path));
    std::remove(path.c_str());
    REQUIRE(back.dim == kp.dim);
    CHECK(back.labels == kp.labels);
    double r = 0.0;
    for (int i = 0; i < kp.dim; ++i) {
        r = std::max(r, max_abs(Matrix(back.mult[i] - kp.mult[i])));
        r = std::max(r, max_abs(Matrix(back.comult[i] - kp.comult[i])));
    }
    r = std::max(r, max_abs(Vector(back.unit - kp.unit)));
    r = std::max(r, max_abs(Vector((back.counit - kp.counit).transpose())));
    r = std::max(r, max_abs(Matrix(back.antipode - kp.antipode)));
    r = std::max(r, max_abs(Matrix(back.star - kp.star)));
    CHECK(r <= 1e-15);
    CHECK(verify_hopf(back).pass);

    Json sparse;
    sparse["schema"] = "hopf.v1";
    sparse["dim"] = 2;
    sparse["unit"] = Json::array({Json::array({1.0, 0.0}), Json::array({1.0, 0.0})});
    sparse["counit"] = Json::array({Json::array({1.0, 0.0}), Json::array({0.0, 0.0})});
    sparse["mult"] = Json{{"entries", Json::array({Json::array({0, 0, 0, 1.0, 0.0}),
                                                   Json::array({1, 1, 1, 1.0, 0.0})})}};
    sparse["comult"] = Json{{"entries", Json::array({Json::array({0, 0, 0, 1.0, 0.0}),
                                                     Json::array({0, 1, 1, 1.0, 0.0}),
                                                     Json::array({1, 0, 1, 1.0, 0.0}),
                                                     Json::array({1, 1, 0, 1.0, 0.0})})}};
    sparse["antipode"] = Json{{"entries", Json::array({Json::array({0, 0, 1.0, 0.0}),
                                                       Json::array({1, 1, 1.0, 0.0})})}};
    sparse["star"] = Json{{"entries", Json::array({Json::array({0, 0, 1.0, 0.0}),
                                                   Json::array({1, 1, 1.0, 0.0})})}};
    auto hz2 = hopf_from_json(sparse);
    CHECK(verify_hopf(hz2).pass);

    Json bad = sparse;
    bad["schema"] = "hopf.v2";
    CHECK_THROWS_AS(hopf_from_json(bad), InvalidInput);
}
