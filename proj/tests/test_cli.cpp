#include <cqg/cli.hpp>
#include <cqg/corpus.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

using namespace cqg;
namespace fs = std::filesystem;

namespace {

/** Fresh fixture root under the system temp directory, wiped per run. */
const std::string& fixture_root() {
    static const std::string root = [] {
        fs::path p = fs::temp_directory_path() / "cqg-cli-fixtures";
        fs::remove_all(p);
        fs::create_directories(p);
        return p.string();
    }();
    return root;
}

RunConfig base_config(const std::string& command, std::vector<std::string> args) {
    RunConfig cfg;
    cfg.command = command;
    cfg.args = std::move(args);
    cfg.corpus_root = fixture_root();
    return cfg;
}

std::string in_root(const std::string& name) {
    return (fs::path(fixture_root()) / name).string();
}

} // namespace

TEST_CASE("hopf json round trip preserves the structure tensors") {
    auto h = kac_paljutkin();
    auto j = hopf_to_json(h);
    auto h2 = hopf_from_json(j);
    REQUIRE(h2.dim == h.dim);
    REQUIRE(verify_hopf(h2).pass);
    for (int i = 0; i < h.dim; ++i) {
        REQUIRE(max_abs(Matrix(h2.mult[i] - h.mult[i])) < 1e-14);
        REQUIRE(max_abs(Matrix(h2.comult[i] - h.comult[i])) < 1e-14);
    }
    REQUIRE(max_abs(Matrix(h2.antipode - h.antipode)) < 1e-14);
    REQUIRE(max_abs(Matrix(h2.star - h.star)) < 1e-14);
    REQUIRE(max_abs(Vector((h2.counit - h.counit).transpose())) < 1e-14);
}

TEST_CASE("presented json round trip preserves relations and coproducts") {
    auto p = suq2(0.5);
    auto j = presented_to_json(p, 4, {{"q", 0.5}});
    auto pf = presented_from_json(j);
    REQUIRE(pf.cutoff == 4);
    REQUIRE(pf.scalars.at("q") == Catch::Approx(0.5));
    REQUIRE(pf.p.gen_names == p.gen_names);
    REQUIRE(pf.p.rules.size() == p.rules.size());
    REQUIRE(verify_presented(pf.p, 3).pass);
}

TEST_CASE("coideal json round trip in both kinds") {
    auto h = kac_paljutkin();
    auto a = coideal_closure(h, {Vector::Unit(h.dim, 1)});
    auto cf = coideal_from_json(coideal_to_json("gen1", a.basis));
    REQUIRE_FALSE(cf.polynomial);
    REQUIRE(cf.name == "gen1");
    REQUIRE(cf.basis.rows() == h.dim);
    REQUIRE(subspace_equal(Subspace::span_cols(cf.basis, h.tol), a));

    auto p = suq2(0.5);
    auto gens = podles_standard(p, 0.5).gens;
    auto cp = coideal_from_json(coideal_to_json("podles-standard", gens));
    REQUIRE(cp.polynomial);
    REQUIRE(cp.gens.size() == gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) REQUIRE(cp.gens[i] == gens[i]);
}

TEST_CASE("corpus build writes validated fixtures with matching checksums") {
    auto manifest = write_corpus("s3", fixture_root());
    REQUIRE(manifest["schema"] == "manifest.v1");
    REQUIRE(manifest["kind"] == "dense");
    REQUIRE(manifest["dim"] == 6);
    REQUIRE(manifest["cosemisimple"] == true);
    REQUIRE(manifest["coideals"].size() == 6);

    // dim * dim_c = dim H for every subgroup coideal
    for (const auto& [name, info] : manifest["coideals"].items()) {
        (void)name;
        REQUIRE(int(info["dim"]) * int(info["dim_c"]) == 6);
    }

    // recorded checksums match the bytes on disk
    for (const auto& [rel, sum] : manifest["files"].items()) {
        std::ifstream f(fs::path(in_root("s3")) / rel, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(f)),
                          std::istreambuf_iterator<char>());
        REQUIRE(checksum(bytes) == sum.get<std::string>());
    }

    auto kp = write_corpus("kac-paljutkin", fixture_root());
    REQUIRE(kp["dim"] == 8);
    REQUIRE(kp["coideals"].size() == 6);

    auto sw = write_corpus("sweedler", fixture_root());
    REQUIRE(sw["cosemisimple"] == false);

    auto sp = write_corpus("suq2-q0.5", fixture_root());
    REQUIRE(sp["kind"] == "presented");
    REQUIRE(sp["cutoff"] == 4);
    REQUIRE(sp["coideals"].size() == 2);

    REQUIRE_THROWS_AS(write_corpus("nonsense", fixture_root()), InvalidInput);
}

TEST_CASE("run_command: passing checks exit 0") {
    write_corpus("z3", fixture_root());
    auto rr = run_command(base_config("galois", {in_root("z3")}));
    REQUIRE(rr.exit == 0);
    REQUIRE(rr.report["schema"] == "report.v1");
    REQUIRE(rr.report["pass"] == true);
    REQUIRE(rr.report["inconclusive"] == false);
    REQUIRE(rr.report["checks"].size() == 4); // two subgroups, two directions each

    auto rh = run_command(base_config("haar", {in_root("kac-paljutkin")}));
    REQUIRE(rh.exit == 0);
    REQUIRE(rh.report["data"]["haar"]["min_gram_eig"].get<double>() > 0.0);
}

TEST_CASE("run_command: input problems exit 1") {
    REQUIRE(run_command(base_config("verify", {in_root("no-such-corpus")})).exit == 1);
    REQUIRE(run_command(base_config("frobnicate", {in_root("s3")})).exit == 1);
    REQUIRE(run_command(base_config("galois", {})).exit == 1);
    REQUIRE(run_command(base_config("corpus", {"build", "nonsense"})).exit == 1);

    auto cfg = base_config("galois", {in_root("s3")});
    cfg.coideal = "no-such-coideal";
    REQUIRE(run_command(cfg).exit == 1);

    // dense-only command against a presented corpus is an input error
    REQUIRE(run_command(base_config("peterweyl", {in_root("suq2-q0.5")})).exit == 1);

    auto rr = run_command(base_config("verify", {in_root("no-such-corpus")}));
    REQUIRE(rr.report.contains("error"));
    REQUIRE(rr.report["pass"] == false);
}

TEST_CASE("run_command: theorem failures exit 2") {
    // no Haar state on a non-cosemisimple algebra
    auto rr = run_command(base_config("haar", {in_root("sweedler")}));
    REQUIRE(rr.exit == 2);
    REQUIRE(rr.report.contains("error"));

    // the non-standard sphere fails the positivity assertion with a witness
    auto cfg = base_config("positivity", {in_root("suq2-q0.5")});
    cfg.coideal = "podles-nonstandard";
    auto rp = run_command(cfg);
    REQUIRE(rp.exit == 2);
    REQUIRE(rp.report["checks"][0]["pass"] == false);
    REQUIRE(rp.report["checks"][0]["verdict"] == "not_positive");
    REQUIRE(rp.report["checks"][0].contains("witness"));
    REQUIRE(rp.report["checks"][0]["min_eig"].get<double>() < -1e-6);

    // while the standard sphere passes it
    cfg.coideal = "podles-standard";
    REQUIRE(run_command(cfg).exit == 0);
}

TEST_CASE("run_command: truncation without a validated state exits 3") {
    auto cfg = base_config("quotient", {in_root("suq2-q0.5")});
    cfg.coideal = "podles-nonstandard";
    cfg.cutoff = 8;
    auto rr = run_command(cfg);
    REQUIRE(rr.exit == 3);
    REQUIRE(rr.report["inconclusive"] == true);
    bool saw = false;
    for (const auto& c : rr.report["checks"])
        if (c.value("inconclusive", false)) saw = true;
    REQUIRE(saw);
}

TEST_CASE("run_command: decide-expected is consistent on both spheres") {
    auto rr = run_command(base_config("decide-expected", {in_root("suq2-q0.5")}));
    REQUIRE(rr.exit == 0);
    REQUIRE(rr.report["checks"].size() == 2);
    for (const auto& c : rr.report["checks"]) {
        REQUIRE(c["pass"] == true);
        REQUIRE(c["positive"] == c["s2_invariant"]);
    }
}

TEST_CASE("reports byte-reproduce modulo the timestamp") {
    auto cfg = base_config("plancherel", {in_root("kac-paljutkin")});
    cfg.seed = 3;
    auto a = run_command(cfg).report;
    auto b = run_command(cfg).report;
    a.erase("generated_at");
    b.erase("generated_at");
    REQUIRE(a.dump(2) == b.dump(2));
}
