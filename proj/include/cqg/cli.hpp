#pragma once

/**
 * @file cli.hpp
 *
 * Batch front-end: corpus fixture building, command dispatch, and report.v1
 * assembly.  Exit codes: 0 all checks pass, 1 input error, 2 theorem or
 * verification failure, 3 inconclusive because of degree truncation.
 *
 * Reports are deterministic for fixed seed and tolerance: keys are sorted
 * and every numeric value is derived from seeded computations, so reruns
 * byte-reproduce everything except the generated_at timestamp.
 */

#include <cqg/coideal.hpp>
#include <cqg/corpus.hpp>
#include <cqg/expectation.hpp>
#include <cqg/haar.hpp>
#include <cqg/io.hpp>
#include <cqg/presented.hpp>
#include <cqg/suq2.hpp>

#include <algorithm>
#include <ctime>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace cqg {

// ---------------------------------------------------------------------------
// Corpus fixtures

inline std::vector<std::string> corpus_names() {
    return {"z2",  "z3",  "z4",  "s3",  "d4",            // function algebras O(G)
            "cz2", "cz3", "cz4", "cs3", "cd4",           // group algebras C[G]
            "kac-paljutkin", "sweedler", "suq2-q0.5"};
}

namespace fixture {

inline std::string subgroup_tag(const std::vector<int>& sub) {
    std::string s = "k";
    for (std::size_t i = 0; i < sub.size(); ++i) s += (i ? "-" : "") + std::to_string(sub[i]);
    return s;
}

inline GroupTable group_for(const std::string& tag) {
    if (tag == "z2") return cyclic_group(2);
    if (tag == "z3") return cyclic_group(3);
    if (tag == "z4") return cyclic_group(4);
    if (tag == "s3") return symmetric_s3();
    if (tag == "d4") return dihedral_d4();
    throw InvalidInput("unknown group tag: " + tag);
}

struct DenseEntry {
    FiniteHopfStar h;
    std::vector<std::pair<std::string, Matrix>> coideals;
};

/** Build and validate one dense corpus entry; every coideal is gated by
 *  verify_coideal and the algebra by verify_hopf before anything is written. */
inline DenseEntry dense_entry(const std::string& name) {
    DenseEntry e;
    auto add = [&](const std::string& cname, const Subspace& a) {
        if (!verify_coideal(e.h, a).laws.pass)
            throw ConstructionFailure("fixture coideal fails verification: " + name + "/" + cname);
        e.coideals.emplace_back(cname, a.basis);
    };
    if (name.size() >= 2 && name[0] == 'c') {
        // group algebras: cz2, cz3, cz4, cs3, cd4
        auto g = group_for(name.substr(1));
        e.h = group_algebra(g);
        for (const auto& sub : all_subgroups(g))
            add(subgroup_tag(sub), Subspace::span(subgroup_coideal(g, sub), e.h.tol));
    } else if (name == "kac-paljutkin") {
        e.h = kac_paljutkin();
        add("trivial", Subspace::span({e.h.unit}, e.h.tol));
        std::vector<Subspace> seen;
        seen.push_back(Subspace::span({e.h.unit}, e.h.tol));
        for (int i = 0; i < e.h.dim; ++i) {
            auto cl = coideal_closure(e.h, {Vector::Unit(e.h.dim, i)});
            bool fresh = true;
            for (const auto& prev : seen)
                if (prev.dim() == cl.dim() && subspace_equal(prev, cl)) fresh = false;
            if (!fresh) continue;
            seen.push_back(cl);
            add("gen" + std::to_string(i), cl);
        }
        auto mid = coideal_closure(e.h, {Vector::Unit(e.h.dim, 1), Vector::Unit(e.h.dim, 2)});
        add("gen1-2", mid);
    } else if (name == "sweedler") {
        e.h = sweedler_h4();
        add("grouplike", Subspace::span({e.h.unit, Vector::Unit(4, 1)}, e.h.tol));
    } else {
        auto g = group_for(name);
        e.h = function_algebra(g);
        for (const auto& sub : all_subgroups(g))
            add(subgroup_tag(sub), Subspace::span(coset_coideal(g, sub), e.h.tol));
    }
    auto laws = verify_hopf(e.h);
    if (!laws.pass)
        throw ConstructionFailure("fixture algebra fails the axioms: " + name);
    return e;
}

} // namespace fixture

/** Write corpus/<name>/ fixtures (hopf.json or presented.json, coideals/,
 *  manifest.json with checksums); returns the manifest. */
inline Json write_corpus(const std::string& name, const std::string& root,
                         std::uint64_t seed = 0) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::path(root) / name;
    fs::create_directories(dir / "coideals");

    Json manifest;
    manifest["schema"] = "manifest.v1";
    manifest["name"] = name;
    manifest["builder"] = "cqg-corpus 1";
    Json files = Json::object();
    auto emit = [&](const fs::path& rel, const Json& doc) {
        save_json((dir / rel).string(), doc);
        files[rel.generic_string()] = checksum(json_bytes(doc));
    };

    if (name == "suq2-q0.5") {
        const double q = 0.5;
        auto p = suq2(q);
        auto laws = verify_presented(p, 3);
        if (!laws.pass) throw ConstructionFailure("presentation fails its laws: " + name);
        emit("presented.json", presented_to_json(p, 4, {{"q", q}}));
        manifest["kind"] = "presented";
        manifest["cutoff"] = 4;
        manifest["axiom_residual"] = laws.worst();
        Json coinfo = Json::object();
        auto put_sphere = [&](const std::string& cname, const std::vector<Poly>& gens) {
            auto tq = truncated_quotient(p, gens, 4, seed + 1);
            emit(fs::path("coideals") / (cname + ".json"), coideal_to_json(cname, gens));
            coinfo[cname] = Json{{"generators", static_cast<int>(gens.size())},
                                 {"window", tq.window},
                                 {"dim_c", tq.c.dim}};
        };
        put_sphere("podles-standard", podles_standard(p, q).gens);
        put_sphere("podles-nonstandard", podles_nonstandard(p, q, 0.0).gens);
        manifest["coideals"] = coinfo;
    } else {
        auto e = fixture::dense_entry(name);
        emit("hopf.json", hopf_to_json(e.h));
        manifest["kind"] = "dense";
        manifest["dim"] = e.h.dim;
        manifest["axiom_residual"] = verify_hopf(e.h).worst();
        try {
            auto pw = peter_weyl(e.h, seed + 1);
            Json blocks = Json::array();
            for (const auto& b : pw.blocks) blocks.push_back(b.n);
            manifest["blocks"] = blocks;
            manifest["cosemisimple"] = true;
        } catch (const NotCosemisimple&) {
            manifest["cosemisimple"] = false;
        }
        Json coinfo = Json::object();
        for (const auto& [cname, basis] : e.coideals) {
            emit(fs::path("coideals") / (cname + ".json"), coideal_to_json(cname, basis));
            auto qt = quotient_coalgebra(e.h, Subspace::span_cols(basis, e.h.tol), seed + 1);
            coinfo[cname] =
                Json{{"dim", static_cast<int>(basis.cols())}, {"dim_c", qt.c.dim}};
        }
        manifest["coideals"] = coinfo;
    }
    manifest["files"] = files;
    save_json((dir / "manifest.json").string(), manifest);
    return manifest;
}

// ---------------------------------------------------------------------------
// Run configuration and report assembly

struct RunConfig {
    std::string command;
    std::vector<std::string> args; // input paths, or {"build", <name>} for corpus
    double tol = 0.0;              // 0 = keep the stored tolerance
    std::uint64_t seed = 0;
    int cutoff = 0;                // 0 = fixture default / escalation ladder
    std::string out;               // optional report destination
    std::string coideal;           // restrict to one named coideal
    bool all_coideals = false;     // explicit request for every coideal (the default)
    std::string corpus_root = "corpus";
};

struct RunResult {
    Json report;
    int exit = 0;
};

namespace detail {

inline std::string iso_utc_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct LoadedInput {
    std::string path;
    bool presented = false;
    FiniteHopfStar h;
    PresentedFile pf;
    std::vector<CoidealFile> coideals;
};

inline LoadedInput load_input(const std::string& path, const RunConfig& cfg) {
    namespace fs = std::filesystem;
    LoadedInput in;
    in.path = path;
    fs::path base(path);
    fs::path doc = base;
    if (fs::is_directory(base)) {
        if (fs::exists(base / "hopf.json"))
            doc = base / "hopf.json";
        else if (fs::exists(base / "presented.json"))
            doc = base / "presented.json";
        else
            throw InvalidInput(path + ": no hopf.json or presented.json");
    } else if (!fs::exists(base)) {
        throw InvalidInput(path + ": no such file or directory");
    }
    Json j = load_json(doc.string());
    const std::string schema = j.is_object() ? j.value("schema", "") : "";
    if (schema == "hopf.v1") {
        in.h = hopf_from_json(j);
        if (cfg.tol > 0) in.h.tol = cfg.tol;
    } else if (schema == "presented.v1") {
        in.presented = true;
        in.pf = presented_from_json(j);
        if (cfg.tol > 0) in.pf.p.tol = cfg.tol;
    } else {
        throw InvalidInput(doc.string() + ": field 'schema' must be hopf.v1 or presented.v1");
    }
    if (fs::is_directory(base) && fs::exists(base / "coideals")) {
        std::vector<fs::path> entries;
        for (const auto& de : fs::directory_iterator(base / "coideals"))
            if (de.path().extension() == ".json") entries.push_back(de.path());
        std::sort(entries.begin(), entries.end());
        for (const auto& p : entries) {
            auto cf = coideal_from_json(load_json(p.string()));
            if (cf.name.empty()) cf.name = p.stem().string();
            in.coideals.push_back(std::move(cf));
        }
    }
    if (!cfg.coideal.empty()) {
        std::vector<CoidealFile> keep;
        for (auto& c : in.coideals)
            if (c.name == cfg.coideal) keep.push_back(std::move(c));
        if (keep.empty())
            throw InvalidInput(path + ": no coideal named '" + cfg.coideal + "'");
        in.coideals = std::move(keep);
    }
    return in;
}

struct Checks {
    Json list = Json::array();
    bool all_pass = true;
    bool inconclusive = false;

    void add(const std::string& name, bool ok, Json details = Json::object()) {
        details["check"] = name;
        details["pass"] = ok;
        list.push_back(std::move(details));
        all_pass = all_pass && ok;
    }
    /** A check that cannot be decided at this cutoff: exit 3, not 2. */
    void undecided(const std::string& name, Json details = Json::object()) {
        details["check"] = name;
        details["pass"] = false;
        details["inconclusive"] = true;
        list.push_back(std::move(details));
        inconclusive = true;
    }
};

inline void require_dense(const LoadedInput& in, const std::string& command) {
    if (in.presented)
        throw InvalidInput(command + " requires a dense corpus; " + in.path +
                           " is a presented one");
}

inline Subspace dense_coideal(const LoadedInput& in, const CoidealFile& cf) {
    if (cf.polynomial)
        throw InvalidInput(in.path + ": coideal '" + cf.name +
                           "' is polynomial but the corpus is dense");
    if (cf.basis.rows() != in.h.dim)
        throw InvalidInput(in.path + ": coideal '" + cf.name + "' has ambient dimension " +
                           std::to_string(cf.basis.rows()) + ", expected " +
                           std::to_string(in.h.dim));
    return Subspace::span_cols(cf.basis, in.h.tol);
}

inline std::vector<Poly> presented_gens(const LoadedInput& in, const CoidealFile& cf) {
    if (!cf.polynomial)
        throw InvalidInput(in.path + ": coideal '" + cf.name +
                           "' is a dense basis but the corpus is presented");
    return cf.gens;
}

inline const std::vector<CoidealFile>& need_coideals(const LoadedInput& in) {
    if (in.coideals.empty())
        throw InvalidInput(in.path + ": no coideals available for this input");
    return in.coideals;
}

inline std::vector<int> ladder_from(int file_cutoff, int override_cutoff) {
    if (override_cutoff > 0) return {override_cutoff};
    std::vector<int> out;
    for (int d = file_cutoff; d <= 8; d += 2) out.push_back(d);
    if (out.empty()) out.push_back(file_cutoff);
    return out;
}

inline Json json_words(const Poly& f) { return json_poly(f); }

} // namespace detail

// ---------------------------------------------------------------------------
// Command dispatch

inline RunResult run_command(const RunConfig& cfg) {
    using detail::Checks;
    RunResult rr;
    Json& rep = rr.report;
    rep["schema"] = "report.v1";
    rep["command"] = cfg.command;
    rep["inputs"] = cfg.args;
    rep["tol"] = cfg.tol;
    rep["seed"] = cfg.seed;
    rep["cutoff"] = cfg.cutoff;
    rep["generated_at"] = detail::iso_utc_now();

    Checks ck;
    Json data = Json::object();
    int exit_input = 0, exit_theorem = 0;

    auto etol = [&](double stored) { return cfg.tol > 0 ? cfg.tol : stored; };

    try {
        const std::string& cmd = cfg.command;
        if (cmd == "corpus") {
            if (cfg.args.size() != 2 || cfg.args[0] != "build")
                throw InvalidInput("usage: corpus build <name|all>");
            std::vector<std::string> selected;
            if (cfg.args[1] == "all")
                selected = corpus_names();
            else
                selected.push_back(cfg.args[1]);
            for (const auto& name : selected) {
                bool known = false;
                for (const auto& n : corpus_names()) known = known || n == name;
                if (!known) throw InvalidInput("unknown corpus name: " + name);
                Json manifest = write_corpus(name, cfg.corpus_root, cfg.seed);
                Json d;
                d["manifest"] = manifest;
                ck.add("built:" + name, true, std::move(d));
            }
        } else if (cfg.args.empty()) {
            throw InvalidInput("command '" + cmd + "' needs at least one input path");
        } else {
            for (const auto& path : cfg.args) {
                auto in = detail::load_input(path, cfg);
                const std::string tag = cfg.args.size() > 1 ? path + ":" : "";

                if (cmd == "verify") {
                    if (!in.presented) {
                        auto laws = verify_hopf(in.h);
                        Json d;
                        for (const auto& [k, v] : laws.residuals) d["residuals"][k] = v;
                        d["worst"] = laws.worst();
                        d["dim"] = in.h.dim;
                        ck.add(tag + "hopf_axioms", laws.pass, std::move(d));
                    } else {
                        int deg = cfg.cutoff > 0 ? cfg.cutoff : 3;
                        auto laws = verify_presented(in.pf.p, deg);
                        Json d;
                        for (const auto& [k, v] : laws.residuals) d["residuals"][k] = v;
                        d["worst"] = laws.worst();
                        d["degree"] = deg;
                        ck.add(tag + "presented_laws", laws.pass, std::move(d));
                    }
                } else if (cmd == "haar") {
                    if (!in.presented) {
                        auto haar = haar_state(in.h, cfg.seed);
                        double t = etol(in.h.tol);
                        Json d;
                        d["invariance"] = haar.invariance;
                        d["route_gap"] = haar.route_gap;
                        d["min_gram_eig"] = haar.min_gram_eig;
                        Json coords = Json::array();
                        for (int i = 0; i < in.h.dim; ++i)
                            coords.push_back(json_complex(haar.state.coords(i)));
                        d["state"] = coords;
                        ck.add(tag + "invariance", haar.invariance <= t, Json{{"value", haar.invariance}});
                        ck.add(tag + "route_agreement", haar.route_gap <= 10 * t,
                               Json{{"value", haar.route_gap}});
                        ck.add(tag + "positive", haar.positive, Json{{"min_gram_eig", haar.min_gram_eig}});
                        ck.add(tag + "faithful", haar.faithful, Json{{"min_gram_eig", haar.min_gram_eig}});
                        data["haar"] = std::move(d);
                    } else {
                        int deg = cfg.cutoff > 0 ? cfg.cutoff : in.pf.cutoff;
                        auto snap = snapshot(in.pf.p, deg);
                        auto integral = coalgebra_integral(snapshot_coalgebra(snap), cfg.seed);
                        double t = etol(in.pf.p.tol);
                        ck.add(tag + "invariance", integral.invariance <= t,
                               Json{{"value", integral.invariance}});
                        ck.add(tag + "route_agreement", integral.route_gap <= 10 * t,
                               Json{{"value", integral.route_gap}});
                        data["snapshot_dim"] = snap.dim();
                        data["degree"] = deg;
                    }
                } else if (cmd == "peterweyl") {
                    detail::require_dense(in, cmd);
                    auto pw = peter_weyl(in.h, cfg.seed);
                    double t = etol(in.h.tol);
                    Json blocks = Json::array();
                    int total = 0;
                    for (const auto& b : pw.blocks) {
                        blocks.push_back(b.n);
                        total += b.n * b.n;
                    }
                    ck.add(tag + "block_dimensions", total == in.h.dim,
                           Json{{"blocks", blocks}, {"sum_squares", total}});
                    ck.add(tag + "matrix_coefficient_laws",
                           pw.coassoc_residual <= t && pw.counit_residual <= t,
                           Json{{"coassoc", pw.coassoc_residual}, {"counit", pw.counit_residual}});
                    ck.add(tag + "trivial_block", pw.trivial >= 0, Json{{"index", pw.trivial}});
                } else if (cmd == "coideal-close") {
                    detail::require_dense(in, cmd);
                    for (const auto& cf : detail::need_coideals(in)) {
                        auto a = detail::dense_coideal(in, cf);
                        std::vector<Vector> gens;
                        for (int c = 0; c < a.dim(); ++c) gens.push_back(a.basis.col(c));
                        auto closed = coideal_closure(in.h, gens);
                        bool stable = closed.dim() == a.dim() && subspace_equal(closed, a);
                        ck.add(tag + "closed:" + cf.name, stable,
                               Json{{"dim", a.dim()}, {"closure_dim", closed.dim()}});
                    }
                } else if (cmd == "quotient") {
                    if (!in.presented) {
                        for (const auto& cf : detail::need_coideals(in)) {
                            auto a = detail::dense_coideal(in, cf);
                            auto qt = quotient_coalgebra(in.h, a, cfg.seed);
                            double t = etol(in.h.tol);
                            Json d;
                            d["dim_c"] = qt.c.dim;
                            d["dim_kernel"] = qt.kernel.dim();
                            d["welldef"] = qt.welldef_residual;
                            d["star_residual"] = qt.star_residual;
                            ck.add(tag + "welldefined:" + cf.name, qt.welldef_residual <= t,
                                   std::move(d));
                            ck.add(tag + "star_descends:" + cf.name, qt.star_descends,
                                   Json{{"residual", qt.star_residual}});
                        }
                    } else {
                        int deg = cfg.cutoff > 0 ? cfg.cutoff : in.pf.cutoff;
                        for (const auto& cf : detail::need_coideals(in)) {
                            auto gens = detail::presented_gens(in, cf);
                            auto tq = truncated_quotient(in.pf.p, gens, deg, cfg.seed);
                            double t = etol(in.pf.p.tol);
                            Json d;
                            d["degree"] = deg;
                            d["window"] = tq.window;
                            d["dim_c"] = tq.c.dim;
                            d["welldef"] = tq.welldef_residual;
                            ck.add(tag + "welldefined:" + cf.name, tq.welldef_residual <= t,
                                   std::move(d));
                            ck.add(tag + "star_descends:" + cf.name, tq.star_descends,
                                   Json{{"residual", tq.star_residual}});
                            if (tq.integral_ok)
                                ck.add(tag + "invariant_state:" + cf.name, true,
                                       Json{{"invariance", tq.integral.invariance},
                                            {"route_gap", tq.integral.route_gap}});
                            else
                                ck.undecided(tag + "invariant_state:" + cf.name,
                                             Json{{"note", tq.integral_note}});
                        }
                    }
                } else if (cmd == "invariants") {
                    detail::require_dense(in, cmd);
                    for (const auto& cf : detail::need_coideals(in)) {
                        auto a = detail::dense_coideal(in, cf);
                        auto qt = quotient_coalgebra(in.h, a, cfg.seed);
                        auto inv = invariants(in.h, qt);
                        bool match = inv.dim() == a.dim() && subspace_equal(inv, a);
                        ck.add(tag + "invariants_match:" + cf.name, match,
                               Json{{"dim", inv.dim()}, {"dim_subalgebra", a.dim()}});
                    }
                } else if (cmd == "galois") {
                    detail::require_dense(in, cmd);
                    for (const auto& cf : detail::need_coideals(in)) {
                        auto a = detail::dense_coideal(in, cf);
                        auto rt = galois_roundtrip(in.h, a, cfg.seed);
                        Json d;
                        d["dim_a"] = rt.dim_a;
                        d["dim_c"] = rt.dim_c;
                        d["dim_invariants"] = rt.dim_invariants;
                        ck.add(tag + "roundtrip:" + cf.name,
                               rt.subalgebra_recovered && rt.quotient_recovered, std::move(d));
                        auto qt = quotient_coalgebra(in.h, a, cfg.seed);
                        auto rc = galois_roundtrip_coalg(in.h, qt, cfg.seed);
                        ck.add(tag + "roundtrip_coalg:" + cf.name, rc.quotient_recovered,
                               Json{{"dim_invariants", rc.dim_invariants}, {"dim_c", rc.dim_c}});
                    }
                } else if (cmd == "expectation") {
                    detail::require_dense(in, cmd);
                    for (const auto& cf : detail::need_coideals(in)) {
                        auto a = detail::dense_coideal(in, cf);
                        auto ex = build_expectation(in.h, a, cfg.seed);
                        double t = etol(in.h.tol);
                        Json d;
                        d["idempotent"] = ex.idempotent;
                        d["unital"] = ex.unital;
                        d["range"] = ex.range_residual;
                        d["bimodule"] = ex.bimodule;
                        d["haar_compat"] = ex.haar_compat;
                        bool ok = ex.idempotent <= t && ex.unital <= t && ex.range_residual <= t &&
                                  ex.bimodule <= t && ex.haar_compat <= t && ex.range_is_subalgebra;
                        ck.add(tag + "splitting:" + cf.name, ok, std::move(d));
                    }
                } else if (cmd == "positivity") {
                    if (!in.presented) {
                        for (const auto& cf : detail::need_coideals(in)) {
                            auto a = detail::dense_coideal(in, cf);
                            auto ex = build_expectation(in.h, a, cfg.seed);
                            auto g = positivity_check(in.h, ex);
                            auto cp = complete_positivity_check(in.h, ex, cfg.seed);
                            ck.add(tag + "phi_gram_psd:" + cf.name, g.psd,
                                   Json{{"min_eig", g.min_eig}});
                            ck.add(tag + "completely_positive:" + cf.name, cp.psd,
                                   Json{{"min_eig", cp.min_eig}});
                        }
                    } else {
                        int deg = cfg.cutoff > 0 ? cfg.cutoff : in.pf.cutoff;
                        for (const auto& cf : detail::need_coideals(in)) {
                            auto gens = detail::presented_gens(in, cf);
                            auto d = decide_truncated(in.pf.p, gens, deg, cfg.seed);
                            Json info;
                            info["verdict"] = d.verdict;
                            info["window"] = d.window;
                            info["min_eig"] = d.gram_psd.min_eig;
                            if (d.verdict == "inconclusive")
                                ck.undecided(tag + "positive:" + cf.name,
                                             Json{{"reason", d.reason}});
                            else {
                                if (!d.positive) info["witness"] = json_poly(d.witness);
                                ck.add(tag + "positive:" + cf.name, d.positive, std::move(info));
                            }
                        }
                    }
                } else if (cmd == "decide-expected") {
                    if (!in.presented) {
                        for (const auto& cf : detail::need_coideals(in)) {
                            auto a = detail::dense_coideal(in, cf);
                            auto dec = decide_expected(in.h, a, cfg.seed);
                            Json d;
                            d["positive"] = dec.positive;
                            d["s2_invariant"] = dec.s2.invariant;
                            d["min_eig"] = dec.gram.min_eig;
                            if (!dec.positive && dec.witness.size() > 0) {
                                d["witness"] = json_vector(dec.witness);
                                d["witness_value"] = dec.witness_value;
                            }
                            ck.add(tag + "biconditional:" + cf.name, dec.theorem_holds,
                                   std::move(d));
                        }
                    } else {
                        auto ladder = detail::ladder_from(in.pf.cutoff, cfg.cutoff);
                        for (const auto& cf : detail::need_coideals(in)) {
                            auto gens = detail::presented_gens(in, cf);
                            auto d = decide_presented(in.pf.p, gens, ladder, cfg.seed);
                            Json info;
                            info["verdict"] = d.verdict;
                            info["degree"] = d.degree;
                            info["window"] = d.window;
                            info["s2_invariant"] = d.s2_invariant;
                            info["positive"] = d.positive;
                            if (!d.witness.empty()) {
                                info["witness"] = json_poly(d.witness);
                                info["min_eig"] = d.gram_psd.min_eig;
                            }
                            if (!d.conclusive)
                                ck.undecided(tag + "biconditional:" + cf.name,
                                             Json{{"reason", d.reason}, {"degree", d.degree}});
                            else
                                ck.add(tag + "biconditional:" + cf.name,
                                       d.positive == d.s2_invariant, std::move(info));
                        }
                    }
                } else if (cmd == "fourier") {
                    detail::require_dense(in, cmd);
                    for (const auto& cf : detail::need_coideals(in)) {
                        auto a = detail::dense_coideal(in, cf);
                        auto ex = build_expectation(in.h, a, cfg.seed);
                        double t = etol(in.h.tol);
                        auto f1 = fourier(in.h, ex, in.h.unit);
                        auto hc = coalgebra_integral(ex.qt.c, cfg.seed);
                        double gap = max_abs(Vector((f1.coords - hc.coords).transpose()));
                        ck.add(tag + "unit_to_integral:" + cf.name, gap <= t,
                               Json{{"gap", gap}});
                        ck.add(tag + "welldefined:" + cf.name, f1.welldef <= t,
                               Json{{"residual", f1.welldef}});
                        auto rng = seeded_rng(cfg.seed + 11);
                        Vector x = random_vector(rng, in.h.dim), y = random_vector(rng, in.h.dim);
                        RowVec lhs = fourier(in.h, ex, Vector(x + Complex(0, 2) * y)).coords;
                        RowVec rhs = fourier(in.h, ex, x).coords +
                                     Complex(0, 2) * fourier(in.h, ex, y).coords;
                        double lin = max_abs(Vector((lhs - rhs).transpose()));
                        ck.add(tag + "linear:" + cf.name, lin <= t, Json{{"residual", lin}});
                    }
                } else if (cmd == "plancherel") {
                    detail::require_dense(in, cmd);
                    for (const auto& cf : detail::need_coideals(in)) {
                        auto a = detail::dense_coideal(in, cf);
                        auto ex = build_expectation(in.h, a, cfg.seed);
                        double t = cfg.tol > 0 ? cfg.tol : 1e-8;
                        auto pr = plancherel_check(in.h, ex, cfg.seed + 7, 20, t);
                        ck.add(tag + "plancherel:" + cf.name, pr.pass,
                               Json{{"max_gap", pr.max_gap}, {"pairs", pr.pairs}});
                        if (ex.qt.star_descends) {
                            auto tp = theta_positive(in.h, ex.qt);
                            ck.add(tag + "theta_psd:" + cf.name, tp.psd,
                                   Json{{"min_eig", tp.min_eig}});
                        }
                    }
                } else if (cmd == "cotensor") {
                    detail::require_dense(in, cmd);
                    for (const auto& cf : detail::need_coideals(in)) {
                        auto a = detail::dense_coideal(in, cf);
                        auto qt = quotient_coalgebra(in.h, a, cfg.seed);
                        auto ct = cotensor(in.h, qt, trivial_comodule(qt));
                        auto inv = invariants(in.h, qt);
                        bool eq = ct.dim() == inv.dim() && subspace_equal(ct, inv);
                        ck.add(tag + "trivial_comodule:" + cf.name, eq,
                               Json{{"dim", ct.dim()}, {"dim_invariants", inv.dim()}});
                        auto full = cotensor(in.h, qt, coregular_comodule(qt));
                        ck.add(tag + "coregular:" + cf.name, full.dim() == in.h.dim,
                               Json{{"dim", full.dim()}});
                    }
                } else if (cmd == "adjunction") {
                    detail::require_dense(in, cmd);
                    for (const auto& cf : detail::need_coideals(in)) {
                        auto a = detail::dense_coideal(in, cf);
                        auto ra = adjunction_check(in.h, a, equiv_coideal(in.h, a), cfg.seed);
                        ck.add(tag + "module_a:" + cf.name, ra.unit_iso,
                               Json{{"dim_cotensor", ra.dim_cotensor},
                                    {"residual", ra.comparison_residual}});
                        auto rh = adjunction_check(in.h, a, equiv_regular(in.h, a), cfg.seed);
                        ck.add(tag + "module_h:" + cf.name, rh.unit_iso,
                               Json{{"dim_cotensor", rh.dim_cotensor},
                                    {"residual", rh.comparison_residual}});
                    }
                } else if (cmd == "flatness") {
                    detail::require_dense(in, cmd);
                    for (const auto& cf : detail::need_coideals(in)) {
                        auto a = detail::dense_coideal(in, cf);
                        auto sp = flatness_spotcheck(in.h, a, cfg.seed, 5);
                        ck.add(tag + "spotcheck:" + cf.name,
                               sp.free_rank && sp.canonical_bijective && sp.module_injectivity,
                               Json{{"dim_balanced", sp.dim_balanced}, {"samples", sp.samples}});
                        for (bool left : {true, false}) {
                            auto fb = flatness_battery(in.h, a, left, cfg.seed);
                            Json d;
                            d["dim_c"] = fb.dim_c;
                            d["counit_tensor"] = fb.dim_counit_tensor;
                            Json items = Json::array();
                            for (const auto& it : fb.items)
                                items.push_back(Json{{"name", it.name},
                                                     {"injective", it.injective},
                                                     {"dim_src", it.dim_src},
                                                     {"dim_dst", it.dim_dst}});
                            d["items"] = items;
                            ck.add(tag + (left ? "battery_left:" : "battery_right:") + cf.name,
                                   fb.pass, std::move(d));
                        }
                    }
                } else {
                    throw InvalidInput("unknown command: " + cmd);
                }
            }
        }
    } catch (const InvalidInput& e) {
        rep["error"] = e.what();
        exit_input = 1;
    } catch (const CutoffExceeded& e) {
        rep["error"] = e.what();
        ck.inconclusive = true;
    } catch (const Error& e) {
        rep["error"] = e.what();
        exit_theorem = 2;
    }

    rep["checks"] = ck.list;
    if (!data.empty()) rep["data"] = data;
    rep["pass"] = ck.all_pass && exit_input == 0 && exit_theorem == 0;
    rep["inconclusive"] = ck.inconclusive;

    if (exit_input)
        rr.exit = 1;
    else if (exit_theorem || !ck.all_pass)
        rr.exit = 2;
    else if (ck.inconclusive)
        rr.exit = 3;
    else
        rr.exit = 0;

    if (!cfg.out.empty()) save_json(cfg.out, rr.report);
    return rr;
}

} // namespace cqg
