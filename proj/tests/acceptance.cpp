// Acceptance gate: one line per criterion, exit 0 only when every criterion
// passes.  Each criterion re-derives its expected values from independent
// oracles (group tables, coset averaging, classical dimension counts) rather
// than from the code under test.

#include <cqg/cli.hpp>
#include <cqg/coideal.hpp>
#include <cqg/corpus.hpp>
#include <cqg/expectation.hpp>
#include <cqg/haar.hpp>
#include <cqg/presented.hpp>
#include <cqg/suq2.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace cqg;

namespace {

int g_failures = 0;

void criterion(int n, const std::string& title, const std::function<void()>& body) {
    std::string detail;
    bool ok = true;
    try {
        body();
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    if (ok)
        std::printf("[PASS] criterion %2d: %s\n", n, title.c_str());
    else {
        std::printf("[FAIL] criterion %2d: %s -- %s\n", n, title.c_str(), detail.c_str());
        ++g_failures;
    }
}

void require(bool cond, const std::string& what) {
    if (!cond) throw std::runtime_error(what);
}

std::vector<GroupTable> corpus_groups() {
    return {cyclic_group(2), cyclic_group(3), cyclic_group(4), symmetric_s3(), dihedral_d4()};
}

struct Instance {
    std::string tag;
    FiniteHopfStar h;
    std::vector<Subspace> coideals;
};

/** Every dense CQG corpus entry with its coideals (Sweedler excluded). */
std::vector<Instance> dense_instances() {
    std::vector<Instance> out;
    for (const auto& g : corpus_groups()) {
        Instance fn{"O(" + g.name + ")", function_algebra(g), {}};
        Instance gr{"C[" + g.name + "]", group_algebra(g), {}};
        for (const auto& sub : all_subgroups(g)) {
            fn.coideals.push_back(Subspace::span(coset_coideal(g, sub), fn.h.tol));
            gr.coideals.push_back(Subspace::span(subgroup_coideal(g, sub), gr.h.tol));
        }
        out.push_back(std::move(fn));
        out.push_back(std::move(gr));
    }
    Instance kp{"kac-paljutkin", kac_paljutkin(), {}};
    std::vector<Subspace> seen{Subspace::span({kp.h.unit}, kp.h.tol)};
    kp.coideals.push_back(seen[0]);
    for (int i = 0; i < kp.h.dim; ++i) {
        auto cl = coideal_closure(kp.h, {Vector::Unit(kp.h.dim, i)});
        bool fresh = true;
        for (const auto& prev : seen)
            if (prev.dim() == cl.dim() && subspace_equal(prev, cl)) fresh = false;
        if (!fresh) continue;
        seen.push_back(cl);
        kp.coideals.push_back(cl);
    }
    kp.coideals.push_back(
        coideal_closure(kp.h, {Vector::Unit(kp.h.dim, 1), Vector::Unit(kp.h.dim, 2)}));
    out.push_back(std::move(kp));
    return out;
}

} // namespace

int main() {
    criterion(1, "axiom suite on the corpus; Sweedler rejected at the Haar stage", [] {
        for (const auto& g : corpus_groups()) {
            auto fr = verify_hopf(function_algebra(g));
            require(fr.pass && fr.worst() <= 1e-9, "function algebra axioms: " + g.name);
            auto gr = verify_hopf(group_algebra(g));
            require(gr.pass && gr.worst() <= 1e-9, "group algebra axioms: " + g.name);
        }
        auto kp = verify_hopf(kac_paljutkin());
        require(kp.pass && kp.worst() <= 1e-9, "kac-paljutkin axioms");

        auto sw = sweedler_h4();
        require(verify_hopf(sw).pass, "sweedler should satisfy the axioms");
        bool rejected = false;
        try {
            haar_state(sw);
        } catch (const NotCosemisimple&) {
            rejected = true;
        }
        require(rejected, "sweedler must be rejected when the Haar state is built");
    });

    criterion(2, "Haar states: uniform measure, identity coefficient, faithful", [] {
        for (const auto& g : corpus_groups()) {
            auto fh = haar_state(function_algebra(g));
            for (int i = 0; i < g.order; ++i)
                require(std::abs(fh.state.coords(i) - Complex(1.0 / g.order)) <= 1e-12,
                        "uniform measure on O(" + g.name + ")");
            auto gh = haar_state(group_algebra(g));
            for (int i = 0; i < g.order; ++i) {
                Complex want = i == g.identity ? 1.0 : 0.0;
                require(std::abs(gh.state.coords(i) - want) <= 1e-12,
                        "identity coefficient on C[" + g.name + "]");
            }
        }
        auto kh = haar_state(kac_paljutkin());
        require(kh.positive && kh.faithful && kh.min_gram_eig > 0.0,
                "kac-paljutkin Haar must be faithful");
    });

    criterion(3, "Galois bijection on all six S3 subgroups, with order reversal", [] {
        auto g = symmetric_s3();
        auto h = function_algebra(g);
        auto subs = all_subgroups(g);
        require(subs.size() == 6, "S3 has six subgroups");
        for (const auto& sub : subs) {
            auto a = Subspace::span(coset_coideal(g, sub), h.tol);
            auto rt = galois_roundtrip(h, a);
            require(rt.subalgebra_recovered && rt.quotient_recovered,
                    "round trip for |K| = " + std::to_string(sub.size()));
            require(rt.dim_c == static_cast<int>(sub.size()), "dim C must equal |K|");
            require(rt.dim_a * rt.dim_c == 6, "dim A * dim C must equal |G|");
            auto qt = quotient_coalgebra(h, a);
            auto rc = galois_roundtrip_coalg(h, qt);
            require(rc.quotient_recovered, "coalgebra-side round trip");
        }
        // order reversal on {e} < <(123)> < S3
        std::vector<int> trivial_sub, alternating, full;
        for (const auto& sub : subs) {
            if (sub.size() == 1) trivial_sub = sub;
            if (sub.size() == 3) alternating = sub;
            if (sub.size() == 6) full = sub;
        }
        auto a_triv = Subspace::span(coset_coideal(g, trivial_sub), h.tol); // all of O(G)
        auto a_alt = Subspace::span(coset_coideal(g, alternating), h.tol);
        auto a_full = Subspace::span(coset_coideal(g, full), h.tol); // constants
        require(a_triv.dim() == 6 && a_alt.dim() == 2 && a_full.dim() == 1,
                "chain dimensions 6 > 2 > 1");
        require(subspace_contains(a_triv, a_alt) && subspace_contains(a_alt, a_full),
                "subalgebras reverse the subgroup inclusions");
        auto k_triv = quotient_coalgebra(h, a_triv).kernel;
        auto k_alt = quotient_coalgebra(h, a_alt).kernel;
        auto k_full = quotient_coalgebra(h, a_full).kernel;
        require(k_triv.dim() == 5 && k_alt.dim() == 3 && k_full.dim() == 0,
                "kernel dimensions 5 > 3 > 0");
        require(subspace_contains(k_triv, k_alt), "kernels reverse the same way");
    });

    criterion(4, "expectation invariants everywhere; coset-averaging oracle", [] {
        int checked = 0;
        for (const auto& inst : dense_instances())
            for (const auto& a : inst.coideals) {
                auto ex = build_expectation(inst.h, a);
                bool ok = ex.idempotent <= 1e-9 && ex.unital <= 1e-9 &&
                          ex.range_residual <= 1e-9 && ex.bimodule <= 1e-9 &&
                          ex.haar_compat <= 1e-9 && ex.range_is_subalgebra;
                require(ok, "expectation invariants on " + inst.tag);
                ++checked;
            }
        require(checked >= 10, "need at least ten coideal instances");

        for (const auto& g : corpus_groups())
            for (const auto& sub : all_subgroups(g)) {
                // O(G): E averages each delta over its right coset K x
                auto h = function_algebra(g);
                auto a = Subspace::span(coset_coideal(g, sub), h.tol);
                auto ex = build_expectation(h, a);
                Matrix oracle = Matrix::Zero(g.order, g.order);
                for (int x = 0; x < g.order; ++x)
                    for (int k : sub) oracle(g.mul[k][x], x) += 1.0 / double(sub.size());
                require(max_abs(Matrix(ex.map - oracle)) <= 1e-12,
                        "coset averaging on O(" + g.name + ")");
                // C[G]: E keeps the subgroup coefficients and kills the rest
                auto hg = group_algebra(g);
                auto ag = Subspace::span(subgroup_coideal(g, sub), hg.tol);
                auto exg = build_expectation(hg, ag);
                Matrix og = Matrix::Zero(g.order, g.order);
                for (int k : sub) og(k, k) = 1.0;
                require(max_abs(Matrix(exg.map - og)) <= 1e-12,
                        "subgroup projection on C[" + g.name + "]");
            }
    });

    criterion(5, "positivity biconditional on every finite corpus coideal", [] {
        for (const auto& inst : dense_instances())
            for (const auto& a : inst.coideals) {
                auto dec = decide_expected(inst.h, a);
                require(dec.s2.invariant, "S^2-invariance on " + inst.tag);
                require(dec.gram.psd && dec.gram.min_eig >= -1e-9,
                        "phi Gram PSD on " + inst.tag);
                auto cp = complete_positivity_check(inst.h, dec.expectation);
                require(cp.psd && cp.min_eig >= -1e-9, "complete positivity on " + inst.tag);
                require(dec.positive && dec.theorem_holds, "verdicts must agree on " + inst.tag);
            }
    });

    criterion(6, "Podles spheres at q = 1/2, cutoff 4: invariant vs witnessed", [] {
        auto p = suq2(0.5);
        auto std_gens = podles_standard(p, 0.5).gens;
        auto ds = decide_truncated(p, std_gens, 4);
        require(ds.conclusive && ds.verdict == "positive", "standard sphere must be positive");
        require(ds.s2_invariant, "standard sphere must be S^2-invariant");
        require(ds.gram_psd.psd && ds.gram_psd.min_eig >= -1e-8,
                "standard sphere Gram PSD within 1e-8");

        auto ns_gens = podles_nonstandard(p, 0.5, 0.0).gens;
        auto dn = decide_truncated(p, ns_gens, 4);
        require(dn.conclusive && dn.verdict == "not_positive",
                "non-standard sphere must fail positivity");
        require(!dn.s2_invariant, "non-standard sphere must not be S^2-invariant");
        require(!dn.witness.empty(), "a concrete witness is required");
        require(dn.gram_psd.min_eig <= -1e-6, "witness value phi(x* x) <= -1e-6");
    });

    criterion(7, "Plancherel identity, Fourier of the unit, theta positivity", [] {
        for (const auto& inst : dense_instances())
            for (const auto& a : inst.coideals) {
                auto ex = build_expectation(inst.h, a);
                auto pr = plancherel_check(inst.h, ex, 7, 20, 1e-8);
                require(pr.pass && pr.pairs == 20, "plancherel pairs on " + inst.tag);
                auto f1 = fourier(inst.h, ex, inst.h.unit);
                auto hc = coalgebra_integral(ex.qt.c);
                require(max_abs(Vector((f1.coords - hc.coords).transpose())) <= 1e-9,
                        "Fourier of 1 must be the unital integral on " + inst.tag);
                if (ex.qt.star_descends) {
                    auto tp = theta_positive(inst.h, ex.qt);
                    require(tp.psd, "theta must be positive on " + inst.tag);
                }
            }
    });

    criterion(8, "cotensor invariants and the adjunction module battery", [] {
        auto run_cotensor = [](const FiniteHopfStar& h, const Subspace& a,
                               const std::string& tag) {
            auto qt = quotient_coalgebra(h, a);
            auto ct = cotensor(h, qt, trivial_comodule(qt));
            auto inv = invariants(h, qt);
            require(ct.dim() == inv.dim() && subspace_equal(ct, inv),
                    "cotensor with the trivial comodule on " + tag);
        };
        for (const auto& inst : dense_instances())
            for (const auto& a : inst.coideals) run_cotensor(inst.h, a, inst.tag);
        {
            auto sw = sweedler_h4();
            run_cotensor(sw, Subspace::span({sw.unit, Vector::Unit(4, 1)}, sw.tol), "sweedler");
        }

        auto g = symmetric_s3();
        auto h = function_algebra(g);
        std::vector<int> alternating;
        for (const auto& sub : all_subgroups(g))
            if (sub.size() == 3) alternating = sub;
        auto a = Subspace::span(coset_coideal(g, alternating), h.tol);

        auto ra = adjunction_check(h, a, equiv_coideal(h, a));
        require(ra.unit_iso && ra.dim_cotensor == a.dim(), "module A");
        auto rh = adjunction_check(h, a, equiv_regular(h, a));
        require(rh.unit_iso && rh.dim_cotensor == h.dim, "module H");

        auto pw = peter_weyl(h);
        std::vector<int> dims;
        for (const auto& blk : pw.blocks) {
            Comodule v;
            v.parent = &h;
            v.dim = blk.n;
            v.coaction.assign(blk.n, Matrix::Zero(blk.n, h.dim));
            for (int x = 0; x < blk.n; ++x)
                for (int w = 0; w < blk.n; ++w)
                    for (int i = 0; i < h.dim; ++i)
                        v.coaction[x](w, i) = blk.coeffs.col(w * blk.n + x)(i);
            auto rv = adjunction_check(h, a, equiv_tensor(h, a, v));
            require(rv.unit_iso, "module V (x) A for a simple block");
            require(rv.dim_cotensor == 2 * blk.n, "induced dimension [G:K] dim V");
            dims.push_back(rv.dim_cotensor);
        }
        std::sort(dims.begin(), dims.end());
        require((dims == std::vector<int>{2, 2, 4}), "block battery dimensions 2, 2, 4");
    });

    criterion(9, "flatness battery on both sides for S3 and Kac-Paljutkin", [] {
        for (const auto& inst : dense_instances()) {
            if (inst.tag != "O(s3)" && inst.tag != "kac-paljutkin") continue;
            for (const auto& a : inst.coideals) {
                auto sp = flatness_spotcheck(inst.h, a);
                require(sp.free_rank && sp.canonical_bijective && sp.module_injectivity,
                        "spot checks on " + inst.tag);
                for (bool left : {true, false}) {
                    auto fb = flatness_battery(inst.h, a, left);
                    require(fb.pass, "battery on " + inst.tag);
                    require(fb.dim_counit_tensor == fb.dim_c,
                            "H (x)_A (A/A+) must have dimension dim C on " + inst.tag);
                    require(fb.items.size() == 8, "battery must contain all eight maps");
                    for (const auto& it : fb.items)
                        require(it.injective, it.name + " stays injective on " + inst.tag);
                }
            }
        }
    });

    criterion(10, "reports byte-reproduce under fixed seed and tolerance", [] {
        namespace fs = std::filesystem;
        fs::path root = fs::temp_directory_path() / "cqg-acceptance-fixtures";
        fs::remove_all(root);
        fs::create_directories(root);
        write_corpus("s3", root.string());
        write_corpus("kac-paljutkin", root.string());
        write_corpus("suq2-q0.5", root.string());

        auto snap = [&](const std::string& cmd, const std::string& name, std::uint64_t seed) {
            RunConfig cfg;
            cfg.command = cmd;
            cfg.args = {(root / name).string()};
            cfg.seed = seed;
            cfg.corpus_root = root.string();
            auto rep = run_command(cfg).report;
            rep.erase("generated_at");
            return rep.dump(2);
        };
        for (auto [cmd, name] : std::vector<std::pair<std::string, std::string>>{
                 {"galois", "s3"},
                 {"plancherel", "kac-paljutkin"},
                 {"flatness", "s3"},
                 {"decide-expected", "suq2-q0.5"}})
            require(snap(cmd, name, 3) == snap(cmd, name, 3),
                    "report for '" + cmd + "' must byte-reproduce");
    });

    if (g_failures == 0) {
        std::printf("acceptance: all 10 criteria pass\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return 1;
}
