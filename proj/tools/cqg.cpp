#include <cqg/cli.hpp>

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"compact quantum group toolbox: coideal subalgebras, quotient "
                 "coalgebras, expectations, and positivity"};
    app.require_subcommand(0);

    cqg::RunConfig cfg;
    app.add_option("command", cfg.command, "one of: verify haar peterweyl coideal-close "
                                           "quotient invariants galois expectation positivity "
                                           "decide-expected fourier plancherel cotensor "
                                           "adjunction flatness corpus")
        ->required();
    app.add_option("inputs", cfg.args, "corpus directories or .json files "
                                       "(for corpus: build <name|all>)");
    app.add_option("--tol", cfg.tol, "override the stored tolerance (must be > 0)");
    app.add_option("--seed", cfg.seed, "seed for randomized probes (default 0)");
    app.add_option("--cutoff", cfg.cutoff,
                   "degree window for presented inputs (default: stored cutoff, "
                   "with escalation for decide-expected)");
    app.add_option("--out", cfg.out, "also write the report to this path");
    app.add_option("--coideal", cfg.coideal, "restrict to the named coideal");
    app.add_flag("--all-coideals", cfg.all_coideals,
                 "process every coideal in the corpus (the default)");
    app.add_option("--corpus-root", cfg.corpus_root,
                   "destination directory for corpus build (default: corpus)");

    CLI11_PARSE(app, argc, argv);

    if (cfg.tol < 0) {
        std::cerr << "cqg: --tol must be positive\n";
        return 1;
    }
    if (!cfg.coideal.empty() && cfg.all_coideals) {
        std::cerr << "cqg: --coideal and --all-coideals are mutually exclusive\n";
        return 1;
    }

    auto rr = cqg::run_command(cfg);
    std::cout << rr.report.dump(2) << "\n";
    return rr.exit;
}
