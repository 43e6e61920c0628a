#include <CLI11.hpp>
#include <iostream>

#include "rmoduli/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"graph complex and fundamental group of moduli of sigma-invariant genus-zero curves"};
    app.require_subcommand(1);

    rmoduli::RunConfig cfg;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--n", cfg.n, "number of labels (>= 3)")->required();
        cmd->add_option("--sigma", cfg.sigma, "involution, e.g. \"id\" or \"(1 2)(3 4)\"");
        cmd->add_option("--coeff", cfg.coeff, "coefficients: z2 | z-experimental")
            ->check(CLI::IsMember({"z2", "z-experimental"}));
        cmd->add_option("--output", cfg.output, "output format: text | json | dot")
            ->check(CLI::IsMember({"text", "json", "dot"}));
        cmd->add_option("--cache-dir", cfg.cache_dir, "poset cache directory (default $RMODULI_CACHE)");
        cmd->add_flag("--no-cache", cfg.no_cache, "neither read nor write the poset cache");
        cmd->add_flag("--verify", cfg.verify, "force del^2 and relation-closure checks");
        cmd->add_option("--threads", cfg.threads, "worker threads (0 = auto)");
        cmd->add_option("--dump-matrices", cfg.dump_matrices, "write boundary matrices (json + sms) here");
    };
    add_common(app.add_subcommand("enumerate", "enumerate strata and coverings"));
    add_common(app.add_subcommand("homology", "mod-2 Betti numbers of the graph complex"));
    add_common(app.add_subcommand("pi1", "wall-crossing presentation and abelianization"));
    add_common(app.add_subcommand("poset", "emit the stratification poset as DOT"));

    CLI11_PARSE(app, argc, argv);
    cfg.command = app.get_subcommands().front()->get_name();
    return rmoduli::run(cfg, std::cout, std::cerr);
}
