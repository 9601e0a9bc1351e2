// Command-line front end for the embezzlement laboratory.

#include "embz/cli.hpp"

#include <CLI11.hpp>

int main(int argc, char** argv) {
    CLI::App app{"embzlab: entanglement embezzlement protocols, circuit costs, and lower bounds"};
    app.require_subcommand(1);

    embz::cli::RunConfig cfg;
    std::string format = "csv";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--family", cfg.family, "embezzling family: vdh | itp");
        cmd->add_option("--N", cfg.N, "catalyst Schmidt rank(s)")->delimiter(',');
        cmd->add_option("--d", cfg.d, "local site dimension");
        cmd->add_option("--d-e", cfg.d_e, "embezzling system dimension (default d)");
        cmd->add_option("--epsilon", cfg.epsilon, "precision value(s)")->delimiter(',');
        cmd->add_option("--delta-S", cfg.delta_S, "embezzled entropy value(s)")->delimiter(',');
        cmd->add_option("--c", cfg.c, "SIE constant");
        cmd->add_option("--k", cfg.k, "interaction locality");
        cmd->add_option("--m", cfg.m, "coarse-grain cutoff");
        cmd->add_option("--n", cfg.n, "number of catalyst sites / cuts");
        cmd->add_option("--M", cfg.M, "integer precision parameter for the asymptotic bound");
        cmd->add_option("--lambda1", cfg.lambda1, "first block parameter");
        cmd->add_option("--lambda2", cfg.lambda2, "second block parameter");
        cmd->add_option("--formula", cfg.formula,
                        "fannes | finite_n | asymptotic | klocal | coarse_grained | itp_asymptotic");
        cmd->add_option("--suite", cfg.suite, "sie | fannes | norms | chain | all");
        cmd->add_option("--trials", cfg.trials, "number of randomized trials");
        cmd->add_option("--seed", cfg.seed, "RNG seed (all randomness flows from it)");
        cmd->add_option("--substeps", cfg.substeps, "trotter substeps per slice");
        cmd->add_option("--log-base", cfg.log_base, "logarithm base for entropic quantities");
        cmd->add_option("--out", cfg.out_path, "output file (default stdout)");
        cmd->add_option("--format", format, "csv | structured_text");
    };

    for (const char* name : {"simulate", "bounds", "sweep", "verify", "compile"})
        add_common(app.add_subcommand(name));

    CLI11_PARSE(app, argc, argv);

    cfg.command = app.get_subcommands().front()->get_name();
    if (format == "structured_text") {
        cfg.format = embz::cli::Format::structured_text;
    } else if (format != "csv") {
        std::cerr << "error: unknown format " << format << "\n";
        return 1;
    }
    return embz::cli::run(cfg);
}
