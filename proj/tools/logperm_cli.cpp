#include <CLI11.hpp>

#include "logperm/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Statistics of random permutations with logarithmic cycle weights"};
    app.require_subcommand(1);

    logperm::RunConfig config;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--k", config.k, "log-power exponent k >= 1");
        sub->add_option("--lower-coeffs", config.lower_coeffs,
                        "lower-order coefficients a_0..a_{k-1}");
        sub->add_option("--format", config.format, "csv or json");
        sub->add_option("--out", config.out, "output file (default stdout)");
        sub->add_option("--workers", config.workers,
                        "thread cap; affects wall time only, never output bytes");
    };

    CLI::App* hn = app.add_subcommand("hn", "exact normalization constants h_0..h_n");
    hn->add_option("--n", config.n)->required();
    add_common(hn);

    CLI::App* saddle = app.add_subcommand("saddle", "fit the singular polynomial and solve the saddle equation");
    saddle->add_option("--n", config.n)->required();
    saddle->add_option("--v", config.v);
    add_common(saddle);

    CLI::App* compare = app.add_subcommand("compare", "exact vs asymptotic h_n across sizes");
    compare->add_option("--n-list", config.n_list, "comma-separated sizes")->required();
    compare->add_option("--v", config.v);
    add_common(compare);

    CLI::App* dist = app.add_subcommand("dist", "exact distribution tables");
    dist->add_option("--dist", config.dist, "l1, k0n or joint")->required();
    dist->add_option("--n", config.n)->required();
    dist->add_option("--b", config.b, "joint: number of leading counts");
    add_common(dist);

    CLI::App* tvd = app.add_subcommand("tvd", "total variation distance to the Poisson product");
    tvd->add_option("--n", config.n)->required();
    tvd->add_option("--b", config.b)->required();
    add_common(tvd);

    CLI::App* sample = app.add_subcommand("sample", "draw cycle types");
    sample->add_option("--n", config.n)->required();
    sample->add_option("--samples", config.samples)->required();
    sample->add_option("--seed", config.seed);
    add_common(sample);

    CLI::App* shape = app.add_subcommand("shape", "rescaled Young diagram profile statistics");
    shape->add_option("--n", config.n)->required();
    shape->add_option("--samples", config.samples)->required();
    shape->add_option("--seed", config.seed);
    shape->add_option("--grid", config.grid, "comma-separated x values (default 0.5,1,2)");
    add_common(shape);

    CLI::App* k0n = app.add_subcommand("k0n", "total cycle count against the normal limit");
    k0n->add_option("--n", config.n)->required();
    k0n->add_option("--samples", config.samples)->required();
    k0n->add_option("--seed", config.seed);
    add_common(k0n);

    CLI::App* l1 = app.add_subcommand("l1", "rescaled first cycle length against the unit exponential");
    l1->add_option("--n", config.n)->required();
    l1->add_option("--samples", config.samples)->required();
    l1->add_option("--seed", config.seed);
    add_common(l1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    config.command = app.get_subcommands().front()->get_name();
    return logperm::run(config);
}
