#include "repdyn/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace repdyn;
    CLI::App app{"repdyn: numerical checks for free-group representations into GL(n, R)"};
    app.require_subcommand(1);

    cli::RunConfig config;
    std::string policy = "exhaustive";
    std::size_t samples = 1000;
    std::uint64_t seed = 0;
    double tol = 0.0;

    const char* commands[][2] = {
        {"dominate", "k-domination scan over word spheres"},
        {"spectrum", "normalized Jordan projections, hulls and zero-index containment"},
        {"split", "splitting and growth rates along flow lines"},
        {"affine", "determinant and eigenvalue checks for affine generators"},
        {"flowmetric", "pairwise weighted distances between tree geodesics"},
    };
    std::vector<CLI::App*> subs;
    for (const auto& c : commands) {
        CLI::App* sub = app.add_subcommand(c[0], c[1]);
        sub->add_option("--input", config.input, "input JSON document")->required()->check(CLI::ExistingFile);
        sub->add_option("--k", config.k, "index k")->capture_default_str();
        sub->add_option("--max-length", config.max_length, "largest word length L_max")->capture_default_str();
        sub->add_option("--m-max", config.m_max, "largest sphere radius for cone sampling")->capture_default_str();
        sub->add_option("--window", config.window, "flow-line half width T")->capture_default_str();
        sub->add_option("--tol", tol, "tolerance (command specific default)");
        sub->add_option("--policy", policy, "exhaustive or sampled")
            ->check(CLI::IsMember({"exhaustive", "sampled"}))
            ->capture_default_str();
        sub->add_option("--samples", samples, "words per sphere when sampled")->capture_default_str();
        sub->add_option("--seed", seed, "sampling seed")->capture_default_str();
        sub->add_option("--threads", config.threads, "worker threads (default: REPDYN_THREADS or all cores)");
        sub->add_option("--out-dir", config.out_dir, "directory for report files")->capture_default_str();
        sub->add_flag("--quiet", config.quiet, "suppress the summary line");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kExitUsage;
    }

    for (CLI::App* sub : subs) {
        if (sub->parsed()) {
            config.command = sub->get_name();
            if (sub->count("--tol") > 0) config.tol = tol;
        }
    }
    config.policy = policy == "sampled" ? ScanPolicy::sampled(samples, seed) : ScanPolicy::exhaustive();
    config.policy.seed = seed;
    return cli::run(config);
}
