// pcomb: combine independent weighted P-values into one exact significance.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pcomb/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Exact combined significance of independent weighted P-values"};

    pcomb::RunConfig cfg;
    std::string method = "auto";
    std::string format = "csv";
    std::uint64_t mc_check = 0;
    int precision = 0;

    app.add_option("--input", cfg.input_path, "Input path, or - for stdin")
        ->capture_default_str();
    app.add_option("--format", format, "Input format: csv or doc")
        ->check(CLI::IsMember({"csv", "doc"}))
        ->capture_default_str();
    app.add_option("--method", method, "fisher, good, general, expansion, or auto")
        ->check(CLI::IsMember({"fisher", "good", "general", "expansion", "auto"}))
        ->capture_default_str();
    app.add_option("--eta", cfg.eta, "Clustering threshold for normalized inverse weights")
        ->capture_default_str();
    app.add_option("--order", cfg.order, "Expansion order in weight deviations")
        ->capture_default_str();
    app.add_option("--mc-check", mc_check, "Cross-check with this many Monte Carlo samples");
    app.add_option("--seed", cfg.seed, "Monte Carlo seed")->capture_default_str();
    app.add_option("--precision", precision,
                   "Cross-check with a multiprecision evaluation at this many digits");
    app.add_option("--out", cfg.out_path, "Write the structured report here");
    app.add_option("--verify", cfg.verify_path,
                   "Re-run a structured report and demand a bit-identical combined_p");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e); // --help
        }
        app.exit(e);
        return 2;
    }

    cfg.method_set = app.count("--method") > 0;
    cfg.eta_set = app.count("--eta") > 0;
    cfg.order_set = app.count("--order") > 0;
    cfg.seed_set = app.count("--seed") > 0;
    try {
        cfg.method = pcomb::parse_method(method);
    } catch (const std::exception& e) {
        std::cerr << "pcomb: " << e.what() << "\n";
        return 2;
    }
    cfg.format = format == "doc" ? pcomb::RunConfig::Format::doc : pcomb::RunConfig::Format::csv;
    if (app.count("--mc-check") > 0) {
        cfg.mc_check = mc_check;
    }
    if (app.count("--precision") > 0) {
        cfg.precision_digits = precision;
    }

    return pcomb::run(std::move(cfg), std::cout, std::cerr);
}
