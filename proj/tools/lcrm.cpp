// Command-line front end: full simulations from a config file, and the
// verification benchmarks.

#include <CLI11.hpp>

#include <iostream>

#include "lcrm/lcrm.hpp"

int main(int argc, char** argv) {
    CLI::App app{"lcrm - front-tracking two-phase flow with soluble surfactant"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* simulate = app.add_subcommand("simulate", "run a simulation from a config file");
    simulate->add_option("config", config_path, "configuration file")->required();

    std::string bench_name;
    std::vector<int> bench_res;
    std::string bench_out = "bench_out";
    bool deterministic = false;
    bool list_only = false;
    double t_end_override = 0.0;
    CLI::App* bench = app.add_subcommand("bench", "run a verification benchmark");
    bench->add_option("name", bench_name, "benchmark name");
    bench->add_option("--res", bench_res, "grid resolution(s)");
    bench->add_option("--out", bench_out, "output directory");
    bench->add_option("--t-end", t_end_override, "override the scenario end time");
    bench->add_flag("--deterministic", deterministic, "single worker, ordered reductions");
    bench->add_flag("--list", list_only, "list available benchmarks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            lcrm::RunConfig cfg = lcrm::parse_config(config_path);
            lcrm::SimulationState st = lcrm::init_state(cfg);
            lcrm::run_simulation(st, &std::cout);
            std::cout << "done: t=" << st.time << " steps=" << st.step_index << "\n";
            return 0;
        }
        if (bench->parsed()) {
            if (list_only) {
                for (const auto& n : lcrm::bench_names()) std::cout << n << "\n";
                return 0;
            }
            if (bench_name.empty()) {
                std::cerr << "bench: a name is required (or --list)\n";
                return 2;
            }
            lcrm::BenchOptions opt;
            opt.resolutions = bench_res;
            opt.out_dir = bench_out;
            opt.deterministic = deterministic;
            opt.t_end_override = t_end_override;
            lcrm::BenchReport rep = lcrm::run_benchmark(bench_name, opt);
            lcrm::write_report(rep, opt.out_dir + "/" + rep.name);
            std::cout << rep.name << ": " << (rep.passed ? "PASS" : "FAIL") << " -- "
                      << rep.detail << "\n";
            return rep.passed ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
