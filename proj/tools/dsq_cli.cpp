// Command-line front end: dsq_cli <subcommand> [options]
// Exit status 0 when every check passes, 1 on a failed check, 2 on a usage
// or configuration error.

#include "dsq/cli.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

std::map<std::string, double> parse_tolerances(const std::vector<std::string>& items)
{
    std::map<std::string, double> out;
    for (const auto& it : items) {
        const auto eq = it.find('=');
        if (eq == std::string::npos || eq == 0) throw std::invalid_argument("--tol expects id=value, got '" + it + "'");
        std::size_t used = 0;
        const std::string num = it.substr(eq + 1);
        double v = 0.0;
        try {
            v = std::stod(num, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != num.size()) throw std::invalid_argument("--tol value is not a number in '" + it + "'");
        out[it.substr(0, eq)] = v;
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    dsq::cli::RunConfig cfg;
    std::vector<std::string> tol;

    CLI::App app{"Verification runs for truncated spectral quadruples and finite spectral triples"};
    app.set_config("--config", "", "key=value configuration file mirroring the flags");
    app.add_option("--rm", cfg.rm, "mass parameter R*m");
    app.add_option("--theta", cfg.theta, "time slice");
    app.add_option("--nmax", cfg.nmax, "truncation: levels -nmax+1/2 .. nmax-1/2");
    app.add_option("--margin", cfg.margin, "interior margin in levels");
    app.add_option("--orders", cfg.orders, "expansion order for reconstruct");
    app.add_option("--rho", cfg.rho, "level phase gauge");
    app.add_option("--y", cfg.y, "fiber phase gauge");
    app.add_option("--r2m2", cfg.r2m2, "R^2 m^2 for sl2-classify");
    app.add_option("--lattice", cfg.lattice, "weight lattice: half or integer");
    app.add_option("--m", cfg.m, "finite two-point mass");
    app.add_option("--seed", cfg.seed, "seed for randomized oracle samples");
    app.add_option("--samples", cfg.samples, "random spinor samples for oracle-check");
    app.add_option("--tol", tol, "tolerance override id=value (repeatable)");
    app.add_option("--rm-grid", cfg.rm_grid, "sweep values of rm")->delimiter(',');
    app.add_option("--theta-grid", cfg.theta_grid, "sweep values of theta")->delimiter(',');
    app.add_option("--nmax-grid", cfg.nmax_grid, "sweep values of nmax")->delimiter(',');
    app.add_option("-o,--output", cfg.output, "report path (stdout when omitted)");
    app.add_option("--format", cfg.format, "json or csv");
    app.require_subcommand(1, 1);
    for (const auto& name : dsq::cli::subcommands()) app.add_subcommand(name)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();

    std::string text;
    bool pass = false;
    try {
        cfg.tol_overrides = parse_tolerances(tol);
        dsq::cli::validate_config(cfg);
        if (cfg.subcommand == "sweep") {
            const auto r = dsq::cli::run_sweep(cfg);
            text = cfg.format == "csv" ? r.csv : r.json.dump(2) + "\n";
            pass = r.pass;
        } else {
            const auto r = dsq::cli::run(cfg);
            text = cfg.format == "csv" ? dsq::cli::to_csv(r.checks) : dsq::cli::to_json(r).dump(2) + "\n";
            pass = r.pass();
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (cfg.output.empty())
            std::cout << text;
        else
            dsq::cli::write_atomic(cfg.output, text);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return pass ? 0 : 1;
}
