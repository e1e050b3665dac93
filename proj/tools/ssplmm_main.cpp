#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ssplmm/commands.hpp"

namespace {

// exit codes: 0 success, 2 configuration error, 3 numerical failure
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos <= csv.size()) {
        const size_t comma = csv.find(',', pos);
        const std::string tok = csv.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (tok.empty())
            throw ssplmm::ConfigError("empty entry in list '" + csv + "'");
        size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            throw ssplmm::ConfigError("bad number '" + tok + "'");
        }
        if (used != tok.size())
            throw ssplmm::ConfigError("bad number '" + tok + "'");
        out.push_back(v);
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variable step-size SSP linear multistep solver"};
    app.require_subcommand(1);

    std::string config_file;
    std::string method_str = "msv-32";
    std::string problem = "advection";
    int cells = 256;
    double tfinal = 1.0;
    double h1 = 0.1;
    double gamma = 0.9;
    double cfl_fe = 0.5;
    bool no_conditions = false;
    bool snapshots = false;
    std::string out_dir = ".";

    auto add_run_flags = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_file, "key=value config file (flags override)");
        cmd->add_option("--problem", problem, "advection | burgers | blastwave");
        cmd->add_option("--method", method_str,
                        "ssprk2-only | msv-32 | msv-42 | msv-52 | msv-62 | msv-43 | msv-53");
        cmd->add_option("--cells", cells, "number of grid cells");
        cmd->add_option("--tfinal", tfinal, "final time");
        cmd->add_option("--h1", h1, "initial step size");
        cmd->add_option("--gamma", gamma, "starting-step safety factor");
        cmd->add_option("--cfl-fe", cfl_fe, "forward Euler CFL number");
        cmd->add_flag("--no-conditions", no_conditions,
                      "skip the third-order admissibility conditions");
        cmd->add_option("--out", out_dir, "output directory (run) or file (convergence)");
        cmd->add_flag("--snapshots", snapshots, "also write solution.csv");
    };

    CLI::App* run = app.add_subcommand("run", "integrate one configured problem");
    add_run_flags(run);

    CLI::App* conv = app.add_subcommand("convergence", "L1 error table over resolutions");
    add_run_flags(conv);
    std::string resolutions_str = "128,256,512,1024,2048";
    conv->add_option("--resolutions", resolutions_str, "comma-separated cell counts");

    CLI::App* cert = app.add_subcommand("certificate", "optimal SSP coefficient certificate");
    int cert_k = 4;
    int cert_p = 3;
    std::string steps_str;
    std::string omegas_str;
    cert->add_option("--k", cert_k, "number of steps");
    cert->add_option("--p", cert_p, "order (2 or 3)");
    cert->add_option("--steps", steps_str, "k recent step sizes, oldest first");
    cert->add_option("--omegas", omegas_str, "k step-size ratios (last must be 1)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cert->parsed()) {
            ssplmm::RatioHistory ratios = ssplmm::RatioHistory::fixed_step(cert_k);
            if (!steps_str.empty())
                ratios = ssplmm::build_ratio_history(parse_double_list(steps_str));
            else if (!omegas_str.empty())
                ratios = ssplmm::RatioHistory::from_omegas(parse_double_list(omegas_str));
            if (ratios.k() != cert_k)
                throw ssplmm::ConfigError("--k disagrees with the given steps/ratios");
            ssplmm::cmd_certificate(ratios, cert_p, std::cout);
            return 0;
        }

        ssplmm::RunConfig rc;
        if (!config_file.empty())
            rc = ssplmm::load_config_file(config_file);
        CLI::App* cmd = run->parsed() ? run : conv;
        if (cmd->count("--problem"))
            rc.problem = problem;
        if (cmd->count("--method"))
            rc.method = ssplmm::method_from_string(method_str);
        if (cmd->count("--cells"))
            rc.n_cells = cells;
        if (cmd->count("--tfinal"))
            rc.t_final = tfinal;
        if (cmd->count("--h1"))
            rc.h1 = h1;
        if (cmd->count("--gamma"))
            rc.gamma = gamma;
        if (cmd->count("--cfl-fe"))
            rc.cfl_fe = cfl_fe;
        if (no_conditions)
            rc.enforce_conditions = false;
        if (cmd->count("--snapshots"))
            rc.write_snapshots = true;

        if (run->parsed()) {
            if (run->count("--out"))
                rc.out_dir = out_dir;
            ssplmm::cmd_run(rc, std::cout);
            return 0;
        }

        std::vector<int> resolutions;
        for (double v : parse_double_list(resolutions_str))
            resolutions.push_back(static_cast<int>(v));
        std::string out_file;
        if (conv->count("--out"))
            out_file = out_dir;
        ssplmm::cmd_convergence(rc, resolutions, out_file, std::cout);
        return 0;
    } catch (const ssplmm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ssplmm::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}
