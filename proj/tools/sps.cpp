// sps: command-line front end
//
//   sps <subcommand> --config FILE [--engine analytic|numeric|both] [--out DIR]
//
// Exit status: 0 success, 1 engine disagreement or invariant violation,
// 2 usage/config/domain error, 3 numerical failure, 4 I/O failure.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sps/commands.hpp"
#include "sps/config.hpp"
#include "sps/errors.hpp"

namespace {

struct Args {
    std::string config;
    std::string engine;
    std::string out{"."};
    std::string figure;
};

void add_common(CLI::App* cmd, Args& args) {
    cmd->add_option("--config", args.config, "run configuration file")->required();
    cmd->add_option("--engine", args.engine, "analytic, numeric or both (overrides the config)")
        ->check(CLI::IsMember({"analytic", "numeric", "both"}));
    cmd->add_option("--out", args.out, "output directory");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Squeezed phonon reservoir of a bichromatically driven quantum dot"};
    app.require_subcommand(1);
    Args args;
    const std::pair<const char*, const char*> commands[] = {
        {"rates", "reservoir rates gamma_s, gamma_n, gamma_m"},
        {"squeezing", "squeezed-field picture N, |M|, Ns, Nb"},
        {"decay", "Bloch-vector trajectory"},
        {"steady", "stationary Bloch vector and dressed populations"},
        {"spectrum", "incoherent fluorescence spectrum"},
        {"sweep", "steady state over a swept parameter"},
    };
    for (const auto& [name, help] : commands) {
        add_common(app.add_subcommand(name, help), args);
    }
    auto* figure = app.add_subcommand("figure", "figure datasets");
    add_common(figure, args);
    figure->add_option("name", args.figure, "fig3, fig4 or fig5")
        ->required()
        ->check(CLI::IsMember({"fig3", "fig4", "fig5"}));

    CLI11_PARSE(app, argc, argv);

    try {
        sps::CommandRequest request;
        request.name = app.get_subcommands().front()->get_name();
        if (!args.figure.empty()) {
            request.figure = args.figure;
        }
        if (!args.engine.empty()) {
            request.engine = sps::parse_engine(args.engine);
        }
        request.out_dir = args.out;
        const auto config = sps::load_config(args.config);
        const auto outcome = sps::run_subcommand(request, config);
        for (const auto& w : outcome.warnings) {
            std::cerr << "warning: " << w << '\n';
        }
        for (const auto& f : outcome.files) {
            std::cout << f.string() << '\n';
        }
        if (outcome.exit_status != 0) {
            std::cerr << "error: engines disagree beyond tolerance (see comparison report)\n";
        }
        return outcome.exit_status;
    } catch (const sps::InvariantError& e) {
        std::cerr << "invariant violated: " << e.what() << '\n';
        return 1;
    } catch (const sps::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const sps::DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return 2;
    } catch (const sps::PreconditionError& e) {
        std::cerr << "precondition failed: " << e.what() << '\n';
        return 2;
    } catch (const sps::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const sps::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 4;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 4;
    }
}
