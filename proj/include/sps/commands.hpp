// commands.hpp: Subcommands of the sps tool
//
// Each subcommand writes <name>.csv and a <name>.meta key=value sidecar into the
// output directory. With engine "both" the numeric result is written next to the
// analytic one as <name>_numeric.csv together with <name>_comparison.txt.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sps/config.hpp"

namespace sps {

// Engine agreement required by `--engine both`.
inline constexpr double kSpectrumAgreementTol = 1e-3;
inline constexpr double kDynamicsAgreementTol = 1e-8;

struct CommandRequest {
    std::string name;                    // rates, squeezing, decay, steady, spectrum, sweep, figure
    std::optional<std::string> figure;   // fig3, fig4, fig5 for `figure`
    std::optional<Engine> engine;        // overrides the config's engine
    std::filesystem::path out_dir{"."};
    unsigned max_threads{0};             // 0: hardware concurrency, capped by SPS_THREADS
};

struct CommandOutcome {
    // 0 on success, 1 when an engine comparison exceeded its tolerance.
    int exit_status{0};
    std::vector<std::filesystem::path> files;
    std::vector<std::string> warnings;
};

// Throws ConfigError for unknown names or unusable configs; errors from the
// numerical modules propagate unchanged.
CommandOutcome run_subcommand(const CommandRequest& request, const RunConfig& config);

// min(hardware threads, SPS_THREADS if set, requested if non-zero), at least 1.
unsigned sweep_thread_count(unsigned requested);

} // namespace sps
