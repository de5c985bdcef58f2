#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace liebdx {

// Parsed command-line / config-file settings.  Unset optionals fall back to
// per-command defaults when the command runs; flags override config-file
// values field by field.
struct RunConfig {
    std::string command;  // bands | case | verify | scatter | spectrum

    // Dressed-model family.
    std::optional<std::string> case_tag;  // "I".."IV"
    std::optional<double> m, eps, hv, ell;
    std::optional<bool> mirror;
    std::optional<std::string> flat_chi;  // "cosh" | "sinh" (case I)
    std::optional<std::string> seed;      // "flat" | "nonflat" (case I)

    // Sampling / scanning.
    std::optional<std::pair<double, double>> domain;
    std::optional<int> n, nk;
    std::optional<double> L;
    std::optional<std::vector<double>> energies;

    // Tight-binding lattice.
    std::optional<double> tau1, tau2, tau3, tau4, t3, muA, muB, muC, a, lambda_phase;

    // Output.
    std::optional<std::string> out, format;  // format: "csv" | "json"
};

int cmd_bands(const RunConfig& cfg);
int cmd_case(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);
int cmd_scatter(const RunConfig& cfg);
int cmd_spectrum(const RunConfig& cfg);

// Full frontend: parses argv (reading --config first, then overriding with
// explicit flags), dispatches to the command, and maps exceptions onto the
// exit-code contract: 0 success, 1 verification failure, 2 config error,
// 3 runtime singularity/regularity failure.
int run_cli(int argc, const char* const* argv);

}  // namespace liebdx
