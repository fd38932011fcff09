#ifndef PARETOKIT_CLI_HPP
#define PARETOKIT_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace paretokit {

enum class DmMode { a_priori, a_posteriori, no_dm };

/// Accepts a_priori / a-priori / A_PRIORI and friends. INTERACTIVE is
/// recognised only to be rejected with Unsupported.
[[nodiscard]] DmMode parse_dm_mode(const std::string& name);

// Everything a command can be told, from a JSON file or from flags. Unset
// fields fall back to per-command defaults. JSON keys are the field names.
struct RunConfig {
    std::optional<std::string> problem;
    std::optional<std::string> mode;
    std::optional<std::string> method;
    std::optional<std::vector<double>> weights;
    std::optional<double> p;
    std::optional<std::string> ideal;
    std::optional<std::vector<double>> goal;
    std::optional<std::string> generator;
    std::optional<std::string> algorithm;
    std::optional<std::size_t> grid;
    std::optional<std::size_t> kept;
    std::optional<std::size_t> population_size;
    std::optional<std::size_t> generations;
    std::optional<double> crossover_rate;
    std::optional<double> mutation_rate;
    std::optional<double> sigma_share;
    std::optional<std::size_t> tournament_comparison_size;
    std::optional<std::size_t> archive_capacity;
    std::optional<std::size_t> max_evaluations;
    std::optional<std::string> selection_method;
    std::optional<std::string> preference;
    std::optional<double> linear_delta;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output;
    std::optional<std::string> scores_output;
    std::optional<std::string> log_output;
    std::optional<std::string> front;
    std::optional<std::string> ratings;
    std::optional<std::string> synthetic; // "users,items"
    std::optional<std::size_t> k;
    std::optional<std::size_t> n;
    std::optional<double> like_threshold;
    std::optional<double> heldout_fraction;
    std::optional<std::string> archive_dir;

    /// Fields set in `other` replace ours.
    void overlay(const RunConfig& other);
};

/// Parses a JSON object; unknown keys and mistyped values throw InvalidConfig.
[[nodiscard]] RunConfig parse_run_config(const std::string& json_text);
[[nodiscard]] RunConfig load_run_config(const std::string& path);

/// Entry point of the pareto_kit tool. Exit codes: 0 success, 1 a bench
/// check failed, 2 bad configuration or input, 3 optimizer or runtime failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace paretokit

#endif
