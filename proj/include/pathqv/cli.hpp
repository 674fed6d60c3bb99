#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace pathqv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInvariant = 3;

/// Fully resolved settings for one run (flags, then config file, then defaults).
struct RunConfig {
    std::string command;  ///< synth | partition | qv | tv | integrate | converge | report
    std::string input;
    std::string output;    ///< empty: standard output
    std::string integrand;  ///< integrate: optional second path (defaults to the input)
    std::string format;    ///< csv | json; empty: inferred from the output name
    std::optional<double> horizon;

    int n_min = 3;
    int n_max = 10;
    std::vector<double> c_grid{0.25, 0.125, 0.0625};
    double tol = 1e-9;
    std::vector<std::uint64_t> seeds{0};
    double jump_threshold = 0.0;

    // synth / converge fixtures
    std::string fixture = "walk";  ///< walk | oscillator | jumps
    std::size_t steps = 4096;
    double h = 1.0 / 64.0;
    std::size_t osc_n_max = 50;

    // partition
    std::string family = "lebesgue";  ///< lebesgue | drawupdown | epsilon | full
    double eps = 0.0;                 ///< epsilon family; 0 means 2^-level

    // report
    std::string psi = "identity";  ///< identity | constant:<k>
    double q = 1.0;
    double M = 1.0;

    unsigned threads = 1;
    std::string inject_fault;  ///< test hook: "invariant" forces exit code 3

    nlohmann::json to_json() const;
};

/// Parses command-line arguments. A `--config FILE` of key=value lines
/// supplies defaults; explicit flags win. Returns the exit code to use when
/// parsing ends the run (help, or an error), otherwise nullopt.
std::optional<int> parse_args(int argc, const char* const* argv, RunConfig& config,
                              std::ostream& out, std::ostream& err);

/// Executes the command. Returns 0 on success, 2 on invalid input or
/// configuration, 3 when an internal invariant fails.
int run(const RunConfig& config, std::ostream& out, std::ostream& log);

/// Convenience: parse + run.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "3..10" or "7".
std::pair<int, int> parse_level_range(const std::string& text);
/// "0.25,0.125" or "2^-3..2^-8" (powers of two, inclusive).
std::vector<double> parse_c_grid(const std::string& text);
/// "0..31" or "1,5,9".
std::vector<std::uint64_t> parse_seeds(const std::string& text);

/// Heuristic verdict on a converge-study column (c strictly decreasing): true
/// when c * TV^c at least doubles at each step over `run` consecutive grid
/// values, counting only steps that start from c <= range (the path's
/// largest coordinate swing). Bounded limits cannot grow geometrically once
/// c is below the swing, so this separates blow-up from the entrance regime.
bool no_finite_limit(const std::vector<double>& c_grid, const std::vector<double>& estimates,
                     double range, std::size_t run = 4);

std::string library_version();

}  // namespace pathqv::cli
