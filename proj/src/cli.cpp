#include "pathqv/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "pathqv/error.hpp"
#include "pathqv/integrals.hpp"
#include "pathqv/io.hpp"
#include "pathqv/parallel.hpp"
#include "pathqv/partitions.hpp"
#include "pathqv/paths.hpp"
#include "pathqv/quadvar.hpp"
#include "pathqv/truncvar.hpp"

#ifndef PATHQV_VERSION
#define PATHQV_VERSION "0.0.0"
#endif

namespace pathqv::cli {

using nlohmann::json;

std::string library_version() { return PATHQV_VERSION; }

json RunConfig::to_json() const {
    // threads is omitted on purpose: it never changes results, and leaving it
    // out keeps artifacts byte-identical across machines.
    json j{{"command", command},
           {"input", input},
           {"output", output},
           {"integrand", integrand},
           {"format", format},
           {"levels", {n_min, n_max}},
           {"c", c_grid},
           {"tol", tol},
           {"seeds", seeds},
           {"jump_threshold", jump_threshold},
           {"fixture", fixture},
           {"steps", steps},
           {"h", h},
           {"n_max", osc_n_max},
           {"family", family},
           {"eps", eps},
           {"psi", psi},
           {"q", q},
           {"M", M}};
    j["horizon"] = horizon ? json(*horizon) : json();
    return j;
}

// ---------------------------------------------------------------------------
// Argument helpers

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return {};
    return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

template <class T>
T parse_number(const std::string& raw, const char* what) {
    const std::string s = trim(raw);
    T v{};
    const char* b = s.data();
    const char* e = b + s.size();
    if (!s.empty() && *b == '+') ++b;
    const auto res = std::from_chars(b, e, v);
    if (s.empty() || res.ec != std::errc() || res.ptr != e)
        throw ValidationError(std::string("invalid ") + what + " '" + raw + "'");
    return v;
}

// "2^-5" -> 2^-5; anything else as a plain number.
double parse_c_value(const std::string& raw) {
    const std::string s = trim(raw);
    if (s.rfind("2^", 0) == 0) return std::ldexp(1.0, parse_number<int>(s.substr(2), "exponent"));
    return parse_number<double>(s, "truncation level");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, sep);) parts.push_back(item);
    return parts;
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : ",") + p;
    return out;
}

}  // namespace

std::pair<int, int> parse_level_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        const int n = parse_number<int>(text, "level");
        return {n, n};
    }
    const int a = parse_number<int>(text.substr(0, dots), "level");
    const int b = parse_number<int>(text.substr(dots + 2), "level");
    if (a > b) throw ValidationError("empty level range '" + text + "'");
    return {a, b};
}

std::vector<double> parse_c_grid(const std::string& text) {
    std::vector<double> grid;
    for (const auto& part : split(text, ',')) {
        const auto dots = part.find("..");
        if (dots == std::string::npos) {
            grid.push_back(parse_c_value(part));
            continue;
        }
        const std::string lo = trim(part.substr(0, dots));
        const std::string hi = trim(part.substr(dots + 2));
        if (lo.rfind("2^", 0) != 0 || hi.rfind("2^", 0) != 0)
            throw ValidationError("c ranges must be written 2^a..2^b");
        const int a = parse_number<int>(lo.substr(2), "exponent");
        const int b = parse_number<int>(hi.substr(2), "exponent");
        const int step = a <= b ? 1 : -1;
        for (int e = a;; e += step) {
            grid.push_back(std::ldexp(1.0, e));
            if (e == b) break;
        }
    }
    if (grid.empty()) throw ValidationError("empty c grid");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!(grid[k] > 0.0) || !std::isfinite(grid[k]))
            throw ValidationError("c grid values must be positive");
        if (k > 0 && !(grid[k] < grid[k - 1]))
            throw ValidationError("c grid must be strictly decreasing");
    }
    return grid;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    for (const auto& part : split(text, ',')) {
        const auto dots = part.find("..");
        if (dots == std::string::npos) {
            seeds.push_back(parse_number<std::uint64_t>(part, "seed"));
            continue;
        }
        const auto a = parse_number<std::uint64_t>(part.substr(0, dots), "seed");
        const auto b = parse_number<std::uint64_t>(part.substr(dots + 2), "seed");
        if (a > b) throw ValidationError("empty seed range '" + part + "'");
        if (b - a >= 1000000) throw ValidationError("seed range too large");
        for (auto s = a; s <= b; ++s) seeds.push_back(s);
    }
    if (seeds.empty()) throw ValidationError("empty seed list");
    return seeds;
}

bool no_finite_limit(const std::vector<double>& c_grid, const std::vector<double>& estimates,
                     double range, std::size_t run) {
    if (run < 2 || c_grid.size() != estimates.size()) return false;
    std::size_t streak = 1;  // values in the current doubling run
    for (std::size_t k = 1; k < estimates.size(); ++k) {
        const bool grows = c_grid[k - 1] <= range && estimates[k] > 0.0 &&
                           estimates[k] >= 2.0 * estimates[k - 1];
        streak = grows ? streak + 1 : 1;
        if (streak >= run) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Parsing

std::optional<int> parse_args(int argc, const char* const* argv, RunConfig& config,
                              std::ostream& out, std::ostream& err) {
    CLI::App app{"Pathwise quadratic variation, truncated variation and stopping-time partitions",
                 "pathqv"};
    app.set_help_flag("--help", "print this help and exit");  // -h would clash with --h
    app.set_config("--config", "", "key=value file; explicit flags take precedence");
    app.option_defaults()->always_capture_default();

    std::string levels, level;
    std::vector<std::string> c_parts, seed_parts;
    std::optional<std::uint64_t> seed;
    std::optional<double> horizon;
    std::optional<unsigned> threads;
    bool walk = false, oscillator = false;

    app.add_option("command", config.command, "synth | partition | qv | tv | integrate | converge | report")
        ->required()
        ->check(CLI::IsMember({"synth", "partition", "qv", "tv", "integrate", "converge", "report"}));
    app.add_option("-i,--input", config.input, "input CSV path (t,x1,...,xd)");
    app.add_option("-o,--output", config.output, "output file (default: standard output)");
    app.add_option("--integrand", config.integrand, "integrate: integrand CSV (default: the input)");
    app.add_option("--format", config.format, "csv | json (default: from the output extension)")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--horizon", horizon, "horizon T (default: last sample time)");
    auto* lv = app.add_option("--levels", levels, "dyadic level range, e.g. 3..10");
    app.add_option("--level", level, "single dyadic level")->excludes(lv);
    app.add_option("--c", c_parts, "truncation levels, e.g. 0.25,0.125 or 2^-3..2^-8")
        ->delimiter(',');
    app.add_option("--tol", config.tol, "convergence tolerance")->check(CLI::PositiveNumber);
    auto* sd = app.add_option("--seeds", seed_parts, "seed list, e.g. 0..31 or 1,4,9")->delimiter(',');
    app.add_option("--seed", seed, "single seed")->excludes(sd);
    app.add_option("--jump-threshold", config.jump_threshold,
                   "changes larger than this count as jumps")
        ->check(CLI::NonNegativeNumber);
    auto* wf = app.add_flag("--walk", walk, "synth: symmetric random walk");
    app.add_flag("--oscillator", oscillator, "synth: oscillating fixture")->excludes(wf);
    app.add_option("--fixture", config.fixture, "walk | oscillator | jumps")
        ->check(CLI::IsMember({"walk", "oscillator", "jumps"}));
    app.add_option("--steps", config.steps, "walk steps")->check(CLI::PositiveNumber);
    app.add_option("--h", config.h, "walk step size")->check(CLI::PositiveNumber);
    app.add_option("--n-max", config.osc_n_max, "oscillator blocks")->check(CLI::PositiveNumber);
    app.add_option("--family", config.family, "lebesgue | drawupdown | epsilon | full")
        ->check(CLI::IsMember({"lebesgue", "drawupdown", "epsilon", "full"}));
    app.add_option("--eps", config.eps, "epsilon family threshold (default 2^-level)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--psi", config.psi, "report: identity | constant:<k>");
    app.add_option("--q", config.q, "report: bound on |[S]_T|")->check(CLI::PositiveNumber);
    app.add_option("--M", config.M, "report: bound on sup |omega|")->check(CLI::PositiveNumber);
    app.add_option("--threads", threads, "worker threads (default: PATHQV_THREADS or all cores)");
    app.add_option("--inject-fault", config.inject_fault)->group("");

    try {
        app.parse(argc, argv);
        if (walk) config.fixture = "walk";
        if (oscillator) config.fixture = "oscillator";
        if (horizon) {
            if (!(*horizon > 0.0) || !std::isfinite(*horizon))
                throw ValidationError("horizon must be positive");
            config.horizon = horizon;
        }
        if (!level.empty()) std::tie(config.n_min, config.n_max) = parse_level_range(level);
        if (!levels.empty()) std::tie(config.n_min, config.n_max) = parse_level_range(levels);
        if (!c_parts.empty()) config.c_grid = parse_c_grid(join(c_parts));
        if (!seed_parts.empty()) config.seeds = parse_seeds(join(seed_parts));
        if (seed) config.seeds = {*seed};
        if (!config.inject_fault.empty() && config.inject_fault != "invariant")
            throw ValidationError("unknown fault '" + config.inject_fault + "'");

        unsigned cap = std::max(1u, std::thread::hardware_concurrency());
        if (const char* env = std::getenv("PATHQV_THREADS"); env && *env)
            cap = std::max(1u, parse_number<unsigned>(env, "PATHQV_THREADS"));
        config.threads = threads ? std::max(1u, std::min(*threads, cap)) : cap;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return kExitValidation;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Commands

namespace {

struct Sink {
    std::ostream* stream;
    std::unique_ptr<std::ofstream> file;
};

Sink open_output(const RunConfig& config, std::ostream& out) {
    if (config.output.empty()) return {&out, nullptr};
    auto f = std::make_unique<std::ofstream>(config.output, std::ios::binary);
    if (!*f) throw ValidationError("cannot write '" + config.output + "'");
    std::ostream* s = f.get();
    return {s, std::move(f)};
}

bool wants_csv(const RunConfig& config) {
    if (!config.format.empty()) return config.format == "csv";
    const auto& o = config.output;
    return o.size() >= 4 && o.compare(o.size() - 4, 4, ".csv") == 0;
}

json envelope(const RunConfig& config) {
    return {{"config", config.to_json()}, {"version", library_version()}};
}

void emit(const json& j, const RunConfig& config, std::ostream& out) {
    auto sink = open_output(config, out);
    *sink.stream << j.dump(2) << '\n';
    if (!*sink.stream) throw ValidationError("write failed");
}

SampledPath load_input(const RunConfig& config) {
    if (config.input.empty()) throw ValidationError(config.command + " needs --input");
    return load_csv_file(config.input, config.horizon);
}

SampledPath fixture_path(const RunConfig& config, std::uint64_t seed) {
    if (config.fixture == "oscillator") return synth_oscillator(config.osc_n_max);
    if (config.fixture == "jumps") return synth_walk(16, config.horizon.value_or(1.0), 0.25, seed);
    return synth_walk(config.steps, config.horizon.value_or(1.0), config.h, seed);
}

json matrix_json(std::span<const double> m, std::size_t d) {
    json rows = json::array();
    for (std::size_t i = 0; i < d; ++i)
        rows.push_back(std::vector<double>(m.begin() + i * d, m.begin() + (i + 1) * d));
    return rows;
}

double trace_at(const MatrixProcess& m, std::size_t k) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i) s += m.at(k, i, i);
    return s;
}

void require_1d(const SampledPath& path, const std::string& what) {
    if (path.dim() != 1) throw ValidationError(what + " requires a 1-d path");
}

int cmd_synth(const RunConfig& config, std::ostream& out) {
    if (config.format == "json") throw ValidationError("synth writes CSV only");
    const auto path = fixture_path(config, config.seeds.front());
    auto sink = open_output(config, out);
    write_csv(path, *sink.stream);
    return kExitOk;
}

std::vector<std::pair<int, Partition>> family_partitions(const SampledPath& path,
                                                         const std::string& family, int n_min,
                                                         int n_max, double eps,
                                                         std::vector<json>* traces) {
    std::vector<std::pair<int, Partition>> out;
    for (int n = n_min; n <= n_max; ++n) {
        json trace;
        Partition p;
        if (family == "lebesgue") {
            if (path.dim() == 1) {
                auto t = lebesgue_1d(path, n);
                trace = to_json(t);
                p = std::move(t.partition);
            } else {
                p = lebesgue_multi(path, n);
                trace = {{"kind", "lebesgue"}, {"level", n}, {"partition", to_json(p)}};
            }
        } else if (family == "drawupdown") {
            require_1d(path, "the drawupdown family");
            auto t = drawupdown(path, n);
            trace = to_json(t);
            p = std::move(t.combined);
        } else if (family == "epsilon") {
            require_1d(path, "the epsilon family");
            const double e = eps > 0.0 ? eps : std::ldexp(1.0, -n);
            p = epsilon_partition(path, e);
            trace = {{"kind", "epsilon"}, {"level", n}, {"eps", e}, {"partition", to_json(p)}};
        } else {
            p = full_refinement(path);
            trace = {{"kind", "full"}, {"partition", to_json(p)}};
        }
        if (traces) traces->push_back(std::move(trace));
        out.emplace_back(n, std::move(p));
        if (family == "full") break;
    }
    return out;
}

int cmd_partition(const RunConfig& config, std::ostream& out) {
    const auto path = load_input(config);
    std::vector<json> traces;
    const auto parts =
        family_partitions(path, config.family, config.n_min, config.n_max, config.eps, &traces);
    if (wants_csv(config)) {
        if (parts.size() != 1) throw ValidationError("CSV output needs a single level");
        auto sink = open_output(config, out);
        write_partition_csv(parts.front().second, *sink.stream);
        return kExitOk;
    }
    json j = envelope(config);
    j["family"] = config.family;
    j["partitions"] = json::array();
    for (std::size_t k = 0; k < parts.size(); ++k) {
        traces[k]["oscillation"] = oscillation(path, parts[k].second);
        j["partitions"].push_back(std::move(traces[k]));
    }
    emit(j, config, out);
    return kExitOk;
}

int cmd_qv(const RunConfig& config, std::ostream& out) {
    const auto path = load_input(config);
    const auto lim =
        qv_limit(path, config.n_min, config.n_max, config.tol, config.jump_threshold, config.threads);
    if (wants_csv(config)) {
        auto sink = open_output(config, out);
        write_qv_csv(lim.qv, *sink.stream);
        return kExitOk;
    }
    const std::size_t d = path.dim();
    const std::size_t last = path.size() - 1;
    json j = envelope(config);
    j["report"] = to_json(lim.report);
    j["qv_T"] = matrix_json(lim.qv.matrices.matrix(last), d);
    j["jump_T"] = matrix_json(lim.qv.jump_part.matrix(last), d);
    j["cont_T"] = matrix_json(lim.qv.cont_part.matrix(last), d);
    j["frobenius_T"] = lim.qv.frobenius_T();
    j["samples"] = path.size();
    emit(j, config, out);
    return kExitOk;
}

int cmd_tv(const RunConfig& config, std::ostream& out) {
    const auto path = load_input(config);
    require_1d(path, "tv");
    if (wants_csv(config)) {
        if (config.c_grid.size() != 1) throw ValidationError("CSV output needs a single c");
        auto sink = open_output(config, out);
        write_tv_csv(truncated_variation(path, config.c_grid.front()), *sink.stream);
        return kExitOk;
    }
    std::vector<json> rows(config.c_grid.size());
    parallel_for(rows.size(), config.threads, [&](std::size_t k) {
        const double c = config.c_grid[k];
        const auto tv = truncated_variation(path, c);
        const auto sandwich = tv_sandwich_check(path, c);
        const auto identity = tv_integral_identity(path, c);
        rows[k] = {{"c", c},
                   {"tv_T", tv.total},
                   {"c_tv_T", c * tv.total},
                   {"tv_2c_T", sandwich.tv_2c.back()},
                   {"tv_regularized_T", sandwich.tv_regularized.back()},
                   {"sandwich_min_lower_gap", sandwich.min_lower_gap},
                   {"sandwich_max_upper_gap", sandwich.max_upper_gap},
                   {"identity_max_residual", identity.max_residual},
                   {"identity_max_relative_residual", identity.max_relative_residual}};
    });
    json j = envelope(config);
    j["tv0_T"] = total_variation(path).back();
    j["table"] = rows;
    emit(j, config, out);
    return kExitOk;
}

int cmd_integrate(const RunConfig& config, std::ostream& out) {
    const auto x = load_input(config);
    const auto g = config.integrand.empty() ? x : load_csv_file(config.integrand, x.horizon());
    require_1d(x, "integrate");
    require_1d(g, "integrate");
    // Each rung contains the Lebesgue partitions of both paths.
    std::vector<Partition> ladder;
    std::vector<int> labels;
    for (int n = config.n_min; n <= config.n_max; ++n) {
        ladder.push_back(merge({lebesgue_1d(x, n).partition, lebesgue_1d(g, n).partition}, x.horizon()));
        labels.push_back(n);
    }
    const auto follmer = follmer_integral(g, x, ladder, config.tol, labels);
    const auto exact = lebesgue_stieltjes(g, x);
    if (wants_csv(config)) {
        auto sink = open_output(config, out);
        write_integral_csv(follmer.per_level.back(), *sink.stream);
        return kExitOk;
    }
    json j = envelope(config);
    j["report"] = to_json(follmer.report);
    j["stieltjes_T"] = exact.final_value();
    j["levels"] = json::array();
    for (std::size_t k = 0; k < ladder.size(); ++k) {
        j["levels"].push_back({{"level", labels[k]},
                               {"value_T", follmer.per_level[k].final_value()},
                               {"sup_distance_to_stieltjes",
                                follmer.per_level[k].sup_distance(exact)}});
    }
    if (config.integrand.empty()) {
        // int S(s-) dS = (S_T^2 - S_0^2)/2 - [S,S]_T/2 at full refinement.
        const auto qv = discrete_qv(x, full_refinement(x));
        const auto ibp = ibp_residual_typical(x, qv, 0, 0, full_refinement(x));
        j["ibp_sup_residual"] = ibp.sup_residual;
    }
    emit(j, config, out);
    return kExitOk;
}

struct StudyRun {
    std::uint64_t seed = 0;
    double range = 0.0;  ///< largest max - min over the coordinates
    ConvergenceReport reference_report;
    double reference_T = 0.0;
    std::vector<double> estimate_T;
    std::vector<double> estimate_proof_T;
    std::vector<double> distance;
    std::vector<std::tuple<std::string, int, double, double>> partitions;
};

StudyRun study_one(const RunConfig& config, const SampledPath& path, std::uint64_t seed) {
    StudyRun r;
    r.seed = seed;
    for (std::size_t i = 0; i < path.dim(); ++i) {
        double lo = path.value(0, i), hi = lo;
        for (std::size_t k = 1; k < path.size(); ++k) {
            lo = std::min(lo, path.value(k, i));
            hi = std::max(hi, path.value(k, i));
        }
        r.range = std::max(r.range, hi - lo);
    }
    const auto ref = qv_limit(path, config.n_min, config.n_max, config.tol, config.jump_threshold);
    r.reference_report = ref.report;
    const std::size_t last = path.size() - 1;
    r.reference_T = trace_at(ref.qv.cont_part, last);
    for (const auto& est : qv_via_tv(path, config.c_grid, &ref.qv)) {
        r.estimate_T.push_back(trace_at(est.estimate, last));
        r.estimate_proof_T.push_back(trace_at(est.estimate_proof, last));
        r.distance.push_back(est.distance_to_reference.value_or(0.0));
    }
    std::vector<std::string> families{"lebesgue"};
    if (path.dim() == 1) families = {"lebesgue", "drawupdown", "epsilon"};
    for (const auto& family : families) {
        const auto parts = family_partitions(path, family, config.n_min, config.n_max, 0.0, nullptr);
        std::vector<Partition> ps;
        for (const auto& [n, p] : parts) ps.push_back(p);
        const auto rows = partition_independence_study(path, ps, ref.qv);
        for (std::size_t k = 0; k < rows.size(); ++k)
            r.partitions.emplace_back(family, parts[k].first, rows[k].oscillation, rows[k].sup_error);
    }
    return r;
}

int cmd_converge(const RunConfig& config, std::ostream& out) {
    std::vector<StudyRun> runs;
    if (!config.input.empty()) {
        runs.push_back(study_one(config, load_input(config), 0));
    } else {
        runs.resize(config.seeds.size());
        parallel_for(runs.size(), config.threads, [&](std::size_t k) {
            runs[k] = study_one(config, fixture_path(config, config.seeds[k]), config.seeds[k]);
        });
    }
    double range = 0.0;
    for (const auto& r : runs) range = std::max(range, r.range);
    const double count = static_cast<double>(runs.size());
    const std::size_t nc = config.c_grid.size();
    std::vector<double> est(nc, 0.0), proof(nc, 0.0), abs_err(nc, 0.0);
    double reference = 0.0;
    bool all_converged = true;
    for (const auto& r : runs) {
        reference += r.reference_T / count;
        all_converged = all_converged && r.reference_report.converged;
        for (std::size_t k = 0; k < nc; ++k) {
            est[k] += r.estimate_T[k] / count;
            proof[k] += r.estimate_proof_T[k] / count;
        }
    }
    for (std::size_t k = 0; k < nc; ++k) abs_err[k] = std::fabs(est[k] - reference);

    if (wants_csv(config)) {
        auto sink = open_output(config, out);
        auto& s = *sink.stream;
        s << "c,estimate_T,estimate_proof_T,reference_T,abs_err\n";
        for (std::size_t k = 0; k < nc; ++k)
            s << format_double(config.c_grid[k]) << ',' << format_double(est[k]) << ','
              << format_double(proof[k]) << ',' << format_double(reference) << ','
              << format_double(abs_err[k]) << '\n';
        return kExitOk;
    }

    json j = envelope(config);
    j["c"] = config.c_grid;
    j["estimate_T"] = est;
    j["estimate_proof_T"] = proof;
    j["reference_T"] = reference;
    j["abs_err"] = abs_err;
    j["reference_converged"] = all_converged;
    json flags = json::array();
    if (no_finite_limit(config.c_grid, est, range)) flags.push_back("no finite limit detected");
    j["flags"] = flags;
    if (!all_converged)
        j["warning"] = "reference quadratic variation did not converge over the level range";

    // Partition table averaged over runs, in family/level order.
    json table = json::array();
    for (std::size_t k = 0; k < runs.front().partitions.size(); ++k) {
        double osc = 0.0, err = 0.0;
        for (const auto& r : runs) {
            osc += std::get<2>(r.partitions[k]) / count;
            err += std::get<3>(r.partitions[k]) / count;
        }
        table.push_back({{"family", std::get<0>(runs.front().partitions[k])},
                         {"level", std::get<1>(runs.front().partitions[k])},
                         {"O_T", osc},
                         {"error", err}});
    }
    j["partitions"] = table;
    json per_run = json::array();
    for (const auto& r : runs) {
        per_run.push_back({{"seed", r.seed},
                           {"reference_T", r.reference_T},
                           {"reference_report", to_json(r.reference_report)},
                           {"estimate_T", r.estimate_T},
                           {"sup_distance", r.distance}});
    }
    j["runs"] = per_run;
    emit(j, config, out);
    return kExitOk;
}

PsiSpec parse_psi(const std::string& text) {
    if (text == "identity") return PsiSpec::identity();
    if (text.rfind("constant:", 0) == 0)
        return PsiSpec::constant(parse_number<double>(text.substr(9), "psi constant"));
    throw ValidationError("unknown psi '" + text + "'");
}

int cmd_report(const RunConfig& config, std::ostream& out) {
    const auto path = load_input(config);
    const auto membership = check_membership(path, parse_psi(config.psi));
    const auto js = jumps(path);
    double largest = 0.0;
    for (const auto& jump : js) {
        double s = 0.0;
        for (double v : jump.delta) s += v * v;
        largest = std::max(largest, std::sqrt(s));
    }
    const auto lim =
        qv_limit(path, config.n_min, config.n_max, config.tol, config.jump_threshold, config.threads);
    std::vector<double> tv0;
    for (std::size_t i = 0; i < path.dim(); ++i) tv0.push_back(total_variation(path.coordinate(i)).back());

    json j = envelope(config);
    j["dim"] = path.dim();
    j["samples"] = path.size();
    j["horizon"] = path.horizon();
    j["sup_norm"] = sup_norm(path);
    j["jump_count"] = js.size();
    j["largest_jump"] = largest;
    j["tv0_T"] = tv0;
    j["frobenius_T"] = lim.qv.frobenius_T();
    j["qv_report"] = to_json(lim.report);
    j["in_omega_qM"] = omega_qm(path, lim.qv, config.q, config.M);
    json m{{"member", membership.member}};
    if (membership.first_violation) {
        const auto& v = *membership.first_violation;
        m["first_violation"] = {{"time", v.time}, {"coord", v.coord + 1}, {"jump", v.jump}, {"bound", v.bound}};
    }
    j["membership"] = m;
    emit(j, config, out);
    return kExitOk;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& log) {
    try {
        if (config.n_min > config.n_max) throw ValidationError("empty level range");
        if (!(config.tol > 0.0)) throw ValidationError("tolerance must be positive");
        if (config.inject_fault == "invariant")
            throw InvariantViolation("injected fault (test hook)");
        const auto& c = config.command;
        if (c == "synth") return cmd_synth(config, out);
        if (c == "partition") return cmd_partition(config, out);
        if (c == "qv") return cmd_qv(config, out);
        if (c == "tv") return cmd_tv(config, out);
        if (c == "integrate") return cmd_integrate(config, out);
        if (c == "converge") return cmd_converge(config, out);
        if (c == "report") return cmd_report(config, out);
        throw ValidationError("unknown command '" + c + "'");
    } catch (const ValidationError& e) {
        log << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        log << "internal error: " << e.what() << '\n';
        json dump{{"error", e.what()}, {"config", config.to_json()}, {"version", library_version()}};
        log << dump.dump(2) << '\n';
        return kExitInvariant;
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig config;
    if (auto code = parse_args(argc, argv, config, out, err)) return *code;
    return run(config, out, err);
}

}  // namespace pathqv::cli
