#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pathqv/integrals.hpp"
#include "pathqv/partitions.hpp"
#include "pathqv/paths.hpp"
#include "pathqv/quadvar.hpp"
#include "pathqv/truncvar.hpp"

namespace pathqv {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

/// Reads "t,x1,...,xd" CSV. Errors name the offending 1-based line.
/// The horizon defaults to the last sample time.
SampledPath load_csv(std::istream& in, std::optional<double> horizon = std::nullopt);
SampledPath load_csv_file(const std::string& filename, std::optional<double> horizon = std::nullopt);

/// Writes the path with round-trip precision.
void write_csv(const SampledPath& path, std::ostream& out);

/// "k,t" rows.
void write_partition_csv(const Partition& partition, std::ostream& out);
Partition load_partition_csv(std::istream& in);

nlohmann::json to_json(const Partition& partition);
nlohmann::json to_json(const LebesgueTrace& trace);
nlohmann::json to_json(const DrawTrace& trace);
nlohmann::json to_json(const ConvergenceReport& report);

/// "t,qv_11,qv_12,...,jump_11,..." with one row per evaluation time.
void write_qv_csv(const QVMatrixProcess& qv, std::ostream& out);

/// "t,tv_running"
void write_tv_csv(const TVResult& tv, std::ostream& out);

/// "t,value"
void write_integral_csv(const IntegralProcess& process, std::ostream& out);

}  // namespace pathqv
