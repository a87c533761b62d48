#pragma once

#include <span>
#include <string>
#include <vector>

#include "sdr/oracle.hpp"
#include "sdr/solvers.hpp"

namespace sdr {

/// Locale-independent shortest-round-trip formatting ('.' decimal point).
std::string format_double(double value);

/// CSV time series: header iteration,wall_seconds,objective_y,
/// objective_ergodic,dist_ergodic; one record per line, UTF-8, '.' decimals.
void write_series_csv(const std::string& path, std::span<const RunRecord> records);
std::vector<RunRecord> read_series_csv(const std::string& path);

/// Probe table CSV: gamma,prob_ergodic,cesaro_mean,mean_dist_ergodic,
/// max_state_norm,divergences,seeds.
void write_probe_csv(const std::string& path, std::span<const ProbeRow> rows);

/// Reference solution persisted as JSON so later runs can reuse it.
void save_reference(const std::string& path, const ReferenceSolution& ref);
ReferenceSolution load_reference(const std::string& path);

}  // namespace sdr
