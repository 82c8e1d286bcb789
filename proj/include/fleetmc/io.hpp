// Copyright 2026 The fleetmc Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// File formats. All numbers are written in shortest round-trip decimal form.
//
//   matrix CSV   header "0,1,...,l-1", then one line per machine; an empty
//                field is an unobserved entry.
//   scan CSV     machine_id,condition_index,surface_id,sample_ordinal,displacement_mm
//   time CSV     machine_id,condition_index,seconds
//   trace JSON   see docs/trace_format.md

#ifndef FLEETMC_IO_HPP_
#define FLEETMC_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fleetmc/evaluation.hpp"
#include "fleetmc/masked_matrix.hpp"
#include "fleetmc/recommender.hpp"
#include "fleetmc/utility.hpp"

namespace fleetmc {

std::string format_double(double v);
double parse_double(std::string_view text, std::string_view what);
long long parse_integer(std::string_view text, std::string_view what);

void write_matrix_csv(std::ostream& out, const MaskedMatrixd& m);
MaskedMatrixd read_matrix_csv(std::istream& in);
void save_matrix_csv(const std::filesystem::path& path, const MaskedMatrixd& m);
MaskedMatrixd load_matrix_csv(const std::filesystem::path& path);

// Per (machine, condition) raw measurements read from scan and time logs.
struct MeasurementLog {
  struct Cell {
    std::vector<std::pair<long long, double>> x_samples;  // (ordinal, mm)
    std::vector<std::pair<long long, double>> y_samples;
    std::optional<double> seconds;
  };
  std::map<std::pair<int, long long>, Cell> cells;  // (machine, condition)
};

void read_scan_csv(std::istream& in, MeasurementLog& log);
void read_time_csv(std::istream& in, MeasurementLog& log);

// Machines ordered by id. A condition is measured for a machine when any
// scan or time row names it; it must then have both surfaces and a time.
std::vector<MachineMeasurements> measurements_from_log(const MeasurementLog& log,
                                                       std::size_t conditions,
                                                       const WeightScheme& scheme = {});

nlohmann::ordered_json trace_to_json(const CampaignTrace& trace);
CampaignTrace trace_from_json(const nlohmann::ordered_json& j);
std::string dump_trace(const CampaignTrace& trace);
void save_trace(const std::filesystem::path& path, const CampaignTrace& trace);
CampaignTrace load_trace(const std::filesystem::path& path);

std::vector<std::string> mask_to_strings(const Mask& mask);
Mask mask_from_strings(const std::vector<std::string>& rows);

nlohmann::ordered_json evaluation_to_json(const EvaluationResult& e, int budget);
std::string trial_label(const TrialOutcome& o, int budget);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace fleetmc

#endif  // FLEETMC_IO_HPP_
