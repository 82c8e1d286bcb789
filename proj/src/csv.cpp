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

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "fleetmc/io.hpp"

namespace fleetmc {
namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool is_numeric(std::string_view s) {
  double v;
  s = trim(s);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

// Reads non-blank lines, skipping a leading header whose first field is not
// a number.
template <typename Fn>
void for_each_record(std::istream& in, std::size_t expected_fields, std::string_view what, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    const auto fields = split(view);
    if (first) {
      first = false;
      if (!is_numeric(fields.front())) continue;
    }
    if (fields.size() != expected_fields) {
      throw ValidationError(std::string(what) + " line " + std::to_string(line_no) + ": expected " +
                            std::to_string(expected_fields) + " fields, got " +
                            std::to_string(fields.size()));
    }
    fn(fields, line_no);
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw NumericError("cannot format number");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ValidationError("invalid number '" + std::string(text) + "' in " + std::string(what));
  }
  return v;
}

long long parse_integer(std::string_view text, std::string_view what) {
  text = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError("invalid integer '" + std::string(text) + "' in " + std::string(what));
  }
  return v;
}

void write_matrix_csv(std::ostream& out, const MaskedMatrixd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << j;
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      if (m.observed(i, j)) out << format_double(m(i, j));
    }
    out << '\n';
  }
}

MaskedMatrixd read_matrix_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> width;
  std::vector<std::vector<std::optional<double>>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    // With a single column an empty line is a row holding one missing entry.
    if (view.empty() && (!width || *width > 1)) continue;
    const auto fields = split(view);
    if (!width) {
      for (std::size_t j = 0; j < fields.size(); ++j) {
        if (parse_integer(fields[j], "matrix header") != static_cast<long long>(j)) {
          throw ValidationError("matrix header must list flat indices 0..l-1 in order");
        }
      }
      width = fields.size();
      continue;
    }
    if (fields.size() != *width) {
      throw ValidationError("matrix line " + std::to_string(line_no) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(*width));
    }
    auto& row = rows.emplace_back();
    for (const auto f : fields) {
      if (trim(f).empty()) {
        row.emplace_back();
      } else {
        row.emplace_back(parse_double(f, "matrix line " + std::to_string(line_no)));
      }
    }
  }
  if (!width || rows.empty()) throw ValidationError("matrix file is empty");
  const auto k = static_cast<Eigen::Index>(rows.size());
  const auto l = static_cast<Eigen::Index>(*width);
  MaskedMatrixd m(k, l);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < l; ++j) {
      if (const auto& v = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
        m.observe(i, j, *v);
      }
    }
  }
  return m;
}

void save_matrix_csv(const std::filesystem::path& path, const MaskedMatrixd& m) {
  std::ostringstream out;
  write_matrix_csv(out, m);
  write_file(path, out.str());
}

MaskedMatrixd load_matrix_csv(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  return read_matrix_csv(in);
}

void read_scan_csv(std::istream& in, MeasurementLog& log) {
  for_each_record(in, 5, "scan", [&](const auto& f, std::size_t line_no) {
    const std::string where = "scan line " + std::to_string(line_no);
    const int machine = static_cast<int>(parse_integer(f[0], where));
    const long long condition = parse_integer(f[1], where);
    const std::string_view surface = trim(f[2]);
    const long long ordinal = parse_integer(f[3], where);
    const double mm = parse_double(f[4], where);
    auto& cell = log.cells[{machine, condition}];
    if (surface == "x" || surface == "X") {
      cell.x_samples.emplace_back(ordinal, mm);
    } else if (surface == "y" || surface == "Y") {
      cell.y_samples.emplace_back(ordinal, mm);
    } else {
      throw ValidationError(where + ": surface must be x or y, got '" + std::string(surface) + "'");
    }
  });
}

void read_time_csv(std::istream& in, MeasurementLog& log) {
  for_each_record(in, 3, "time", [&](const auto& f, std::size_t line_no) {
    const std::string where = "time line " + std::to_string(line_no);
    const int machine = static_cast<int>(parse_integer(f[0], where));
    const long long condition = parse_integer(f[1], where);
    const double seconds = parse_double(f[2], where);
    auto& cell = log.cells[{machine, condition}];
    if (cell.seconds) {
      throw ValidationError(where + ": duplicate time for machine " + std::to_string(machine) +
                            " condition " + std::to_string(condition));
    }
    cell.seconds = seconds;
  });
}

std::vector<MachineMeasurements> measurements_from_log(const MeasurementLog& log,
                                                       std::size_t conditions,
                                                       const WeightScheme& scheme) {
  if (log.cells.empty()) throw ValidationError("no measurements were read");
  std::set<int> machines;
  std::vector<std::string> offenders;
  for (const auto& [key, cell] : log.cells) {
    machines.insert(key.first);
    const std::string label =
        "(" + std::to_string(key.first) + ", " + std::to_string(key.second) + ")";
    if (key.second < 0 || static_cast<std::size_t>(key.second) >= conditions) {
      offenders.push_back(label + " condition outside the grid");
      continue;
    }
    if (cell.x_samples.empty()) offenders.push_back(label + " missing x-surface scan");
    if (cell.y_samples.empty()) offenders.push_back(label + " missing y-surface scan");
    if (!cell.seconds) offenders.push_back(label + " missing print time");
  }
  if (!offenders.empty()) {
    std::string msg = "incomplete measurements for (machine, condition):";
    for (const auto& o : offenders) msg += "\n  " + o;
    throw ValidationError(msg);
  }

  auto rms_of = [](std::vector<std::pair<long long, double>> samples) {
    std::sort(samples.begin(), samples.end());
    Vectord v(static_cast<Eigen::Index>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) v(static_cast<Eigen::Index>(i)) = samples[i].second;
    return surface_rms(v);
  };

  std::vector<MachineMeasurements> out;
  const auto l = static_cast<Eigen::Index>(conditions);
  for (const int machine : machines) {
    Vectord quality = Vectord::Constant(l, MaskedMatrixd::missing());
    Vectord time = Vectord::Constant(l, MaskedMatrixd::missing());
    Eigen::Array<bool, Eigen::Dynamic, 1> observed = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(l, false);
    for (auto it = log.cells.lower_bound({machine, 0});
         it != log.cells.end() && it->first.first == machine; ++it) {
      const auto j = static_cast<Eigen::Index>(it->first.second);
      quality(j) = combine_surfaces(rms_of(it->second.x_samples), rms_of(it->second.y_samples));
      time(j) = *it->second.seconds;
      observed(j) = true;
    }
    out.push_back(measure_machine(machine, quality, time, observed, scheme));
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << content;
}

}  // namespace fleetmc
