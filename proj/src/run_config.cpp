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

#include "fleetmc/run_config.hpp"

#include <sstream>

#include "fleetmc/io.hpp"

namespace fleetmc {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_bool(std::string_view v, std::string_view key) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ValidationError("'" + std::string(key) + "' expects true/false, got '" + std::string(v) + "'");
}

int parse_int(std::string_view v, std::string_view key) {
  const long long x = parse_integer(v, key);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    throw ValidationError("'" + std::string(key) + "' out of range");
  }
  return static_cast<int>(x);
}

ParameterAxis parse_axis(std::string_view spec) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t bar; (bar = spec.find('|', start)) != std::string_view::npos; start = bar + 1) {
    parts.push_back(trim(spec.substr(start, bar - start)));
  }
  parts.push_back(trim(spec.substr(start)));
  if (parts.size() != 3) throw ValidationError("axis expects name|unit|values");
  ParameterAxis axis{std::string(parts[0]), std::string(parts[1]), {}};
  const std::string_view values = parts[2];
  if (values.find(':') != std::string_view::npos) {
    const auto a = values.find(':');
    const auto b = values.find(':', a + 1);
    if (b == std::string_view::npos) throw ValidationError("stepped axis expects first:step:last");
    return stepped_axis(axis.name, axis.unit, parse_double(values.substr(0, a), "axis"),
                        parse_double(values.substr(b + 1), "axis"),
                        parse_double(values.substr(a + 1, b - a - 1), "axis"));
  }
  start = 0;
  while (true) {
    const auto comma = values.find(',', start);
    axis.values.push_back(parse_double(values.substr(start, comma - start), "axis"));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return axis;
}

std::string axis_to_string(const ParameterAxis& axis) {
  std::string s = axis.name + "|" + axis.unit + "|";
  for (std::size_t i = 0; i < axis.values.size(); ++i) {
    if (i) s += ",";
    s += format_double(axis.values[i]);
  }
  return s;
}

}  // namespace

RegretVariant parse_regret_variant(std::string_view s) {
  if (s == "true" || s == "true-value") return RegretVariant::TrueValue;
  if (s == "predicted") return RegretVariant::Predicted;
  throw ValidationError("unknown regret variant '" + std::string(s) + "' (true-value|predicted)");
}

SyntheticFleetSpec RunConfig::default_fleet() {
  SyntheticFleetSpec s;
  s.machines = 10;
  s.conditions = 35;
  s.true_rank = 3;
  s.factor_scale = 1.0;
  s.noise_std = 0.05;
  s.noise_relative = true;
  s.mask_fraction = 0.55;
  s.hide_optimum = true;
  return s;
}

void RunConfig::set(std::string_view raw_key, std::string_view raw_value) {
  const std::string key(trim(raw_key));
  const std::string_view v = trim(raw_value);
  auto& c = campaign;
  if (key == "axis") {
    std::vector<ParameterAxis> axes;
    if (grid_from_file_) axes = grid.axes();
    axes.push_back(parse_axis(v));
    grid = build_grid(std::move(axes));
    grid_from_file_ = true;
    fleet.conditions = static_cast<int>(grid.flat_size());
  } else if (key == "machines") {
    fleet.machines = parse_int(v, key);
  } else if (key == "true-rank") {
    fleet.true_rank = parse_int(v, key);
  } else if (key == "factor-scale") {
    fleet.factor_scale = parse_double(v, key);
  } else if (key == "noise-std") {
    fleet.noise_std = parse_double(v, key);
  } else if (key == "noise-relative") {
    fleet.noise_relative = parse_bool(v, key);
  } else if (key == "mask-fraction") {
    fleet.mask_fraction = parse_double(v, key);
  } else if (key == "hide-optimum") {
    fleet.hide_optimum = parse_bool(v, key);
  } else if (key == "min-row-observed") {
    fleet.min_row_observed = parse_int(v, key);
  } else if (key == "min-col-observed") {
    fleet.min_col_observed = parse_int(v, key);
  } else if (key == "seed") {
    const auto seed = static_cast<std::uint64_t>(parse_integer(v, key));
    fleet.seed = seed;
    c.seed = seed;
    c.completion.seed = seed;
  } else if (key == "rank") {
    c.completion.rank = parse_int(v, key);
  } else if (key == "lambda") {
    c.completion.lambda = parse_double(v, key);
  } else if (key == "max-sweeps") {
    c.completion.max_sweeps = parse_int(v, key);
  } else if (key == "rel-tol") {
    c.completion.rel_tol = parse_double(v, key);
  } else if (key == "lambda-start") {
    c.completion.lambda_start = parse_double(v, key);
  } else if (key == "lambda-step") {
    c.completion.lambda_step = parse_double(v, key);
  } else if (key == "init") {
    if (v == "svd") {
      c.completion.init = FactorInit::Svd;
    } else if (v == "random") {
      c.completion.init = FactorInit::Random;
    } else if (v == "continuation") {
      c.completion.init = FactorInit::Continuation;
    } else {
      throw ValidationError("init expects continuation, svd or random");
    }
  } else if (key == "threads") {
    c.completion.threads = parse_int(v, key);
  } else if (key == "budget") {
    c.budget = parse_int(v, key);
  } else if (key == "limited") {
    c.limited = parse_int(v, key);
    c.mode = c.limited > 0 ? Participation::Limited : Participation::FullFleet;
  } else if (key == "regret-variant") {
    c.regret_variant = parse_regret_variant(v);
  } else if (key == "warm-start") {
    c.warm_start = parse_bool(v, key);
  } else if (key == "local-rank") {
    c.local_rank = parse_int(v, key);
  } else if (key == "quality-weight") {
    weights = v == "exponential" ? WeightScheme::exponential()
                                 : WeightScheme::constant(parse_double(v, key));
  } else if (key == "ground-truth") {
    ground_truth = std::string(v);
  } else {
    throw ValidationError("unknown configuration key '" + key + "'");
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::to_pairs() const {
  const auto& c = campaign;
  auto b = [](bool x) { return std::string(x ? "true" : "false"); };
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < grid.axes().size(); ++i) {
    out.emplace_back("axis." + std::to_string(i), axis_to_string(grid.axes()[i]));
  }
  out.emplace_back("machines", std::to_string(fleet.machines));
  out.emplace_back("true-rank", std::to_string(fleet.true_rank));
  out.emplace_back("factor-scale", format_double(fleet.factor_scale));
  out.emplace_back("noise-std", format_double(fleet.noise_std));
  out.emplace_back("noise-relative", b(fleet.noise_relative));
  out.emplace_back("mask-fraction", format_double(fleet.mask_fraction));
  out.emplace_back("hide-optimum", b(fleet.hide_optimum));
  out.emplace_back("min-row-observed", std::to_string(fleet.min_row_observed));
  out.emplace_back("min-col-observed", std::to_string(fleet.min_col_observed));
  out.emplace_back("seed", std::to_string(fleet.seed));
  out.emplace_back("rank", std::to_string(c.completion.rank));
  out.emplace_back("lambda", format_double(c.completion.lambda));
  out.emplace_back("max-sweeps", std::to_string(c.completion.max_sweeps));
  out.emplace_back("rel-tol", format_double(c.completion.rel_tol));
  out.emplace_back("init", c.completion.init == FactorInit::Svd      ? "svd"
                           : c.completion.init == FactorInit::Random ? "random"
                                                                     : "continuation");
  out.emplace_back("lambda-start", format_double(c.completion.lambda_start));
  out.emplace_back("lambda-step", format_double(c.completion.lambda_step));
  out.emplace_back("budget", std::to_string(c.budget));
  out.emplace_back("limited", std::to_string(c.mode == Participation::Limited ? c.limited : 0));
  out.emplace_back("regret-variant",
                   c.regret_variant == RegretVariant::TrueValue ? "true-value" : "predicted");
  out.emplace_back("warm-start", b(c.warm_start));
  out.emplace_back("local-rank", std::to_string(c.local_rank));
  out.emplace_back("quality-weight", weights.constant_quality_weight
                                         ? format_double(*weights.constant_quality_weight)
                                         : "exponential");
  out.emplace_back("ground-truth", ground_truth);
  return out;
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find('\n', start), text.size());
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    cfg.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

}  // namespace fleetmc
