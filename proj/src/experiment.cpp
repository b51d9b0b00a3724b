#include "onreg/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>

#include "onreg/bounds.hpp"
#include "onreg/divergence.hpp"
#include "onreg/entropy.hpp"
#include "onreg/errors.hpp"
#include "onreg/io.hpp"
#include "onreg/lipschitz.hpp"
#include "onreg/relu.hpp"

namespace onreg {

namespace {

using nlohmann::json;

const std::vector<std::string> kAxes = {"L", "d", "q", "T", "depth", "eps", "K"};

std::size_t line_at(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

/// Line of the first `"key"` at or after `from`; 0 when absent.
std::size_t line_of_key(std::string_view text, const std::string& key, std::size_t from = 0) {
  const std::size_t pos = text.find("\"" + key + "\"", from);
  return pos == std::string_view::npos ? 0 : line_at(text, pos);
}

std::size_t sweep_offset(std::string_view text) {
  const std::size_t pos = text.find("\"sweep\"");
  return pos == std::string_view::npos ? 0 : pos;
}

std::string require_string(const json& doc, std::string_view text, const std::string& key) {
  if (!doc.contains(key)) throw ConfigError(1, "missing required field '" + key + "'");
  if (!doc[key].is_string()) throw ConfigError(line_of_key(text, key), "'" + key + "' must be a string");
  return doc[key].get<std::string>();
}

bool is_positive_integer(double v) { return v >= 1.0 && v == std::floor(v) && v < 1e15; }

void validate_axis_value(const std::string& axis, double v, std::size_t line) {
  auto fail = [&](const std::string& why) {
    throw ConfigError(line, "sweep axis '" + axis + "' " + why + " (got " + format_double(v) + ")");
  };
  if (axis == "L" && !(v >= 1.0)) fail("needs values >= 1");
  if (axis == "q" && !(v >= 1.0)) fail("needs values >= 1");
  if (axis == "eps" && !(v > 0.0)) fail("needs positive values");
  if ((axis == "d" || axis == "T" || axis == "depth" || axis == "K") && !is_positive_integer(v)) {
    fail("needs positive integers");
  }
}

void assign_axis(CellParams& cell, const std::string& axis, double v) {
  if (axis == "L") cell.L = v;
  else if (axis == "d") cell.d = static_cast<std::size_t>(v);
  else if (axis == "q") cell.q = v;
  else if (axis == "T") cell.T = static_cast<std::size_t>(v);
  else if (axis == "depth") cell.depth = static_cast<std::size_t>(v);
  else if (axis == "eps") cell.eps = v;
  else if (axis == "K") cell.K = static_cast<std::size_t>(v);
}

json params_json(const CellParams& c) {
  return {{"L", c.L}, {"d", c.d}, {"q", c.q}, {"T", c.T}, {"depth", c.depth},
          {"eps", c.eps}, {"K", c.K}, {"seed", c.seed}};
}

Loss make_loss(const ExperimentConfig& config, const CellParams& cell) {
  if (config.loss_name == "power") return Loss::power(config.loss_q.value_or(cell.q));
  const LossEntry* entry = find_loss(config.loss_name);
  return entry->make(cell);
}

struct CellOutcome {
  json record;
  std::string csv;
  enum Status { Ok, BoundViolated, Resource, Invalid } status = Ok;
  std::string message;
};

std::string quantity_csv(const std::vector<std::pair<std::string, double>>& rows) {
  CsvTable csv;
  csv.header = {"quantity", "value"};
  for (const auto& [k, v] : rows) csv.rows.push_back({k, format_double(v)});
  return to_csv_text(csv);
}

CellOutcome run_game_cell(const ExperimentConfig& config, const CellParams& cell) {
  CellOutcome out;
  const Loss loss = make_loss(config, cell);
  auto learner = find_learner(config.learner)->make(cell, loss);
  auto env = find_environment(config.environment)->make(cell);
  const Transcript tr = run_game(*learner, *env, loss, cell.T);

  std::optional<double> bound;
  std::string kind = "none";
  const bool power = loss.kind() == LossKind::PowerQ;
  const bool lipschitz_env = dynamic_cast<AnchoredEnvironment*>(env.get()) != nullptr ||
                             dynamic_cast<RandomLipschitzEnvironment*>(env.get()) != nullptr;
  const auto d = static_cast<double>(cell.d);
  if (config.learner == "envelope" && power && lipschitz_env && loss.q() >= d) {
    bound = loss.q() > d ? supercritical_bound(cell.L, cell.d, loss.q())
                         : critical_upper_bound(cell.L, cell.d, tr.horizon());
    kind = "upper";
  } else if (auto* relu_env = dynamic_cast<RandomReluEnvironment*>(env.get());
             relu_env && config.learner == "one_relu" && power && loss.q() == 2.0) {
    const auto& w = relu_env->w_star();
    bound = dot(w, w);
    kind = "upper";
  } else if (auto* grid = dynamic_cast<GridAdversary*>(env.get()); grid && power) {
    bound = grid->forced_loss();
    kind = "lower";
  } else if (auto* interval = dynamic_cast<IntervalAdversary*>(env.get());
             interval && loss.kind() == LossKind::ZeroOne) {
    bound = static_cast<double>(tr.horizon());
    kind = "lower";
  }
  bool satisfied = true;
  if (kind == "upper") satisfied = tr.cumulative_loss <= *bound + 1e-9;
  if (kind == "lower") satisfied = tr.cumulative_loss >= *bound - 1e-9;

  json certified = nullptr;
  if (auto w = env->witness()) {
    certified = certify_realizable(tr, *w);
    if (!certified.get<bool>()) satisfied = false;
  }

  out.record = {{"params", params_json(cell)},
                {"rounds", tr.horizon()},
                {"cumulative_loss", tr.cumulative_loss},
                {"paper_bound", bound ? json(*bound) : json(nullptr)},
                {"bound_kind", kind},
                {"bound_satisfied", satisfied},
                {"certified", certified},
                {"log_T", tr.horizon() > 0 ? std::log(static_cast<double>(tr.horizon())) : 0.0}};
  if (tr.precondition_flag) out.record["precondition_flag"] = true;
  out.csv = transcript_to_csv(tr);
  out.status = satisfied ? CellOutcome::Ok : CellOutcome::BoundViolated;
  return out;
}

CellOutcome run_entropy_cell(const ExperimentConfig& config, const CellParams& cell,
                             bool has_eps_axis) {
  CellOutcome out;
  std::vector<std::pair<std::string, double>> rows;
  json record = {{"params", params_json(cell)}, {"cumulative_loss", nullptr}};
  bool satisfied = true;
  if (config.fixture == "divergence_example") {
    const DivergenceExample ex = divergence_example(cell.K);
    rows = {{"phi_partial", ex.phi_partial},
            {"phi_truncated", ex.phi_truncated},
            {"donl_bound", ex.donl_bound}};
    record["phi_partial"] = ex.phi_partial;
    record["donl_bound"] = ex.donl_bound;
    record["paper_bound"] = static_cast<double>(cell.K) - (1.0 - std::ldexp(1.0, -static_cast<int>(cell.K)));
    record["bound_kind"] = "equality";
    satisfied = std::abs(ex.phi_partial - record["paper_bound"].get<double>()) <= 1e-12;
    if (cell.K <= 2) {
      const FiniteClass cls = divergence_class(cell.K);
      const double floor_scale = std::ldexp(1.0, -static_cast<int>(cell.K) - 1);
      const double brute = entropy_integral(cls, cls.all(), floor_scale, cls.diameter()).value;
      rows.push_back({"phi_partial_brute_force", brute});
      record["phi_partial_brute_force"] = brute;
      satisfied = satisfied && std::abs(brute - ex.phi_partial) <= 1e-12;
    }
  } else {
    const FiniteClass cls = find_fixture(config.fixture)->make(cell);
    const double phi = entropy_potential(cls, cls.all()).value;
    const std::size_t depth = std::min<std::size_t>(cell.depth, 4);
    const double donl = online_dim_lower_bound(cls, depth);
    const double bound = 4.0 * cls.loss().c() * phi;
    rows = {{"rows", static_cast<double>(cls.size())},
            {"points", static_cast<double>(cls.points())},
            {"diameter", cls.diameter()},
            {"phi", phi},
            {"online_dim_lower_bound", donl},
            {"four_c_phi", bound}};
    record["phi"] = phi;
    record["online_dim_lower_bound"] = donl;
    record["paper_bound"] = bound;
    record["bound_kind"] = "upper";
    satisfied = donl <= bound + 1e-9;
    if (has_eps_axis) {
      const double n = static_cast<double>(covering_number(cls, cls.all(), cell.eps).size);
      rows.push_back({"covering_number", n});
      record["covering_number"] = n;
    }
  }
  record["bound_satisfied"] = satisfied;
  out.record = std::move(record);
  out.csv = quantity_csv(rows);
  out.status = satisfied ? CellOutcome::Ok : CellOutcome::BoundViolated;
  return out;
}

CellOutcome run_bound_table_cell(const CellParams& cell) {
  CellOutcome out;
  const auto d = static_cast<double>(cell.d);
  const double Ld = std::pow(cell.L, d);
  std::vector<std::pair<std::string, double>> rows = {
      {"envelope_mistake_bound", envelope_mistake_bound(cell.L, cell.d, cell.eps)},
      {"critical_upper_bound", critical_upper_bound(cell.L, cell.d, cell.T)},
      {"critical_lower_bound",
       critical_lower_constant(cell.d) * Ld * std::log(1.0 + static_cast<double>(cell.T) / Ld)},
  };
  if (cell.q > d) rows.push_back({"supercritical_bound", supercritical_bound(cell.L, cell.d, cell.q)});
  if (cell.q < d) {
    rows.push_back({"subcritical_lower_bound",
                    std::pow(2.0 * cell.L, cell.q) *
                        std::pow(static_cast<double>(cell.T), 1.0 - cell.q / d)});
  }
  if (cell.eps <= 1.0) {
    rows.push_back({"lipschitz_log2_cover_bound", lipschitz_cover_bound(cell.L, cell.eps, cell.d)});
  }
  json values = json::object();
  for (const auto& [k, v] : rows) values[k] = v;
  out.record = {{"params", params_json(cell)}, {"cumulative_loss", nullptr},
                {"paper_bound", nullptr},      {"bound_kind", "none"},
                {"bound_satisfied", true},     {"values", values}};
  out.csv = quantity_csv(rows);
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(line_at(text, e.byte > 0 ? e.byte - 1 : 0),
                      std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError(1, "config must be a JSON object");

  static const std::set<std::string> known = {"kind", "learner", "environment", "fixture",
                                              "loss", "sweep", "seed", "output"};
  for (const auto& item : doc.items()) {
    if (!known.count(item.key())) {
      throw ConfigError(line_of_key(text, item.key()), "unknown field '" + item.key() + "'");
    }
  }

  ExperimentConfig config;
  const std::string kind = require_string(doc, text, "kind");
  if (kind == "game") {
    config.kind = ExperimentKind::Game;
  } else if (kind == "entropy") {
    config.kind = ExperimentKind::Entropy;
  } else if (kind == "bound-table") {
    config.kind = ExperimentKind::BoundTable;
  } else {
    throw ConfigError(line_of_key(text, "kind"),
                      "unknown kind '" + kind + "' (expected game, entropy or bound-table)");
  }

  if (config.kind == ExperimentKind::Game) {
    config.learner = require_string(doc, text, "learner");
    if (!find_learner(config.learner)) {
      throw ConfigError(line_of_key(text, "learner"), "unknown learner '" + config.learner + "'");
    }
    config.environment = require_string(doc, text, "environment");
    if (!find_environment(config.environment)) {
      throw ConfigError(line_of_key(text, "environment"),
                        "unknown environment '" + config.environment + "'");
    }
  }
  if (config.kind == ExperimentKind::Entropy) {
    config.fixture = require_string(doc, text, "fixture");
    if (!find_fixture(config.fixture)) {
      throw ConfigError(line_of_key(text, "fixture"), "unknown fixture '" + config.fixture + "'");
    }
  }

  if (doc.contains("loss")) {
    const json& loss = doc["loss"];
    const std::size_t line = line_of_key(text, "loss");
    if (loss.is_string()) {
      config.loss_name = loss.get<std::string>();
    } else if (loss.is_object() && loss.contains("kind") && loss["kind"].is_string()) {
      config.loss_name = loss["kind"].get<std::string>();
      if (loss.contains("q")) {
        if (!loss["q"].is_number() || !(loss["q"].get<double>() >= 1.0)) {
          throw ConfigError(line_of_key(text, "q", text.find("\"loss\"")), "loss q must be a number >= 1");
        }
        config.loss_q = loss["q"].get<double>();
      }
    } else {
      throw ConfigError(line, "'loss' must be a name or an object with a 'kind'");
    }
    if (!find_loss(config.loss_name)) {
      throw ConfigError(line, "unknown loss '" + config.loss_name + "'");
    }
  }

  if (doc.contains("sweep")) {
    const json& sweep = doc["sweep"];
    const std::size_t from = sweep_offset(text);
    if (!sweep.is_object()) throw ConfigError(line_of_key(text, "sweep"), "'sweep' must be an object");
    for (const std::string& axis : kAxes) {
      if (!sweep.contains(axis)) continue;
      const std::size_t line = line_of_key(text, axis, from);
      const json& values = sweep[axis];
      if (!values.is_array()) throw ConfigError(line, "sweep axis '" + axis + "' must be a list");
      if (values.empty()) throw ConfigError(line, "sweep axis '" + axis + "' is empty");
      std::vector<double> list;
      for (const json& v : values) {
        if (!v.is_number()) throw ConfigError(line, "sweep axis '" + axis + "' must hold numbers");
        validate_axis_value(axis, v.get<double>(), line);
        list.push_back(v.get<double>());
      }
      config.axes.emplace_back(axis, std::move(list));
    }
    for (const auto& item : sweep.items()) {
      if (std::find(kAxes.begin(), kAxes.end(), item.key()) == kAxes.end()) {
        throw ConfigError(line_of_key(text, item.key(), from),
                          "unknown sweep axis '" + item.key() + "'");
      }
    }
  }

  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) {
      throw ConfigError(line_of_key(text, "seed"), "'seed' must be a nonnegative integer");
    }
    config.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("output")) config.output = require_string(doc, text, "output");
  return config;
}

std::vector<CellParams> sweep_cells(const ExperimentConfig& config) {
  std::vector<CellParams> cells = {CellParams{}};
  for (const auto& [axis, values] : config.axes) {
    std::vector<CellParams> next;
    for (const CellParams& base : cells) {
      for (double v : values) {
        CellParams c = base;
        assign_axis(c, axis, v);
        next.push_back(c);
      }
    }
    cells = std::move(next);
  }
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i].seed = derive_seed(config.seed, i);
  return cells;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  if (x.size() < 2 || x.size() != y.size()) throw DomainError("fit needs two or more points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxx > 0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = (sxx > 0 && syy > 0) ? (sxy * sxy) / (sxx * syy) : 0.0;
  return fit;
}

RunOutcome run_config(const ExperimentConfig& config_in, const RunOptions& options) {
  ExperimentConfig config = config_in;
  if (options.seed) config.seed = *options.seed;
  const std::vector<CellParams> cells = sweep_cells(config);
  const bool has_eps_axis = std::any_of(config.axes.begin(), config.axes.end(),
                                        [](const auto& a) { return a.first == "eps"; });

  std::vector<CellOutcome> outcomes(cells.size());
  const int jobs = std::max(1, options.jobs);
  const auto n = static_cast<std::int64_t>(cells.size());
#pragma omp parallel for num_threads(jobs) schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    CellOutcome& out = outcomes[idx];
    try {
      switch (config.kind) {
        case ExperimentKind::Game:
          out = run_game_cell(config, cells[idx]);
          break;
        case ExperimentKind::Entropy:
          out = run_entropy_cell(config, cells[idx], has_eps_axis);
          break;
        case ExperimentKind::BoundTable:
          out = run_bound_table_cell(cells[idx]);
          break;
      }
    } catch (const ResourceError& e) {
      out.status = CellOutcome::Resource;
      out.message = e.what();
      out.record = {{"params", params_json(cells[idx])},
                    {"error", e.what()},
                    {"best_so_far", e.best_so_far()},
                    {"bound_satisfied", nullptr}};
    } catch (const std::exception& e) {
      out.status = CellOutcome::Invalid;
      out.message = e.what();
      out.record = {{"params", params_json(cells[idx])},
                    {"error", e.what()},
                    {"bound_satisfied", nullptr}};
    }
  }

  RunOutcome result;
  const std::filesystem::path dir = options.out_dir.value_or(config.output);
  std::filesystem::create_directories(dir);
  json cell_records = json::array();
  std::vector<double> log_t, losses;
  bool any_invalid = false, any_resource = false, any_violation = false;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    CellOutcome& out = outcomes[i];
    out.record["cell"] = i;
    if (!out.csv.empty()) {
      char name[32];
      std::snprintf(name, sizeof(name), "cell_%04zu.csv", i);
      write_text_file((dir / name).string(), out.csv);
      result.files.push_back((dir / name).string());
      out.record["csv"] = name;
    }
    if (out.status == CellOutcome::Invalid) any_invalid = true;
    if (out.status == CellOutcome::Resource) any_resource = true;
    if (out.status == CellOutcome::BoundViolated) any_violation = true;
    if (config.kind == ExperimentKind::Game && out.status != CellOutcome::Invalid &&
        out.record.contains("log_T") && out.record["rounds"].get<std::size_t>() > 1) {
      log_t.push_back(out.record["log_T"].get<double>());
      losses.push_back(out.record["cumulative_loss"].get<double>());
    }
    cell_records.push_back(out.record);
  }

  json summary = {{"kind", config.kind == ExperimentKind::Game      ? "game"
                           : config.kind == ExperimentKind::Entropy ? "entropy"
                                                                    : "bound-table"},
                  {"seed", config.seed},
                  {"cells", cell_records}};
  if (config.kind == ExperimentKind::Game) {
    summary["learner"] = config.learner;
    summary["environment"] = config.environment;
    summary["loss"] = make_loss(config, cells.front()).describe();
    if (std::set<double>(log_t.begin(), log_t.end()).size() >= 2) {
      const LinearFit fit = fit_line(log_t, losses);
      summary["log_fit"] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r2", fit.r2}};
    }
  }
  if (config.kind == ExperimentKind::Entropy) summary["fixture"] = config.fixture;
  write_text_file((dir / "summary.json").string(), summary.dump(2) + "\n");
  result.files.push_back((dir / "summary.json").string());
  result.summary = std::move(summary);

  if (any_invalid) {
    result.exit_code = kExitConfig;
  } else if (any_resource) {
    result.exit_code = kExitResource;
  } else if (any_violation) {
    result.exit_code = kExitBound;
  }
  return result;
}

}  // namespace onreg
