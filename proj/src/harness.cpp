// Copyright 2026 The levelset Authors. All Rights Reserved.
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
// =============================================================================

#include "levelset/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "levelset/error.hpp"

namespace levelset {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& message) {
  throw Error(ErrorCode::Config, "config: " + message);
}

[[noreturn]] void field_error(const std::string& field, const std::string& message) {
  config_error("field `" + field + "`: " + message);
}

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

// Typed field access that names the offending field on failure.
class Node {
 public:
  Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return value_; }

  bool has(const char* key) const { return value_.is_object() && value_.contains(key); }

  Node at(const char* key) const {
    if (!has(key)) config_error("missing required field `" + join(path_, key) + "`");
    return Node(value_.at(key), join(path_, key));
  }

  std::optional<Node> find(const char* key) const {
    if (!has(key)) return std::nullopt;
    return Node(value_.at(key), join(path_, key));
  }

  void expect_object(std::initializer_list<const char*> allowed) const {
    if (!value_.is_object()) field_error(path_, "expected an object");
    for (const auto& item : value_.items()) {
      const bool known = std::any_of(allowed.begin(), allowed.end(),
                                     [&](const char* k) { return item.key() == k; });
      if (!known) config_error("unknown field `" + join(path_, item.key()) + "`");
    }
  }

  double number() const {
    if (!value_.is_number()) field_error(path_, "expected a number");
    const double v = value_.get<double>();
    if (!std::isfinite(v)) field_error(path_, "expected a finite number");
    return v;
  }

  std::uint64_t unsigned_integer() const {
    if (value_.is_number_unsigned()) return value_.get<std::uint64_t>();
    if (value_.is_number_float()) {
      const double v = value_.get<double>();
      if (v >= 0.0 && v < 9.007199254740992e15 && v == std::floor(v)) return static_cast<std::uint64_t>(v);
    }
    field_error(path_, "expected a non-negative integer");
  }

  std::string string() const {
    if (!value_.is_string()) field_error(path_, "expected a string");
    return value_.get<std::string>();
  }

  std::vector<double> numbers() const {
    if (!value_.is_array()) field_error(path_, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < value_.size(); ++i) {
      out.push_back(Node(value_[i], path_ + "[" + std::to_string(i) + "]").number());
    }
    return out;
  }

  std::vector<std::size_t> counts() const {
    if (!value_.is_array()) field_error(path_, "expected an array of integers");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < value_.size(); ++i) {
      out.push_back(Node(value_[i], path_ + "[" + std::to_string(i) + "]").unsigned_integer());
    }
    return out;
  }

 private:
  const json& value_;
  std::string path_;
};

// Exactly one of `linear` or its ln-parameterized twin; empty when neither.
std::optional<double> linear_or_log(const Node& parent, const char* linear, const char* log) {
  const auto a = parent.find(linear);
  const auto b = parent.find(log);
  if (a && b) {
    config_error("fields `" + a->path() + "` and `" + b->path() + "` are mutually exclusive");
  }
  if (a) return a->number();
  if (b) return std::exp(b->number());
  return std::nullopt;
}

BoxSpec parse_domain(const Node& node) {
  node.expect_object({"lower", "upper", "resolution"});
  BoxSpec box{node.at("lower").numbers(), node.at("upper").numbers(), node.at("resolution").counts()};
  if (box.lower.empty()) field_error(node.path() + ".lower", "expected at least one axis");
  if (box.upper.size() != box.lower.size() || box.resolution.size() != box.lower.size()) {
    field_error(node.path(), "lower, upper and resolution must have the same length");
  }
  for (std::size_t k = 0; k < box.lower.size(); ++k) {
    if (box.resolution[k] < 1) field_error(node.path() + ".resolution", "every axis needs >= 1 node");
    if (!(box.upper[k] >= box.lower[k])) field_error(node.path(), "upper must be >= lower on every axis");
  }
  return box;
}

Objective parse_objective(const Node& node, const BoxSpec& box, const std::filesystem::path& base_dir) {
  std::string kind;
  if (node.raw().is_string()) {
    kind = node.string();
  } else {
    node.expect_object({"kind", "value", "path", "values"});
    kind = node.at("kind").string();
  }
  if (kind == "himmelblau_neg" || kind == "sinusoid") {
    if (box.lower.size() != 2) field_error(node.path(), kind + " needs a 2-D domain");
    return kind == "sinusoid" ? Objective(Sinusoid{}) : Objective(HimmelblauNeg{});
  }
  if (kind == "constant") return Constant{node.at("value").number()};
  if (kind == "tabular") {
    if (const auto values = node.find("values")) return Tabular{values->numbers()};
    std::filesystem::path path = node.at("path").string();
    if (path.is_relative()) path = base_dir / path;
    return load_tabular_csv(path, box);
  }
  field_error(join(node.path(), "kind"), "unknown objective '" + kind + "'");
}

PriorSpec parse_prior(const Node& node, std::size_t m, std::optional<double> model_sigma,
                      double& model_sigma_out) {
  node.expect_object({"mean", "sigma_ker", "ln_sigma_ker", "length_scale", "ln_length_scale",
                      "sigma_eps", "ln_sigma_eps", "noise_var"});
  PriorSpec prior;
  if (const auto mean = node.find("mean")) {
    if (mean->raw().is_array()) {
      const std::vector<double> values = mean->numbers();
      if (values.size() != m) {
        field_error(mean->path(), "expected " + std::to_string(m) + " values, one per grid point");
      }
      prior.mean = Vector(Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(m)));
    } else {
      prior.mean = mean->number();
    }
  }
  const auto sigma_ker = linear_or_log(node, "sigma_ker", "ln_sigma_ker");
  if (!sigma_ker) config_error("missing required field `" + join(node.path(), "sigma_ker") + "`");
  const auto length = linear_or_log(node, "length_scale", "ln_length_scale");
  if (!length) config_error("missing required field `" + join(node.path(), "length_scale") + "`");
  prior.kernel = KernelSpec{*sigma_ker, *length};

  std::optional<double> noise_var;
  const auto sigma_eps = linear_or_log(node, "sigma_eps", "ln_sigma_eps");
  if (const auto nv = node.find("noise_var")) {
    if (sigma_eps) config_error("fields `sigma_eps` and `noise_var` are mutually exclusive");
    noise_var = nv->number();
  } else if (sigma_eps) {
    noise_var = *sigma_eps * *sigma_eps;
  }
  // Model and algorithm noise default to each other.
  if (!noise_var && !model_sigma) {
    config_error("missing required field `noise.model_sigma` (or `prior.sigma_eps`)");
  }
  if (!noise_var) noise_var = *model_sigma * *model_sigma;
  model_sigma_out = model_sigma ? *model_sigma : std::sqrt(*noise_var);
  prior.noise_var = *noise_var;
  if (!(prior.kernel.sigma_ker > 0.0)) field_error(join(node.path(), "sigma_ker"), "must be > 0");
  if (!(prior.kernel.length_scale > 0.0)) field_error(join(node.path(), "length_scale"), "must be > 0");
  if (!(prior.noise_var > 0.0)) field_error(join(node.path(), "sigma_eps"), "algorithm noise must be > 0");
  return prior;
}

// %.17g round-trips every double.
void put_double(std::string& out, double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  out.append(buf, static_cast<std::size_t>(n));
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs) {
  const auto n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (const double x : xs) sum += x;
  const double mean = sum / n;
  if (xs.size() < 2) return MeanSe{mean, 0.0};
  double ss = 0.0;
  for (const double x : xs) ss += (x - mean) * (x - mean);
  return MeanSe{mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

AcquisitionKind make_acquisition(std::string_view name, const AcquisitionOptions& options,
                                 double t, double delta) {
  const double eps = options.epsilon.value_or(kDefaultEpsilon);
  const double gamma = options.gamma.value_or(kDefaultGamma);
  if (name == "rmile") return RmileParams::make(t, delta, eps, gamma);
  if (name == "mile") return RmileParams::mile(t, delta);
  if (name == "multi") {
    MultiThresholdParams p{options.thresholds.empty() ? std::vector<double>{t} : options.thresholds,
                           ClassifyParams::make(t, delta, eps), gamma};
    p.validate();
    return p;
  }
  if (name == "varred") return VarianceReduction{};
  if (name == "straddle") return Straddle{t};
  if (name == "lse") return LseAmbiguity{t, options.beta_lse.value_or(kDefaultBetaLse)};
  if (name == "random") return RandomChoice{options.seed};
  throw Error(ErrorCode::Config, "unknown acquisition '" + std::string(name) +
                                     "' (expected rmile, mile, multi, varred, straddle, lse or random)");
}

std::vector<std::string> split_names(std::string_view csv) {
  std::vector<std::string> names;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t end = std::min(csv.find(',', start), csv.size());
    std::string name(csv.substr(start, end - start));
    name.erase(0, name.find_first_not_of(' '));
    name.erase(name.find_last_not_of(' ') + 1);
    if (!name.empty()) names.push_back(std::move(name));
    start = end + 1;
  }
  return names;
}

ExperimentConfig HarnessConfig::with_acquisition(std::string_view name) const {
  ExperimentConfig out = experiment;
  out.acquisition = make_acquisition(name, options, experiment.threshold, experiment.delta);
  return out;
}

HarnessConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(std::string("invalid JSON: ") + e.what());
  }
  const Node root(doc, "");
  root.expect_object({"domain", "objective", "noise", "prior", "acquisition", "budget", "n_seeds",
                      "initial_seed_points", "safe", "threshold", "delta", "repetitions",
                      "master_seed"});

  HarnessConfig cfg;
  ExperimentConfig& e = cfg.experiment;
  try {
    e.domain = parse_domain(root.at("domain"));
    e.threshold = root.at("threshold").number();
    e.budget = root.at("budget").unsigned_integer();
    if (e.budget < 1) field_error("budget", "must be >= 1");
    if (const auto n = root.find("delta")) e.delta = n->number();
    if (!(e.delta > 0.0 && e.delta < 1.0)) field_error("delta", "must lie in (0, 1)");
    if (const auto n = root.find("n_seeds")) e.n_seeds = n->unsigned_integer();
    if (const auto n = root.find("repetitions")) e.repetitions = n->unsigned_integer();
    if (e.repetitions < 1) field_error("repetitions", "must be >= 1");
    if (const auto n = root.find("master_seed")) e.master_seed = n->unsigned_integer();

    if (const auto pts = root.find("initial_seed_points")) {
      if (!pts->raw().is_array()) field_error(pts->path(), "expected an array of points");
      for (std::size_t i = 0; i < pts->raw().size(); ++i) {
        const Node p(pts->raw()[i], pts->path() + "[" + std::to_string(i) + "]");
        e.initial_seed_points.push_back(p.numbers());
        if (e.initial_seed_points.back().size() != e.domain.lower.size()) {
          field_error(p.path(), "point dimension does not match the domain");
        }
      }
    }

    e.objective = parse_objective(root.at("objective"), e.domain, base_dir);

    std::optional<double> model_sigma;
    e.noise.seed = e.master_seed;
    if (const auto noise = root.find("noise")) {
      noise->expect_object({"model_sigma", "ln_model_sigma", "seed"});
      model_sigma = linear_or_log(*noise, "model_sigma", "ln_model_sigma");
      if (model_sigma && !(*model_sigma >= 0.0)) field_error(noise->path() + ".model_sigma", "must be >= 0");
      if (const auto s = noise->find("seed")) e.noise.seed = s->unsigned_integer();
    }
    std::size_t m = 1;
    for (const std::size_t r : e.domain.resolution) m *= r;
    e.prior = parse_prior(root.at("prior"), m, model_sigma, e.noise.model_sigma);

    cfg.options.seed = e.master_seed;
    if (const auto acq = root.find("acquisition")) {
      if (acq->raw().is_string()) {
        cfg.acquisition = acq->string();
      } else {
        acq->expect_object({"kind", "epsilon", "gamma", "beta_lse", "thresholds", "seed"});
        cfg.acquisition = acq->at("kind").string();
        if (const auto v = acq->find("epsilon")) cfg.options.epsilon = v->number();
        if (const auto v = acq->find("gamma")) cfg.options.gamma = v->number();
        if (const auto v = acq->find("beta_lse")) cfg.options.beta_lse = v->number();
        if (const auto v = acq->find("thresholds")) cfg.options.thresholds = v->numbers();
        if (const auto v = acq->find("seed")) cfg.options.seed = v->unsigned_integer();
      }
    }
    e.acquisition = make_acquisition(cfg.acquisition, cfg.options, e.threshold, e.delta);

    if (const auto safe = root.find("safe")) {
      safe->expect_object({"gamma_safe", "threshold"});
      SafeParams p{e.threshold, 1.96};
      if (const auto v = safe->find("gamma_safe")) p.gamma_safe = v->number();
      if (const auto v = safe->find("threshold")) p.t = v->number();
      e.safe = p;
    }
    e.validate();
  } catch (const Error& err) {
    if (err.code() == ErrorCode::Config) throw;
    config_error(err.what());
  }
  return cfg;
}

HarnessConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path), path.parent_path());
}

void write_trace_csv(std::ostream& out, std::string_view acq, const std::vector<RunTrace>& traces) {
  std::string buf = "run,step,acq,index,y,set_size,precision,recall,f1,score\n";
  for (std::size_t r = 0; r < traces.size(); ++r) {
    for (const TraceStep& s : traces[r].steps) {
      buf += std::to_string(r) + ',' + std::to_string(s.step) + ',';
      buf += acq;
      buf += ',' + std::to_string(s.index) + ',';
      put_double(buf, s.y);
      buf += ',' + std::to_string(s.set_size) + ',';
      put_double(buf, s.precision);
      buf += ',';
      put_double(buf, s.recall);
      buf += ',';
      put_double(buf, s.f1);
      buf += ',';
      put_double(buf, s.score);
      buf += '\n';
    }
  }
  out << buf;
}

std::vector<CompareRow> aggregate(std::string_view acq, const std::vector<RunTrace>& traces) {
  if (traces.empty()) throw Error(ErrorCode::InvalidInput, "nothing to aggregate");
  const std::size_t steps = traces.front().steps.size();
  for (const RunTrace& t : traces) {
    if (t.steps.size() != steps) throw Error(ErrorCode::LengthMismatch, "traces differ in length");
  }
  std::vector<CompareRow> rows;
  std::vector<double> f1(traces.size()), prec(traces.size()), rec(traces.size()), size(traces.size());
  for (std::size_t k = 0; k < steps; ++k) {
    for (std::size_t r = 0; r < traces.size(); ++r) {
      const TraceStep& s = traces[r].steps[k];
      f1[r] = s.f1;
      prec[r] = s.precision;
      rec[r] = s.recall;
      size[r] = static_cast<double>(s.set_size);
    }
    const MeanSe a = mean_se(f1), b = mean_se(prec), c = mean_se(rec), d = mean_se(size);
    rows.push_back(CompareRow{std::string(acq), k, a.mean, a.se, b.mean, b.se, c.mean, c.se, d.mean, d.se});
  }
  return rows;
}

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows) {
  std::string buf = "acq,step,f1_mean,f1_se,prec_mean,prec_se,rec_mean,rec_se,size_mean,size_se\n";
  for (const CompareRow& row : rows) {
    buf += row.acq + ',' + std::to_string(row.step);
    for (const double v : {row.f1_mean, row.f1_se, row.prec_mean, row.prec_se, row.rec_mean,
                           row.rec_se, row.size_mean, row.size_se}) {
      buf += ',';
      put_double(buf, v);
    }
    buf += '\n';
  }
  out << buf;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.close();
    if (!out) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot move output into place at " + path.string());
  }
}

std::size_t threads_from_env() {
  const char* raw = std::getenv("LEVELSET_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  const std::string_view s(raw);
  std::size_t n = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::Config, "LEVELSET_THREADS must be a non-negative integer, got '" +
                                       std::string(s) + "'");
  }
  return n;
}

std::string run_to_csv(const HarnessConfig& config, std::size_t threads) {
  const std::vector<RunTrace> traces = run_experiment(config.experiment, threads);
  std::ostringstream out;
  write_trace_csv(out, config.acquisition, traces);
  return out.str();
}

std::string compare_to_csv(const HarnessConfig& config, const std::vector<std::string>& acquisitions,
                           std::size_t threads) {
  if (acquisitions.empty()) throw Error(ErrorCode::Config, "no acquisition given");
  std::set<std::string> seen;
  std::vector<ExperimentConfig> experiments;
  for (const std::string& name : acquisitions) {
    if (!seen.insert(name).second) throw Error(ErrorCode::Config, "acquisition '" + name + "' listed twice");
    try {
      experiments.push_back(config.with_acquisition(name));
    } catch (const Error& err) {
      if (err.code() == ErrorCode::Config) throw;
      throw Error(ErrorCode::Config, "acquisition '" + name + "': " + err.what());
    }
  }
  std::vector<CompareRow> rows;
  for (std::size_t a = 0; a < experiments.size(); ++a) {
    const auto part = aggregate(acquisitions[a], run_experiment(experiments[a], threads));
    rows.insert(rows.end(), part.begin(), part.end());
  }
  std::ostringstream out;
  write_compare_csv(out, rows);
  return out.str();
}

void run_file(const std::filesystem::path& config, const std::filesystem::path& out,
              std::size_t threads) {
  write_file_atomic(out, run_to_csv(load_config(config), threads));
}

void compare_file(const std::filesystem::path& config, std::string_view acquisitions,
                  const std::filesystem::path& out, std::size_t threads) {
  const HarnessConfig cfg = load_config(config);
  write_file_atomic(out, compare_to_csv(cfg, split_names(acquisitions), threads));
}

}  // namespace levelset
