//
// Copyright 2026 The dpclt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "cli.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "dpclt/empirical_roc.h"
#include "dpclt/fisher_moments.h"
#include "dpclt/lp_sampler.h"
#include "dpclt/mechanisms.h"
#include "dpclt/noise1d.h"
#include "dpclt/numerics.h"
#include "dpclt/random.h"
#include "dpclt/stats.h"
#include "dpclt/status_macros.h"
#include "dpclt/tradeoff_curve.h"

namespace dpclt::cli {
namespace {

using Json = nlohmann::json;

std::string Num(double v) { return absl::StrFormat("%.17g", v); }

absl::StatusOr<std::vector<double>> ParseList(const std::string& text) {
  std::vector<double> out;
  for (absl::string_view cell : absl::StrSplit(text, ',', absl::SkipWhitespace())) {
    cell = absl::StripAsciiWhitespace(cell);
    try {
      std::size_t used = 0;
      const std::string s(cell);
      out.push_back(std::stod(s, &used));
      if (used != s.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      return absl::InvalidArgumentError(
          absl::StrCat("cannot parse number '", cell, "'"));
    }
  }
  if (out.empty()) return absl::InvalidArgumentError("empty number list");
  return out;
}

absl::StatusOr<std::size_t> ToCount(double v, const char* name) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e12) {
    return absl::InvalidArgumentError(
        absl::StrCat(name, " must be a positive integer, got ", v));
  }
  return static_cast<std::size_t>(v);
}

std::string CsvComment(const Json& descriptor) {
  return absl::StrCat("# ", descriptor.dump(), "\n");
}

absl::StatusOr<PrivacyBudget> BudgetFromFlags(const std::string& kind, double eps,
                                              double delta, double mu) {
  if (kind == "pure") return PrivacyBudget::PureDp(eps);
  if (kind == "approx") return PrivacyBudget::ApproxDp(eps, delta);
  if (kind == "gdp") return PrivacyBudget::Gdp(mu);
  return absl::InvalidArgumentError(
      absl::StrCat("unknown budget '", kind, "' (pure, approx, gdp)"));
}

absl::StatusOr<NoiseModel> NoiseFromFlags(const std::string& family, double scale,
                                          double h, double p_geom) {
  return NoiseModel::FromJson(
      Json{{"family", family}, {"scale", scale}, {"h", h}, {"p_geom", p_geom}});
}

// A subcommand: options bound to its parameter struct plus a runner that
// renders the full output.
struct Command {
  CLI::App* app = nullptr;
  std::function<absl::StatusOr<std::string>()> run;
};

// ---------------------------------------------------------------------------
// roc

struct RocParams {
  std::string kind = "gdp";
  double mu = 1.0;
  double eps = 1.0;
  double delta = 0.0;
  int grid = 101;
  std::string noise = "laplace";
  double scale = 1.0;
  double h = 1.0;
  double p_geom = 0.5;
  double shift = 1.0;
  ExperimentConfig experiment;
  double sample_size = 10000;
  std::string direction = "random_unit";
  std::string variant = "appendix";
};

void AddExperimentOptions(CLI::App* app, ExperimentConfig& cfg, double& sample_size,
                          std::string& direction, std::string& variant) {
  app->add_option("--n", cfg.n, "Dimension");
  app->add_option("--p", cfg.p, "Norm exponent p >= 1");
  app->add_option("--alpha", cfg.alpha, "Power alpha >= 1");
  app->add_option("--c", cfg.c, "Density coefficient c > 0");
  app->add_option("--mu", cfg.mu, "GDP parameter mu > 0");
  app->add_option("--N", sample_size, "Monte Carlo sample size");
  app->add_option("--seed", cfg.seed, "Random seed");
  app->add_option("--direction", direction, "Shift direction: random_unit or axis");
  app->add_option("--variant", variant, "Threshold rule: appendix or main_text");
}

absl::Status FinishExperiment(ExperimentConfig& cfg, double sample_size,
                              const std::string& direction,
                              const std::string& variant) {
  ASSIGN_OR_RETURN(cfg.sample_size, ToCount(sample_size, "N"));
  ASSIGN_OR_RETURN(cfg.direction_mode, ParseDirectionMode(direction));
  ASSIGN_OR_RETURN(cfg.variant, ParseTieVariant(variant));
  return cfg.Validate();
}

Command MakeRoc(CLI::App& root, RocParams& p) {
  Command cmd;
  cmd.app = root.add_subcommand("roc", "Trade-off curve as alpha,beta CSV");
  CLI::App* app = cmd.app;
  app->add_option("--kind", p.kind, "gdp, fepsdelta, noise or empirical");
  app->add_option("--eps", p.eps, "epsilon for fepsdelta");
  app->add_option("--delta", p.delta, "delta for fepsdelta");
  app->add_option("--grid", p.grid, "Number of alpha grid points");
  app->add_option("--noise", p.noise, "Noise family for --kind noise");
  app->add_option("--scale", p.scale, "Noise scale");
  app->add_option("--tlap-h", p.h, "Truncation point of the standard truncated Laplace");
  app->add_option("--p-geom", p.p_geom, "Geometric ratio for double_geometric / tgu");
  app->add_option("--shift", p.shift, "Shift for --kind noise");
  AddExperimentOptions(app, p.experiment, p.sample_size, p.direction, p.variant);
  cmd.run = [&p]() -> absl::StatusOr<std::string> {
    if (p.grid < 2) return absl::InvalidArgumentError("--grid must be >= 2");
    const auto grid = static_cast<std::size_t>(p.grid);
    if (p.kind == "gdp") {
      ASSIGN_OR_RETURN(TradeoffCurve f, TradeoffCurve::Gdp(p.experiment.mu));
      return CsvComment(f.descriptor()) + CurveToCsv(f, grid);
    }
    if (p.kind == "fepsdelta") {
      ASSIGN_OR_RETURN(TradeoffCurve f, TradeoffCurve::FEpsDelta(p.eps, p.delta));
      return CsvComment(f.descriptor()) + CurveToCsv(f, grid);
    }
    if (p.kind == "noise") {
      ASSIGN_OR_RETURN(NoiseModel model, NoiseFromFlags(p.noise, p.scale, p.h, p.p_geom));
      ASSIGN_OR_RETURN(TradeoffCurve f, ExactTradeoff(model, p.shift));
      return CsvComment(f.descriptor()) + CurveToCsv(f, grid);
    }
    if (p.kind == "empirical") {
      ExperimentConfig cfg = p.experiment;
      cfg.grid_size = grid;
      RETURN_IF_ERROR(FinishExperiment(cfg, p.sample_size, p.direction, p.variant));
      ASSIGN_OR_RETURN(CltDeviationResult r, CltDeviation(cfg));
      ASSIGN_OR_RETURN(TradeoffCurve f, r.curve.Curve());
      const Json descriptor = {{"kind", "empirical"},
                               {"config", cfg.ToJson()},
                               {"scale", r.scale},
                               {"sup_to_gmu", r.sup_to_gmu}};
      return CsvComment(descriptor) + CurveToCsv(f, grid);
    }
    return absl::InvalidArgumentError(absl::StrCat(
        "unknown --kind '", p.kind, "' (gdp, fepsdelta, noise, empirical)"));
  };
  return cmd;
}

// ---------------------------------------------------------------------------
// sample

struct SampleParams {
  std::string family = "laplace";
  double count = 10;
  std::uint64_t seed = 1;
  std::string format = "csv";
  double scale = 1.0;
  double h = 1.0;
  double p_geom = 0.5;
  int n = 2;
  double p = 2.0;
  double alpha = 2.0;
  double c = 1.0;
  unsigned threads = 1;
};

std::string EncodeMatrix(const SampleMatrix& m, const Json& descriptor,
                         const std::string& format) {
  if (format == "binary") {
    static_assert(std::endian::native == std::endian::little,
                  "binary sample output assumes a little-endian host");
    return std::string(reinterpret_cast<const char*>(m.data.data()),
                       m.data.size() * sizeof(double));
  }
  std::string out = CsvComment(descriptor);
  std::vector<std::string> header;
  for (std::size_t j = 0; j < m.cols; ++j) header.push_back(absl::StrCat("x", j + 1));
  absl::StrAppend(&out, absl::StrJoin(header, ","), "\n");
  for (std::size_t i = 0; i < m.rows; ++i) {
    const auto row = m.Row(i);
    absl::StrAppend(&out, absl::StrJoin(row, ",", [](std::string* s, double v) {
                      s->append(Num(v));
                    }),
                    "\n");
  }
  return out;
}

Command MakeSample(CLI::App& root, SampleParams& p) {
  Command cmd;
  cmd.app = root.add_subcommand("sample", "Draw noise samples");
  CLI::App* app = cmd.app;
  app->add_option("--family", p.family,
                  "laplace, truncated_laplace, gaussian, double_geometric, tgu, "
                  "norm_power, independent or sphere");
  app->add_option("--count", p.count, "Number of samples (rows)");
  app->add_option("--seed", p.seed, "Random seed");
  app->add_option("--format", p.format, "csv or binary (little-endian f64, row-major)");
  app->add_option("--scale", p.scale, "One-dimensional noise scale");
  app->add_option("--tlap-h", p.h, "Truncation point of the standard truncated Laplace");
  app->add_option("--p-geom", p.p_geom, "Geometric ratio");
  app->add_option("--n", p.n, "Dimension");
  app->add_option("--p", p.p, "Norm exponent p >= 1");
  app->add_option("--alpha", p.alpha, "Power alpha >= 1");
  app->add_option("--c", p.c, "Density coefficient");
  app->add_option("--threads", p.threads, "Worker threads (output does not depend on it)");
  cmd.run = [&p]() -> absl::StatusOr<std::string> {
    if (p.format != "csv" && p.format != "binary") {
      return absl::InvalidArgumentError("--format must be csv or binary");
    }
    ASSIGN_OR_RETURN(std::size_t count, ToCount(p.count, "--count"));
    SampleMatrix m;
    Json descriptor;
    if (p.family == "norm_power") {
      NormPowerDensity d{p.n, p.p, p.alpha, p.c};
      ASSIGN_OR_RETURN(m, SampleNormPower(d, count, p.seed, p.threads));
      descriptor = {{"kind", "norm_power"}, {"density", d.ToJson()}};
    } else if (p.family == "independent") {
      ASSIGN_OR_RETURN(m, SampleIndependent(p.p, p.n, count, p.seed, p.threads));
      descriptor = {{"kind", "independent"}, {"p", p.p}, {"n", p.n}};
    } else if (p.family == "sphere") {
      ASSIGN_OR_RETURN(m, SampleLpSphere(p.p, p.n, count, p.seed, p.threads));
      descriptor = {{"kind", "lp_sphere"}, {"p", p.p}, {"n", p.n}};
    } else {
      ASSIGN_OR_RETURN(NoiseModel model, NoiseFromFlags(p.family, p.scale, p.h, p.p_geom));
      m.rows = count;
      m.cols = 1;
      m.data = Sample(model, count, p.seed, p.threads);
      descriptor = {{"kind", "noise1d"}, {"noise", model.ToJson()}};
    }
    descriptor["seed"] = p.seed;
    return EncodeMatrix(m, descriptor, p.format);
  };
  return cmd;
}

// ---------------------------------------------------------------------------
// fisher

struct FisherParams {
  int n = 10;
  double p = 2.0;
  double alpha = 2.0;
  double mc_count = 0;
  std::uint64_t seed = 1;
};

Command MakeFisher(CLI::App& root, FisherParams& p) {
  Command cmd;
  cmd.app = root.add_subcommand("fisher", "Fisher information and moment summary (JSON)");
  CLI::App* app = cmd.app;
  app->add_option("--n", p.n, "Dimension");
  app->add_option("--p", p.p, "Norm exponent p >= 1");
  app->add_option("--alpha", p.alpha, "Power alpha >= 1");
  app->add_option("--mc-count", p.mc_count, "Monte Carlo sample size (0 = exact only)");
  app->add_option("--seed", p.seed, "Random seed");
  cmd.run = [&p]() -> absl::StatusOr<std::string> {
    ASSIGN_OR_RETURN(FisherSummary s, Summarize(p.n, p.p, p.alpha));
    Json j = s.ToJson();
    ASSIGN_OR_RETURN(double c_pa, CCoefficient(p.p, p.alpha));
    j["c_coefficient"] = c_pa;
    if (p.mc_count > 0) {
      ASSIGN_OR_RETURN(std::size_t count, ToCount(p.mc_count, "--mc-count"));
      ASSIGN_OR_RETURN(McEstimate mc,
                       FisherInfoMc(NormPowerDensity{p.n, p.p, p.alpha, 1.0}, count,
                                    p.seed));
      j["fisher_mc"] = {{"value", mc.value}, {"std_error", mc.std_error}};
    }
    return j.dump(2) + "\n";
  };
  return cmd;
}

// ---------------------------------------------------------------------------
// calibrate

struct CalibrateParams {
  std::string budget = "pure";
  double eps = 1.0;
  double delta = 1e-5;
  double mu = 1.0;
  double sens = 1.0;
  std::string family = "laplace";
  int grid = 1001;
};

Command MakeCalibrate(CLI::App& root, CalibrateParams& p) {
  Command cmd;
  cmd.app = root.add_subcommand("calibrate", "Calibrate one-dimensional noise (JSON)");
  CLI::App* app = cmd.app;
  app->add_option("--budget", p.budget, "pure, approx or gdp");
  app->add_option("--eps", p.eps, "epsilon");
  app->add_option("--delta", p.delta, "delta");
  app->add_option("--mu", p.mu, "mu");
  app->add_option("--sens", p.sens, "Sensitivity");
  app->add_option("--family", p.family, "Noise family");
  app->add_option("--grid", p.grid, "Grid size of the budget check");
  cmd.run = [&p]() -> absl::StatusOr<std::string> {
    ASSIGN_OR_RETURN(PrivacyBudget budget, BudgetFromFlags(p.budget, p.eps, p.delta, p.mu));
    ASSIGN_OR_RETURN(NoiseFamily family, ParseNoiseFamily(p.family));
    ASSIGN_OR_RETURN(MechanismSpec spec, CalibrateMechanism(budget, p.sens, family));
    if (p.grid < 2) return absl::InvalidArgumentError("--grid must be >= 2");
    ASSIGN_OR_RETURN(BudgetCheckResult check,
                     BudgetCheck(spec, static_cast<std::size_t>(p.grid)));
    ASSIGN_OR_RETURN(NoiseModel model, Calibrate(budget, p.sens, family));
    Json j = {{"budget", budget.ToJson()},
              {"noise", model.ToJson()},
              {"second_moment", SecondMoment(model)},
              {"mechanism", spec.ToJson()},
              {"budget_check",
               {{"dominates", check.dominates},
                {"sup_gap", check.sup_gap},
                {"worst_violation", check.worst_violation}}}};
    return j.dump(2) + "\n";
  };
  return cmd;
}

// ---------------------------------------------------------------------------
// answer

struct AnswerParams {
  std::string values = "0";
  std::string mechanism = "laplace";
  std::string spec_path;
  std::string budget = "pure";
  double eps = 1.0;
  double delta = 1e-5;
  double mu = 1.0;
  double sens = 1.0;
  double p = 2.0;
  double alpha = 2.0;
  double c = 1.0;
  std::uint64_t seed = 1;
};

Command MakeAnswer(CLI::App& root, AnswerParams& p, std::ostream& err) {
  Command cmd;
  cmd.app = root.add_subcommand("answer", "Release a noisy query answer (JSON array)");
  CLI::App* app = cmd.app;
  app->add_option("--values", p.values, "Comma-separated true answer");
  app->add_option("--mechanism", p.mechanism,
                  "A noise family, norm_power or linf");
  app->add_option("--spec", p.spec_path, "Mechanism spec JSON file (overrides calibration)");
  app->add_option("--budget", p.budget, "pure, approx or gdp");
  app->add_option("--eps", p.eps, "epsilon");
  app->add_option("--delta", p.delta, "delta");
  app->add_option("--mu", p.mu, "mu");
  app->add_option("--sens", p.sens, "Sensitivity (l2 for norm_power and linf)");
  app->add_option("--p", p.p, "Norm exponent for norm_power");
  app->add_option("--alpha", p.alpha, "Power for norm_power");
  app->add_option("--c", p.c, "Coefficient for norm_power");
  app->add_option("--seed", p.seed, "Random seed");
  cmd.run = [&p, &err]() -> absl::StatusOr<std::string> {
    ASSIGN_OR_RETURN(std::vector<double> answer, ParseList(p.values));
    std::vector<double> released;
    if (p.mechanism == "linf" && p.spec_path.empty()) {
      ASSIGN_OR_RETURN(LinfAnswer a, LinfMechanism(answer, p.sens, p.mu, p.seed));
      err << Json{{"linf_report",
                   {{"p", a.report.p},
                    {"t", a.report.t},
                    {"noise_linf", a.report.noise_linf},
                    {"ratio", a.report.ratio}}}}
                 .dump()
          << "\n";
      released = std::move(a.values);
    } else {
      std::optional<MechanismSpec> spec;
      if (!p.spec_path.empty()) {
        std::ifstream in(p.spec_path);
        if (!in) {
          return absl::InvalidArgumentError(
              absl::StrCat("cannot read spec file '", p.spec_path, "'"));
        }
        const Json j = Json::parse(in, nullptr, false);
        if (j.is_discarded()) {
          return absl::InvalidArgumentError("spec file is not valid JSON");
        }
        ASSIGN_OR_RETURN(MechanismSpec s, MechanismSpec::FromJson(j));
        spec = std::move(s);
      } else if (p.mechanism == "norm_power") {
        NormPowerDensity d{static_cast<int>(answer.size()), p.p, p.alpha, p.c};
        ASSIGN_OR_RETURN(MechanismSpec s, CalibrateNormPower(d, p.sens, p.mu));
        spec = std::move(s);
      } else {
        ASSIGN_OR_RETURN(PrivacyBudget budget,
                         BudgetFromFlags(p.budget, p.eps, p.delta, p.mu));
        ASSIGN_OR_RETURN(NoiseFamily family, ParseNoiseFamily(p.mechanism));
        ASSIGN_OR_RETURN(MechanismSpec s, CalibrateMechanism(budget, p.sens, family));
        spec = std::move(s);
      }
      err << Json{{"mechanism", spec->ToJson()}}.dump() << "\n";
      ASSIGN_OR_RETURN(released, AnswerQuery(answer, *spec, p.seed));
    }
    return Json(released).dump() + "\n";
  };
  return cmd;
}

// ---------------------------------------------------------------------------
// clt-experiment

struct CltParams {
  std::string sweep = "N";
  std::string values = "100,1000,10000";
  int seeds = 20;
  ExperimentConfig experiment;
  double sample_size = 10000;
  std::string direction = "random_unit";
  std::string variant = "appendix";
  int grid = 1001;
  unsigned threads = 1;
};

Command MakeClt(CLI::App& root, CltParams& p, std::ostream& err) {
  Command cmd;
  cmd.app = root.add_subcommand("clt-experiment",
                                "Deviation from G_mu across a sweep of N or n (CSV)");
  CLI::App* app = cmd.app;
  app->add_option("--sweep", p.sweep, "Swept parameter: N or n");
  app->add_option("--values", p.values, "Comma-separated sweep values");
  app->add_option("--seeds", p.seeds, "Seeds per sweep point (seed, seed+1, ...)");
  app->add_option("--grid", p.grid, "Alpha grid for the sup distance");
  app->add_option("--threads", p.threads, "Worker threads (output does not depend on it)");
  AddExperimentOptions(app, p.experiment, p.sample_size, p.direction, p.variant);
  cmd.run = [&p, &err]() -> absl::StatusOr<std::string> {
    if (p.sweep != "N" && p.sweep != "n") {
      return absl::InvalidArgumentError("--sweep must be N or n");
    }
    if (p.seeds < 1) return absl::InvalidArgumentError("--seeds must be >= 1");
    if (p.grid < 2) return absl::InvalidArgumentError("--grid must be >= 2");
    ASSIGN_OR_RETURN(std::vector<double> values, ParseList(p.values));
    ExperimentConfig base = p.experiment;
    base.grid_size = static_cast<std::size_t>(p.grid);
    RETURN_IF_ERROR(FinishExperiment(base, p.sample_size, p.direction, p.variant));
    Json descriptor = base.ToJson();
    descriptor.erase(p.sweep);
    descriptor["sweep"] = p.sweep;
    descriptor["seeds"] = p.seeds;
    std::string out = CsvComment(descriptor);
    absl::StrAppend(&out,
                    "sweep,value,seed,sup_to_gmu,ks_projection,levy_projection,"
                    "large_deviation\n");
    Json medians = Json::object();
    for (double v : values) {
      ExperimentConfig cfg = base;
      ASSIGN_OR_RETURN(std::size_t iv, ToCount(v, "sweep value"));
      if (p.sweep == "N") {
        cfg.sample_size = iv;
      } else {
        cfg.n = static_cast<int>(iv);
      }
      std::vector<double> sups;
      for (int s = 0; s < p.seeds; ++s) {
        cfg.seed = base.seed + static_cast<std::uint64_t>(s);
        ASSIGN_OR_RETURN(CltDeviationResult r, CltDeviation(cfg, p.threads));
        sups.push_back(r.sup_to_gmu);
        absl::StrAppend(&out, p.sweep, ",", iv, ",", cfg.seed, ",", Num(r.sup_to_gmu),
                        ",", Num(r.ks_projection), ",", Num(r.levy_projection), ",",
                        r.sup_to_gmu > 0.1 ? 1 : 0, "\n");
      }
      medians[absl::StrCat(iv)] = Median(sups);
    }
    err << Json{{"median_sup_to_gmu", medians}}.dump() << "\n";
    return out;
  };
  return cmd;
}

// ---------------------------------------------------------------------------
// tables

struct TablesParams {
  std::string table = "all";
  std::string n_values = "2,10,30,100";
  double mc_count = 10000;
  std::uint64_t seed = 1;
  double eps = 1.0;
  double delta = 1e-5;
};

absl::StatusOr<std::string> FisherTable(const TablesParams& p) {
  ASSIGN_OR_RETURN(std::vector<double> ns, ParseList(p.n_values));
  ASSIGN_OR_RETURN(std::size_t count, ToCount(p.mc_count, "--mc-count"));
  std::string out =
      "n,p,alpha,second_moment,fisher,product,second_moment_asymp,fisher_asymp,"
      "fisher_mc,fisher_mc_se,linf_product_mc,linf_product_se\n";
  const std::pair<double, double> shapes[] = {
      {1.0, 1.0}, {2.0, 1.0}, {2.0, 2.0}, {std::numbers::pi, std::numbers::e}};
  for (double nv : ns) {
    ASSIGN_OR_RETURN(std::size_t n, ToCount(nv, "n"));
    for (const auto& [pp, aa] : shapes) {
      const int ni = static_cast<int>(n);
      ASSIGN_OR_RETURN(double second, SecondMomentExact(ni, pp, aa));
      ASSIGN_OR_RETURN(double fisher, FisherInfoExact(ni, pp, aa));
      ASSIGN_OR_RETURN(MomentAsymptotics asym, Asymptotics(ni, pp, aa));
      ASSIGN_OR_RETURN(McEstimate mc,
                       FisherInfoMc(NormPowerDensity{ni, pp, aa, 1.0}, count, p.seed));
      ASSIGN_OR_RETURN(UncertaintyProduct up,
                       UncertaintyProducts(ni, pp, aa, count, p.seed));
      absl::StrAppend(&out, n, ",", Num(pp), ",", Num(aa), ",", Num(second), ",",
                      Num(fisher), ",", Num(second * fisher), ",",
                      Num(asym.second_moment), ",", Num(asym.fisher), ",",
                      Num(mc.value), ",", Num(mc.std_error), ",",
                      Num(up.linf_product_estimate), ",", Num(up.linf_std_error), "\n");
    }
  }
  return out;
}

absl::StatusOr<std::string> MechanismTable(const TablesParams& p) {
  ASSIGN_OR_RETURN(std::vector<ComparisonRow> rows, CompareMechanisms(p.eps, p.delta));
  std::string out = "mechanism,normalized_variance,quadrature\n";
  for (const ComparisonRow& r : rows) {
    absl::StrAppend(&out, r.mechanism, ",", Num(r.normalized_variance), ",",
                    Num(r.quadrature), "\n");
  }
  return out;
}

Command MakeTables(CLI::App& root, TablesParams& p) {
  Command cmd;
  cmd.app = root.add_subcommand("tables", "Moment/Fisher and mechanism tables (CSV)");
  CLI::App* app = cmd.app;
  app->add_option("--table", p.table, "fisher, mechanisms or all");
  app->add_option("--n-values", p.n_values, "Comma-separated dimensions");
  app->add_option("--mc-count", p.mc_count, "Monte Carlo sample size");
  app->add_option("--seed", p.seed, "Random seed");
  app->add_option("--eps", p.eps, "epsilon for the mechanism table");
  app->add_option("--delta", p.delta, "delta for the mechanism table");
  cmd.run = [&p]() -> absl::StatusOr<std::string> {
    if (p.table == "fisher") return FisherTable(p);
    if (p.table == "mechanisms") return MechanismTable(p);
    if (p.table != "all") {
      return absl::InvalidArgumentError("--table must be fisher, mechanisms or all");
    }
    ASSIGN_OR_RETURN(std::string fisher, FisherTable(p));
    ASSIGN_OR_RETURN(std::string mech, MechanismTable(p));
    return absl::StrCat("# table: fisher\n", fisher, "\n# table: mechanisms\n", mech);
  };
  return cmd;
}

// ---------------------------------------------------------------------------
// uncertainty

struct UncertaintyParams {
  int n = 10;
  double p = 2.0;
  double alpha = 2.0;
  double mc_count = 10000;
  std::uint64_t seed = 1;
};

Command MakeUncertainty(CLI::App& root, UncertaintyParams& p) {
  Command cmd;
  cmd.app = root.add_subcommand("uncertainty", "Uncertainty products (JSON)");
  CLI::App* app = cmd.app;
  app->add_option("--n", p.n, "Dimension");
  app->add_option("--p", p.p, "Norm exponent p >= 1");
  app->add_option("--alpha", p.alpha, "Power alpha >= 1");
  app->add_option("--mc-count", p.mc_count, "Monte Carlo sample size for l_inf");
  app->add_option("--seed", p.seed, "Random seed");
  cmd.run = [&p]() -> absl::StatusOr<std::string> {
    ASSIGN_OR_RETURN(std::size_t count, ToCount(p.mc_count, "--mc-count"));
    ASSIGN_OR_RETURN(UncertaintyProduct u,
                     UncertaintyProducts(p.n, p.p, p.alpha, count, p.seed));
    const Json j = {{"n", p.n},
                    {"p", p.p},
                    {"alpha", p.alpha},
                    {"l2_product", u.l2_product},
                    {"l2_bound_holds", u.l2_product >= p.n * (1.0 - 1e-12)},
                    {"linf_product_estimate", u.linf_product_estimate},
                    {"linf_std_error", u.linf_std_error}};
    return j.dump(2) + "\n";
  };
  return cmd;
}

// ---------------------------------------------------------------------------
// levy

struct LevyParams {
  std::string input;
  std::string samples;
  double normal_count = 0;
  std::uint64_t seed = 1;
};

Command MakeLevy(CLI::App& root, LevyParams& p) {
  Command cmd;
  cmd.app = root.add_subcommand("levy", "Levy distance of samples to N(0, 1) (JSON)");
  CLI::App* app = cmd.app;
  app->add_option("--input", p.input, "File with one sample per line");
  app->add_option("--samples", p.samples, "Comma-separated samples");
  app->add_option("--normal-count", p.normal_count, "Draw this many N(0, 1) samples");
  app->add_option("--seed", p.seed, "Random seed for --normal-count");
  cmd.run = [&p]() -> absl::StatusOr<std::string> {
    std::vector<double> xs;
    if (!p.input.empty()) {
      std::ifstream in(p.input);
      if (!in) {
        return absl::InvalidArgumentError(
            absl::StrCat("cannot read input file '", p.input, "'"));
      }
      std::stringstream buffer;
      buffer << in.rdbuf();
      std::string text = buffer.str();
      std::replace(text.begin(), text.end(), '\n', ',');
      ASSIGN_OR_RETURN(xs, ParseList(text));
    } else if (!p.samples.empty()) {
      ASSIGN_OR_RETURN(xs, ParseList(p.samples));
    } else if (p.normal_count > 0) {
      ASSIGN_OR_RETURN(std::size_t count, ToCount(p.normal_count, "--normal-count"));
      ASSIGN_OR_RETURN(NoiseModel g, NoiseModel::Gaussian(1.0));
      xs = Sample(g, count, p.seed);
    } else {
      return absl::InvalidArgumentError(
          "one of --input, --samples or --normal-count is required");
    }
    std::sort(xs.begin(), xs.end());
    ASSIGN_OR_RETURN(double levy, LevyDistanceEmpirical(xs, NormalCdf));
    return Json{{"n", xs.size()}, {"levy_distance", levy}}.dump(2) + "\n";
  };
  return cmd;
}

// ---------------------------------------------------------------------------

Json ParseScalarString(const std::string& s) {
  Json j = Json::parse(s, nullptr, false);
  if (j.is_discarded() || j.is_object() || j.is_array()) return s;
  return j;
}

// Effective option values of a subcommand as JSON.
Json EffectiveConfig(const CLI::App* app) {
  Json j = {{"command", app->get_name()}};
  for (const CLI::Option* opt : app->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config" || name == "out") continue;
    const std::string value =
        opt->count() > 0 ? opt->results().back() : opt->get_default_str();
    j[name] = ParseScalarString(value);
  }
  return j;
}

std::string JsonToFlagValue(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::vector<std::string> parts;
    for (const Json& e : v) parts.push_back(e.is_string() ? e.get<std::string>() : e.dump());
    return absl::StrJoin(parts, ",");
  }
  return v.dump();
}

// Fills options that were not given on the command line from a JSON object.
absl::Status ApplyConfigFile(CLI::App* app, const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::InvalidArgumentError(absl::StrCat("cannot read config '", path, "'"));
  const Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError(
        absl::StrCat("config '", path, "' is not a JSON object"));
  }
  for (const auto& [key, value] : j.items()) {
    CLI::Option* opt = app->get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config" || key == "out" || key == "help") {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown config key '", key, "' for ", app->get_name()));
    }
    if (opt->count() > 0) continue;
    try {
      opt->add_result(JsonToFlagValue(value));
      opt->run_callback();
    } catch (const CLI::Error& e) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad config value for '", key, "': ", e.what()));
    }
  }
  return absl::OkStatus();
}

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kUnimplemented:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kNotFound:
      return kExitUsage;
    default:
      return kExitNumeric;
  }
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App root{"Trade-off functions, noise sampling and GDP experiments", "dpclt"};
  root.require_subcommand(1);
  root.option_defaults()->always_capture_default();

  RocParams roc;
  SampleParams sample;
  FisherParams fisher;
  CalibrateParams calibrate;
  AnswerParams answer;
  CltParams clt;
  TablesParams tables;
  UncertaintyParams uncertainty;
  LevyParams levy;
  std::vector<Command> commands = {
      MakeRoc(root, roc),           MakeSample(root, sample),
      MakeFisher(root, fisher),     MakeCalibrate(root, calibrate),
      MakeAnswer(root, answer, err), MakeClt(root, clt, err),
      MakeTables(root, tables),     MakeUncertainty(root, uncertainty),
      MakeLevy(root, levy)};

  std::string config_path;
  std::string out_path;
  for (Command& cmd : commands) {
    cmd.app->add_option("--config", config_path, "JSON file of option values");
    cmd.app->add_option("--out", out_path, "Output file (default stdout)");
  }

  try {
    root.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return root.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return root.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  for (Command& cmd : commands) {
    if (!cmd.app->parsed()) continue;
    if (!config_path.empty()) {
      if (absl::Status s = ApplyConfigFile(cmd.app, config_path); !s.ok()) {
        err << "error: " << s.message() << "\n";
        return kExitUsage;
      }
    }
    err << EffectiveConfig(cmd.app).dump() << "\n";
    absl::StatusOr<std::string> result = cmd.run();
    if (!result.ok()) {
      err << "error: " << result.status().message() << "\n";
      return ExitCodeFor(result.status());
    }
    if (out_path.empty()) {
      out << *result;
    } else {
      std::ofstream file(out_path, std::ios::binary);
      if (!file) {
        err << "error: cannot write '" << out_path << "'\n";
        return kExitUsage;
      }
      file << *result;
    }
    return kExitOk;
  }
  err << "error: no subcommand given\n";
  return kExitUsage;
}

}  // namespace dpclt::cli
