// Copyright 2026 The Sensorsched Authors.
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

// Command-line front end: compare, sweep-k, scale, curvature, guarantee.
//
// Every flag can also be set as `key = value` in the file given to
// --config; flags on the command line win. Exit codes: 0 success, 2
// configuration error, 3 numerical-conditioning error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sensorsched/errors.h"
#include "sensorsched/harness.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitConditioning = 3;

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> DefaultSweep(const std::string& command) {
  std::vector<double> out;
  if (command == "sweep-k") {
    for (int k = 55; k <= 115; k += 10) out.push_back(k);
  } else if (command == "scale") {
    for (int beta = 1; beta <= 6; ++beta) out.push_back(beta);
  }
  return out;
}

int Run(const std::string& command, sensorsched::ExperimentConfig& config,
        const std::string& methods, const std::string& ensemble,
        const std::string& sweep, const std::string& out_path) {
  using namespace sensorsched;
  if (methods.empty()) {
    config.methods = command == "scale"
                         ? std::vector<Method>{Method::kGreedy,
                                               Method::kRandomizedGreedy}
                         : std::vector<Method>{Method::kGreedy,
                                               Method::kRandomizedGreedy,
                                               Method::kRelaxation};
  } else {
    for (const std::string& name : SplitList(methods)) {
      config.methods.push_back(ParseMethod(name));
    }
  }
  config.ensemble = ParseEnsemble(ensemble);
  if (sweep.empty()) {
    config.sweep = DefaultSweep(command);
  } else {
    for (const std::string& item : SplitList(sweep)) {
      try {
        config.sweep.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ConfigError("bad sweep value '" + item + "'");
      }
    }
  }

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) throw ConfigError("cannot open output file " + out_path);
  }
  std::ostream& csv = out_path.empty() ? std::cout : file;
  std::ostream& report = out_path.empty() ? std::cerr : std::cout;

  if (command == "compare" || command == "sweep-k" || command == "scale") {
    const ExperimentResult result = command == "compare" ? RunCompare(config)
                                    : command == "sweep-k"
                                        ? RunSweepK(config)
                                        : RunScale(config);
    WriteExperimentCsv(result, csv);
    WriteExperimentSummary(result, report);
  } else if (command == "curvature") {
    const CurvatureStudy study = RunCurvatureStudy(config);
    WriteCurvatureCsv(study, csv);
    report << "c_max=" << FormatDouble(study.report.c_max)
           << (study.report.lower_bound ? " (sampled lower estimate)" : "")
           << " c=" << FormatDouble(study.report.c)
           << " alpha=" << FormatDouble(study.report.alpha) << '\n';
    if (study.instances > 0) {
      report << "curvature bound satisfied on " << study.satisfied << "/"
             << study.instances << " instances (p >= "
             << FormatDouble(study.report.thm2->probability) << "): "
             << (study.thm2_pass ? "pass" : "FAIL") << '\n';
    }
  } else if (command == "guarantee") {
    const std::vector<GuaranteeReport> reports = RunGuaranteeStudy(config);
    WriteGuaranteeCsv(reports, csv);
    int passed = 0;
    for (const GuaranteeReport& r : reports) {
      passed += (r.objective_pass && r.mse_pass) ? 1 : 0;
    }
    report << "guarantee held on " << passed << "/" << reports.size()
           << " instances\n";
  }
  csv.flush();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  sensorsched::ExperimentConfig config;
  std::string methods;
  std::string ensemble = "gaussian";
  std::string sweep;
  std::string out_path;

  CLI::App app{"Randomized greedy sensor scheduling for Kalman filtering"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Flat key = value configuration file");
  app.add_option("--out", out_path, "CSV output path (stdout if omitted)");
  app.add_option("--seed", config.seed, "Base seed");
  app.add_option("--trials", config.trials,
                 "Monte Carlo trials (instances for curvature/guarantee)");
  app.add_option("--epsilon", config.epsilon, "Randomized greedy epsilon");
  app.add_option("--m", config.m, "State dimension");
  app.add_option("--n", config.n, "Number of sensors");
  app.add_option("--k", config.k, "Sensors selected per step");
  app.add_option("--T", config.horizon, "Time horizon");
  app.add_option("--methods", methods,
                 "Comma list of randomized_greedy,greedy,relaxation,oracle,"
                 "random");
  app.add_option("--ensemble", ensemble, "gaussian or bernoulli");
  app.add_option("--noise", config.noise, "Noise variance for Q and R");
  app.add_option("--sweep", sweep, "Comma list of k values or scale factors");
  app.add_flag("--timing,!--no-timing", config.timing,
               "Record wall-clock scheduler time in elapsed_ns");
  app.add_option("--threads", config.threads, "Worker threads (0 = all)");
  app.add_option("--max-iters", config.relaxation.max_iters,
                 "Relaxation iteration limit");
  app.add_option("--q", config.q, "Deviation q of the curvature bound");
  app.add_option("--target-probability", config.target_probability,
                 "Probability used to pick q when --q is not given");
  app.add_option("--samples", config.samples,
                 "Sampled-curvature triples when n > 12");
  app.add_option("--pairs", config.pairs, "Nested pairs for the lemma check");
  app.add_option("--runs", config.runs,
                 "Randomized greedy runs per guarantee instance");

  std::vector<CLI::App*> commands = {
      app.add_subcommand("compare", "MSE over time for each method"),
      app.add_subcommand("sweep-k", "Final-step MSE as k varies"),
      app.add_subcommand("scale", "Greedy vs randomized greedy as size grows"),
      app.add_subcommand("curvature", "Curvature report and bound check"),
      app.add_subcommand("guarantee",
                         "Approximation guarantee vs exhaustive optimum"),
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  std::string command;
  for (CLI::App* sub : commands) {
    if (sub->parsed()) command = sub->get_name();
  }
  try {
    return Run(command, config, methods, ensemble, sweep, out_path);
  } catch (const sensorsched::ConditioningError& e) {
    std::cerr << "numerical conditioning error: " << e.what() << '\n';
    return kExitConditioning;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const sensorsched::CapExceededError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
