// paxad: run, validate and replay replicated-state-machine scenarios.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "paxad/cluster.hpp"
#include "paxad/errors.hpp"
#include "paxad/replay.hpp"
#include "paxad/scenario.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kInvalid = 1;

struct RunOptions {
  std::string scenario;
  std::string batch;
  std::optional<std::uint64_t> seed;
  std::string log;
  std::string format = "text";
};

struct Outcome {
  int code = 0;
  std::string report;
  std::string error;
};

Outcome run_one(const fs::path& path, const RunOptions& opt, const std::string& log_path) {
  Outcome out;
  try {
    auto scenario = paxad::load_scenario(path);
    if (opt.seed) scenario.net.seed = *opt.seed;
    const auto result = paxad::run(scenario);
    if (!log_path.empty()) {
      std::ofstream os(log_path, std::ios::binary);
      if (!os) throw std::runtime_error("cannot write log: " + log_path);
      result.log.write(os);
    }
    out.report = opt.format == "json" ? paxad::report_json(result.report) + "\n"
                                      : paxad::report_text(result.report);
    out.code = paxad::exit_code(result.report);
  } catch (const std::exception& e) {
    out.error = path.string() + ": " + e.what();
    out.code = kInvalid;
  }
  return out;
}

int cmd_run(const RunOptions& opt) {
  if (opt.batch.empty()) {
    const auto out = run_one(opt.scenario, opt, opt.log);
    if (!out.error.empty()) std::cerr << out.error << '\n';
    std::cout << out.report;
    return out.code;
  }

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(opt.batch)) {
    if (entry.is_regular_file() && entry.path().extension() == ".scenario") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (!opt.log.empty()) fs::create_directories(opt.log);

  std::vector<std::future<Outcome>> jobs;
  jobs.reserve(files.size());
  for (const auto& f : files) {
    const std::string log_path =
        opt.log.empty() ? "" : (fs::path(opt.log) / f.stem()).string() + ".log";
    jobs.push_back(std::async(std::launch::async, run_one, f, opt, log_path));
  }
  int worst = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto out = jobs[i].get();
    std::cout << "== " << files[i].filename().string() << " (exit " << out.code << ")\n";
    if (!out.error.empty()) std::cerr << out.error << '\n';
    std::cout << out.report;
    worst = std::max(worst, out.code);
  }
  return worst;
}

int cmd_validate(const std::string& path) {
  try {
    const auto s = paxad::load_scenario(path);
    std::cout << path << ": ok (" << s.acceptors << " acceptors, " << s.requests.size()
              << " requests, " << s.faults.size() << " faults)\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << path << ": " << e.what() << '\n';
    return kInvalid;
  }
}

int cmd_replay(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    std::cerr << "cannot read log: " << path << '\n';
    return kInvalid;
  }
  std::ostringstream text;
  text << is.rdbuf();
  try {
    const auto result = paxad::replay_text(text.str());
    for (const auto& m : result.mismatches) std::cout << m << '\n';
    std::cout << result.verdicts_checked << " verdicts checked, " << result.mismatches.size()
              << " mismatches\n";
    return result.ok() ? 0 : kInvalid;
  } catch (const std::exception& e) {
    std::cerr << path << ": " << e.what() << '\n';
    return kInvalid;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Paxos-replicated state machine simulator with anomaly detection"};
  app.require_subcommand(1);

  RunOptions run_opt;
  auto* run = app.add_subcommand("run", "Simulate a scenario and print the report");
  auto* scenario_opt = run->add_option("--scenario", run_opt.scenario, "Scenario file")
                           ->check(CLI::ExistingFile);
  auto* batch_opt = run->add_option("--batch", run_opt.batch,
                                    "Run every *.scenario in a directory in parallel")
                        ->check(CLI::ExistingDirectory);
  scenario_opt->excludes(batch_opt);
  run->add_option("--seed", run_opt.seed, "Override the network seed");
  run->add_option("--log", run_opt.log, "Write the event log here (a directory with --batch)");
  run->add_option("--format", run_opt.format, "Report format")
      ->check(CLI::IsMember({"json", "text"}));

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Parse and validate a scenario");
  validate->add_option("--scenario", validate_path, "Scenario file")->required();

  std::string replay_path;
  auto* replay = app.add_subcommand("replay", "Recompute learner verdicts from an event log");
  replay->add_option("--log", replay_path, "Event log file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kInvalid;
  }

  if (*run) {
    if (run_opt.scenario.empty() && run_opt.batch.empty()) {
      std::cerr << "run: one of --scenario or --batch is required\n";
      return kInvalid;
    }
    return cmd_run(run_opt);
  }
  if (*validate) return cmd_validate(validate_path);
  return cmd_replay(replay_path);
}
