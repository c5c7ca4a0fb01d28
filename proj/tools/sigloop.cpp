#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sigloop/http_api.hpp"
#include "sigloop/json_io.hpp"
#include "sigloop/session_service.hpp"

namespace {

sigloop::Dataset dataset_arg(const std::string& arg) {
  if (auto ds = sigloop::builtin_dataset(arg)) return *std::move(ds);
  return sigloop::load_dataset(arg);
}

sigloop::SessionConfig config_arg(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in) throw sigloop::Error(sigloop::ErrorKind::ConfigError, "cannot read config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return sigloop::config_from_json(sigloop::Json::parse(buf.str()));
  } catch (const sigloop::Json::exception& e) {
    throw sigloop::Error(sigloop::ErrorKind::ConfigError, e.what());
  }
}

void print_table(const sigloop::ExperimentReport& report) {
  std::printf("%-5s %-9s %-8s %-8s %s\n", "iter", "accuracy", "sigma", "purity", "labels");
  for (const auto& row : report.rows)
    std::printf("%-5zu %-9.4f %-8.4f %-8.4f %zu\n", row.iter, row.mean_accuracy, row.sigma, row.mean_purity,
                row.labels_used);
  std::printf("%.2f s\n", report.seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interactive min-Hash signature learning"};
  app.require_subcommand(1);

  auto* serve = app.add_subcommand("serve", "Run the HTTP session API");
  int port = 8080;
  std::string host = "127.0.0.1";
  serve->add_option("--port", port, "TCP port")->check(CLI::Range(1, 65535))->capture_default_str();
  serve->add_option("--host", host, "Bind address")->capture_default_str();

  auto* run = app.add_subcommand("run", "Run a simulated-user experiment");
  std::string dataset = "iris";
  std::string ratio = "4:1";
  std::string report_path;
  std::string config_path;
  std::size_t iterations = 15;
  std::size_t runs = 10;
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  run->add_option("--dataset", dataset, "Dataset file (csv/json) or builtin name")->capture_default_str();
  run->add_option("--iterations", iterations, "Iterations per run")->capture_default_str();
  run->add_option("--ratio", ratio, "Selection ratio k:m (true:false)")->capture_default_str();
  run->add_option("--runs", runs, "Independent runs")->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--folds", folds, "Cross-validation folds")->check(CLI::Range(2, 1000))->capture_default_str();
  run->add_option("--seed", seed, "Master seed")->capture_default_str();
  run->add_option("--config", config_path, "Session config JSON");
  run->add_option("--report", report_path, "Write the report JSON here");

  auto* replay = app.add_subcommand("replay", "Replay a saved session and print its report");
  std::string session_path;
  bool print_state = false;
  replay->add_option("--session", session_path, "Session file")->required();
  replay->add_flag("--state", print_state, "Print the final state view instead of the report");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve) {
      sigloop::SessionService service;
      sigloop::serve(service, host, port);
    } else if (*run) {
      sigloop::ExperimentConfig cfg;
      cfg.iterations = iterations;
      cfg.ratio = sigloop::parse_ratio(ratio);
      cfg.seed = seed;
      cfg.runs = runs;
      cfg.folds = folds;
      cfg.session = config_arg(config_path);
      const auto report = sigloop::run_experiment(dataset_arg(dataset), cfg);
      print_table(report);
      if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) throw sigloop::Error(sigloop::ErrorKind::ConfigError, "cannot write " + report_path);
        out << sigloop::report_to_json(report).dump(2) << '\n';
      }
    } else if (*replay) {
      const auto state = sigloop::replay_session_file(session_path);
      const auto out = print_state ? sigloop::state_view(state, session_path) : sigloop::history_to_json(state);
      std::cout << out.dump(2) << '\n';
    }
  } catch (const sigloop::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
