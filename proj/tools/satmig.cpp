// satmig: run baseline episodes, serve the environment protocol, or validate a scenario.
//
//   satmig run --scenario scenarios/default.json --policy greedy --episodes 20 --seed 1 --metrics out.csv
//   satmig serve --scenario scenarios/default.json --listen stdio
//   satmig serve --scenario scenarios/default.json --listen 127.0.0.1:5555
//   satmig validate --scenario scenarios/default.json
//
// Exit codes: 0 success, 2 configuration error, 3 protocol/transport error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "satmig/errors.hpp"
#include "satmig/metrics.hpp"
#include "satmig/scenario_io.hpp"
#include "satmig/transport.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitProtocol = 3;

std::string summary_path_for(const std::string& metrics) {
  const auto dot = metrics.rfind('.');
  const auto slash = metrics.find_last_of('/');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? metrics.substr(0, dot) : metrics) + ".summary.json";
}

void write_outputs(const std::vector<satmig::EpisodeRecord>& records, const satmig::Scenario& scenario,
                   const std::string& metrics, std::string summary) {
  const auto s = satmig::summarize(records, scenario);
  const auto doc = satmig::summary_to_json(s);
  if (!metrics.empty()) {
    std::ofstream out(metrics);
    if (!out) throw satmig::ConfigError("metrics: cannot write '" + metrics + "'");
    satmig::write_metrics_csv(out, records);
    if (summary.empty()) summary = summary_path_for(metrics);
  }
  if (!summary.empty()) {
    std::ofstream out(summary);
    if (!out) throw satmig::ConfigError("summary: cannot write '" + summary + "'");
    out << doc.dump(2) << '\n';
  }
  std::cout << doc.dump(2) << '\n';
}

int cmd_run(const std::string& scenario_path, const std::string& policy, int episodes, std::uint64_t seed,
            const std::string& metrics, const std::string& summary) {
  const auto scenario = satmig::load_scenario(scenario_path);
  const auto records = satmig::run_batch(scenario, policy, episodes, seed);
  write_outputs(records, scenario, metrics, summary);
  return 0;
}

int cmd_serve(const std::string& scenario_path, const std::string& listen, std::optional<int> sessions,
              const std::string& metrics) {
  const auto scenario = satmig::load_scenario(scenario_path);

  // Protocol-driven episodes are recorded under the "external" policy.
  std::mutex mu;
  std::vector<satmig::EpisodeRecord> finished;
  std::map<std::pair<std::thread::id, int>, satmig::EpisodeRecorder> live;
  satmig::Session::OutcomeHook hook;
  if (!metrics.empty()) {
    hook = [&](int episode, std::uint64_t seed, const satmig::SlotOutcome& o) {
      std::lock_guard lock(mu);
      const auto key = std::make_pair(std::this_thread::get_id(), episode);
      auto it = live.find(key);
      if (it == live.end())
        it = live.emplace(key, satmig::EpisodeRecorder(scenario, static_cast<int>(finished.size() + live.size()),
                                                       seed, "external"))
                 .first;
      it->second.record(o);
      if (o.slot + 1 == scenario.env.num_slots) {
        finished.push_back(it->second.take());
        live.erase(it);
      }
    };
  }

  if (listen == "stdio") {
    satmig::StreamChannel channel(std::cin, std::cout);
    satmig::serve(channel, scenario, hook);
  } else {
    satmig::TcpListener listener(satmig::parse_address(listen));
    std::cerr << "satmig: listening on port " << listener.port() << '\n';
    satmig::serve_tcp(listener, scenario, sessions, hook);
  }

  if (!metrics.empty()) {
    std::sort(finished.begin(), finished.end(),
              [](const auto& a, const auto& b) { return a.episode < b.episode; });
    std::ofstream out(metrics);
    if (!out) throw satmig::ConfigError("metrics: cannot write '" + metrics + "'");
    satmig::write_metrics_csv(out, finished);
    std::ofstream sum(summary_path_for(metrics));
    sum << satmig::summary_to_json(satmig::summarize(finished, scenario)).dump(2) << '\n';
  }
  return 0;
}

int cmd_validate(const std::string& scenario_path) {
  const auto s = satmig::load_scenario(scenario_path);
  std::cout << "ok: " << (s.name.empty() ? scenario_path : s.name) << ": " << s.constellation.num_satellites
            << " satellites, " << s.clusters.size() << " clusters, " << s.flights.size() << " flights, "
            << s.env.num_slots << " slots of " << s.env.slot_seconds << " s\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Satellite edge service-migration simulator"};
  app.require_subcommand(1);

  std::string scenario, policy = "greedy", metrics, summary, listen = "stdio";
  int episodes = 1;
  std::uint64_t seed = 0;
  int sessions = 0;

  auto* run = app.add_subcommand("run", "Run baseline-policy episodes and write metrics");
  run->add_option("--scenario", scenario, "Scenario file")->required();
  run->add_option("--policy", policy, "random | greedy | sticky | external")->capture_default_str();
  run->add_option("--episodes", episodes, "Number of episodes")->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--seed", seed, "Seed of the first episode")->capture_default_str();
  run->add_option("--metrics", metrics, "Per-slot metrics CSV");
  run->add_option("--summary", summary, "Summary JSON (default: <metrics>.summary.json)");

  auto* serve = app.add_subcommand("serve", "Serve the environment protocol");
  serve->add_option("--scenario", scenario, "Scenario file")->required();
  serve->add_option("--listen", listen, "stdio or host:port")->capture_default_str();
  serve->add_option("--sessions", sessions, "Stop after this many TCP sessions (0 = forever)");
  serve->add_option("--metrics", metrics, "Record protocol-driven episodes to this CSV");

  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("--scenario", scenario, "Scenario file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(scenario, policy, episodes, seed, metrics, summary);
    if (*serve)
      return cmd_serve(scenario, listen, sessions > 0 ? std::optional<int>(sessions) : std::nullopt, metrics);
    if (*validate) return cmd_validate(scenario);
  } catch (const satmig::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const satmig::ProtocolError& e) {
    std::cerr << "protocol error [" << e.code() << "]: " << e.what() << '\n';
    return kExitProtocol;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitProtocol;
  }
  return 0;
}
