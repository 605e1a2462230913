#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "ldas/harness.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string mode = "ldas";
  std::string power_control;
  std::string adapt;
  std::optional<std::uint64_t> seed;
  std::optional<int> realizations;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "JSON scenario file applied over the mode defaults");
  cmd->add_option("--mode", o.mode, "ldas | lcas")->check(CLI::IsMember({"ldas", "lcas"}));
  cmd->add_option("--power-control", o.power_control, "heuristic | optimal");
  cmd->add_option("--adapt", o.adapt, "on | off: gamma adaptation");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--realizations", o.realizations, "realizations per swept value");
  cmd->add_option("--set", o.overrides, "key=value config override (repeatable)");
}

ldas::ScenarioConfig build_config(const CommonOptions& o) {
  using namespace ldas;
  ScenarioConfig c = o.mode == "lcas" ? default_lcas() : default_ldas();
  c.mode = o.mode == "lcas" ? AntennaMode::kColocated : AntennaMode::kDistributed;
  if (!o.config_path.empty()) c = load_config_file(o.config_path, c);
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    set_config_field(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!o.power_control.empty()) c.power_control = parse_power_control(o.power_control);
  if (!o.adapt.empty()) set_config_field(c, "adapt", o.adapt);
  if (o.seed) c.master_seed = *o.seed;
  if (o.realizations) c.realizations = *o.realizations;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-efficiency simulator for large-scale distributed antenna systems"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  std::string sweep_text;
  std::string out_path;
  std::string format = "csv";
  int threads = 0;
  auto* run = app.add_subcommand("run", "Monte Carlo sweep");
  add_common(run, run_opts);
  run->add_option("--sweep", sweep_text, "axis=values, e.g. gamma=-inf,0:30:5,inf")->required();
  run->add_option("--out", out_path, "output file (stdout when omitted)");
  run->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--threads", threads, "worker threads (default: LDAS_THREADS or all cores)");

  CommonOptions dump_opts;
  std::uint64_t index = 0;
  std::string dump_out;
  bool with_channel = false;
  auto* dump = app.add_subcommand("realization", "Solve one realization and print its report as JSON");
  add_common(dump, dump_opts);
  dump->add_option("--index", index, "realization index under the master seed");
  dump->add_option("--out", dump_out, "output file (stdout when omitted)");
  dump->add_flag("--with-channel", with_channel, "include the drawn channel");

  auto* show = app.add_subcommand("config", "Print the effective configuration as JSON");
  CommonOptions show_opts;
  add_common(show, show_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    using namespace ldas;
    if (*run) {
      const ScenarioConfig config = build_config(run_opts);
      const SweepSpec sweep = parse_sweep(sweep_text);
      validate_sweep(config, sweep);
      const OutputFormat fmt = parse_output_format(format);
      const SweepResult result = run_sweep(config, sweep, threads);
      if (out_path.empty()) {
        if (fmt == OutputFormat::kCsv) {
          std::cout << rows_to_csv(result.rows);
        } else {
          nlohmann::json doc{{"rows", rows_to_json(result.rows)}};
          std::cout << doc.dump(2) << "\n";
        }
      } else {
        nlohmann::json meta{{"config", config_to_json(config)},
                            {"sweep_axis", std::string(to_string(sweep.axis))},
                            {"tolerances", tolerances_to_json()}};
        emit(result.rows, fmt, out_path, meta);
      }
    } else if (*dump) {
      const ScenarioConfig config = build_config(dump_opts);
      const ChannelRealization r = draw_realization(config, realization_seed(config.master_seed, index));
      nlohmann::json doc{{"index", index}, {"report", run_realization(r, config).to_json()}};
      if (with_channel) doc["channel"] = realization_to_json(r);
      const std::string body = doc.dump(2) + "\n";
      if (dump_out.empty()) {
        std::cout << body;
      } else {
        std::ofstream f(dump_out);
        if (!(f << body)) throw IoError("cannot write '" + dump_out + "'");
      }
    } else if (*show) {
      std::cout << config_to_json(build_config(show_opts)).dump(2) << "\n";
    }
  } catch (const ldas::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ldas::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
