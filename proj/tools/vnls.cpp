#include <iostream>

#include <CLI11.hpp>

#include "vnls/cli.hpp"

int main(int argc, char** argv) {
  using namespace vnls::cli;

  CLI::App app{"Soliton solutions of the vector NLS equation on the half line"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
  app.require_subcommand(1);

  std::string config_path, out;
  std::string orders_text = "1,2,3", times_text;
  bool heatmap = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out, "output path (overrides the config's \"output\")");
  };

  auto* simulate = app.add_subcommand("simulate", "evaluate the field on the configured grid");
  add_common(simulate);
  simulate->add_flag("--heatmap", heatmap, "also write |R_j| as PGM images next to the CSV");

  auto* scan = app.add_subcommand("scan-theta", "reflection amplitudes over the rotated boundary family");
  add_common(scan);

  auto* verify = app.add_subcommand("verify", "run the residual, symmetry and conservation checks");
  add_common(verify);

  auto* charges = app.add_subcommand("charges", "conserved charges over time");
  add_common(charges);
  charges->add_option("--orders", orders_text, "comma-separated orders, e.g. 1,2,3");
  charges->add_option("--times", times_text, "comma-separated times (default: 17 across the grid)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    const RunConfig cfg = load_config(config_path);
    if (*simulate) return cmd_simulate(cfg, out, heatmap, std::cout);
    if (*scan) return cmd_scan_theta(cfg, out, std::cout);
    if (*verify) return cmd_verify(cfg, out, std::cout);
    const std::vector<double> times = times_text.empty() ? std::vector<double>{} : parse_real_list(times_text);
    return cmd_charges(cfg, out, parse_int_list(orders_text), times, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const vnls::Error& e) {
    std::cerr << "evaluation error (" << vnls::to_string(e.kind()) << "): " << e.what() << "\n";
    return kEvaluationError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kEvaluationError;
  }
}
