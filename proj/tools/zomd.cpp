// Command-line front end: run, certify, conic, sweep.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "zomd/app.hpp"

namespace {

/// Accepts "t=4.0" or "4.0".
double parse_witness(const std::string& text) {
  const std::string value = text.rfind("t=", 0) == 0 ? text.substr(2) : text;
  std::size_t used = 0;
  const double t = std::stod(value, &used);
  if (used != value.size()) throw std::invalid_argument("bad witness value '" + text + "'");
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Zeroth-order mirror descent with trajectory certificates"};
  cli.require_subcommand(1);

  std::string config_path;
  std::string out_dir;

  auto add_config_cmd = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = cli.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Config file (key = value lines)")->required();
    sub->add_option("--out", out_dir, "Output directory (overrides output_dir)");
    return sub;
  };
  CLI::App* run = add_config_cmd("run", "Run the descent and write trajectory.csv, report.json, gap.dat");
  CLI::App* certify = add_config_cmd("certify", "Run the verifier suite and write checks.json");
  CLI::App* sweep = add_config_cmd("sweep", "Run every (epsilon, rule) cell and write summary.csv");

  CLI::App* conic = cli.add_subcommand("conic", "Robust conic dominance scaling");
  double m_norm = 0.0, radius = 0.0, c = 0.0;
  std::string witness;
  bool as_json = false;
  conic->add_option("m_norm", m_norm, "Norm of the center m")->required();
  conic->add_option("R", radius, "Uncertainty radius")->required();
  conic->add_option("c", c, "Cone cosine in (0, 1]")->required();
  conic->add_option("--witness", witness, "Worst-case construction at t=VALUE");
  conic->add_flag("--json", as_json, "Machine-readable output");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : zomd::app::kConfigError;
  }

  const std::optional<std::string> out =
      out_dir.empty() ? std::nullopt : std::optional<std::string>(out_dir);
  try {
    if (*run) return zomd::app::cmd_run(config_path, out, std::cout, std::cerr);
    if (*certify) return zomd::app::cmd_certify(config_path, out, std::cout, std::cerr);
    if (*sweep) return zomd::app::cmd_sweep(config_path, out, std::cout, std::cerr);
    if (*conic) {
      std::optional<double> t;
      if (!witness.empty()) t = parse_witness(witness);
      return zomd::app::cmd_conic(m_norm, radius, c, t, as_json, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return zomd::app::kConfigError;
  }
  return 0;
}
