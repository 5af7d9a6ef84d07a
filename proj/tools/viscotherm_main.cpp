#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "viscotherm/runner.hpp"
#include "viscotherm/util.hpp"

namespace {

bool parse_number_list(const std::string& s, std::vector<double>& out) {
  out.clear();
  const char* p = s.c_str();
  while (*p) {
    char* endp = nullptr;
    const double v = std::strtod(p, &endp);
    if (endp == p) return false;
    out.push_back(v);
    p = endp;
    if (*p == ',') ++p;
    else if (*p != '\0') return false;
  }
  return !out.empty();
}

bool parse_plot_grid(const std::string& s, int& px, int& py) {
  const std::size_t x = s.find('x');
  if (x == std::string::npos) return false;
  try {
    px = std::stoi(s.substr(0, x));
    py = std::stoi(s.substr(x + 1));
  } catch (...) {
    return false;
  }
  return px >= 2 && py >= 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"viscoelastic heat-conducting fluid solver with budget auditing"};
  app.require_subcommand(1);

  viscotherm::CliOptions opt;
  std::string snapshots_arg, plot_arg, values_arg;

  auto add_common = [&](CLI::App* c, bool needs_config) {
    auto* cfg = c->add_option("--config", opt.config_path, "config JSON path");
    if (needs_config) cfg->required();
    c->add_option("--out", opt.out_dir,
                  "output directory (VISCOTHERM_OUT overrides)");
  };
  auto add_run_flags = [&](CLI::App* c) {
    c->add_flag("--strict", opt.strict, "abort on the first failed audit check");
    c->add_option("--threads", opt.threads_override,
                  "worker threads for pointwise kernels (0 = hardware)");
    c->add_option("--snapshots", snapshots_arg,
                  "comma-separated snapshot times, overrides the config");
    c->add_option("--plot-grid", plot_arg, "snapshot grid as PxQ (default 128x128)");
  };

  CLI::App* validate = app.add_subcommand("validate", "check model admissibility");
  add_common(validate, true);

  CLI::App* run = app.add_subcommand("run", "integrate and write budgets/snapshots");
  add_common(run, true);
  add_run_flags(run);

  CLI::App* audit = app.add_subcommand("audit", "re-check a stored run directory");
  add_common(audit, false);

  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  add_common(sweep, true);
  add_run_flags(sweep);
  sweep->add_option("--axis", opt.axis,
                    "config path to vary (dotted, or 'resolution')");
  sweep->add_option("--values", values_arg, "comma-separated axis values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (!snapshots_arg.empty()) {
    if (!parse_number_list(snapshots_arg, opt.snapshots_override)) {
      std::cerr << "bad --snapshots list: " << snapshots_arg << "\n";
      return 2;
    }
    opt.has_snapshots_override = true;
  }
  if (!plot_arg.empty() && !parse_plot_grid(plot_arg, opt.plot_px, opt.plot_py)) {
    std::cerr << "bad --plot-grid (expected PxQ with P,Q >= 2): " << plot_arg << "\n";
    return 2;
  }
  if (!values_arg.empty() && !parse_number_list(values_arg, opt.values)) {
    std::cerr << "bad --values list: " << values_arg << "\n";
    return 2;
  }

  try {
    if (validate->parsed()) return viscotherm::cmd_validate(opt);
    if (run->parsed()) return viscotherm::cmd_run(opt);
    if (audit->parsed()) return viscotherm::cmd_audit(opt);
    if (sweep->parsed()) return viscotherm::cmd_sweep(opt);
  } catch (const viscotherm::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }
  return 2;
}
