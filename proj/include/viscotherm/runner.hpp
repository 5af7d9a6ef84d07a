#pragma once

#include <string>
#include <vector>

namespace viscotherm {

/// Parsed command-line options shared by the subcommands. out_dir is the
/// value of --out before the VISCOTHERM_OUT override is applied.
struct CliOptions {
  std::string config_path;
  std::string out_dir;
  bool strict = false;
  int threads_override = -1;  // -1 keeps the config value; 0 = hardware
  std::vector<double> snapshots_override;
  bool has_snapshots_override = false;
  int plot_px = 128, plot_py = 128;
  std::string axis;            // sweep
  std::vector<double> values;  // sweep
};

// Exit codes: 0 pass, 1 check failure, 2 input error, 3 solver failure.
int cmd_validate(const CliOptions& opt);
int cmd_run(const CliOptions& opt);
int cmd_audit(const CliOptions& opt);
int cmd_sweep(const CliOptions& opt);

}  // namespace viscotherm
