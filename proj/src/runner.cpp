#include "viscotherm/runner.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "viscotherm/audit.hpp"
#include "viscotherm/config.hpp"
#include "viscotherm/util.hpp"

namespace viscotherm {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

std::string resolve_out_dir(const CliOptions& opt) {
  if (const char* env = std::getenv("VISCOTHERM_OUT"); env && *env) return env;
  if (!opt.out_dir.empty()) return opt.out_dir;
  return "viscotherm_out";
}

std::string hex_checksum(const std::string& bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

ordered verdicts_json(const AuditReport& rep) {
  ordered arr = ordered::array();
  for (const auto& c : rep.checks) {
    ordered o;
    o["name"] = c.name;
    o["pass"] = c.pass;
    o["measured"] = c.measured;
    o["bound"] = c.bound;
    o["detail"] = c.detail;
    arr.push_back(std::move(o));
  }
  return arr;
}

ordered validation_json(const ValidationReport& rep) {
  ordered arr = ordered::array();
  for (const auto& r : rep.rows) {
    ordered o;
    o["check"] = r.check;
    o["pass"] = r.pass;
    o["margin"] = r.margin;
    o["detail"] = r.detail;
    arr.push_back(std::move(o));
  }
  ordered out;
  out["pass"] = rep.pass;
  out["rows"] = std::move(arr);
  return out;
}

struct OutputInventory {
  std::vector<std::pair<std::string, std::string>> files;  // name, checksum

  void put(const std::string& dir, const std::string& name, const std::string& body) {
    atomic_write_file(dir + "/" + name, body);
    for (auto& f : files)
      if (f.first == name) {
        f.second = hex_checksum(body);
        return;
      }
    files.emplace_back(name, hex_checksum(body));
  }

  ordered to_json() const {
    ordered arr = ordered::array();
    for (const auto& f : files) {
      ordered o;
      o["file"] = f.first;
      o["fnv1a64"] = f.second;
      arr.push_back(std::move(o));
    }
    return arr;
  }
};

struct RunOutcome {
  int code = 0;
  std::string error;
  std::vector<BudgetSample> series;
  AuditReport report;
};

struct StrictAbort {};

AuditReport evaluate_checks(const Simulator& sim,
                            const std::vector<BudgetSample>& series,
                            const SimState& state) {
  const auto& cfg = sim.config();
  AuditReport rep;
  rep.checks.push_back(check_energy_conservation(series));
  rep.checks.push_back(check_entropy_monotone(series));
  rep.checks.push_back(
      check_b_bounds(series, cfg.coeffs.b_min, cfg.coeffs.b_max));
  rep.checks.push_back(check_positivity(series, sim.reg()));
  rep.checks.push_back(
      check_dissipation_sign(series, cfg.domain.Lx * cfg.domain.Ly));
  rep.checks.push_back(check_rate_agreement(series));
  rep.checks.push_back(check_inversion_roundtrip(sim, state));
  return rep;
}

std::vector<double> normalized_snapshot_times(const SimulationConfig& sc) {
  std::vector<double> ts;
  for (double t : sc.snapshot_times)
    if (t >= sc.t0 && t <= sc.t1) ts.push_back(t);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

std::string scalar_snapshot_csv(const Eigen::VectorXd& px, const Eigen::VectorXd& py,
                                const Grid& g) {
  std::string out = "x,y,value\n";
  for (Eigen::Index p = 0; p < px.size(); ++p)
    for (Eigen::Index q = 0; q < py.size(); ++q) {
      out += format_double(px(p));
      out += ',';
      out += format_double(py(q));
      out += ',';
      out += format_double(g(p, q));
      out += '\n';
    }
  return out;
}

std::string velocity_snapshot_csv(const Eigen::VectorXd& px, const Eigen::VectorXd& py,
                                  const Grid& vx, const Grid& vy) {
  std::string out = "x,y,vx,vy\n";
  for (Eigen::Index p = 0; p < px.size(); ++p)
    for (Eigen::Index q = 0; q < py.size(); ++q) {
      out += format_double(px(p));
      out += ',';
      out += format_double(py(q));
      out += ',';
      out += format_double(vx(p, q));
      out += ',';
      out += format_double(vy(p, q));
      out += '\n';
    }
  return out;
}

std::string snapshot_name(std::size_t idx, const char* field) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_%03zu_%s.csv", idx, field);
  return buf;
}

/// One complete run into dir: validation, integration with per-step budget
/// sampling, snapshot/budget/report files, and a manifest written before and
/// finalized after.
RunOutcome run_one(const LoadedConfig& lc, const std::string& dir, bool strict,
                   int plot_px, int plot_py) {
  RunOutcome out;
  OutputInventory inv;
  ordered manifest;
  manifest["artifact"] = "viscotherm";
  manifest["version"] = kVersion;
  manifest["command"] = "run";
  manifest["status"] = "running";
  manifest["started"] = iso_timestamp_now();
  manifest["finished"] = "";
  manifest["strict"] = strict;
  manifest["config"] = lc.echo;

  auto write_manifest = [&] {
    manifest["outputs"] = inv.to_json();
    atomic_write_file(dir + "/manifest.json", manifest.dump(2) + "\n");
  };

  const ValidationReport vrep =
      validate_assumptions(lc.sim.model, lc.sim.coeffs);
  inv.put(dir, "validation.json", validation_json(vrep).dump(2) + "\n");
  if (!vrep.pass) {
    manifest["status"] = "failed";
    manifest["error"] = "model assumptions failed validation";
    manifest["finished"] = iso_timestamp_now();
    write_manifest();
    out.code = 1;
    out.error = "validation failed:\n" + vrep.summary();
    return out;
  }

  std::optional<Simulator> sim;
  try {
    sim.emplace(lc.sim);
  } catch (const ConstructionError& e) {
    manifest["status"] = "failed";
    manifest["error"] = e.what();
    manifest["finished"] = iso_timestamp_now();
    write_manifest();
    out.code = 1;
    out.error = e.what();
    return out;
  }

  const auto& W = sim->ws();
  manifest["basis"] = {
      {"scalar", {W.scalar_spec().Mx, W.scalar_spec().My}},
      {"velocity", {W.velocity_spec().Nx, W.velocity_spec().Ny}},
      {"quadrature", {W.quad_spec().nx, W.quad_spec().ny}}};
  manifest["plot_grid"] = {plot_px, plot_py};
  const std::vector<double> snap_ts = normalized_snapshot_times(lc.sim);
  manifest["snapshot_times"] = snap_ts;
  write_manifest();

  std::string csv = budgets_csv_header() + "\n";
  std::vector<std::optional<SimState>> snaps(snap_ts.size());
  int failed_code = 0;

  auto observer = [&](const StepRecord& rec) {
    out.series.push_back(sample_budgets(*sim, rec));
    csv += budgets_csv_row(out.series.back());
    csv += '\n';
    for (std::size_t i = 0; i < snap_ts.size(); ++i)
      if (!snaps[i] &&
          std::abs(rec.state.t - snap_ts[i]) <= 1e-9 * std::max(1.0, std::abs(snap_ts[i])))
        snaps[i] = rec.state;
    if (strict) {
      AuditReport rep = evaluate_checks(*sim, out.series, rec.state);
      if (!rep.pass()) {
        out.report = std::move(rep);
        throw StrictAbort{};
      }
    }
  };

  SimState final_state;
  try {
    const StepRecord last = sim->integrate(observer);
    final_state = last.state;
    out.report = evaluate_checks(*sim, out.series, final_state);
  } catch (const StrictAbort&) {
    failed_code = 1;
    out.error = "strict mode: audit check failed\n" + out.report.summary();
  } catch (const std::exception& e) {
    failed_code = 3;
    out.error = e.what();
  }

  inv.put(dir, "budgets.csv", csv);
  inv.put(dir, "audit_report.json", verdicts_json(out.report).dump(2) + "\n");

  if (failed_code == 0) {
    Eigen::VectorXd px(plot_px), py(plot_py);
    for (int p = 0; p < plot_px; ++p)
      px(p) = lc.sim.domain.Lx * p / std::max(1, plot_px - 1);
    for (int q = 0; q < plot_py; ++q)
      py(q) = lc.sim.domain.Ly * q / std::max(1, plot_py - 1);
    const auto& reg = sim->reg();
    const auto& co = lc.sim.coeffs;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
      if (!snaps[i]) continue;
      const SimState& s = *snaps[i];
      const Grid b = W.eval_scalar_at(s.d, px, py);
      const Grid e = W.eval_scalar_at(s.e_c, px, py);
      Grid theta(px.size(), py.size());
      for (Eigen::Index p = 0; p < px.size(); ++p)
        for (Eigen::Index q = 0; q < py.size(); ++q) {
          const double bM = std::max(co.b_min, std::min(b(p, q), co.b_max));
          theta(p, q) = e(p, q) > 0.0
                            ? theta_from_e_hot(reg, e(p, q),
                                               lc.sim.model.psi2.value(bM))
                            : e(p, q);
        }
      Grid vx, vy;
      W.eval_velocity_at(s.c, px, py, vx, vy);
      inv.put(dir, snapshot_name(i, "b"), scalar_snapshot_csv(px, py, b));
      inv.put(dir, snapshot_name(i, "e"), scalar_snapshot_csv(px, py, e));
      inv.put(dir, snapshot_name(i, "theta"), scalar_snapshot_csv(px, py, theta));
      inv.put(dir, snapshot_name(i, "velocity"),
              velocity_snapshot_csv(px, py, vx, vy));
    }
  }

  manifest["verdicts"] = verdicts_json(out.report);
  manifest["status"] = failed_code == 0 ? "complete" : "failed";
  if (failed_code != 0) manifest["error"] = out.error;
  manifest["finished"] = iso_timestamp_now();
  write_manifest();
  out.code = failed_code;
  return out;
}

LoadedConfig load_with_overrides(const CliOptions& opt) {
  LoadedConfig lc = load_config_file(opt.config_path);
  if (opt.threads_override >= 0) {
    lc.sim.threads = opt.threads_override == 0
                         ? static_cast<int>(
                               std::max(1u, std::thread::hardware_concurrency()))
                         : opt.threads_override;
    lc.echo["threads"] = opt.threads_override;
  }
  if (opt.has_snapshots_override) {
    lc.sim.snapshot_times = opt.snapshots_override;
    lc.echo["snapshots"] = opt.snapshots_override;
  }
  return lc;
}

json apply_axis(json echo, const std::string& axis, double value) {
  if (axis == "resolution") {
    const int m = static_cast<int>(std::lround(value));
    if (m < 1) throw ConfigError("sweep: resolution values must be >= 1");
    echo["resolution"]["scalar"] = {m, m};
    return echo;
  }
  json* cur = &echo;
  std::size_t pos = 0;
  while (true) {
    const std::size_t dot = axis.find('.', pos);
    const std::string tok = axis.substr(pos, dot - pos);
    if (tok.empty()) throw ConfigError("sweep: bad axis path '" + axis + "'");
    auto it = cur->find(tok);
    if (it == cur->end())
      throw ConfigError("sweep: axis path '" + axis + "' not found in config");
    if (dot == std::string::npos) {
      if (it->is_number_integer())
        *it = static_cast<long>(std::lround(value));
      else if (it->is_number())
        *it = value;
      else
        throw ConfigError("sweep: axis '" + axis + "' is not numeric");
      return echo;
    }
    cur = &*it;
    pos = dot + 1;
  }
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

double named_measure(const AuditReport& rep, const std::string& name) {
  for (const auto& c : rep.checks)
    if (c.name == name) return c.measured;
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

int cmd_validate(const CliOptions& opt) {
  LoadedConfig lc;
  try {
    lc = load_config_file(opt.config_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  const ValidationReport rep = validate_assumptions(lc.sim.model, lc.sim.coeffs);
  const std::string dir = resolve_out_dir(opt);
  atomic_write_file(dir + "/validation.json", validation_json(rep).dump(2) + "\n");
  std::cout << rep.summary();
  return rep.pass ? 0 : 1;
}

int cmd_run(const CliOptions& opt) {
  LoadedConfig lc;
  try {
    lc = load_with_overrides(opt);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  const std::string dir = resolve_out_dir(opt);
  const RunOutcome out = run_one(lc, dir, opt.strict, opt.plot_px, opt.plot_py);
  if (!out.error.empty()) std::cerr << out.error << "\n";
  std::cout << out.report.summary();
  return out.code;
}

int cmd_audit(const CliOptions& opt) {
  const std::string dir = resolve_out_dir(opt);
  json manifest;
  try {
    manifest = json::parse(read_file(dir + "/manifest.json"));
  } catch (const std::exception& e) {
    std::cerr << "audit: cannot read manifest: " << e.what() << "\n";
    return 2;
  }

  LoadedConfig lc;
  std::vector<std::pair<std::string, std::string>> listed;
  try {
    if (!manifest.contains("config") || !manifest.contains("outputs"))
      throw ConfigError("audit: manifest missing config or outputs");
    lc = load_config_json(manifest["config"]);
    for (const auto& o : manifest["outputs"])
      listed.emplace_back(o.at("file").get<std::string>(),
                          o.at("fnv1a64").get<std::string>());
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  std::string budgets_text;
  for (const auto& [name, sum] : listed) {
    std::string body;
    try {
      body = read_file(dir + "/" + name);
    } catch (const std::exception&) {
      std::cerr << "audit: missing output " << name << "\n";
      return 2;
    }
    if (hex_checksum(body) != sum) {
      std::cerr << "audit: checksum mismatch for " << name << "\n";
      return 2;
    }
    if (name == "budgets.csv") budgets_text = std::move(body);
  }
  if (budgets_text.empty()) {
    std::cerr << "audit: budgets.csv not in manifest inventory\n";
    return 2;
  }

  std::vector<BudgetSample> series;
  RegularizedModel reg;
  try {
    series = parse_budgets_csv(budgets_text);
    reg = build_psi1_eps(lc.sim.model, lc.sim.reg_epsilon);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  AuditReport rep;
  rep.checks.push_back(check_energy_conservation(series));
  rep.checks.push_back(check_entropy_monotone(series));
  rep.checks.push_back(
      check_b_bounds(series, lc.sim.coeffs.b_min, lc.sim.coeffs.b_max));
  rep.checks.push_back(check_positivity(series, reg));
  rep.checks.push_back(
      check_dissipation_sign(series, lc.sim.domain.Lx * lc.sim.domain.Ly));

  // roundtrip on stored snapshots: e must re-derive from (theta, b)
  {
    int P = 0, Q = 0;
    if (manifest.contains("plot_grid") && manifest["plot_grid"].is_array() &&
        manifest["plot_grid"].size() == 2) {
      P = manifest["plot_grid"][0].get<int>();
      Q = manifest["plot_grid"][1].get<int>();
    }
    auto read_grid = [&](const std::string& name, Grid& g) -> bool {
      std::string body;
      try {
        body = read_file(dir + "/" + name);
      } catch (...) {
        return false;
      }
      std::istringstream in(body);
      std::string line;
      if (!std::getline(in, line)) return false;
      g.resize(P, Q);
      for (int p = 0; p < P; ++p)
        for (int q = 0; q < Q; ++q) {
          if (!std::getline(in, line)) return false;
          const std::size_t c1 = line.rfind(',');
          if (c1 == std::string::npos) return false;
          g(p, q) = std::strtod(line.c_str() + c1 + 1, nullptr);
        }
      return true;
    };
    double worst = 0.0;
    int used = 0;
    bool corrupt = false;
    for (std::size_t i = 0; i < listed.size(); ++i) {
      const std::string& name = listed[i].first;
      if (name.rfind("snapshot_", 0) != 0 || name.find("_b.csv") == std::string::npos)
        continue;
      const std::string stem = name.substr(0, name.size() - 5);  // strip "b.csv"
      Grid b, e, th;
      if (P < 1 || !read_grid(name, b) || !read_grid(stem + "e.csv", e) ||
          !read_grid(stem + "theta.csv", th)) {
        corrupt = true;
        break;
      }
      Grid bM = b.max(lc.sim.coeffs.b_min).min(lc.sim.coeffs.b_max);
      worst = std::max(worst, roundtrip_residual_max(reg, th, bM, e));
      ++used;
    }
    if (corrupt) {
      std::cerr << "audit: unreadable snapshot files\n";
      return 2;
    }
    if (used > 0) {
      CheckResult r{"snapshot_roundtrip", worst <= 1e-10, worst, 1e-10,
                    std::to_string(used) + " snapshot(s)"};
      rep.checks.push_back(r);
    }
  }

  atomic_write_file(dir + "/audit_recheck.json", verdicts_json(rep).dump(2) + "\n");
  std::cout << rep.summary();
  return rep.pass() ? 0 : 1;
}

int cmd_sweep(const CliOptions& opt) {
  if (opt.axis.empty() || opt.values.empty()) {
    std::cerr << "sweep: --axis and --values are required\n";
    return 2;
  }
  LoadedConfig base;
  try {
    base = load_with_overrides(opt);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  const std::string dir = resolve_out_dir(opt);
  const std::string tag = sanitize(opt.axis);

  std::string summary =
      "index,value,exit_code,t_final,kinetic,internal,total,entropy,min_b,max_b,"
      "min_e,min_theta,energy_residual,entropy_drop,b_violation,pass\n";
  for (std::size_t i = 0; i < opt.values.size(); ++i) {
    char sub[64];
    std::snprintf(sub, sizeof sub, "%s_%03zu", tag.c_str(), i);
    LoadedConfig lc;
    try {
      lc.echo = apply_axis(base.echo, opt.axis, opt.values[i]);
      LoadedConfig re = load_config_json(lc.echo);
      re.echo = lc.echo;
      lc = std::move(re);
    } catch (const std::exception& e) {
      std::cerr << e.what() << "\n";
      return 2;
    }
    const RunOutcome out =
        run_one(lc, dir + "/" + sub, opt.strict, opt.plot_px, opt.plot_py);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    BudgetSample last;
    if (!out.series.empty())
      last = out.series.back();
    else
      last.t = last.kinetic = last.internal = last.total = last.entropy =
          last.min_b = last.max_b = last.min_e = last.min_theta = nan;
    const double cols[] = {static_cast<double>(i),
                           opt.values[i],
                           static_cast<double>(out.code),
                           last.t,
                           last.kinetic,
                           last.internal,
                           last.total,
                           last.entropy,
                           last.min_b,
                           last.max_b,
                           last.min_e,
                           last.min_theta,
                           named_measure(out.report, "energy_conservation"),
                           named_measure(out.report, "entropy_monotone"),
                           named_measure(out.report, "b_bounds"),
                           out.report.pass() ? 1.0 : 0.0};
    std::string row;
    for (std::size_t k = 0; k < std::size(cols); ++k) {
      if (k) row += ',';
      row += format_double(cols[k]);
    }
    summary += row + "\n";
    std::cout << "sweep " << sub << " value " << format_double(opt.values[i])
              << " exit " << out.code << "\n";
  }
  atomic_write_file(dir + "/sweep_summary.csv", summary);
  return 0;
}

}  // namespace viscotherm
