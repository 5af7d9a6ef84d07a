#pragma once

#include <string>
#include <vector>

#include "viscotherm/solver.hpp"

namespace viscotherm {

/// One audit row. The first fifteen fields are the budgets.csv columns, in
/// column order; boundary_work and body_power are instantaneous rates. The
/// extras close budgets without time-differencing (the accumulators are
/// integrated inside the ODE state) and carry the solver's own mass/energy
/// rates for the two-code-path agreement check. Samples parsed back from CSV
/// have has_extras = false and extras zeroed.
struct BudgetSample {
  double t = 0.0;
  double kinetic = 0.0;
  double internal = 0.0;
  double total = 0.0;
  double entropy = 0.0;
  double diss_thermal = 0.0;
  double diss_viscous = 0.0;
  double diss_relax = 0.0;
  double diss_stressdiff = 0.0;
  double boundary_work = 0.0;
  double body_power = 0.0;
  double min_b = 0.0;
  double max_b = 0.0;
  double min_e = 0.0;
  double min_theta = 0.0;

  double entropy_production = 0.0;  // integral of zeta (1/theta-weighted)
  double work_acc = 0.0;
  double body_acc = 0.0;
  double zeta_acc = 0.0;
  double mass_b = 0.0;
  double db_dt_internal = 0.0;  // solver-side d/dt of int b
  double de_dt_internal = 0.0;  // solver-side d/dt of int e
  double h_integral = 0.0;      // audit-side int h, the b mass-law rate
  bool has_extras = false;
};

/// Budgets recomputed from the synthesized node fields, by quadrature, with
/// sequential summation. Throws SolverError on a non-finite integrand (the
/// message names the node).
BudgetSample sample_budgets(const Simulator& sim, const StepRecord& rec);

/// The pinned budgets.csv header line (no trailing newline).
std::string budgets_csv_header();
std::string budgets_csv_row(const BudgetSample& s);
/// Parses a budgets.csv payload; throws ConfigError on a header or field
/// mismatch. Returned samples have has_extras = false.
std::vector<BudgetSample> parse_budgets_csv(const std::string& text);

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;  // worst observed magnitude
  double bound = 0.0;     // tolerance it was compared against
  std::string detail;
};

struct AuditReport {
  std::vector<CheckResult> checks;
  bool pass() const;
  std::string summary() const;
};

/// |E_tot(t) + work(t) - body(t) - E_tot(0)| / max(E_tot(0), 1) <= tol at
/// every sample. Uses the exact accumulators when present, otherwise the
/// trapezoid rule on the rate columns.
CheckResult check_energy_conservation(const std::vector<BudgetSample>& series,
                                      double tol = 1e-6);

/// S nondecreasing between consecutive samples up to slack*max(1,|S|).
/// When accumulators are present the detail also reports the total balance
/// residual |S(T) - S(0) - int zeta|.
CheckResult check_entropy_monotone(const std::vector<BudgetSample>& series,
                                   double slack = 1e-8);

/// |S(T) - S(0) - zeta_acc(T) + zeta_acc(0)|; requires extras.
double entropy_balance_residual(const std::vector<BudgetSample>& series);

/// Node extremes of b within [b_min - tol_b, b_max + tol_b];
/// tol_b < 0 selects the default 5e-3*(b_max - b_min).
CheckResult check_b_bounds(const std::vector<BudgetSample>& series, double b_min,
                           double b_max, double tol_b = -1.0);

/// Regularized runs: min e >= floor_energy - tol_floor and
/// min theta >= floor_theta - tol_floor; tol_floor < 0 selects the default
/// 1e-3 * floor_energy. Unregularized runs (eps = 0): strict positivity.
CheckResult check_positivity(const std::vector<BudgetSample>& series,
                             const RegularizedModel& reg, double tol_floor = -1.0);

/// All four dissipation integrals >= -1e-12 * |Omega| at every sample.
CheckResult check_dissipation_sign(const std::vector<BudgetSample>& series,
                                   double area);

/// The b mass law and e energy law recomputed here must agree with the
/// solver's internal rates to 1e-12 relative; requires extras.
CheckResult check_rate_agreement(const std::vector<BudgetSample>& series,
                                 double tol = 1e-12);

/// Max over nodes of |e_back(theta, b) - e| / max(1, |e|) where e_back
/// re-applies the regularized caloric map; nodes with theta <= 0 use the
/// linear extension e_back = theta. b must already be clamped.
double roundtrip_residual_max(const RegularizedModel& reg, const Grid& theta,
                              const Grid& b_clamped, const Grid& e);

/// Roundtrip check at the quadrature nodes of one state.
CheckResult check_inversion_roundtrip(const Simulator& sim, const SimState& state,
                                      double tol = 1e-10);

}  // namespace viscotherm
