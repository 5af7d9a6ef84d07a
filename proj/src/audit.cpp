#include "viscotherm/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "viscotherm/util.hpp"

namespace viscotherm {

BudgetSample sample_budgets(const Simulator& sim, const StepRecord& rec) {
  const auto& W = sim.ws();
  const auto& cfg = sim.config();
  const auto& reg = sim.reg();
  const auto& model = cfg.model;
  const auto& co = cfg.coeffs;
  const NodeFields f = sim.synthesize(rec.state);

  const Eigen::Index nx = f.b.rows(), ny = f.b.cols();
  Grid ent(nx, ny), th_th(nx, ny), th_vi(nx, ny), th_re(nx, ny), th_sd(nx, ny);
  Grid zeta(nx, ny), hg(nx, ny);

  for (Eigen::Index i = 0; i < nx; ++i)
    for (Eigen::Index j = 0; j < ny; ++j) {
      const double b = f.b(i, j);
      const double bM = f.bM(i, j);
      const double th = f.theta(i, j);
      const double thp = std::max(th, 0.0);
      const double gt2 = f.gtx(i, j) * f.gtx(i, j) + f.gty(i, j) * f.gty(i, j);
      const double gb2 = f.gbx(i, j) * f.gbx(i, j) + f.gby(i, j) * f.gby(i, j);
      const double D2 = f.Dxx(i, j) * f.Dxx(i, j) + 2.0 * f.Dxy(i, j) * f.Dxy(i, j) +
                        f.Dyy(i, j) * f.Dyy(i, j);

      const double nuv = co.nu(thp, bM);
      const double kav = co.kappa(thp, bM);
      const double alv = co.alpha(thp, bM);
      const double Cfv = co.Cfun(thp, bM);
      const double p1e = reg.psi1eps.value(thp);
      const double p2d1 = model.psi2.d1(bM);
      const double p2d2 = model.psi2.d2(bM);

      ent(i, j) = (th > 0.0 && b > 0.0)
                      ? -model.psi0.d1(th) - model.psi1.d1(th) * model.psi2.value(b)
                      : 0.0;
      th_th(i, j) = th > 0.0 ? kav * gt2 / th : 0.0;
      th_vi(i, j) = 2.0 * nuv * D2;
      th_re(i, j) = Cfv * p1e * p2d1 * p2d1;
      th_sd(i, j) = p1e * p2d2 * alv * gb2;
      zeta(i, j) = th > 0.0
                       ? (th_th(i, j) / th + th_vi(i, j) + th_re(i, j) + th_sd(i, j)) / th
                       : 0.0;
      hg(i, j) = co.h(thp, bM);
    }

  BudgetSample s;
  s.t = rec.state.t;
  s.kinetic = sim.kinetic_energy(rec.state);
  s.internal = W.integrate(f.e);
  s.total = s.kinetic + s.internal;
  s.entropy = W.integrate(ent);
  s.diss_thermal = W.integrate(th_th);
  s.diss_viscous = W.integrate(th_vi);
  s.diss_relax = W.integrate(th_re);
  s.diss_stressdiff = W.integrate(th_sd);
  for (int eidx = 0; eidx < 4; ++eidx) {
    const Edge eg = static_cast<Edge>(eidx);
    const Eigen::VectorXd vt = W.edge_velocity(eg, rec.state.c);
    const Eigen::VectorXd st = sim.edge_traction(eg, rec.state.c);
    s.boundary_work +=
        W.boundary_integral(eg, (st.array() * vt.array()).matrix().eval());
  }
  if (cfg.body_force) {
    Grid pw(nx, ny);
    const auto& xs = W.nodes_x();
    const auto& ys = W.nodes_y();
    for (Eigen::Index i = 0; i < nx; ++i)
      for (Eigen::Index j = 0; j < ny; ++j) {
        const Vec2 fb = cfg.body_force(xs(i), ys(j));
        pw(i, j) = fb.x() * f.vx(i, j) + fb.y() * f.vy(i, j);
      }
    s.body_power = W.integrate(pw);
  }
  s.min_b = f.b.minCoeff();
  s.max_b = f.b.maxCoeff();
  s.min_e = f.e.minCoeff();
  s.min_theta = f.theta.minCoeff();

  s.entropy_production = W.integrate(zeta);
  s.work_acc = rec.work_acc;
  s.body_acc = rec.body_acc;
  s.zeta_acc = rec.zeta_acc;
  s.mass_b = W.integrate(f.b);
  s.db_dt_internal = rec.dmass_b;
  s.de_dt_internal = rec.denergy;
  s.h_integral = W.integrate(hg);
  s.has_extras = true;

  const double probe = s.total + s.entropy + s.diss_thermal + s.diss_viscous +
                       s.diss_relax + s.diss_stressdiff + s.boundary_work +
                       s.body_power + s.entropy_production + s.h_integral;
  if (!std::isfinite(probe)) {
    for (Eigen::Index i = 0; i < nx; ++i)
      for (Eigen::Index j = 0; j < ny; ++j)
        if (!std::isfinite(f.e(i, j)) || !std::isfinite(f.b(i, j)) ||
            !std::isfinite(zeta(i, j)) || !std::isfinite(ent(i, j)))
          throw SolverError("sample_budgets: non-finite integrand at node (" +
                            std::to_string(i) + "," + std::to_string(j) + ") t=" +
                            std::to_string(rec.state.t));
    throw SolverError("sample_budgets: non-finite budget at t=" +
                      std::to_string(rec.state.t));
  }
  return s;
}

std::string budgets_csv_header() {
  return "t,kinetic,internal,total,entropy,diss_thermal,diss_viscous,diss_relax,"
         "diss_stressdiff,boundary_work,body_power,min_b,max_b,min_e,min_theta";
}

std::string budgets_csv_row(const BudgetSample& s) {
  const double cols[15] = {s.t,          s.kinetic,       s.internal,
                           s.total,      s.entropy,       s.diss_thermal,
                           s.diss_viscous, s.diss_relax,  s.diss_stressdiff,
                           s.boundary_work, s.body_power, s.min_b,
                           s.max_b,      s.min_e,         s.min_theta};
  std::string out;
  for (int i = 0; i < 15; ++i) {
    if (i) out += ',';
    out += format_double(cols[i]);
  }
  return out;
}

std::vector<BudgetSample> parse_budgets_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("budgets.csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != budgets_csv_header())
    throw ConfigError("budgets.csv: unexpected header: " + line);

  std::vector<BudgetSample> out;
  int ln = 1;
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double cols[15];
    const char* p = line.c_str();
    for (int i = 0; i < 15; ++i) {
      char* endp = nullptr;
      cols[i] = std::strtod(p, &endp);
      if (endp == p)
        throw ConfigError("budgets.csv: bad number at line " + std::to_string(ln));
      p = endp;
      if (i < 14) {
        if (*p != ',')
          throw ConfigError("budgets.csv: expected 15 fields at line " +
                            std::to_string(ln));
        ++p;
      }
    }
    if (*p != '\0')
      throw ConfigError("budgets.csv: trailing characters at line " +
                        std::to_string(ln));
    BudgetSample s;
    s.t = cols[0];
    s.kinetic = cols[1];
    s.internal = cols[2];
    s.total = cols[3];
    s.entropy = cols[4];
    s.diss_thermal = cols[5];
    s.diss_viscous = cols[6];
    s.diss_relax = cols[7];
    s.diss_stressdiff = cols[8];
    s.boundary_work = cols[9];
    s.body_power = cols[10];
    s.min_b = cols[11];
    s.max_b = cols[12];
    s.min_e = cols[13];
    s.min_theta = cols[14];
    s.has_extras = false;
    out.push_back(s);
  }
  if (out.empty()) throw ConfigError("budgets.csv: no data rows");
  return out;
}

bool AuditReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string AuditReport::summary() const {
  std::string out;
  for (const auto& c : checks) {
    out += c.pass ? "PASS " : "FAIL ";
    out += c.name + ": measured " + format_double(c.measured) + " vs bound " +
           format_double(c.bound);
    if (!c.detail.empty()) out += " (" + c.detail + ")";
    out += '\n';
  }
  return out;
}

namespace {

// trapezoid integral of a rate column up to each sample
std::vector<double> trapezoid_acc(const std::vector<BudgetSample>& s,
                                  double BudgetSample::*rate) {
  std::vector<double> acc(s.size(), 0.0);
  for (std::size_t k = 1; k < s.size(); ++k)
    acc[k] = acc[k - 1] + 0.5 * (s[k].t - s[k - 1].t) * (s[k].*rate + s[k - 1].*rate);
  return acc;
}

}  // namespace

CheckResult check_energy_conservation(const std::vector<BudgetSample>& series,
                                      double tol) {
  CheckResult r{"energy_conservation", false, 0.0, tol, ""};
  if (series.empty()) {
    r.detail = "no samples";
    return r;
  }
  const bool exact = series.front().has_extras;
  std::vector<double> work, body;
  if (!exact) {
    work = trapezoid_acc(series, &BudgetSample::boundary_work);
    body = trapezoid_acc(series, &BudgetSample::body_power);
  }
  const double E0 = series.front().total;
  const double w0 = exact ? series.front().work_acc : 0.0;
  const double p0 = exact ? series.front().body_acc : 0.0;
  const double denom = std::max(std::abs(E0), 1.0);
  double worst = 0.0;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double w = exact ? series[k].work_acc - w0 : work[k];
    const double p = exact ? series[k].body_acc - p0 : body[k];
    worst = std::max(worst, std::abs(series[k].total + w - p - E0) / denom);
  }
  r.measured = worst;
  r.pass = worst <= tol;
  r.detail = exact ? "accumulator closure" : "trapezoid closure";
  return r;
}

CheckResult check_entropy_monotone(const std::vector<BudgetSample>& series,
                                   double slack) {
  CheckResult r{"entropy_monotone", false, 0.0, slack, ""};
  if (series.empty()) {
    r.detail = "no samples";
    return r;
  }
  double worst = 0.0;  // worst normalized decrease
  for (std::size_t k = 1; k < series.size(); ++k) {
    const double drop = series[k - 1].entropy - series[k].entropy;
    worst = std::max(worst, drop / std::max(1.0, std::abs(series[k - 1].entropy)));
  }
  r.measured = worst;
  r.pass = worst <= slack;
  if (series.front().has_extras)
    r.detail = "balance residual " + format_double(entropy_balance_residual(series));
  return r;
}

double entropy_balance_residual(const std::vector<BudgetSample>& series) {
  if (series.size() < 2 || !series.front().has_extras)
    throw ConfigError("entropy_balance_residual: needs a sampled series with extras");
  const double dS = series.back().entropy - series.front().entropy;
  const double dz = series.back().zeta_acc - series.front().zeta_acc;
  return std::abs(dS - dz);
}

CheckResult check_b_bounds(const std::vector<BudgetSample>& series, double b_min,
                           double b_max, double tol_b) {
  if (tol_b < 0.0) tol_b = 5e-3 * (b_max - b_min);
  CheckResult r{"b_bounds", false, 0.0, tol_b, ""};
  double worst = 0.0;
  for (const auto& s : series) {
    worst = std::max(worst, b_min - s.min_b);
    worst = std::max(worst, s.max_b - b_max);
  }
  r.measured = worst;
  r.pass = worst <= tol_b;
  return r;
}

CheckResult check_positivity(const std::vector<BudgetSample>& series,
                             const RegularizedModel& reg, double tol_floor) {
  CheckResult r{"positivity", false, 0.0, 0.0, ""};
  double min_e = std::numeric_limits<double>::infinity();
  double min_th = std::numeric_limits<double>::infinity();
  for (const auto& s : series) {
    min_e = std::min(min_e, s.min_e);
    min_th = std::min(min_th, s.min_theta);
  }
  if (reg.eps > 0.0) {
    const double fe = floor_energy(reg);
    const double ft = floor_theta(reg);
    if (tol_floor < 0.0) tol_floor = 1e-3 * fe;
    r.bound = tol_floor;
    r.measured = std::max(fe - min_e, ft - min_th);
    r.pass = r.measured <= tol_floor;
    r.detail = "floors e>=" + format_double(fe) + " theta>=" + format_double(ft);
  } else {
    r.measured = std::min(min_e, min_th);
    r.pass = min_e > 0.0 && min_th > 0.0;
    r.detail = "strict positivity (unregularized)";
  }
  return r;
}

CheckResult check_dissipation_sign(const std::vector<BudgetSample>& series,
                                   double area) {
  const double tol = 1e-12 * area;
  CheckResult r{"dissipation_sign", false, 0.0, tol, ""};
  double worst = 0.0;
  for (const auto& s : series)
    for (double d : {s.diss_thermal, s.diss_viscous, s.diss_relax, s.diss_stressdiff})
      worst = std::max(worst, -d);
  r.measured = worst;
  r.pass = worst <= tol;
  return r;
}

CheckResult check_rate_agreement(const std::vector<BudgetSample>& series, double tol) {
  CheckResult r{"rate_agreement", false, 0.0, tol, ""};
  double worst = 0.0;
  bool any = false;
  for (const auto& s : series) {
    if (!s.has_extras) continue;
    any = true;
    worst = std::max(worst, std::abs(s.db_dt_internal + s.h_integral) /
                                std::max(1.0, std::abs(s.h_integral)));
    worst = std::max(worst, std::abs(s.de_dt_internal - s.diss_viscous) /
                                std::max(1.0, std::abs(s.diss_viscous)));
  }
  if (!any) {
    r.detail = "no extras in series";
    return r;
  }
  r.measured = worst;
  r.pass = worst <= tol;
  return r;
}

double roundtrip_residual_max(const RegularizedModel& reg, const Grid& theta,
                              const Grid& b_clamped, const Grid& e) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) {
      const double th = theta(i, j);
      const double back = th > 0.0 ? e_eps(reg, th, b_clamped(i, j)) : th;
      worst = std::max(worst,
                       std::abs(back - e(i, j)) / std::max(1.0, std::abs(e(i, j))));
    }
  return worst;
}

CheckResult check_inversion_roundtrip(const Simulator& sim, const SimState& state,
                                      double tol) {
  const NodeFields f = sim.synthesize(state);
  CheckResult r{"inversion_roundtrip", false, 0.0, tol, ""};
  r.measured = roundtrip_residual_max(sim.reg(), f.theta, f.bM, f.e);
  r.pass = r.measured <= tol;
  return r;
}

}  // namespace viscotherm
