#include "viscotherm/config.hpp"

#include <cmath>
#include <thread>

#include "viscotherm/util.hpp"

namespace viscotherm {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config: " + path + ": " + what);
}

const json& obj(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  return j;
}

void reject_unknown(const json& o, const std::string& path,
                    std::initializer_list<const char*> known) {
  for (const auto& item : o.items()) {
    bool ok = false;
    for (const char* k : known)
      if (item.key() == k) {
        ok = true;
        break;
      }
    if (!ok) fail(path + "." + item.key(), "unknown key");
  }
}

double get_num(const json& o, const std::string& path, const char* k, double defv) {
  auto it = o.find(k);
  if (it == o.end()) return defv;
  if (!it->is_number()) fail(path + "." + k, "expected a number");
  return it->get<double>();
}

double req_num(const json& o, const std::string& path, const char* k) {
  auto it = o.find(k);
  if (it == o.end()) fail(path + "." + k, "missing required number");
  if (!it->is_number()) fail(path + "." + k, "expected a number");
  return it->get<double>();
}

long get_int(const json& o, const std::string& path, const char* k, long defv) {
  auto it = o.find(k);
  if (it == o.end()) return defv;
  if (!it->is_number_integer()) fail(path + "." + k, "expected an integer");
  return it->get<long>();
}

std::string get_str(const json& o, const std::string& path, const char* k,
                    const std::string& defv) {
  auto it = o.find(k);
  if (it == o.end()) return defv;
  if (!it->is_string()) fail(path + "." + k, "expected a string");
  return it->get<std::string>();
}

void int_pair(const json& o, const std::string& path, const char* k, int defa,
              int defb, int& a, int& b) {
  auto it = o.find(k);
  if (it == o.end()) {
    a = defa;
    b = defb;
    return;
  }
  if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number_integer() ||
      !(*it)[1].is_number_integer())
    fail(path + "." + k, "expected a pair of integers");
  a = (*it)[0].get<int>();
  b = (*it)[1].get<int>();
}

std::function<double(double, double)> scalar_field(const json& o,
                                                   const std::string& path,
                                                   const Rectangle& R, json& echo) {
  obj(o, path);
  const std::string kind = get_str(o, path, "kind", "");
  if (kind == "constant") {
    reject_unknown(o, path, {"kind", "value"});
    const double v = req_num(o, path, "value");
    echo = json{{"kind", "constant"}, {"value", v}};
    return [v](double, double) { return v; };
  }
  if (kind == "cosine" || kind == "tanh_cosine") {
    const double base = req_num(o, path, "base");
    const double amp = req_num(o, path, "amplitude");
    const long i = get_int(o, path, "i", 1);
    const long j = get_int(o, path, "j", 0);
    if (i < 0 || j < 0) fail(path, "mode indices must be >= 0");
    const double kx = static_cast<double>(i) * M_PI / R.Lx;
    const double ky = static_cast<double>(j) * M_PI / R.Ly;
    if (kind == "cosine") {
      reject_unknown(o, path, {"kind", "base", "amplitude", "i", "j"});
      echo = json{{"kind", "cosine"}, {"base", base}, {"amplitude", amp},
                  {"i", i},           {"j", j}};
      return [=](double x, double y) {
        return base + amp * std::cos(kx * x) * std::cos(ky * y);
      };
    }
    reject_unknown(o, path, {"kind", "base", "amplitude", "steepness", "i", "j"});
    const double st = get_num(o, path, "steepness", 3.0);
    if (!(st > 0.0)) fail(path + ".steepness", "must be > 0");
    const double norm = std::tanh(st);
    echo = json{{"kind", "tanh_cosine"}, {"base", base}, {"amplitude", amp},
                {"steepness", st},       {"i", i},       {"j", j}};
    return [=](double x, double y) {
      return base + amp * std::tanh(st * std::cos(kx * x) * std::cos(ky * y)) / norm;
    };
  }
  fail(path + ".kind", "expected constant|cosine|tanh_cosine");
}

Eigen::VectorXd velocity_coeffs(const json& o, const std::string& path,
                                const VelocityBasisSpec& vb, json& echo) {
  obj(o, path);
  const int n = vb.Nx * vb.Ny;
  const std::string kind = get_str(o, path, "kind", "zero");
  if (kind == "zero") {
    reject_unknown(o, path, {"kind"});
    echo = json{{"kind", "zero"}};
    return Eigen::VectorXd::Zero(n);
  }
  if (kind == "stream_mode") {
    reject_unknown(o, path, {"kind", "i", "j", "amplitude"});
    const long i = get_int(o, path, "i", 1);
    const long j = get_int(o, path, "j", 1);
    const double amp = get_num(o, path, "amplitude", 1.0);
    if (i < 1 || i > vb.Nx || j < 1 || j > vb.Ny)
      fail(path, "stream_mode indices outside the velocity basis");
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    c((i - 1) * vb.Ny + (j - 1)) = amp;
    echo = json{{"kind", "stream_mode"}, {"i", i}, {"j", j}, {"amplitude", amp}};
    return c;
  }
  if (kind == "coeffs") {
    reject_unknown(o, path, {"kind", "values"});
    auto it = o.find("values");
    if (it == o.end() || !it->is_array())
      fail(path + ".values", "expected an array of numbers");
    if (static_cast<int>(it->size()) != n)
      fail(path + ".values", "expected " + std::to_string(n) + " values");
    Eigen::VectorXd c(n);
    for (int q = 0; q < n; ++q) {
      if (!(*it)[q].is_number()) fail(path + ".values", "expected numbers");
      c(q) = (*it)[q].get<double>();
    }
    echo = json{{"kind", "coeffs"}, {"values", *it}};
    return c;
  }
  fail(path + ".kind", "expected zero|stream_mode|coeffs");
}

}  // namespace

LoadedConfig load_config_json(const json& j) {
  const std::string top = "$";
  obj(j, top);
  reject_unknown(j, top,
                 {"model", "domain", "resolution", "regularization", "cutoff_k",
                  "elliptic_mu", "stickslip", "mode", "time", "initial",
                  "prescribed_velocity", "body_force", "snapshots", "threads"});

  LoadedConfig out;
  SimulationConfig& sc = out.sim;
  json echo;

  // domain
  {
    const json dom = j.value("domain", json::object());
    obj(dom, "$.domain");
    reject_unknown(dom, "$.domain", {"Lx", "Ly"});
    sc.domain.Lx = get_num(dom, "$.domain", "Lx", 1.0);
    sc.domain.Ly = get_num(dom, "$.domain", "Ly", 1.0);
    if (!(sc.domain.Lx > 0.0) || !(sc.domain.Ly > 0.0))
      fail("$.domain", "Lx and Ly must be > 0");
    echo["domain"] = {{"Lx", sc.domain.Lx}, {"Ly", sc.domain.Ly}};
  }

  // model
  {
    auto it = j.find("model");
    if (it == j.end()) fail("$.model", "missing");
    const json& m = obj(*it, "$.model");
    const std::string preset = get_str(m, "$.model", "preset", "oldroyd_b");
    const double c_V = get_num(m, "$.model", "c_V", 1.0);
    const double theta_ref = get_num(m, "$.model", "theta_ref", 1.0);
    const double mu_el = get_num(m, "$.model", "mu_elastic", 1.0);
    const double nu1 = get_num(m, "$.model", "nu1", 1.0);
    const double mu_t = get_num(m, "$.model", "mu_tilde", 1.0);
    const double nu_v = get_num(m, "$.model", "nu_visc", 1.0);
    const double ka = get_num(m, "$.model", "kappa_heat", 1.0);
    const double b_min = get_num(m, "$.model", "b_min", 0.7);
    const double b_max = get_num(m, "$.model", "b_max", 1.5);
    const std::string relax = get_str(m, "$.model", "relaxation", "preset");
    for (auto [name, v] : std::initializer_list<std::pair<const char*, double>>{
             {"c_V", c_V}, {"theta_ref", theta_ref}, {"mu_elastic", mu_el},
             {"nu1", nu1}, {"mu_tilde", mu_t},       {"nu_visc", nu_v},
             {"kappa_heat", ka}})
      if (!(v > 0.0)) fail(std::string("$.model.") + name, "must be > 0");
    if (!(b_min > 0.0 && b_min <= 1.0 && b_max >= 1.0))
      fail("$.model", "need 0 < b_min <= 1 <= b_max");
    if (relax != "preset" && relax != "none")
      fail("$.model.relaxation", "expected preset|none");

    std::pair<FreeEnergyModel, MaterialCoefficients> mk;
    echo["model"] = {{"preset", preset},     {"c_V", c_V},
                     {"theta_ref", theta_ref}, {"mu_elastic", mu_el},
                     {"nu1", nu1},           {"mu_tilde", mu_t},
                     {"nu_visc", nu_v},      {"kappa_heat", ka},
                     {"b_min", b_min},       {"b_max", b_max},
                     {"relaxation", relax}};
    if (preset == "oldroyd_b") {
      reject_unknown(m, "$.model",
                     {"preset", "c_V", "theta_ref", "mu_elastic", "nu1", "mu_tilde",
                      "nu_visc", "kappa_heat", "b_min", "b_max", "relaxation"});
      mk = preset_oldroyd_b(c_V, theta_ref, mu_el, nu1, mu_t, nu_v, ka);
    } else if (preset == "giesekus") {
      reject_unknown(m, "$.model",
                     {"preset", "c_V", "theta_ref", "mu_elastic", "nu1", "mu_tilde",
                      "nu_visc", "kappa_heat", "b_min", "b_max", "relaxation", "a_g"});
      const double a_g = get_num(m, "$.model", "a_g", 0.0);
      if (!(a_g >= 0.0 && a_g <= 1.0)) fail("$.model.a_g", "must be in [0, 1]");
      mk = preset_giesekus(c_V, theta_ref, mu_el, nu1, mu_t, nu_v, ka, a_g);
      echo["model"]["a_g"] = a_g;
    } else {
      fail("$.model.preset", "expected oldroyd_b|giesekus");
    }
    sc.model = std::move(mk.first);
    sc.coeffs = std::move(mk.second);
    sc.coeffs.b_min = b_min;
    sc.coeffs.b_max = b_max;
    if (relax == "none") {
      sc.coeffs.h = [](double, double) { return 0.0; };
      sc.coeffs.Cfun = [](double, double) { return 0.0; };
    }
  }

  // resolution
  {
    const json r = j.value("resolution", json::object());
    obj(r, "$.resolution");
    reject_unknown(r, "$.resolution", {"scalar", "velocity", "quadrature"});
    int_pair(r, "$.resolution", "scalar", 8, 8, sc.scalar_modes.Mx,
             sc.scalar_modes.My);
    int_pair(r, "$.resolution", "velocity", 4, 4, sc.velocity_modes.Nx,
             sc.velocity_modes.Ny);
    int_pair(r, "$.resolution", "quadrature", 0, 0, sc.quadrature.nx,
             sc.quadrature.ny);
    if (sc.scalar_modes.Mx < 1 || sc.scalar_modes.My < 1)
      fail("$.resolution.scalar", "needs at least one mode per direction");
    if (sc.velocity_modes.Nx < 0 || sc.velocity_modes.Ny < 0)
      fail("$.resolution.velocity", "must be >= 0");
    if ((sc.velocity_modes.Nx == 0) != (sc.velocity_modes.Ny == 0))
      fail("$.resolution.velocity", "use [0,0] to disable or both >= 1");
    echo["resolution"] = {
        {"scalar", {sc.scalar_modes.Mx, sc.scalar_modes.My}},
        {"velocity", {sc.velocity_modes.Nx, sc.velocity_modes.Ny}},
        {"quadrature", {sc.quadrature.nx, sc.quadrature.ny}}};
  }

  // scalars
  {
    const json r = j.value("regularization", json::object());
    obj(r, "$.regularization");
    reject_unknown(r, "$.regularization", {"epsilon"});
    sc.reg_epsilon = get_num(r, "$.regularization", "epsilon", 0.0);
    if (!(sc.reg_epsilon >= 0.0 && sc.reg_epsilon <= 1.0))
      fail("$.regularization.epsilon", "must be in [0, 1]");
    echo["regularization"] = {{"epsilon", sc.reg_epsilon}};

    sc.cutoff_k = get_num(j, top, "cutoff_k", 0.0);
    if (sc.cutoff_k < 0.0) fail("$.cutoff_k", "must be >= 0");
    echo["cutoff_k"] = sc.cutoff_k;
    sc.elliptic_mu = get_num(j, top, "elliptic_mu", 0.0);
    if (sc.elliptic_mu < 0.0) fail("$.elliptic_mu", "must be >= 0");
    echo["elliptic_mu"] = sc.elliptic_mu;

    const json ss = j.value("stickslip", json::object());
    obj(ss, "$.stickslip");
    reject_unknown(ss, "$.stickslip", {"s_star", "gamma_star", "epsilon"});
    sc.stickslip.s_star = get_num(ss, "$.stickslip", "s_star", 0.0);
    sc.stickslip.gamma_star = get_num(ss, "$.stickslip", "gamma_star", 0.0);
    sc.stickslip.eps = get_num(ss, "$.stickslip", "epsilon", 0.0);
    if (sc.stickslip.s_star < 0.0 || sc.stickslip.gamma_star < 0.0 ||
        sc.stickslip.eps < 0.0)
      fail("$.stickslip", "parameters must be >= 0");
    echo["stickslip"] = {{"s_star", sc.stickslip.s_star},
                         {"gamma_star", sc.stickslip.gamma_star},
                         {"epsilon", sc.stickslip.eps}};

    const std::string mode = get_str(j, top, "mode", "dynamic");
    if (mode == "dynamic")
      sc.mode = RunMode::dynamic;
    else if (mode == "kinematic")
      sc.mode = RunMode::kinematic;
    else
      fail("$.mode", "expected dynamic|kinematic");
    echo["mode"] = mode;
  }

  // time and tolerances
  {
    const json t = j.value("time", json::object());
    obj(t, "$.time");
    reject_unknown(t, "$.time",
                   {"t0", "t1", "rel_tol", "abs_tol", "max_step", "initial_step",
                    "safety", "max_steps"});
    sc.t0 = get_num(t, "$.time", "t0", 0.0);
    sc.t1 = get_num(t, "$.time", "t1", 1.0);
    if (!(sc.t1 >= sc.t0)) fail("$.time", "t1 must be >= t0");
    sc.ode.rel_tol = get_num(t, "$.time", "rel_tol", 1e-6);
    sc.ode.abs_tol = get_num(t, "$.time", "abs_tol", 1e-9);
    if (!(sc.ode.rel_tol > 0.0) || !(sc.ode.abs_tol > 0.0))
      fail("$.time", "tolerances must be > 0");
    const double ms = get_num(t, "$.time", "max_step", 0.0);
    if (ms < 0.0) fail("$.time.max_step", "must be >= 0 (0 = unlimited)");
    sc.ode.max_step = ms > 0.0 ? ms : std::numeric_limits<double>::infinity();
    sc.ode.initial_step = get_num(t, "$.time", "initial_step", 0.0);
    if (sc.ode.initial_step < 0.0) fail("$.time.initial_step", "must be >= 0");
    sc.ode.safety = get_num(t, "$.time", "safety", 0.9);
    if (!(sc.ode.safety > 0.0 && sc.ode.safety <= 1.0))
      fail("$.time.safety", "must be in (0, 1]");
    sc.ode.max_steps = get_int(t, "$.time", "max_steps", 10'000'000);
    if (sc.ode.max_steps < 1) fail("$.time.max_steps", "must be >= 1");
    echo["time"] = {{"t0", sc.t0},
                    {"t1", sc.t1},
                    {"rel_tol", sc.ode.rel_tol},
                    {"abs_tol", sc.ode.abs_tol},
                    {"max_step", ms},
                    {"initial_step", sc.ode.initial_step},
                    {"safety", sc.ode.safety},
                    {"max_steps", sc.ode.max_steps}};
  }

  // fields
  {
    auto it = j.find("initial");
    if (it == j.end()) fail("$.initial", "missing");
    const json& ini = obj(*it, "$.initial");
    reject_unknown(ini, "$.initial", {"theta0", "b0", "velocity"});
    auto th = ini.find("theta0");
    auto b0 = ini.find("b0");
    if (th == ini.end()) fail("$.initial.theta0", "missing");
    if (b0 == ini.end()) fail("$.initial.b0", "missing");
    json eth, eb, ev;
    sc.initial.theta0 = scalar_field(*th, "$.initial.theta0", sc.domain, eth);
    sc.initial.b0 = scalar_field(*b0, "$.initial.b0", sc.domain, eb);
    const json vel = ini.value("velocity", json{{"kind", "zero"}});
    sc.initial.v0_coeffs =
        velocity_coeffs(vel, "$.initial.velocity", sc.velocity_modes, ev);
    echo["initial"] = {{"theta0", eth}, {"b0", eb}, {"velocity", ev}};

    json ep;
    const json pv = j.value("prescribed_velocity", json{{"kind", "zero"}});
    sc.prescribed_coeffs =
        velocity_coeffs(pv, "$.prescribed_velocity", sc.velocity_modes, ep);
    echo["prescribed_velocity"] = ep;
  }

  // body force
  {
    const json bf = j.value("body_force", json{{"kind", "zero"}});
    obj(bf, "$.body_force");
    const std::string kind = get_str(bf, "$.body_force", "kind", "zero");
    if (kind == "zero") {
      reject_unknown(bf, "$.body_force", {"kind"});
      sc.body_force = nullptr;
      echo["body_force"] = {{"kind", "zero"}};
    } else if (kind == "constant") {
      reject_unknown(bf, "$.body_force", {"kind", "fx", "fy"});
      const double fx = get_num(bf, "$.body_force", "fx", 0.0);
      const double fy = get_num(bf, "$.body_force", "fy", 0.0);
      sc.body_force = [fx, fy](double, double) { return Vec2(fx, fy); };
      echo["body_force"] = {{"kind", "constant"}, {"fx", fx}, {"fy", fy}};
    } else if (kind == "eddy") {
      reject_unknown(bf, "$.body_force", {"kind", "i", "j", "amplitude"});
      const long i = get_int(bf, "$.body_force", "i", 1);
      const long j2 = get_int(bf, "$.body_force", "j", 1);
      const double amp = get_num(bf, "$.body_force", "amplitude", 1.0);
      if (i < 1 || j2 < 1) fail("$.body_force", "mode indices must be >= 1");
      const double kx = static_cast<double>(i) * M_PI / sc.domain.Lx;
      const double ky = static_cast<double>(j2) * M_PI / sc.domain.Ly;
      sc.body_force = [=](double x, double y) {
        return Vec2(amp * ky * std::sin(kx * x) * std::cos(ky * y),
                    -amp * kx * std::cos(kx * x) * std::sin(ky * y));
      };
      echo["body_force"] = {{"kind", "eddy"}, {"i", i}, {"j", j2}, {"amplitude", amp}};
    } else {
      fail("$.body_force.kind", "expected zero|constant|eddy");
    }
  }

  // snapshots, threads
  {
    const json sn = j.value("snapshots", json::array());
    if (!sn.is_array()) fail("$.snapshots", "expected an array of times");
    for (const auto& v : sn) {
      if (!v.is_number()) fail("$.snapshots", "expected numbers");
      sc.snapshot_times.push_back(v.get<double>());
    }
    echo["snapshots"] = sn;

    const long th = get_int(j, top, "threads", 1);
    if (th < 0) fail("$.threads", "must be >= 0 (0 = hardware)");
    sc.threads = th == 0
                     ? std::max(1u, std::thread::hardware_concurrency())
                     : static_cast<int>(th);
    echo["threads"] = th;
  }

  out.echo = std::move(echo);
  return out;
}

LoadedConfig load_config_file(const std::string& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + path + ": " + e.what());
  }
  return load_config_json(j);
}

}  // namespace viscotherm
