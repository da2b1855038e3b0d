#pragma once

// Command-line front end: JSON config files with strict key checking,
// flag overrides (flags win), and deterministic CSV/JSON emission.
// Exit codes: 0 success, 1 configuration/domain error, 2 numerical
// failure.

#include <array>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "darkstate/io.hpp"
#include "darkstate/ladder.hpp"
#include "darkstate/lambda.hpp"
#include "darkstate/manybody.hpp"
#include "darkstate/types.hpp"

namespace darkstate::cli {

using json = nlohmann::json;

struct RunConfig {
  std::string output_dir = ".";
  std::string format = "csv";  // csv | json for the tabular commands
  unsigned long long seed = 0;

  ladder::LadderParams ladder{1.0, -0.3, 0.0, 0.3, 40, ladder::Boundary::open};

  struct Lambda {
    std::optional<double> theta;
    double omega = 1.0;  // Rabi scale used when theta is given
    std::optional<double> omega1, omega2;
    std::array<double, 3> b_real{0.0, 0.0, 0.0};
    std::optional<std::array<double, 3>> b_imag;  // unset -> compensated
    bool zero_b_imag = false;
    double t_start = 0.0, t_stop = 20.0;
    int t_steps = 201;
  } lambda;

  int nk = 201;
  double edge_window = 1e-4;

  struct Scan {
    double gamma_start = 0.0, gamma_stop = 1.0;
    int gamma_steps = 101;
    double omega_y_start = 1.2, omega_y_stop = 1.2;
    int omega_y_steps = 1;
    double tol_edge = 0.0;  // 0 -> 1e-6 * t
  } scan;

  struct Manybody {
    double u = 0.05;
    double manifold_tol = 1e-8;
  } manybody;
};

namespace detail {

inline void check_keys(const json& j, const std::vector<std::string>& allowed,
                       const std::string& where) {
  require(j.is_object(), "config: '" + where + "' must be an object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const auto& k : allowed)
      if (item.key() == k) {
        ok = true;
        break;
      }
    require(ok, "config: unknown key '" + item.key() + "' in " + where);
  }
}

inline std::array<double, 3> get_vec3(const json& j, const std::string& where) {
  require(j.is_array() && j.size() == 3, "config: '" + where + "' must be [x, y, z]");
  std::array<double, 3> v{};
  for (int i = 0; i < 3; ++i) {
    require(j[static_cast<std::size_t>(i)].is_number(),
            "config: '" + where + "' components must be numbers");
    v[static_cast<std::size_t>(i)] = j[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

inline ladder::Boundary parse_boundary(const std::string& s) {
  if (s == "open") return ladder::Boundary::open;
  if (s == "periodic") return ladder::Boundary::periodic;
  throw DomainError("config: boundary must be 'open' or 'periodic', got '" + s + "'");
}

inline std::vector<double> linspace(double start, double stop, int steps,
                                    const std::string& what) {
  require(std::isfinite(start) && std::isfinite(stop), "config: non-finite " + what + " grid");
  require(steps >= 1, "config: " + what + " grid needs at least one point");
  std::vector<double> pts(static_cast<std::size_t>(steps));
  if (steps == 1) {
    pts[0] = start;
    return pts;
  }
  for (int i = 0; i < steps; ++i)
    pts[static_cast<std::size_t>(i)] = start + (stop - start) * i / (steps - 1);
  return pts;
}

}  // namespace detail

inline RunConfig load_config(const std::string& path) {
  RunConfig cfg;
  json root;
  try {
    root = json::parse(io::read_text(path));
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: parse failure: ") + e.what());
  }
  detail::check_keys(root, {"output_dir", "format", "seed", "ladder", "lambda",
                            "bands", "edges", "scan", "manybody"},
                     "top level");
  if (root.contains("output_dir")) cfg.output_dir = root["output_dir"].get<std::string>();
  if (root.contains("format")) cfg.format = root["format"].get<std::string>();
  if (root.contains("seed")) cfg.seed = root["seed"].get<unsigned long long>();

  if (root.contains("ladder")) {
    const json& l = root["ladder"];
    detail::check_keys(l, {"t", "gamma", "omega_x", "omega_y", "length", "boundary"}, "ladder");
    if (l.contains("t")) cfg.ladder.t = l["t"].get<double>();
    if (l.contains("gamma")) cfg.ladder.gamma = l["gamma"].get<double>();
    if (l.contains("omega_x")) cfg.ladder.omega_x = l["omega_x"].get<double>();
    if (l.contains("omega_y")) cfg.ladder.omega_y = l["omega_y"].get<double>();
    if (l.contains("length")) cfg.ladder.length = l["length"].get<int>();
    if (l.contains("boundary"))
      cfg.ladder.boundary = detail::parse_boundary(l["boundary"].get<std::string>());
  }

  if (root.contains("lambda")) {
    const json& l = root["lambda"];
    detail::check_keys(l, {"theta", "omega", "omega1", "omega2", "b_real", "b_imag",
                           "t_start", "t_stop", "t_steps"},
                       "lambda");
    if (l.contains("theta")) cfg.lambda.theta = l["theta"].get<double>();
    if (l.contains("omega")) cfg.lambda.omega = l["omega"].get<double>();
    if (l.contains("omega1")) cfg.lambda.omega1 = l["omega1"].get<double>();
    if (l.contains("omega2")) cfg.lambda.omega2 = l["omega2"].get<double>();
    if (l.contains("b_real")) cfg.lambda.b_real = detail::get_vec3(l["b_real"], "lambda.b_real");
    if (l.contains("b_imag")) {
      if (l["b_imag"].is_string()) {
        const auto s = l["b_imag"].get<std::string>();
        if (s == "compensated")
          cfg.lambda.b_imag.reset();
        else if (s == "zero")
          cfg.lambda.zero_b_imag = true;
        else
          throw DomainError("config: lambda.b_imag must be [x,y,z], 'compensated' or 'zero'");
      } else {
        cfg.lambda.b_imag = detail::get_vec3(l["b_imag"], "lambda.b_imag");
      }
    }
    if (l.contains("t_start")) cfg.lambda.t_start = l["t_start"].get<double>();
    if (l.contains("t_stop")) cfg.lambda.t_stop = l["t_stop"].get<double>();
    if (l.contains("t_steps")) cfg.lambda.t_steps = l["t_steps"].get<int>();
  }

  if (root.contains("bands")) {
    detail::check_keys(root["bands"], {"nk"}, "bands");
    if (root["bands"].contains("nk")) cfg.nk = root["bands"]["nk"].get<int>();
  }
  if (root.contains("edges")) {
    detail::check_keys(root["edges"], {"window"}, "edges");
    if (root["edges"].contains("window"))
      cfg.edge_window = root["edges"]["window"].get<double>();
  }
  if (root.contains("scan")) {
    const json& s = root["scan"];
    detail::check_keys(s, {"gamma_start", "gamma_stop", "gamma_steps", "omega_y_start",
                           "omega_y_stop", "omega_y_steps", "tol_edge"},
                       "scan");
    if (s.contains("gamma_start")) cfg.scan.gamma_start = s["gamma_start"].get<double>();
    if (s.contains("gamma_stop")) cfg.scan.gamma_stop = s["gamma_stop"].get<double>();
    if (s.contains("gamma_steps")) cfg.scan.gamma_steps = s["gamma_steps"].get<int>();
    if (s.contains("omega_y_start")) cfg.scan.omega_y_start = s["omega_y_start"].get<double>();
    if (s.contains("omega_y_stop")) cfg.scan.omega_y_stop = s["omega_y_stop"].get<double>();
    if (s.contains("omega_y_steps")) cfg.scan.omega_y_steps = s["omega_y_steps"].get<int>();
    if (s.contains("tol_edge")) cfg.scan.tol_edge = s["tol_edge"].get<double>();
  }
  if (root.contains("manybody")) {
    const json& m = root["manybody"];
    detail::check_keys(m, {"u", "manifold_tol"}, "manybody");
    if (m.contains("u")) cfg.manybody.u = m["u"].get<double>();
    if (m.contains("manifold_tol")) cfg.manybody.manifold_tol = m["manifold_tol"].get<double>();
  }
  return cfg;
}

inline void finalize_config(RunConfig& cfg) {
  require(cfg.format == "csv" || cfg.format == "json",
          "config: format must be 'csv' or 'json'");
  if (const char* env = std::getenv("DARKSTATE_SEED")) {
    const std::string s(env);
    unsigned long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    require(res.ec == std::errc() && res.ptr == s.data() + s.size(),
            "DARKSTATE_SEED must be a nonnegative integer, got '" + s + "'");
    cfg.seed = v;
  }
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw ResourceError("cannot create output directory '" + cfg.output_dir + "'");
}

namespace detail {

inline std::string table_path(const RunConfig& cfg, const std::string& stem) {
  return cfg.output_dir + "/" + stem + (cfg.format == "json" ? ".json" : ".csv");
}

// Tabular emission honoring the configured format. CSV is the pinned
// schema; JSON mirrors it as an array of row objects with the same keys.
inline void write_table(const RunConfig& cfg, const std::string& stem,
                        const io::CsvTable& table,
                        const std::vector<bool>& numeric_cols) {
  if (cfg.format == "csv") {
    io::write_text(table_path(cfg, stem), table.to_string());
    return;
  }
  json rows = json::array();
  for (const auto& r : table.rows) {
    json obj;
    for (std::size_t c = 0; c < table.header.size(); ++c)
      if (numeric_cols[c])
        obj[table.header[c]] = io::parse_double(r[c]);
      else
        obj[table.header[c]] = r[c];
    rows.push_back(std::move(obj));
  }
  io::write_text(table_path(cfg, stem), rows.dump(2) + "\n");
}

inline json complex_json(Cplx z) { return json{{"im", z.imag()}, {"re", z.real()}}; }

inline json finite_or_null(double x) {
  if (std::isfinite(x)) return json(x);
  return json(nullptr);
}

struct ResolvedLambda {
  lambda::RabiPair rabi;
  double theta = 0.0;
  RVec3 b_real;
  RVec3 b_imag;
  bool compensated = false;
};

inline ResolvedLambda resolve_lambda(const RunConfig::Lambda& l) {
  ResolvedLambda out;
  const bool has_pair = l.omega1.has_value() || l.omega2.has_value();
  if (has_pair) {
    require(l.omega1.has_value() && l.omega2.has_value(),
            "config: omega1 and omega2 must be given together");
    require(!l.theta.has_value(), "config: give either theta or the omega pair, not both");
    out.rabi = lambda::RabiPair{*l.omega1, *l.omega2};
    out.rabi.validate();
    out.theta = out.rabi.theta();
  } else {
    // Balanced drive (theta = pi/2) unless configured otherwise.
    out.theta = l.theta.value_or(M_PI / 2.0);
    out.rabi = lambda::rabi_from_theta(out.theta, l.omega);
  }
  out.b_real = RVec3(l.b_real[0], l.b_real[1], l.b_real[2]);
  if (l.b_imag.has_value()) {
    require(!l.zero_b_imag, "config: b_imag given both explicitly and as 'zero'");
    out.b_imag = RVec3((*l.b_imag)[0], (*l.b_imag)[1], (*l.b_imag)[2]);
  } else if (l.zero_b_imag) {
    out.b_imag = RVec3::Zero();
  } else {
    out.b_imag = lambda::compensate(out.b_real, out.theta);
    out.compensated = true;
  }
  return out;
}

}  // namespace detail

inline int cmd_compensate(const RunConfig::Lambda& l) {
  detail::ResolvedLambda r = detail::resolve_lambda(l);
  const RVec3 b_imag = lambda::compensate(r.b_real, r.theta);
  lambda::ComplexField field{r.b_real, b_imag};
  const auto check = lambda::verify_dark(r.rabi, field);
  json out;
  out["b_real"] = {r.b_real[0], r.b_real[1], r.b_real[2]};
  out["theta"] = r.theta;
  out["b_imag"] = {b_imag[0], b_imag[1], b_imag[2]};
  out["lambda_d"] = detail::complex_json(check.lambda_d);
  out["residual"] = check.residual;
  std::cout << out.dump(2) << "\n";
  return 0;
}

inline int cmd_spectrum(const RunConfig& cfg) {
  const auto spec = ladder::spectrum_report(cfg.ladder);
  io::CsvTable table;
  table.header = {"index", "re_E", "im_E"};
  for (Eigen::Index i = 0; i < spec.size(); ++i)
    table.rows.push_back({io::format_int(i), io::format_double(spec.eigenvalues[i].real()),
                          io::format_double(spec.eigenvalues[i].imag())});
  detail::write_table(cfg, "spectrum", table, {true, true, true});
  return 0;
}

inline int cmd_bands(const RunConfig& cfg) {
  const auto sweep = ladder::band_sweep(cfg.ladder, cfg.nk);
  io::CsvTable table;
  table.header = {"k", "band", "re_E", "im_E"};
  for (std::size_t j = 0; j < sweep.k.size(); ++j)
    for (int b = 0; b < 4; ++b)
      table.rows.push_back({io::format_double(sweep.k[j]), io::format_int(b),
                            io::format_double(sweep.energies(static_cast<Eigen::Index>(j), b).real()),
                            io::format_double(sweep.energies(static_cast<Eigen::Index>(j), b).imag())});
  detail::write_table(cfg, "bands", table, {true, true, true, true});
  return 0;
}

inline int cmd_edges(const RunConfig& cfg) {
  const auto report = ladder::numeric_edge_states(cfg.ladder, cfg.edge_window);
  json summary;
  summary["window"] = cfg.edge_window;
  summary["support_threshold"] = 1e-8;
  summary["predicted_sigma"] = detail::finite_or_null(report.predicted_sigma);
  summary["fitted_kappa"] = detail::finite_or_null(report.fitted_kappa);
  summary["seed"] = cfg.seed;
  summary["states"] = json::array();
  for (std::size_t i = 0; i < report.states.size(); ++i) {
    const auto& st = report.states[i];
    io::CsvTable table;
    table.header = {"n", "leg", "re_psi", "im_psi", "abs2"};
    for (int r = 0; r < cfg.ladder.length; ++r)
      for (ladder::Leg leg : {ladder::Leg::up, ladder::Leg::down}) {
        const Cplx amp = st.psi[ladder::mode_index(r, leg, cfg.ladder.length)];
        table.rows.push_back({io::format_int(r), leg == ladder::Leg::up ? "up" : "down",
                              io::format_double(amp.real()), io::format_double(amp.imag()),
                              io::format_double(std::norm(amp))});
      }
    detail::write_table(cfg, "edge_" + std::to_string(i), table,
                        {true, false, true, true, true});
    json js;
    js["index"] = i;
    js["energy"] = detail::complex_json(st.energy);
    js["side"] = st.side == ladder::Side::left ? "left" : "right";
    js["support_size"] = st.support_size;
    js["weight_elsewhere"] = st.weight_elsewhere;
    js["fitted_kappa"] = detail::finite_or_null(st.fitted_kappa);
    summary["states"].push_back(std::move(js));
  }
  io::write_text(cfg.output_dir + "/edges_summary.json", summary.dump(2) + "\n");
  return 0;
}

inline int cmd_scan(const RunConfig& cfg) {
  const auto gammas = detail::linspace(cfg.scan.gamma_start, cfg.scan.gamma_stop,
                                       cfg.scan.gamma_steps, "gamma");
  const auto omega_ys = detail::linspace(cfg.scan.omega_y_start, cfg.scan.omega_y_stop,
                                         cfg.scan.omega_y_steps, "omega_y");
  const auto points = ladder::phase_scan(cfg.ladder, gammas, omega_ys, cfg.scan.tol_edge);
  io::CsvTable table;
  table.header = {"gamma", "omega_y", "n_edge", "max_im"};
  for (const auto& pt : points)
    table.rows.push_back({io::format_double(pt.gamma), io::format_double(pt.omega_y),
                          io::format_int(pt.n_edge_states), io::format_double(pt.max_im)});
  detail::write_table(cfg, "scan", table, {true, true, true, true});
  return 0;
}

inline int cmd_lambda_evolve(const RunConfig& cfg) {
  detail::ResolvedLambda r = detail::resolve_lambda(cfg.lambda);
  lambda::ComplexField field{r.b_real, r.b_imag};
  const auto db = lambda::dark_bright(r.rabi);
  CVector psi0(3);
  psi0 << db.dark[0], db.dark[1], 0.0;
  const auto times = detail::linspace(cfg.lambda.t_start, cfg.lambda.t_stop,
                                      cfg.lambda.t_steps, "time");
  const auto samples = lambda::bloch_trajectory(r.rabi, field, psi0, times);
  io::CsvTable table;
  table.header = {"t", "sx", "sy", "sz", "dark_fidelity"};
  for (const auto& s : samples)
    table.rows.push_back({io::format_double(s.t), io::format_double(s.s[0]),
                          io::format_double(s.s[1]), io::format_double(s.s[2]),
                          io::format_double(s.dark_fidelity)});
  detail::write_table(cfg, "lambda_evolve", table, {true, true, true, true, true});
  return 0;
}

inline int cmd_manybody(const RunConfig& cfg) {
  const auto report = manybody::verify_cdw(cfg.ladder, cfg.manybody.u,
                                           cfg.manybody.manifold_tol);
  const auto orbitals = manybody::cdw_orbitals(cfg.ladder, 0);
  auto all_orbitals = orbitals;
  const auto shifted = manybody::cdw_orbitals(cfg.ladder, 1);
  all_orbitals.insert(all_orbitals.end(), shifted.begin(), shifted.end());
  std::sort(all_orbitals.begin(), all_orbitals.end(),
            [](const ladder::Orbital& a, const ladder::Orbital& b) { return a.center < b.center; });
  const Eigen::MatrixXd v =
      manybody::projected_interaction(all_orbitals, cfg.ladder.length, cfg.manybody.u);

  json out;
  out["u"] = cfg.manybody.u;
  out["manifold_tol"] = cfg.manybody.manifold_tol;
  out["seed"] = cfg.seed;
  out["energy_expected"] = report.energy;
  out["residual"] = {report.residual[0], report.residual[1]};
  out["fidelity"] = {report.fidelity[0], report.fidelity[1]};
  out["e_min"] = detail::complex_json(report.e_min);
  out["manifold_dim"] = report.manifold_dim;
  out["gap"] = report.gap;
  json centers = json::array(), vmat = json::array();
  for (const auto& orb : all_orbitals) centers.push_back(orb.center);
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < v.cols(); ++j) row.push_back(v(i, j));
    vmat.push_back(std::move(row));
  }
  out["orbital_centers"] = std::move(centers);
  out["projected_interaction"] = std::move(vmat);
  io::write_text(cfg.output_dir + "/manybody.json", out.dump(2) + "\n");
  return 0;
}

inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{"dark-state compensation and non-Hermitian flat-band ladder toolkit"};
  app.require_subcommand(1);

  std::string config_path, output_dir, format, boundary;
  double t = 0, gamma = 0, omega_x = 0, omega_y = 0;
  int length = 0, nk = 0, t_steps = 0;
  double window = 0, u = 0, theta = 0, omega = 0, omega1 = 0, omega2 = 0;
  double bx = 0, by = 0, bz = 0, bix = 0, biy = 0, biz = 0;
  double t_stop = 0;
  unsigned long long seed = 0;
  bool zero_b_imag = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration file");
    sub->add_option("--output-dir", output_dir, "directory for emitted files");
    sub->add_option("--format", format, "table format: csv or json");
    sub->add_option("--seed", seed, "RNG seed recorded in summaries");
  };
  auto add_ladder = [&](CLI::App* sub) {
    sub->add_option("--t", t, "strong-bond hopping");
    sub->add_option("--gamma", gamma, "gain/loss strength");
    sub->add_option("--omega-x", omega_x, "onsite drive, x component");
    sub->add_option("--omega-y", omega_y, "onsite drive, y component");
    sub->add_option("--length", length, "number of rungs");
    sub->add_option("--boundary", boundary, "open or periodic");
  };

  CLI::App* c_comp = app.add_subcommand("compensate", "closed-form imaginary field for a real field");
  c_comp->add_option("--bx", bx, "real field x");
  c_comp->add_option("--by", by, "real field y");
  c_comp->add_option("--bz", bz, "real field z");
  c_comp->add_option("--theta", theta, "mixing angle");
  c_comp->add_option("--omega1", omega1, "Rabi coupling of the first leg");
  c_comp->add_option("--omega2", omega2, "Rabi coupling of the second leg");

  CLI::App* c_evolve = app.add_subcommand("lambda-evolve", "Bloch trajectory of the driven three-level system");
  add_common(c_evolve);
  c_evolve->add_option("--theta", theta, "mixing angle");
  c_evolve->add_option("--omega", omega, "Rabi scale used with --theta");
  c_evolve->add_option("--omega1", omega1, "Rabi coupling of the first leg");
  c_evolve->add_option("--omega2", omega2, "Rabi coupling of the second leg");
  c_evolve->add_option("--bx", bx, "real field x");
  c_evolve->add_option("--by", by, "real field y");
  c_evolve->add_option("--bz", bz, "real field z");
  c_evolve->add_option("--bix", bix, "imaginary field x (with --biy/--biz)");
  c_evolve->add_option("--biy", biy, "imaginary field y");
  c_evolve->add_option("--biz", biz, "imaginary field z");
  c_evolve->add_flag("--zero-b-imag", zero_b_imag, "evolve without the compensating field");
  c_evolve->add_option("--t-stop", t_stop, "end of the time grid");
  c_evolve->add_option("--t-steps", t_steps, "number of samples");

  CLI::App* c_spec = app.add_subcommand("spectrum", "sorted ladder spectrum");
  add_common(c_spec);
  add_ladder(c_spec);

  CLI::App* c_bands = app.add_subcommand("bands", "Bloch band sweep");
  add_common(c_bands);
  add_ladder(c_bands);
  c_bands->add_option("--nk", nk, "number of k points");

  CLI::App* c_edges = app.add_subcommand("edges", "edge states of the open chain");
  add_common(c_edges);
  add_ladder(c_edges);
  c_edges->add_option("--window", window, "energy window around the edge energies");

  CLI::App* c_scan = app.add_subcommand("scan", "zero-mode count over a (gamma, omega_y) grid");
  add_common(c_scan);
  add_ladder(c_scan);

  CLI::App* c_many = app.add_subcommand("manybody", "density-wave check in the capped Fock space");
  add_common(c_many);
  add_ladder(c_many);
  c_many->add_option("--u", u, "rung interaction strength");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    // Options live only on the subcommands that declare them; probe
    // without throwing so one merge path serves every subcommand.
    const auto given = [sub](const std::string& name) {
      const CLI::Option* opt = sub->get_option_no_throw(name);
      return opt != nullptr && opt->count() > 0;
    };
    RunConfig cfg;
    if (given("--config")) cfg = load_config(config_path);
    if (given("--output-dir")) cfg.output_dir = output_dir;
    if (given("--format")) cfg.format = format;
    if (given("--seed")) cfg.seed = seed;
    if (given("--t")) cfg.ladder.t = t;
    if (given("--gamma")) cfg.ladder.gamma = gamma;
    if (given("--omega-x")) cfg.ladder.omega_x = omega_x;
    if (given("--omega-y")) cfg.ladder.omega_y = omega_y;
    if (given("--length")) cfg.ladder.length = length;
    if (given("--boundary")) cfg.ladder.boundary = detail::parse_boundary(boundary);
    if (given("--nk")) cfg.nk = nk;
    if (given("--window")) cfg.edge_window = window;
    if (given("--u")) cfg.manybody.u = u;
    if (given("--theta")) cfg.lambda.theta = theta;
    if (given("--omega")) cfg.lambda.omega = omega;
    if (given("--omega1")) cfg.lambda.omega1 = omega1;
    if (given("--omega2")) cfg.lambda.omega2 = omega2;
    if (given("--bx")) cfg.lambda.b_real[0] = bx;
    if (given("--by")) cfg.lambda.b_real[1] = by;
    if (given("--bz")) cfg.lambda.b_real[2] = bz;
    if (given("--bix") || given("--biy") || given("--biz"))
      cfg.lambda.b_imag = std::array<double, 3>{bix, biy, biz};
    if (zero_b_imag) cfg.lambda.zero_b_imag = true;
    if (given("--t-stop")) cfg.lambda.t_stop = t_stop;
    if (given("--t-steps")) cfg.lambda.t_steps = t_steps;

    if (sub == c_comp) return cmd_compensate(cfg.lambda);
    finalize_config(cfg);
    if (sub == c_evolve) return cmd_lambda_evolve(cfg);
    if (sub == c_spec) return cmd_spectrum(cfg);
    if (sub == c_bands) return cmd_bands(cfg);
    if (sub == c_edges) return cmd_edges(cfg);
    if (sub == c_scan) return cmd_scan(cfg);
    if (sub == c_many) return cmd_manybody(cfg);
    std::cerr << "error: unknown subcommand\n";
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "error: numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: numerical failure: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace darkstate::cli
