#include "grushin/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "grushin/io.hpp"

namespace grushin {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotConverged = 2;

struct Defaults {
  double alpha = 1.0;
  std::uint64_t seed = 12345;
  int nx = 256, ny = 256;
  double tol = 1e-3;
  std::string out_dir;
};

bool parse_grid(const std::string& s, int* nx, int* ny) {
  const std::size_t x = s.find_first_of("xX");
  if (x == std::string::npos) return false;
  try {
    *nx = std::stoi(s.substr(0, x));
    *ny = std::stoi(s.substr(x + 1));
  } catch (...) {
    return false;
  }
  return *nx >= 16 && *ny >= 16;
}

bool parse_point(const std::string& s, Point* p) {
  const std::size_t c = s.find(',');
  if (c == std::string::npos) return false;
  try {
    p->x1 = std::stod(s.substr(0, c));
    p->x2 = std::stod(s.substr(c + 1));
  } catch (...) {
    return false;
  }
  return finite(*p);
}

Defaults load_defaults(const std::vector<std::string>& args, std::ostream& err,
                       bool* ok) {
  Defaults d;
  *ok = true;
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] != "--config") continue;
    std::ifstream in(args[i + 1]);
    if (!in) {
      err << "cannot open config file: " << args[i + 1] << "\n";
      *ok = false;
      return d;
    }
    json cfg;
    try {
      in >> cfg;
    } catch (const std::exception& e) {
      err << "bad config file: " << e.what() << "\n";
      *ok = false;
      return d;
    }
    if (cfg.contains("alpha")) d.alpha = cfg["alpha"].get<double>();
    if (cfg.contains("seed")) d.seed = cfg["seed"].get<std::uint64_t>();
    if (cfg.contains("tol")) d.tol = cfg["tol"].get<double>();
    if (cfg.contains("out")) d.out_dir = cfg["out"].get<std::string>();
    if (cfg.contains("grid")) {
      if (!parse_grid(cfg["grid"].get<std::string>(), &d.nx, &d.ny)) {
        err << "bad grid in config file\n";
        *ok = false;
      }
    }
  }
  return d;
}

void write_artifact(const std::string& out_dir, const std::string& name,
                    const json& payload) {
  if (out_dir.empty()) return;
  fs::create_directories(out_dir);
  std::ofstream f(fs::path(out_dir) / name, std::ios::binary);
  f << payload.dump(2) << "\n";
}

json check(const std::string& name, double measured, double tolerance,
           bool pass) {
  return json{{"name", name},
              {"measured", measured},
              {"tolerance", tolerance},
              {"pass", pass}};
}

struct SuiteResult {
  json report;
  bool pass = false;
  bool flagged = false;  // numerical non-convergence somewhere
};

// ---------------------------------------------------------------- suites

SuiteResult suite_dilation(double alpha_v, std::uint64_t seed, int pairs,
                           double tol, double solver_tol) {
  const Alpha alpha(alpha_v);
  DistanceOptions dopts;
  dopts.rel_tol = solver_tol;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  double worst = 0.0;
  bool flagged = false;
  for (int i = 0; i < pairs; ++i) {
    const Point p{U(rng), U(rng)};
    const Point q{U(rng), U(rng)};
    const DistanceResult base = grushin_distance(p, q, alpha, dopts);
    flagged = flagged || !base.converged;
    if (!(base.value > 0.0)) continue;
    for (double lam : {0.5, 2.0}) {
      const DistanceResult scaled = grushin_distance(
          dilate(p, lam, alpha), dilate(q, lam, alpha), alpha, dopts);
      flagged = flagged || !scaled.converged;
      const double rel =
          std::fabs(scaled.value - lam * base.value) / (lam * base.value);
      worst = std::max(worst, rel);
    }
  }
  SuiteResult out;
  out.pass = worst <= tol;
  out.flagged = flagged;
  out.report = json{{"suite", "dilation"},
                    {"pairs", pairs},
                    {"lambdas", {0.5, 2.0}},
                    {"checks", json::array({check("scaling identity, max relative error",
                                                  worst, tol, out.pass)})}};
  return out;
}

SuiteResult suite_phi_conformal(double alpha_v, int nx, int ny,
                                const std::string& out_dir) {
  const Alpha alpha(alpha_v);
  SuiteResult out;
  json checks = json::array();
  bool pass = true;
  bool flagged = false;
  json last_density;
  for (double ratio : {2.0, 4.0}) {
    CurveFamily eu = ring_family({0, 0}, 1.0, ratio, 64, RingCoords::Euclidean, alpha);
    GridSpec g;
    g.nx = nx;
    g.ny = ny;
    const ModulusResult me = solve_modulus(eu, g, Metric::Euclidean, alpha);
    flagged = flagged || !me.converged;
    const double classical = 2.0 * M_PI / std::log(ratio);
    const double rel_classical = std::fabs(me.value / classical - 1.0);
    pass = pass && rel_classical <= 0.05;
    checks.push_back(check("euclidean ring vs classical, ratio " +
                               std::to_string(static_cast<int>(ratio)),
                           rel_classical, 0.05, rel_classical <= 0.05));

    CurveFamily gp =
        ring_family({0, 0}, 1.0, ratio, 64, RingCoords::GrushinPullback, alpha);
    const ModulusResult mg = solve_modulus(gp, g, Metric::Grushin, alpha);
    flagged = flagged || !mg.converged;
    const double rel_pullback = std::fabs(mg.value / me.value - 1.0);
    pass = pass && rel_pullback <= 0.07;
    checks.push_back(check("pullback ring vs euclidean, ratio " +
                               std::to_string(static_cast<int>(ratio)),
                           rel_pullback, 0.07, rel_pullback <= 0.07));
    last_density = json{{"schema", kSchemaVersion},
                        {"kind", "density"},
                        {"data", to_json(mg.density)}};
  }
  if (!out_dir.empty()) write_artifact(out_dir, "density.json", last_density);
  out.pass = pass;
  out.flagged = flagged;
  out.report = json{{"suite", "phi-conformal"}, {"checks", checks}};
  return out;
}

SuiteResult suite_section5(double alpha_v, int grid_n, int curves,
                           const std::string& out_dir) {
  const Alpha alpha(alpha_v);  // alpha < 1 rejected inside the bound call
  NonrectifiableFamilyOptions so;
  so.grid_n = grid_n;
  so.family_size = curves;
  const NonrectifiableFamilyBound bound = nonrectifiable_family_bound(alpha, so);

  json checks = json::array();
  const double agree = std::fabs(bound.upper_integral -
                                 bound.upper_integral_coarse) /
                       bound.upper_integral;
  bool pass = agree <= 1e-4;
  checks.push_back(check("certificate integral, two-grid agreement", agree,
                         1e-4, agree <= 1e-4));
  const double frac = bound.family_modulus_estimate * bound.upper_integral;
  const bool mod_ok = frac >= 0.9;
  pass = pass && mod_ok;
  checks.push_back(check("family modulus / (1/I)", frac, 0.9, mod_ok));

  int divergent = 0, convergent = 0;
  for (int i = 0; i < curves; ++i) {
    const double a = static_cast<double>(i) / (curves - 1);
    const RectifiabilityReport g =
        rectifiability_probe(nonrectifiable_curve(a, alpha), alpha, Metric::Grushin);
    const RectifiabilityReport e = rectifiability_probe(
        nonrectifiable_image_curve(a, alpha), alpha, Metric::Euclidean);
    if (g.verdict == RectifiabilityVerdict::Divergent) ++divergent;
    if (e.verdict == RectifiabilityVerdict::Convergent) ++convergent;
  }
  const bool probes_ok = divergent == curves && convergent == curves;
  pass = pass && probes_ok;
  checks.push_back(check("grushin-divergent verdicts", divergent, curves,
                         divergent == curves));
  checks.push_back(check("euclidean-convergent verdicts", convergent, curves,
                         convergent == curves));

  if (!out_dir.empty()) {
    write_artifact(out_dir, "density.json",
                   json{{"schema", kSchemaVersion},
                        {"kind", "density"},
                        {"data", to_json(bound.modulus.density)}});
    const Polyline sample = sample_curve(nonrectifiable_image_curve(0.0, alpha),
                                         257, Grading::GeometricAtLeft);
    write_artifact(out_dir, "curve.json",
                   json{{"schema", kSchemaVersion},
                        {"kind", "polyline"},
                        {"spec", nonrectifiable_spec_json(0.0, alpha, true)},
                        {"data", to_json(sample)}});
  }

  SuiteResult out;
  out.pass = pass;
  out.flagged = !bound.modulus.converged;
  out.report = json{{"suite", "section5"},
                    {"upper_integral", bound.upper_integral},
                    {"modulus_lower_bound", bound.modulus_lower_bound},
                    {"family_modulus_estimate", bound.family_modulus_estimate},
                    {"checks", checks}};
  return out;
}

SuiteResult suite_cantor(double alpha_v) {
  json checks = json::array();
  bool pass = true;
  for (double L : {0.2, 0.3}) {
    CantorCurveSpec spec;
    spec.L = L;
    spec.depth = 11;
    spec.alpha = alpha_v;
    const CantorCurveResult r = cantor_curve(spec);
    double worst = 0.0;
    for (int lvl = 3; lvl <= 10; ++lvl) {
      const double ratio =
          r.levels[lvl].contribution / r.levels[lvl - 1].contribution;
      worst = std::max(worst, std::fabs(ratio / r.ratio_predicted - 1.0));
    }
    pass = pass && worst <= 0.01;
    checks.push_back(check("level ratio deviation, L=" + std::to_string(L),
                           worst, 0.01, worst <= 0.01));
    const bool verdict_ok = (L < std::pow(0.5, 1.0 + alpha_v))
                                ? r.convergent
                                : !r.convergent;
    pass = pass && verdict_ok;
    checks.push_back(check("convergence verdict, L=" + std::to_string(L),
                           r.convergent ? 1.0 : 0.0, 1.0, verdict_ok));
  }
  SuiteResult out;
  out.pass = pass;
  out.report = json{{"suite", "cantor"}, {"checks", checks}};
  return out;
}

SuiteResult suite_lemma31(double alpha_v, std::uint64_t seed) {
  const Alpha alpha(alpha_v);
  const double C = snowflake_constant(alpha);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-5.0, 5.0);
  bool all = true;
  for (int trial = 0; trial < 7; ++trial) {
    std::vector<double> pts(6);
    for (double& v : pts) v = U(rng);
    std::sort(pts.begin(), pts.end());
    bool distinct = true;
    for (std::size_t i = 1; i < pts.size(); ++i)
      distinct = distinct && pts[i] > pts[i - 1];
    if (!distinct) {
      --trial;
      continue;
    }
    all = all && monotone_permutation_exhaustive(pts, alpha, C);
  }
  SuiteResult out;
  out.pass = all;
  out.report = json{
      {"suite", "lemma31"},
      {"checks", json::array({check("monotone rearrangement inequality, "
                                    "7 random 6-tuples, all permutations",
                                    all ? 1.0 : 0.0, 1.0, all)})}};
  return out;
}

SuiteResult suite_conformal_family(double alpha_v, std::uint64_t seed,
                                   int points) {
  const Alpha alpha(alpha_v);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  std::uniform_real_distribution<double> UL(0.5, 2.0);

  // composition closure at random points
  double worst_closure = 0.0;
  for (int i = 0; i < 50; ++i) {
    const GrushinConformal f{UL(rng), U(rng), rng() % 2 ? +1 : -1};
    const GrushinConformal g{UL(rng), U(rng), rng() % 2 ? +1 : -1};
    const MapSpec comp = MapSpec::compose(
        {MapSpec::conformal(f, alpha), MapSpec::conformal(g, alpha)});
    const std::optional<GrushinConformal> simple = comp.simplified_conformal();
    const MapSpec simplified = MapSpec::conformal(*simple, alpha);
    const Point p{U(rng), U(rng)};
    const Point a = comp(p);
    const Point b = simplified(p);
    worst_closure = std::max(
        worst_closure, std::max(std::fabs(a.x1 - b.x1), std::fabs(a.x2 - b.x2)) /
                           std::max(1.0, euclidean_norm(a)));
  }

  // metric conformality of the family
  double worst_ratio = 1.0;
  bool flagged = false;
  DilatationOptions dopts;
  dopts.n_dirs = 16;
  dopts.sphere.solver.rel_tol = 1e-3;
  dopts.sphere.solver.max_vertices = 33;
  dopts.target_solver.rel_tol = 1e-3;
  dopts.target_solver.max_vertices = 33;
  for (int i = 0; i < points; ++i) {
    const GrushinConformal f{UL(rng), U(rng), rng() % 2 ? +1 : -1};
    Point p{U(rng), U(rng)};
    if (std::fabs(p.x1) < 0.05) p.x1 = std::copysign(0.05, p.x1 == 0.0 ? 1.0 : p.x1);
    const MapSpec m = MapSpec::conformal(f, alpha);
    const DilatationReport rep = metric_dilatation(
        m, p, {1e-1, 1e-2, 1e-3}, Metric::Grushin, Metric::Grushin, alpha, dopts);
    flagged = flagged || !rep.reliable;
    for (const DilatationSample& s : rep.per_radius)
      worst_ratio = std::max(worst_ratio, s.ratio);
  }

  SuiteResult out;
  const bool closure_ok = worst_closure <= 1e-12;
  const bool ratio_ok = worst_ratio <= 1.02;
  out.pass = closure_ok && ratio_ok;
  out.flagged = flagged;
  out.report =
      json{{"suite", "conformal-family"},
           {"checks",
            json::array({check("composition closure, max deviation",
                               worst_closure, 1e-12, closure_ok),
                         check("metric dilatation of the family, max ratio",
                               worst_ratio, 1.02, ratio_ok)})}};
  return out;
}

SuiteResult suite_h0_witness(double alpha_v, int n_dirs) {
  const Alpha alpha(alpha_v);
  DilatationOptions dopts;
  dopts.n_dirs = n_dirs;
  dopts.sphere.solver.rel_tol = 5e-4;
  dopts.sphere.solver.max_vertices = 65;
  dopts.sphere.solver.max_sweeps = 120;
  const MapSpec m = MapSpec::phi(alpha);
  const DilatationReport rep = metric_dilatation(
      m, {0, 0}, {1.0, 0.5, 0.25}, Metric::Grushin, Metric::Euclidean, alpha,
      dopts);
  double lo = kInf, hi = 0.0;
  for (const DilatationSample& s : rep.per_radius) {
    lo = std::min(lo, s.ratio);
    hi = std::max(hi, s.ratio);
  }
  const double spread = hi / lo - 1.0;
  const bool above = lo >= 1.05;
  const bool stable = spread <= 0.02;
  SuiteResult out;
  out.pass = above && stable;
  out.flagged = !rep.reliable;
  out.report =
      json{{"suite", "h0-witness"},
           {"dilatation", to_json(rep)},
           {"checks",
            json::array({check("dilatation of the canonical map at the origin",
                               lo, 1.05, above),
                         check("radius stability", spread, 0.02, stable)})}};
  return out;
}

int emit(const SuiteResult& s, double alpha_v, std::uint64_t seed,
         const std::string& out_dir, std::ostream& os) {
  json report = s.report;
  report["schema"] = kSchemaVersion;
  report["alpha"] = alpha_v;
  report["seed"] = seed;
  report["pass"] = s.pass;
  report["flagged_nonconvergence"] = s.flagged;
  os << report.dump(2) << "\n";
  if (!out_dir.empty()) {
    const std::string suite = report["suite"].get<std::string>();
    write_artifact(out_dir, "verify_" + suite + ".json", report);
  }
  return s.pass ? kExitOk : kExitNotConverged;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  bool cfg_ok = true;
  const Defaults d = load_defaults(args, err, &cfg_ok);
  if (!cfg_ok) return kExitUsage;

  CLI::App app{"alpha-Grushin plane numerical toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (flags override)");

  // distance
  auto* cmd_distance = app.add_subcommand("distance", "Grushin distance between two points");
  double alpha_v = d.alpha;
  std::string from_s, to_s, out_dir = d.out_dir;
  double tol = d.tol;
  std::uint64_t seed = d.seed;
  cmd_distance->add_option("--alpha", alpha_v, "metric exponent");
  cmd_distance->add_option("--from", from_s, "start point X,Y")->required();
  cmd_distance->add_option("--to", to_s, "end point X,Y")->required();
  cmd_distance->add_option("--tol", tol, "relative tolerance");
  cmd_distance->add_option("--out", out_dir, "output directory");
  cmd_distance->add_option("--seed", seed, "random seed");
  cmd_distance->add_option("--config", config_path, "JSON config file");

  // verify
  auto* cmd_verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite;
  cmd_verify->add_option("suite", suite,
                         "one of: dilation, phi-conformal, section5, cantor, "
                         "lemma31, conformal-family, h0-witness")
      ->required();
  double v_alpha = d.alpha;
  std::string v_grid;
  double v_tol = d.tol;
  std::uint64_t v_seed = d.seed;
  std::string v_out = d.out_dir;
  int v_pairs = 30;
  int v_points = 8;
  int v_curves = 33;
  int v_ndirs = 32;
  cmd_verify->add_option("--alpha", v_alpha, "metric exponent");
  cmd_verify->add_option("--grid", v_grid, "grid NXxNY");
  cmd_verify->add_option("--tol", v_tol, "tolerance override");
  cmd_verify->add_option("--seed", v_seed, "random seed");
  cmd_verify->add_option("--out", v_out, "output directory");
  cmd_verify->add_option("--pairs", v_pairs, "dilation: random pairs");
  cmd_verify->add_option("--points", v_points, "conformal-family: sample points");
  cmd_verify->add_option("--curves", v_curves, "section5: family size");
  cmd_verify->add_option("--dirs", v_ndirs, "h0-witness: sphere directions");
  cmd_verify->add_option("--config", config_path, "JSON config file");

  // profile
  auto* cmd_profile = app.add_subcommand("profile", "empirical quasisymmetry envelope");
  std::string p_map = "phi";
  double p_alpha = d.alpha;
  long p_triples = 2000;
  std::uint64_t p_seed = d.seed;
  std::string p_out = d.out_dir;
  std::string p_box = "-2,-2:2,2";
  std::string p_source = "grushin", p_target = "euclidean";
  cmd_profile->add_option("--map", p_map, "map spec, e.g. \"phi\" or \"gconf(l=2,a=0,s=++)\"");
  cmd_profile->add_option("--alpha", p_alpha, "metric exponent");
  cmd_profile->add_option("--triples", p_triples, "sample triples (>= 1000)");
  cmd_profile->add_option("--seed", p_seed, "random seed");
  cmd_profile->add_option("--out", p_out, "output directory");
  cmd_profile->add_option("--box", p_box, "sampling box xmin,ymin:xmax,ymax");
  cmd_profile->add_option("--source", p_source, "source metric: grushin|euclidean");
  cmd_profile->add_option("--target", p_target, "target metric: grushin|euclidean");
  cmd_profile->add_option("--config", config_path, "JSON config file");

  // export
  auto* cmd_export = app.add_subcommand("export", "convert a prior result to CSV");
  std::string e_what, e_path, e_out = d.out_dir;
  cmd_export->add_option("--what", e_what, "density|curve|profile")->required();
  cmd_export->add_option("--path", e_path, "destination CSV file")->required();
  cmd_export->add_option("--out", e_out, "directory holding prior results");
  cmd_export->add_option("--config", config_path, "JSON config file");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream dummy;
    app.exit(e, dummy, dummy);
    err << dummy.str();
    return kExitUsage;
  }

  try {
    if (*cmd_distance) {
      Point p, q;
      if (!parse_point(from_s, &p) || !parse_point(to_s, &q)) {
        err << "malformed point; expected X,Y\n";
        return kExitUsage;
      }
      const Alpha alpha(alpha_v);
      DistanceOptions opts;
      opts.rel_tol = tol;
      const DistanceResult r = grushin_distance(p, q, alpha, opts);
      json report = to_json(r);
      report["schema"] = kSchemaVersion;
      report["alpha"] = alpha_v;
      report["from"] = to_json(p);
      report["to"] = to_json(q);
      out << report.dump(2) << "\n";
      if (!out_dir.empty()) {
        write_artifact(out_dir, "distance.json", report);
        if (r.path.size() >= 2)
          write_artifact(out_dir, "curve.json",
                         json{{"schema", kSchemaVersion},
                              {"kind", "polyline"},
                              {"data", to_json(r.path)}});
      }
      return r.converged ? kExitOk : kExitNotConverged;
    }

    if (*cmd_verify) {
      int nx = d.nx, ny = d.ny;
      if (!v_grid.empty() && !parse_grid(v_grid, &nx, &ny)) {
        err << "bad --grid; expected NXxNY with NX, NY >= 16\n";
        return kExitUsage;
      }
      SuiteResult s;
      if (suite == "dilation") {
        s = suite_dilation(v_alpha, v_seed, v_pairs, 0.02, v_tol);
      } else if (suite == "phi-conformal") {
        s = suite_phi_conformal(v_alpha, nx, ny, v_out);
      } else if (suite == "section5") {
        if (v_alpha < 1.0) {
          err << "section5 requires alpha >= 1\n";
          return kExitUsage;
        }
        s = suite_section5(v_alpha, nx == 256 && v_grid.empty() ? 512 : nx,
                           v_curves, v_out);
      } else if (suite == "cantor") {
        s = suite_cantor(v_alpha);
      } else if (suite == "lemma31") {
        s = suite_lemma31(v_alpha, v_seed);
      } else if (suite == "conformal-family") {
        s = suite_conformal_family(v_alpha, v_seed, v_points);
      } else if (suite == "h0-witness") {
        s = suite_h0_witness(v_alpha, v_ndirs);
      } else {
        err << "unknown suite: " << suite << "\n";
        return kExitUsage;
      }
      return emit(s, v_alpha, v_seed, v_out, out);
    }

    if (*cmd_profile) {
      const Alpha alpha(p_alpha);
      const std::size_t colon = p_box.find(':');
      Point lo, hi;
      if (colon == std::string::npos ||
          !parse_point(p_box.substr(0, colon), &lo) ||
          !parse_point(p_box.substr(colon + 1), &hi)) {
        err << "bad --box; expected xmin,ymin:xmax,ymax\n";
        return kExitUsage;
      }
      auto metric_of = [&](const std::string& s, Metric* m) {
        if (s == "grushin") *m = Metric::Grushin;
        else if (s == "euclidean") *m = Metric::Euclidean;
        else return false;
        return true;
      };
      Metric src, tgt;
      if (!metric_of(p_source, &src) || !metric_of(p_target, &tgt)) {
        err << "metrics must be grushin or euclidean\n";
        return kExitUsage;
      }
      const MapSpec m = MapSpec::parse(p_map, alpha);
      std::vector<double> edges;
      for (double t = 0.125; t <= 8.0 * 1.0001; t *= 2.0) edges.push_back(t);
      QuasisymmetryOptions qopts;
      qopts.triples = p_triples;
      qopts.seed = p_seed;
      qopts.solver.rel_tol = 2e-3;
      qopts.solver.max_vertices = 33;
      const std::vector<EtaSample> profile = quasisymmetry_profile(
          m, Rect{lo.x1, hi.x1, lo.x2, hi.x2}, edges, src, tgt, alpha, qopts);
      json report{{"schema", kSchemaVersion},
                  {"alpha", p_alpha},
                  {"seed", p_seed},
                  {"map", m.text()},
                  {"triples", p_triples},
                  {"bins", to_json(profile)}};
      out << report.dump(2) << "\n";
      if (!p_out.empty()) write_artifact(p_out, "profile.json", report);
      return kExitOk;
    }

    if (*cmd_export) {
      if (e_out.empty()) {
        err << "export needs --out pointing at prior results\n";
        return kExitUsage;
      }
      const fs::path dir(e_out);
      auto load = [&](const std::string& name, json* j) {
        std::ifstream in(dir / name);
        if (!in) return false;
        in >> *j;
        return true;
      };
      std::string csv;
      json j;
      if (e_what == "density") {
        if (!load("density.json", &j)) {
          err << "no prior density result in " << e_out << "\n";
          return kExitUsage;
        }
        DensityGrid g;
        const json& data = j["data"];
        const auto& bb = data["bbox"];
        g = DensityGrid::euclidean(Rect{bb[0], bb[1], bb[2], bb[3]},
                                   data["nx"].get<int>(), data["ny"].get<int>());
        g.values = data["values"].get<std::vector<double>>();
        csv = density_csv(g);
      } else if (e_what == "curve") {
        if (!load("curve.json", &j)) {
          err << "no prior curve result in " << e_out << "\n";
          return kExitUsage;
        }
        const json& data = j["data"];
        std::vector<Point> verts;
        for (const auto& v : data["vertices"])
          verts.push_back({v[0].get<double>(), v[1].get<double>()});
        Polyline p = Polyline::make(
            std::move(verts), data["params"].get<std::vector<double>>());
        csv = polyline_csv(p);
      } else if (e_what == "profile") {
        if (!load("profile.json", &j)) {
          err << "no prior profile result in " << e_out << "\n";
          return kExitUsage;
        }
        std::vector<EtaSample> profile;
        for (const auto& b : j["bins"]) {
          EtaSample s;
          s.t_lo = b["t_lo"];
          s.t_hi = b["t_hi"];
          s.t_at_max = b["t_at_max"];
          s.max_ratio = b["max_ratio"];
          s.count = b["count"];
          profile.push_back(s);
        }
        csv = profile_csv(profile);
      } else {
        err << "unknown export kind: " << e_what << "\n";
        return kExitUsage;
      }
      std::ofstream f(e_path, std::ios::binary);
      if (!f) {
        err << "cannot write " << e_path << "\n";
        return kExitUsage;
      }
      f << csv;
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNotConverged;
  }
  return kExitUsage;
}

}  // namespace grushin
