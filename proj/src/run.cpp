#include "stoda/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "stoda/base_profile.hpp"
#include "stoda/constants.hpp"
#include "stoda/errors.hpp"
#include "stoda/oracle.hpp"
#include "stoda/quadrature.hpp"
#include "stoda/util.hpp"

namespace stoda {

using ojson = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------- parsing --

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

ProblemSpec parse_problem(const nlohmann::json& j) {
  ProblemSpec p;
  p.sources.dimension = get_or(j, "dimension", 2);
  p.sources.points = get_or(j, "points", std::vector<std::vector<double>>{});
  p.sources.weights = get_or(j, "weights", std::vector<std::vector<double>>{});
  if (p.sources.weights.empty())
    p.sources.weights.assign(1, std::vector<double>(p.sources.points.size(), 0.0));
  p.origin_alpha = get_or(j, "origin_alpha", 0.0);
  if (j.contains("farfield_exponent") && !j.at("farfield_exponent").is_null())
    p.farfield_exponent = j.at("farfield_exponent").get<double>();
  return p;
}

GridConfig parse_grid(const nlohmann::json& j) {
  GridConfig g;
  g.inner_radial = get_or(j, "inner_radial", g.inner_radial);
  g.angular = get_or(j, "angular", g.angular);
  g.polar = get_or(j, "polar", g.polar);
  g.radial_growth = get_or(j, "radial_growth", g.radial_growth);
  g.radial_gauss = get_or(j, "radial_gauss", g.radial_gauss);
  g.patch_gauss = get_or(j, "patch_gauss", g.patch_gauss);
  g.patch_levels = get_or(j, "patch_levels", g.patch_levels);
  g.patch_sectors = get_or(j, "patch_sectors", g.patch_sectors);
  g.patch_grading = get_or(j, "patch_grading", g.patch_grading);
  g.patch_radius_cap = get_or(j, "patch_radius_cap", g.patch_radius_cap);
  g.split_radius = get_or(j, "split_radius", g.split_radius);
  g.outer_levels = get_or(j, "outer_levels", g.outer_levels);
  g.outer_grading = get_or(j, "outer_grading", g.outer_grading);
  g.refine = get_or(j, "refine", g.refine);
  return g;
}

IterationConfig parse_iteration(const nlohmann::json& j) {
  IterationConfig it;
  it.damping = get_or(j, "damping", it.damping);
  it.damping_min = get_or(j, "damping_min", it.damping_min);
  it.tolerance = get_or(j, "tolerance", it.tolerance);
  it.max_iterations = get_or(j, "max_iterations", it.max_iterations);
  it.homotopy = get_or(j, "homotopy", it.homotopy);
  it.blowup_threshold = get_or(j, "blowup_threshold", it.blowup_threshold);
  return it;
}

// ------------------------------------------------------------ serializers --

ojson to_json(const Condition& c) {
  return ojson{{"applicable", c.applicable},
               {"holds", c.holds},
               {"indeterminate", c.indeterminate},
               {"margins", c.margins}};
}

ojson to_json(const AssumptionsA& a) {
  ojson j;
  j["applicable"] = a.applicable;
  if (a.applicable) {
    for (int k = 0; k < 6; ++k) {
      j["A" + std::to_string(k + 1)] = ojson{{"holds", a.holds[k]}, {"margin", a.margins[k]}};
    }
    j["all"] = a.all();
  }
  return j;
}

ojson to_json(const ConditionReport& r) {
  return ojson{{"luo_tian", to_json(r.luo_tian)},
               {"toda_existence", to_json(r.toda_existence)},
               {"beta_like", to_json(r.beta_like)},
               {"barbeta_form", to_json(r.barbeta_form)},
               {"assumptions_A", to_json(r.assumptions)}};
}

ojson to_json(const SlopeFit& f) {
  return ojson{
      {"slope", f.slope}, {"intercept", f.intercept}, {"spread", f.spread}, {"annuli", f.annuli}};
}

ojson to_json(const SigmaTable& t) {
  return ojson{{"radius", t.radius},
               {"local_mass", t.local_mass},
               {"value", t.value},
               {"settled", t.settled}};
}

ojson to_json(const DiagnosticsReport& d) {
  ojson j;
  j["converged"] = d.converged;
  j["masses"] = d.masses;
  j["mass_targets"] = d.mass_targets;
  j["mass_residuals"] = d.mass_residuals;
  j["beta_farfield"] = d.beta_farfield;
  ojson slopes = ojson::array();
  for (const auto& s : d.slopes) slopes.push_back(to_json(s));
  j["slopes"] = slopes;
  ojson sig = ojson::array();
  for (const auto& comp : d.per_source_sigma) {
    ojson row = ojson::array();
    for (const auto& t : comp) row.push_back(to_json(t));
    sig.push_back(row);
  }
  j["per_source_sigma"] = sig;
  j["kelvin_roundtrip_error"] = d.kelvin_roundtrip_error;
  j["component_symmetry_gap"] = d.component_symmetry_gap;
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

void write_json(const std::filesystem::path& path, const ojson& j) {
  write_text(path, j.dump(2) + "\n");
}

std::string chart_name(const QuadratureGrid& g, std::size_t i) {
  switch (g.chart[i]) {
    case Chart::Inner: return "inner";
    case Chart::Outer: return "outer";
    case Chart::Patch: return "patch" + std::to_string(g.patch_of[i]);
  }
  return "?";
}

std::string history_csv(const std::vector<IterationRecord>& hist, int nc) {
  std::ostringstream os;
  os << "t,iter,theta,residual";
  for (int i = 1; i <= nc; ++i) os << ",raw_mass" << i;
  for (int i = 1; i <= nc; ++i) os << ",c" << i;
  for (int i = 1; i <= nc; ++i) os << ",sup_psi" << i;
  os << "\n";
  for (const auto& h : hist) {
    os << format_full(h.t) << "," << h.iter << "," << format_full(h.theta) << ","
       << format_full(h.residual);
    for (double x : h.raw_mass) os << "," << format_full(x);
    for (double x : h.c) os << "," << format_full(x);
    for (double x : h.sup_psi) os << "," << format_full(x);
    os << "\n";
  }
  return os.str();
}

std::string fields_csv(const QuadratureGrid& g, const FieldPair& u, int nc) {
  std::ostringstream os;
  for (int k = 1; k <= g.dim; ++k) os << "x" << k << ",";
  os << "chart";
  for (int i = 1; i <= nc; ++i) os << ",u" << i;
  os << "\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (int k = 0; k < g.dim; ++k) os << format_full(g.coords[k][i]) << ",";
    os << chart_name(g, i);
    for (int c = 0; c < nc; ++c) os << "," << format_full(u.comp[c][i]);
    os << "\n";
  }
  return os.str();
}

// ------------------------------------------------------------------ modes --

int run_check(const RunConfig& cfg, const std::filesystem::path& out) {
  const ConditionReport rep = check_conditions(cfg.problem.sources);
  ojson j;
  j["schema_version"] = 1;
  j["mode"] = "check";
  j["report"] = to_json(rep);
  const auto d = derived_exponents(cfg.problem.sources);
  j["derived"] = ojson{{"beta", d.beta}, {"beta_bar", d.beta_bar}, {"target_mass", d.target_mass}};
  write_json(out / "condition_report.json", j);
  return 0;
}

int run_solve(const RunConfig& cfg, const std::filesystem::path& out) {
  cfg.problem.validate();
  if (cfg.problem.dim() >= 4)
    std::fprintf(stderr, "note: dimension %d runs coarse-only\n", cfg.problem.dim());
  const QuadratureGrid grid = build_grid(cfg.problem.dim(), cfg.problem.patch_centers(), cfg.grid);
  const LogKernelOperator op(grid, cfg.problem);
  SolveResult res = solve(op, cfg.iteration);

  // field state for the CSV: assembled u on convergence, v + beta u0 + c else
  FieldPair state = res.v;
  if (res.status == SolveStatus::Converged) {
    state = res.u;
  } else if (!res.c.empty()) {
    for (int i = 0; i < op.components(); ++i)
      for (std::size_t k = 0; k < grid.size(); ++k)
        state.comp[i][k] +=
            res.beta_farfield[i] * BaseProfile::eval_radius(grid.radius(k)) + res.c[i];
  }

  const DiagnosticsReport diag = diagnose(op, res);

  ojson j;
  j["schema_version"] = 1;
  j["mode"] = "solve";
  j["status"] = to_string(res.status);
  j["components"] = op.components();
  j["nodes"] = grid.size();
  j["split_radius"] = grid.split_radius;
  j["beta_farfield"] = res.beta_farfield;
  j["target_mass"] = res.target_mass;
  j["c"] = res.c;
  j["iterations"] = res.history.size();
  j["fields_are_converged"] = res.status == SolveStatus::Converged;
  if (res.status == SolveStatus::BlowUp) {
    j["blowup_component"] = res.blowup_component;
    j["blowup_node"] = res.blowup_node;
    j["blowup_location"] = grid.point(res.blowup_node);
  }
  write_json(out / "solve_summary.json", j);
  write_text(out / "residual_history.csv", history_csv(res.history, op.components()));
  write_text(out / "fields.csv", fields_csv(grid, state, op.components()));
  write_json(out / "diagnostics.json", to_json(diag));
  return 0;
}

int run_sweep(const RunConfig& cfg, const std::filesystem::path& out) {
  const int m = cfg.sweep.m;
  const int nc = cfg.sweep.components;
  if (m < 1 || (nc != 1 && nc != 2)) throw ConfigError("sweep: bad m/components");

  std::vector<std::vector<std::vector<double>>> samples;  // weight matrices
  if (!cfg.sweep.values.empty()) {
    for (double b : cfg.sweep.values) {
      if (!(b >= 0.0 && b < 1.0)) throw ConfigError("sweep: grid values must lie in [0,1)");
      samples.push_back(
          std::vector<std::vector<double>>(nc, std::vector<double>(m, b)));
    }
  } else {
    std::mt19937_64 rng(cfg.seed);
    for (int k = 0; k < cfg.sweep.samples; ++k) {
      std::vector<std::vector<double>> w(nc, std::vector<double>(m));
      for (auto& row : w)
        for (double& b : row) b = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      samples.push_back(std::move(w));
    }
  }

  // default point layout: a unit-ish circle, overridable through `problem`
  std::vector<std::vector<double>> points = cfg.problem.sources.points;
  if (static_cast<int>(points.size()) != m) {
    points.clear();
    for (int l = 0; l < m; ++l) {
      const double a = 2.0 * kPi * l / m;
      points.push_back({1.5 * std::cos(a), 1.5 * std::sin(a)});
    }
  }

  std::ostringstream os;
  os << "index";
  for (int i = 1; i <= nc; ++i)
    for (int l = 1; l <= m; ++l) os << ",b" << i << "_" << l;
  os << (nc == 2 ? ",toda_existence,barbeta_form,beta_like" : ",luo_tian");
  os << ",status";
  for (int i = 1; i <= nc; ++i) os << ",mass" << i;
  for (int i = 1; i <= nc; ++i) os << ",slope" << i;
  os << "\n";

  for (std::size_t k = 0; k < samples.size(); ++k) {
    SourceSet s;
    s.dimension = 2;
    s.points = points;
    s.weights = samples[k];
    os << k;
    for (const auto& row : samples[k])
      for (double b : row) os << "," << format_full(b);
    const ConditionReport rep = check_conditions(s);
    if (nc == 2)
      os << "," << rep.toda_existence.holds << "," << rep.barbeta_form.holds << ","
         << rep.beta_like.holds;
    else
      os << "," << rep.luo_tian.holds;

    if (cfg.sweep.run_solver) {
      ProblemSpec p;
      p.sources = s;
      const QuadratureGrid grid = build_grid(2, p.patch_centers(), cfg.grid);
      const LogKernelOperator op(grid, p);
      const SolveResult res = solve(op, cfg.iteration);
      os << "," << to_string(res.status);
      for (int i = 0; i < nc; ++i)
        os << ","
           << (res.status == SolveStatus::Converged ? format_full(component_mass(op, res, i))
                                                    : std::string("nan"));
      for (int i = 0; i < nc; ++i)
        os << ","
           << (res.status == SolveStatus::Converged
                   ? format_full(slope_fit_default(grid, res.u.comp[i]).slope)
                   : std::string("nan"));
    } else {
      os << ",-";
      for (int i = 0; i < 2 * nc; ++i) os << ",-";
    }
    os << "\n";
  }
  write_text(out / "sweep.csv", os.str());
  return 0;
}

int run_probe(const RunConfig& cfg, const std::filesystem::path& out) {
  ProbeSpec spec = cfg.probe;
  spec.grid = cfg.grid;
  spec.iteration = cfg.iteration;
  const ProbeReport rep = nonexistence_probe(spec);

  ojson j;
  j["schema_version"] = 1;
  j["mode"] = "probe";
  j["family"] = rep.family == ProbeSpec::Family::Scalar ? "scalar" : "toda";
  j["sanity_leg"] = rep.sanity_leg;
  j["epsilon"] = rep.epsilon;
  j["verdict"] = to_string(rep.verdict);
  j["notes"] = rep.notes;
  j["candidates"] = rep.candidates;
  ojson legs = ojson::array();
  for (const auto& l : rep.legs) {
    ojson lj;
    lj["s"] = l.s;
    lj["status"] = to_string(l.status);
    lj["sup_psi"] = l.sup_psi;
    lj["masses"] = l.masses;
    lj["slope_rel_error"] = l.slope_rel_error;
    legs.push_back(lj);
  }
  j["legs"] = legs;
  write_json(out / "probe_report.json", j);

  std::ostringstream tr;
  tr << "s,t,iter,theta,residual,sup_psi\n";
  for (const auto& l : rep.legs)
    for (const auto& h : l.history)
      tr << format_full(l.s) << "," << format_full(h.t) << "," << h.iter << ","
         << format_full(h.theta) << "," << format_full(h.residual) << ","
         << format_full(*std::max_element(h.sup_psi.begin(), h.sup_psi.end())) << "\n";
  write_text(out / "probe_trajectory.csv", tr.str());

  std::ostringstream sg;
  sg << "s,component,candidate,cx,cy,radius,local_mass\n";
  for (const auto& l : rep.legs)
    for (std::size_t i = 0; i < l.sigma.size(); ++i)
      for (std::size_t c = 0; c < l.sigma[i].size(); ++c)
        for (std::size_t k = 0; k < l.sigma[i][c].radius.size(); ++k)
          sg << format_full(l.s) << "," << i + 1 << "," << c << ","
             << format_full(rep.candidates[c][0]) << "," << format_full(rep.candidates[c][1])
             << "," << format_full(l.sigma[i][c].radius[k]) << ","
             << format_full(l.sigma[i][c].local_mass[k]) << "\n";
  write_text(out / "probe_sigma.csv", sg.str());
  return 0;
}

// ------------------------------------------------------- validation suite --

struct ValidateCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
};

int run_validate(const RunConfig& cfg, const std::filesystem::path& out) {
  std::vector<ValidateCheck> checks;
  auto add = [&](const std::string& name, double value, double threshold) {
    checks.push_back({name, value <= threshold, value, threshold});
  };

  // mean-value identities against numeric angular quadrature; pairs stay off
  // the diagonal, where the reference quadratures themselves lose accuracy
  {
    double worst2 = 0.0, worst3 = 0.0;
    std::mt19937_64 rng(7);
    auto rnd = [&] { return 0.02 + 3.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    int used = 0;
    while (used < 40) {
      const double r = rnd(), s = rnd();
      if (std::abs(r - s) < 0.05 * std::max(r, s)) continue;
      ++used;
      double acc = 0.0;
      const int M = 4096;
      for (int i = 0; i < M; ++i) {
        const double a = 2.0 * kPi * (i + 0.5) / M;
        acc += -0.5 * std::log(r * r + s * s - 2.0 * r * s * std::cos(a));
      }
      worst2 = std::max(worst2, std::abs(acc / M - log_kernel_angular_mean(2, r, s)));
      // Simpson on panels graded toward t = 1 handles the steepening kernel
      auto f3 = [&](double t) { return -0.25 * std::log(r * r + s * s - 2.0 * r * s * t); };
      double acc3 = 0.0;
      std::vector<double> edges{-1.0};
      for (int k = 1; k <= 8; ++k) edges.push_back(1.0 - std::pow(10.0, -k));
      edges.push_back(1.0);
      for (std::size_t pp = 0; pp + 1 < edges.size(); ++pp) {
        const double a = edges[pp], b = edges[pp + 1];
        for (int k = 0; k < 200; ++k) {
          const double x0 = a + (b - a) * k / 200.0, x1 = a + (b - a) * (k + 1) / 200.0;
          acc3 += (x1 - x0) / 6.0 * (f3(x0) + 4.0 * f3(0.5 * (x0 + x1)) + f3(x1));
        }
      }
      worst3 = std::max(worst3, std::abs(acc3 - log_kernel_angular_mean(3, r, s)));
    }
    add("log-kernel angular mean, 2d", worst2, 1e-10);
    add("log-kernel angular mean, 3d", worst3, 1e-9);
  }

  // two-point inversion identity
  {
    std::mt19937_64 rng(11);
    auto rnd = [&] { return -4.0 + 8.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      std::vector<double> x{rnd(), rnd()}, y{rnd(), rnd()};
      if (std::hypot(x[0], x[1]) < 1e-3 || std::hypot(y[0], y[1]) < 1e-3) continue;
      worst = std::max(worst, kelvin_two_point_gap(x, y));
    }
    add("kelvin two-point identity", worst, 1e-12);
  }

  // closed-form bubble: equation residual is O(h^2)
  {
    auto fd_residual = [&](double h) {
      double worst = 0.0;
      std::mt19937_64 rng(3);
      auto rnd = [&] { return -2.0 + 4.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53; };
      for (int k = 0; k < 50; ++k) {
        const std::vector<double> p{rnd(), rnd()};
        const double c = bubble_2d(p);
        const double lap =
            (bubble_2d({p[0] + h, p[1]}) + bubble_2d({p[0] - h, p[1]}) +
             bubble_2d({p[0], p[1] + h}) + bubble_2d({p[0], p[1] - h}) - 4.0 * c) /
            (h * h);
        worst = std::max(worst, std::abs(lap + std::exp(2.0 * c)));
      }
      return worst;
    };
    const double rh = fd_residual(0.1), rh2 = fd_residual(0.05);
    add("bubble fd residual ratio (>=3 maps to <=1/3)", rh2 / rh, 1.0 / 3.0);
  }

  // bubble mass on the plain grid
  const GridConfig gc = cfg.grid.refined(cfg.validate.grid_refine);
  {
    const QuadratureGrid grid = build_grid(2, {}, gc);
    std::vector<double> f(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      f[i] = std::exp(2.0 * bubble_2d(grid.point(i)));
    add("bubble quadrature mass vs 4pi", std::abs(grid.integrate(f) / (4.0 * kPi) - 1.0), 1e-4);
    std::vector<double> u(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) u[i] = bubble_2d(grid.point(i));
    const SlopeFit fit = slope_fit(grid, u, 2.0 * grid.split_radius, 3.0 * grid.split_radius, 6);
    add("bubble slope fit vs 2", std::abs(fit.slope - 2.0) / 2.0, 0.05);
  }

  // radial oracle mass quantization and closed-form profiles
  auto profile_gap = [](const RadialSolution& sol, double alpha,
                        const std::function<double(double)>& closed_max0) {
    // align scalings by matching maxima, compare on mid radii
    const double mo = sol.max_value();
    const double mc = closed_max0(0.0);
    const double lam = std::exp((mo - mc) / (1.0 + alpha));
    double worst = 0.0;
    for (double r = 0.05; r <= 50.0; r *= 1.6) {
      const double val = closed_max0(lam * r) + (1.0 + alpha) * std::log(lam);
      worst = std::max(worst, std::abs(sol.eval(r) - val));
    }
    return worst;
  };
  RadialConfig rc;
  {
    const RadialSolution s0 = radial_solve(0.0, 2, rc);
    add("radial n=2 alpha=0 mass vs 4pi",
        s0.status == SolveStatus::Converged ? std::abs(s0.mass / (4.0 * kPi) - 1.0) : 1.0, 1e-3);
    add("radial n=2 alpha=0 profile vs bubble", profile_gap(s0, 0.0, [](double r) {
          return std::log(2.0) - std::log1p(r * r);
        }),
        0.01 * (1.0 + std::abs(s0.max_value())));

    const RadialSolution s5 = radial_solve(0.5, 2, rc);
    add("radial n=2 alpha=0.5 mass vs 6pi",
        s5.status == SolveStatus::Converged ? std::abs(s5.mass / (6.0 * kPi) - 1.0) : 1.0, 1e-3);
    add("radial n=2 alpha=0.5 profile vs singular bubble", profile_gap(s5, 0.5, [](double r) {
          return std::log(3.0) - std::log1p(std::pow(r, 3.0));
        }),
        0.01 * (1.0 + std::abs(s5.max_value())));

    const RadialSolution s3 = radial_solve(0.0, 3, rc);
    add("radial n=3 alpha=0 mass vs 4pi^2",
        s3.status == SolveStatus::Converged ? std::abs(s3.mass / (4.0 * kPi * kPi) - 1.0) : 1.0,
        1e-3);
    add("radial n=3 alpha=0 profile vs closed form", profile_gap(s3, 0.0, [](double r) {
          return std::log(2.0) + std::log(2.0) / 3.0 - std::log1p(r * r);
        }),
        0.01 * (1.0 + std::abs(s3.max_value())));
  }

  // cross-validation: full-grid single-source solves against the oracle
  if (!cfg.validate.quick) {
    ProblemSpec p;
    p.sources.dimension = 2;
    p.sources.weights = {{}};
    p.origin_alpha = 0.5;
    p.farfield_exponent = 2.0 * (1.0 + 0.5);
    const QuadratureGrid grid = build_grid(2, p.patch_centers(), gc);
    const LogKernelOperator op(grid, p);
    IterationConfig it = cfg.iteration;
    // scale-invariant single-source case: stay above the dilation-mode floor
    it.tolerance = std::max(it.tolerance, 2e-4);
    const SolveResult res = solve(op, it);
    double gap = 1.0;
    if (res.status == SolveStatus::Converged) {
      const RadialSolution sol = radial_solve(0.5, 2, rc);
      double mg = -1e300;
      for (std::size_t i = 0; i < grid.size(); ++i) mg = std::max(mg, res.u.comp[0][i]);
      const double lam = std::exp((mg - sol.max_value()) / 1.5);
      gap = 0.0;
      for (std::size_t i = 0; i < grid.size(); i += 37) {
        const double r = grid.radius(i);
        if (r < 0.05 || r > 20.0) continue;
        const double uo = sol.eval(r / lam) + 1.5 * std::log(1.0 / lam);
        gap = std::max(gap, std::abs(res.u.comp[0][i] - uo));
      }
    }
    add("grid vs oracle, n=2 alpha=0.5", gap, 0.02 * (1.0 + 3.0));
  }

  ojson j;
  j["schema_version"] = 1;
  j["mode"] = "validate";
  bool all = true;
  ojson rows = ojson::array();
  std::printf("%-48s %10s %10s  %s\n", "check", "value", "threshold", "result");
  for (const auto& c : checks) {
    all = all && c.pass;
    rows.push_back(ojson{
        {"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}});
    std::printf("%-48s %10.3e %10.3e  %s\n", c.name.c_str(), c.value, c.threshold,
                c.pass ? "PASS" : "FAIL");
  }
  j["checks"] = rows;
  j["all_pass"] = all;
  write_json(out / "validation.json", j);
  return all ? 0 : 4;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config parse error at byte ") + std::to_string(e.byte) + ": " +
                      e.what());
  }
  RunConfig cfg;
  cfg.schema_version = get_or(j, "schema_version", 1);
  if (cfg.schema_version != 1) throw ConfigError("unsupported schema_version");
  cfg.mode = get_or(j, "mode", std::string{});
  if (j.contains("problem")) cfg.problem = parse_problem(j.at("problem"));
  if (j.contains("grid")) cfg.grid = parse_grid(j.at("grid"));
  if (j.contains("iteration")) cfg.iteration = parse_iteration(j.at("iteration"));
  cfg.output_dir = get_or(j, "output_dir", cfg.output_dir);
  cfg.seed = get_or(j, "seed", cfg.seed);
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    cfg.sweep.m = get_or(s, "m", cfg.sweep.m);
    cfg.sweep.components = get_or(s, "components", cfg.sweep.components);
    cfg.sweep.samples = get_or(s, "samples", cfg.sweep.samples);
    cfg.sweep.run_solver = get_or(s, "run_solver", cfg.sweep.run_solver);
    cfg.sweep.values = get_or(s, "values", cfg.sweep.values);
  }
  if (j.contains("probe")) {
    const auto& p = j.at("probe");
    const std::string fam = get_or(p, "family", std::string("scalar"));
    if (fam == "scalar")
      cfg.probe.family = ProbeSpec::Family::Scalar;
    else if (fam == "toda")
      cfg.probe.family = ProbeSpec::Family::Toda;
    else
      throw ConfigError("probe.family must be 'scalar' or 'toda'");
    cfg.probe.epsilon = get_or(p, "epsilon", cfg.probe.epsilon);
    cfg.probe.sanity_leg = get_or(p, "sanity_leg", cfg.probe.sanity_leg);
    cfg.probe.schedule = get_or(p, "schedule", cfg.probe.schedule);
  }
  if (j.contains("validate")) {
    cfg.validate.grid_refine = get_or(j.at("validate"), "grid_refine", 0);
    cfg.validate.quick = get_or(j.at("validate"), "quick", false);
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

int run(const RunConfig& cfg) {
  const std::filesystem::path out = cfg.output_dir;
  std::filesystem::create_directories(out);
  if (cfg.mode == "check") return run_check(cfg, out);
  if (cfg.mode == "solve") return run_solve(cfg, out);
  if (cfg.mode == "sweep") return run_sweep(cfg, out);
  if (cfg.mode == "probe") return run_probe(cfg, out);
  if (cfg.mode == "validate") return run_validate(cfg, out);
  throw ConfigError("mode must be one of check/solve/sweep/probe/validate");
}

}  // namespace stoda
