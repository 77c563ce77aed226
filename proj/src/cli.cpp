#include "plap/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "plap/error.hpp"
#include "plap/format.hpp"
#include "plap/prufer.hpp"
#include "plap/ptrig.hpp"
#include "plap/secular.hpp"
#include "plap/variation.hpp"
#include "plap/verify.hpp"
#include "plap/wells.hpp"

namespace plap::cli {

using nlohmann::json;

namespace {

struct Common {
  double p = 2.0;
  std::string format = "json";
  double tol = 0.0;  // 0 keeps the solver defaults
  std::uint64_t seed = 42;
  std::string out;

  SolverOptions solver() const {
    SolverOptions o;
    if (tol > 0.0) {
      o.ode_tol = tol;
      o.phase_tol = 10.0 * tol;
    }
    return o;
  }
};

// What a command hands back for printing.
struct Result {
  json inputs = json::object();
  json results = json::object();
  json residuals = json::object();
  std::string csv;
  bool passed = true;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--p", c.p, "exponent, 1 < p <= 64")->capture_default_str();
  sub->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sub->add_option("--tol", c.tol, "integrator tolerance (eigenvalue target is 10x)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--seed", c.seed, "seed of random profiles and batteries")
      ->capture_default_str();
  sub->add_option("--out", c.out, "write output to this file instead of stdout");
}

std::string csv_line(std::initializer_list<std::string> cells) {
  std::string s;
  for (const auto& c : cells) {
    if (!s.empty()) s += ',';
    s += c;
  }
  return s + '\n';
}

std::string g(double x) { return format_g17(x); }

double number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw DomainError("bad number for " + what + ": '" + text + "'");
}

// ---- trig ----

struct TrigArgs {
  std::string fn = "sinp";
  std::vector<double> xs;
};

Result trig(const Common& c, const TrigArgs& a) {
  const PExponent p(c.p);
  Result r;
  r.inputs = {{"fn", a.fn}, {"x", a.xs}};
  json values = json::array();
  json defects = json::array();
  r.csv = "x,value\n";
  for (double x : a.xs) {
    double v = 0.0;
    std::optional<double> defect;
    if (a.fn == "sinp" || a.fn == "cosp") {
      const TrigValue t = sin_p(p, x);
      v = a.fn == "sinp" ? t.s : t.c;
      defect = std::abs(std::pow(std::abs(t.s), c.p) + std::pow(std::abs(t.c), c.p) - 1.0);
    } else if (a.fn == "tanp") {
      v = tan_p(p, x);
    } else if (a.fn == "cotp") {
      v = cot_p(p, x);
    } else if (a.fn == "asinp") {
      v = asin_p(p, x);
      defect = std::abs(sin_p(p, v).s - x);
    } else if (a.fn == "sinhp" || a.fn == "coshp") {
      const HyperbolicValue h = sinh_p(p, x);
      v = a.fn == "sinhp" ? h.sh : h.dsh;
      const double big = std::pow(h.dsh, c.p);
      defect = std::abs(big - std::pow(h.sh, c.p) - 1.0) / std::max(1.0, big);
    } else {
      v = tanh_p(p, x);
    }
    values.push_back(v);
    defects.push_back(defect ? json(*defect) : json(nullptr));
    r.csv += csv_line({g(x), g(v)});
  }
  r.results = {{"pi_hat", p.pi_hat()}, {"values", values}};
  // Pythagorean identity for sinp/cosp, its hyperbolic form (relative) for sinhp/coshp,
  // and sin_p(asin_p(w)) - w for asinp.
  r.residuals = {{"identity_defect", defects}};
  return r;
}

// ---- eig ----

struct EigArgs {
  std::string q = "const:0";
  std::string rho = "const:1";
  int n = 3;
  bool eigenfunctions = false;
};

Result eig(const Common& c, const EigArgs& a) {
  const PExponent p(c.p);
  const Profile q = parse_profile(a.q, p, Role::potential, c.seed);
  const Profile rho = parse_profile(a.rho, p, Role::density, c.seed + 1);
  const PruferSolver solver(q, rho, c.solver());
  Result r;
  r.inputs = {{"q", q.to_json()}, {"rho", rho.to_json()}, {"n", a.n}};
  json lambdas = json::array(), phase = json::array(), norm = json::array(),
       endpoint = json::array(), zeros = json::array(), fns = json::array();
  r.csv = "n,lambda,phase_residual,norm_residual,endpoint_residual,zeros\n";
  for (const EigenPair& e : solver.spectrum(a.n)) {
    const double ph = std::abs(solver.terminal_phase(e.lambda) - e.n * p.pi_hat());
    lambdas.push_back(e.lambda);
    phase.push_back(ph);
    norm.push_back(e.norm_residual);
    endpoint.push_back(e.endpoint_residual);
    zeros.push_back(e.interior_zeros());
    if (a.eigenfunctions) fns.push_back({{"n", e.n}, {"x", e.xs}, {"y", e.ys}});
    r.csv += csv_line({std::to_string(e.n), g(e.lambda), g(ph), g(e.norm_residual),
                       g(e.endpoint_residual), std::to_string(e.interior_zeros().size())});
  }
  r.results = {{"eigenvalues", lambdas}, {"interior_zeros", zeros}};
  if (a.eigenfunctions) r.results["eigenfunctions"] = fns;
  r.residuals = {{"terminal_phase", phase}, {"normalization", norm}, {"endpoint", endpoint}};
  return r;
}

// ---- secular ----

struct SecularArgs {
  std::string kind = "gap";
  double m = 1.0;
  bool shoot = false;
};

Result secular(const Common& c, const SecularArgs& a) {
  const PExponent p(c.p);
  const SecularCase kind = parse_secular_case(a.kind);
  const SecularRoots s = kind == SecularCase::gap ? gap_roots(p, a.m) : ratio_roots(p, a.m);
  Result r;
  r.inputs = {{"case", a.kind}, {"m", a.m}, {"shoot", a.shoot}};
  r.results = {{"roots", s.roots},
               {"eigenvalues", s.eigenvalues},
               {"brackets", s.brackets},
               {"gap", s.gap()},
               {"ratio", s.ratio()}};
  r.residuals = {{"match", s.residuals}};
  if (a.shoot) r.residuals["shooting_relative"] = cross_validate(p, kind, a.m, c.solver());
  r.csv = "n,root,eigenvalue,residual\n";
  for (int i = 0; i < 2; ++i) {
    r.csv += csv_line({std::to_string(i + 1), g(s.roots[i]), g(s.eigenvalues[i]),
                       g(s.residuals[i])});
  }
  return r;
}

// ---- gap-sweep / ratio-sweep / verify share the battery report ----

void from_report(Result& r, BatteryReport report) {
  report.runtime_ms = 0.0;
  json j = report.to_json();
  j.erase("runtime_ms");  // the envelope carries the wall time
  r.results = j;
  r.residuals = {{"min_margin", report.min_margin}};
  r.csv = report.to_csv();
  r.passed = report.passed();
}

struct SweepArgs {
  int grid = 64;
  std::optional<double> m_lo;
  std::optional<double> m_hi;
};

Result sweep(const Common& c, SecularCase kind, const SweepArgs& a) {
  const PExponent p(c.p);
  const double lo = a.m_lo.value_or(kind == SecularCase::gap ? 1e-4 : 1.0 + 1e-6);
  const double hi = a.m_hi.value_or(kind == SecularCase::gap ? 2.0 * std::pow(3.0, c.p) : 10.0);
  Result r;
  r.inputs = {{"grid", a.grid}, {"m_lo", lo}, {"m_hi", hi}};
  // monotonicity_scan takes the ratio range as m - 1 at the lower end.
  const double scan_lo = kind == SecularCase::gap ? lo : lo - 1.0;
  if (kind == SecularCase::ratio && !(scan_lo > 0.0)) throw DomainError("ratio sweep needs m_lo > 1");
  from_report(r, monotonicity_scan(p, kind, a.grid, scan_lo, hi));
  return r;
}

struct VerifyArgs {
  std::string suite = "gap";
  int samples = 200;
  int cells = 8;
  double q_lo = 0.0, q_hi = 10.0, rho_lo = 0.25, rho_hi = 4.0;
  int homotopy = 20;
  bool no_intersections = false;
};

Result verify(const Common& c, const VerifyArgs& a) {
  const PExponent p(c.p);
  BatteryOptions o;
  o.samples = a.samples;
  o.seed = c.seed;
  o.max_cells = a.cells;
  o.q_lo = a.q_lo;
  o.q_hi = a.q_hi;
  o.rho_lo = a.rho_lo;
  o.rho_hi = a.rho_hi;
  o.homotopy_samples = a.homotopy;
  o.intersections = !a.no_intersections;
  o.solver = c.solver();
  Result r;
  r.inputs = {{"suite", a.suite}, {"samples", a.samples}, {"seed", c.seed},
              {"cells", a.cells}, {"q", {a.q_lo, a.q_hi}}, {"rho", {a.rho_lo, a.rho_hi}},
              {"homotopy_samples", a.homotopy}, {"intersections", o.intersections}};
  from_report(r, a.suite == "gap" ? check_gap_bound(p, o) : check_ratio_bound(p, a.suite, o));
  return r;
}

// ---- derivative ----

struct DerivativeArgs {
  std::string kind = "eigen";
  std::optional<std::string> q, dq, rho, drho;
  double t = 0.0;
  int n = 1;
  double h = 1e-5;
  double check_tol = 1e-4;
};

Result derivative(const Common& c, const DerivativeArgs& a) {
  const PExponent p(c.p);
  const SolverOptions so = c.solver();
  const bool explicit_family = a.q || a.dq || a.rho || a.drho;
  if (a.kind != "eigen" && !explicit_family) {
    throw DomainError("gap and ratio derivatives need an explicit family (--q/--dq/--rho/--drho)");
  }
  Result r;
  std::optional<CoefficientFamily> fam;
  if (explicit_family) {
    const double span = std::max(1.0, 2.0 * a.h);
    fam.emplace(parse_profile(a.q.value_or("const:0"), p, Role::potential, c.seed),
                parse_profile(a.dq.value_or("const:0"), p, Role::potential, c.seed + 1),
                parse_profile(a.rho.value_or("const:1"), p, Role::density, c.seed + 2),
                parse_profile(a.drho.value_or("const:0"), p, Role::potential, c.seed + 3),
                a.t - span, a.t + span);
  } else {
    fam.emplace(random_affine_family(p, c.seed));
  }
  r.inputs = {{"kind", a.kind},
              {"t", a.t},
              {"n", a.n},
              {"h", a.h},
              {"family",
               {{"q", fam->base_q().to_json()},
                {"dq", fam->dir_q().to_json()},
                {"rho", fam->base_rho().to_json()},
                {"drho", fam->dir_rho().to_json()},
                {"t_range", {fam->t_lo(), fam->t_hi()}}}}};
  double analytic = 0.0, fd = 0.0;
  if (a.kind == "eigen") {
    const DerivativeCheck d = check_eigenvalue_derivative(*fam, a.t, a.n, a.h, so);
    analytic = d.analytic;
    fd = d.finite_difference;
    r.results["lambda"] = fam->solver_at(a.t, so).eigenvalue(a.n);
  } else {
    // Pair (n + 1, n): the gap lambda_{n+1} - lambda_n or the ratio lambda_{n+1} / lambda_n.
    const auto pair_at = [&](double t) {
      const PruferSolver s = fam->solver_at(t, so);
      return std::array<double, 2>{s.eigenvalue(a.n), s.eigenvalue(a.n + 1)};
    };
    const auto up = pair_at(a.t + a.h), down = pair_at(a.t - a.h), mid = pair_at(a.t);
    if (a.kind == "gap") {
      analytic = gap_derivative(p, *fam, a.t, a.n + 1, a.n, so);
      fd = ((up[1] - up[0]) - (down[1] - down[0])) / (2.0 * a.h);
      r.results["value"] = mid[1] - mid[0];
    } else {
      analytic = ratio_derivative(p, *fam, a.t, a.n + 1, a.n, so);
      fd = (up[1] / up[0] - down[1] / down[0]) / (2.0 * a.h);
      r.results["value"] = mid[1] / mid[0];
    }
  }
  // Relative to |fd|, floored at 1 so that vanishing derivatives compare absolutely.
  const double error = std::abs(analytic - fd) / std::max(std::abs(fd), 1.0);
  r.results["analytic"] = analytic;
  r.results["finite_difference"] = fd;
  r.residuals = {{"difference", error}, {"bound", a.check_tol}};
  r.passed = error <= a.check_tol;
  r.csv = "kind,n,t,analytic,finite_difference,difference\n" +
          csv_line({a.kind, std::to_string(a.n), g(a.t), g(analytic), g(fd), g(error)});
  return r;
}

// ---- counterexample ----

struct CounterexampleArgs {
  std::string kind = "gap";
  double margin = 1e-3;
};

Result counterexample(const Common& c, const CounterexampleArgs& a) {
  const PExponent p(c.p);
  const SolverOptions so = c.solver();
  const Counterexample ce = a.kind == "gap" ? find_gap_counterexample(p, a.margin, so)
                                            : find_ratio_counterexample(p, a.margin, so);
  // Independent recomputation from the returned profile.
  const bool gap = a.kind == "gap";
  const PruferSolver s = gap ? PruferSolver(ce.profile, Profile::constant(p, Role::density, 1.0), so)
                             : PruferSolver(Profile::constant(p, Role::potential, 0.0), ce.profile, so);
  const double l1 = s.eigenvalue(1), l2 = s.eigenvalue(2);
  const double recomputed = gap ? l2 - l1 : l2 / l1;
  Result r;
  r.inputs = {{"kind", a.kind}, {"margin", a.margin}};
  r.results = {{"a", ce.a},         {"t", ce.t},
               {"value", ce.value}, {"bound", ce.bound},
               {"shortfall", ce.bound - ce.value},
               {"lambda1", l1},     {"lambda2", l2},
               {"profile", ce.profile.to_json()}};
  r.residuals = {{"recomputed_value", std::abs(recomputed - ce.value)}};
  r.csv = "kind,a,t,value,bound\n" + csv_line({a.kind, g(ce.a), g(ce.t), g(ce.value), g(ce.bound)});
  return r;
}

int fail(std::ostream& err, int code, const std::string& what) {
  err << "error: " << what << '\n';
  return code;
}

}  // namespace

Profile parse_profile(const std::string& literal, const PExponent& p, Role role,
                      std::uint64_t seed) {
  const auto colon = literal.find(':');
  if (colon == std::string::npos) throw DomainError("profile literal needs a kind: '" + literal + "'");
  const std::string kind = literal.substr(0, colon);
  const std::string body = literal.substr(colon + 1);
  if (kind == "const") return Profile::constant(p, role, number(body, "const"));
  if (kind == "step") {
    // step:<v1>,<v2>[@<split>]; the split defaults to pi_hat/2.
    const auto at = body.find('@');
    const std::string levels = body.substr(0, at);
    const auto comma = levels.find(',');
    if (comma == std::string::npos) throw DomainError("step literal needs two levels");
    const double split =
        at == std::string::npos ? 0.5 * p.pi_hat() : number(body.substr(at + 1), "step split");
    return step_profile(p, number(levels.substr(0, comma), "step level"),
                        number(levels.substr(comma + 1), "step level"), split, role);
  }
  if (kind == "file") {
    std::ifstream in(body);
    if (!in) throw DomainError("cannot read profile file '" + body + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw DomainError("profile file '" + body + "' is not JSON: " + e.what());
    }
    Profile f = Profile::from_json(j);
    if (f.exponent().value() != p.value()) {
      throw DomainError("profile file '" + body + "' was written for p = " +
                        format_g17(f.exponent().value()));
    }
    if (f.role() != role) throw DomainError("profile file '" + body + "' has role " + to_string(f.role()));
    return f;
  }
  if (kind == "randwell") {
    // randwell:a=<a>,lo=<lo>,hi=<hi>,cells=<k>; a defaults to pi_hat/2.
    std::map<std::string, double> kv{{"a", 0.5 * p.pi_hat()}};
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      const std::string key = item.substr(0, eq);
      if (eq == std::string::npos || (key != "a" && key != "lo" && key != "hi" && key != "cells")) {
        throw DomainError("bad randwell field '" + item + "'");
      }
      kv[key] = number(item.substr(eq + 1), "randwell " + key);
    }
    for (const char* key : {"lo", "hi", "cells"}) {
      if (!kv.count(key)) throw DomainError(std::string("randwell needs ") + key + "=");
    }
    const double cells = kv["cells"];
    if (cells != std::floor(cells) || cells < 1) throw DomainError("randwell cells must be a positive integer");
    return random_single_well(p, kv["a"], kv["lo"], kv["hi"], static_cast<int>(cells), seed, role);
  }
  throw DomainError("unknown profile kind '" + kind + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dirichlet eigenproblems of the one-dimensional p-Laplacian", "plap"};
  app.require_subcommand(1);
  app.footer(
      "Profile literals: const:<v> | step:<v1>,<v2>[@<split>] | file:<path> |\n"
      "  randwell:[a=<a>,]lo=<lo>,hi=<hi>,cells=<k>\n"
      "randwell draws floor(k/2) cells left of a and the rest right of it, cut points uniform\n"
      "on each side and levels uniform in [lo, hi], sorted to descend to a and ascend after it.\n"
      "It is seeded by --seed. Exit codes: 0 ok, 1 check failed, 2 usage, 3 numerical failure.");

  Common common;
  std::function<Result()> action;

  TrigArgs ta;
  auto* t = app.add_subcommand("trig", "generalized trigonometric functions");
  add_common(t, common);
  t->add_option("--fn", ta.fn)
      ->check(CLI::IsMember({"sinp", "cosp", "tanp", "cotp", "asinp", "sinhp", "coshp", "tanhp"}))
      ->capture_default_str();
  t->add_option("--x", ta.xs, "arguments")->required();
  t->callback([&] { action = [&] { return trig(common, ta); }; });

  EigArgs ea;
  auto* e = app.add_subcommand("eig", "first n eigenpairs by shooting");
  add_common(e, common);
  e->add_option("--q", ea.q, "potential literal")->capture_default_str();
  e->add_option("--rho", ea.rho, "density literal")->capture_default_str();
  e->add_option("--n", ea.n, "number of eigenvalues")->check(CLI::PositiveNumber)->capture_default_str();
  e->add_flag("--eigenfunctions", ea.eigenfunctions, "include sampled eigenfunctions");
  e->callback([&] { action = [&] { return eig(common, ea); }; });

  SecularArgs sa;
  auto* s = app.add_subcommand("secular", "roots of the two-step secular equations");
  add_common(s, common);
  s->add_option("--case", sa.kind)->check(CLI::IsMember({"gap", "ratio"}))->capture_default_str();
  s->add_option("--m", sa.m, "step height (gap) or length ratio (ratio)")->required();
  s->add_flag("--shoot", sa.shoot, "compare with the shooting solver");
  s->callback([&] { action = [&] { return secular(common, sa); }; });

  SweepArgs ga, ra;
  for (auto [name, args, kind] :
       {std::tuple{"gap-sweep", &ga, SecularCase::gap}, std::tuple{"ratio-sweep", &ra, SecularCase::ratio}}) {
    auto* w = app.add_subcommand(name, kind == SecularCase::gap
                                           ? "gap of the step problem over m, with limits"
                                           : "ratio of the step problem over m in (1, m_hi]");
    add_common(w, common);
    w->add_option("--grid", args->grid, "grid points")->capture_default_str();
    w->add_option("--m-lo", args->m_lo, "smallest m");
    w->add_option("--m-hi", args->m_hi, "largest m");
    w->callback([&, args, kind] { action = [&, args, kind] { return sweep(common, kind, *args); }; });
  }

  DerivativeArgs da;
  auto* d = app.add_subcommand("derivative", "eigenvalue derivative along an affine family");
  add_common(d, common);
  d->add_option("--kind", da.kind)->check(CLI::IsMember({"eigen", "gap", "ratio"}))->capture_default_str();
  d->add_option("--q", da.q, "base potential literal");
  d->add_option("--dq", da.dq, "potential direction literal");
  d->add_option("--rho", da.rho, "base density literal");
  d->add_option("--drho", da.drho, "density direction literal");
  d->add_option("--t", da.t)->capture_default_str();
  d->add_option("--n", da.n, "eigenvalue index (gap and ratio use n and n+1)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  d->add_option("--step", da.h, "difference step h")->check(CLI::PositiveNumber)->capture_default_str();
  d->add_option("--check-tol", da.check_tol)->capture_default_str();
  d->footer("Without --q/--dq/--rho/--drho the eigen kind uses a random family (seeded)\n"
            "with q increasing and rho decreasing in t.");
  d->callback([&] { action = [&] { return derivative(common, da); }; });

  VerifyArgs va;
  auto* v = app.add_subcommand("verify", "randomized battery for the gap and ratio bounds");
  add_common(v, common);
  v->add_option("--suite", va.suite)
      ->check(CLI::IsMember({"gap", "barrier", "symmetric_well", "symmetric_barrier"}))
      ->capture_default_str();
  v->add_option("--samples", va.samples)->check(CLI::PositiveNumber)->capture_default_str();
  v->add_option("--cells", va.cells, "largest number of cells")->capture_default_str();
  v->add_option("--q-lo", va.q_lo)->capture_default_str();
  v->add_option("--q-hi", va.q_hi)->capture_default_str();
  v->add_option("--rho-lo", va.rho_lo)->capture_default_str();
  v->add_option("--rho-hi", va.rho_hi)->capture_default_str();
  v->add_option("--homotopy-samples", va.homotopy)->capture_default_str();
  v->add_flag("--no-intersections", va.no_intersections, "skip the crossing count");
  v->callback([&] { action = [&] { return verify(common, va); }; });

  CounterexampleArgs ca;
  auto* x = app.add_subcommand("counterexample", "step profile below the bound off the midpoint");
  add_common(x, common);
  x->add_option("--kind", ca.kind)->check(CLI::IsMember({"gap", "ratio"}))->capture_default_str();
  x->add_option("--margin", ca.margin)->capture_default_str();
  x->callback([&] { action = [&] { return counterexample(common, ca); }; });

  // CLI11 consumes arguments from the back.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& h) {
    return app.exit(h, out, err);
  } catch (const CLI::CallForAllHelp& h) {
    return app.exit(h, out, err);
  } catch (const CLI::ParseError& pe) {
    err << "error: " << pe.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return usage;
  }

  const auto start = std::chrono::steady_clock::now();
  Result r;
  try {
    r = action();
  } catch (const SearchFailure& ex) {
    return fail(err, assertion, ex.what());
  } catch (const InconsistencyError& ex) {
    return fail(err, assertion, ex.what());
  } catch (const DomainError& ex) {
    return fail(err, usage, ex.what());
  } catch (const ContractError& ex) {
    return fail(err, usage, ex.what());
  } catch (const Error& ex) {  // NumericalError, BracketError, PoleError, IndexMismatchError
    return fail(err, numerical, ex.what());
  }
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  std::string text;
  if (common.format == "csv") {
    text = r.csv;
  } else {
    const std::string command = app.get_subcommands().front()->get_name();
    json env = {{"command", command},      {"p", common.p},
                {"inputs", r.inputs},      {"results", r.results},
                {"residuals", r.residuals}, {"runtime_ms", ms}};
    if (common.tol > 0.0) env["inputs"]["tol"] = common.tol;
    text = dump_json(env) + "\n";
  }
  if (common.out.empty()) {
    out << text;
  } else {
    std::ofstream f(common.out);
    if (!f || !(f << text)) return fail(err, usage, "cannot write '" + common.out + "'");
  }
  if (!r.passed) err << "check failed\n";
  return r.passed ? ok : assertion;
}

}  // namespace plap::cli
