#include "plap/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "plap/error.hpp"
#include "plap/format.hpp"
#include "plap/random.hpp"
#include "plap/variation.hpp"
#include "plap/wells.hpp"

namespace plap {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Runs f(0..n-1) on up to hardware_concurrency threads; the first exception is rethrown.
template <class F>
void parallel_for(std::size_t n, F f) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::string sample_id(const char* prefix, std::size_t i) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s-%04zu", prefix, i);
  return buf;
}

// Everything one sample contributes to a report.
struct Partial {
  std::vector<SampleRow> rows;
  std::vector<Violation> violations;
  std::vector<std::string> warnings;
  std::map<std::string, double> maxima;

  void note_max(const std::string& key, double v) {
    auto [it, fresh] = maxima.emplace(key, v);
    if (!fresh) it->second = std::max(it->second, v);
  }
};

void merge(BatteryReport& report, std::vector<Partial>& parts) {
  for (auto& part : parts) {
    for (auto& r : part.rows) report.rows.push_back(std::move(r));
    for (auto& v : part.violations) report.violations.push_back(std::move(v));
    for (auto& w : part.warnings) report.warnings.push_back(std::move(w));
    for (const auto& [key, v] : part.maxima) {
      auto [it, fresh] = report.summary.emplace(key, v);
      if (!fresh) it->second = std::max(it->second, v);
    }
  }
}

int draw_cells(std::uint64_t seed, int min_cells, int max_cells) {
  if (max_cells < min_cells) throw DomainError("batteries need max_cells >= " + std::to_string(min_cells));
  Rng rng(derive_seed(seed, 0));
  return min_cells + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_cells - min_cells + 1)));
}

// Eigenpairs 1 and 2 of a solver, intersection pattern included when asked.
struct FirstTwo {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  int crossings = -1;
  IntersectionPattern pattern;
};

FirstTwo first_two(const PruferSolver& solver, bool intersections) {
  FirstTwo out;
  out.lambda1 = solver.eigenvalue(1);
  out.lambda2 = solver.eigenvalue(2);
  if (intersections) {
    const EigenPair y1 = solver.eigenfunction(out.lambda1, 1);
    const EigenPair y2 = solver.eigenfunction(out.lambda2, 2);
    out.pattern = intersection_pattern(solver, y1, y2);
    out.crossings = static_cast<int>(out.pattern.crossings.size());
  }
  return out;
}

void record_pattern(Partial& part, const std::string& id, const FirstTwo& e, double len,
                    bool symmetric, double symmetry_tol) {
  if (e.crossings < 0) return;
  part.note_max("max_crossings", e.crossings);
  if (e.crossings > 2) part.violations.push_back({id, "intersections", double(e.crossings), 2.0});
  for (double x : e.pattern.contacts) {
    part.warnings.push_back(id + ": degenerate contact of |y1| and |y2| near x = " +
                            format_g17(x));
  }
  if (symmetric && e.crossings == 2) {
    const double defect = std::abs(e.pattern.crossings[0] + e.pattern.crossings[1] - len);
    part.note_max("max_symmetry_defect", defect);
    if (defect > symmetry_tol) part.violations.push_back({id, "symmetry", defect, symmetry_tol});
  }
}

void numerical_failure(Partial& part, const std::string& id, const std::exception& e) {
  part.violations.push_back({id, "numerical_failure", 0.0, 0.0});
  part.warnings.push_back(id + ": " + e.what());
}

}  // namespace

IntersectionPattern intersection_pattern(const PruferSolver& solver, const EigenPair& y1,
                                         const EigenPair& y2, double xtol) {
  if (y1.n != 1 || y2.n != 2) throw ContractError("intersection pattern needs indices 1 and 2");
  const double p = solver.exponent().value();
  const double len = solver.exponent().pi_hat();

  std::vector<double> grid(y1.xs);
  grid.insert(grid.end(), y2.xs.begin(), y2.xs.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  auto value = [&](const EigenPair& e, double x) {
    const auto it = std::lower_bound(e.xs.begin(), e.xs.end(), x);
    if (it != e.xs.end() && *it == x) return e.ys[static_cast<std::size_t>(it - e.xs.begin())];
    return solver.state_at(e, x)[0];
  };
  auto g = [&](double x) {
    return std::pow(std::abs(value(y2, x)), p) - std::pow(std::abs(value(y1, x)), p);
  };

  std::vector<double> xs;
  std::vector<double> gs;
  double scale = 0.0;
  for (double x : grid) {
    if (x <= 0.0 || x >= len) continue;
    xs.push_back(x);
    gs.push_back(g(x));
    scale = std::max(scale, std::abs(gs.back()));
  }

  IntersectionPattern out;
  const double contact_tol = 1e-9 * scale;
  for (std::size_t i = 0; i + 1 < gs.size(); ++i) {
    const double ga = gs[i];
    const double gb = gs[i + 1];
    if (ga == 0.0) continue;  // handled as the right end of the previous interval
    if (gb == 0.0) {
      if (i + 2 < gs.size() && (gs[i + 2] > 0.0) != (ga > 0.0)) out.crossings.push_back(xs[i + 1]);
      continue;
    }
    if ((ga > 0.0) != (gb > 0.0)) {
      double a = xs[i];
      double b = xs[i + 1];
      double fa = ga;
      while (b - a > xtol) {
        const double mid = 0.5 * (a + b);
        const double fm = g(mid);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if ((fm > 0.0) == (fa > 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      out.crossings.push_back(0.5 * (a + b));
    } else if (i > 0 && std::abs(ga) <= contact_tol && std::abs(ga) <= std::abs(gs[i - 1]) &&
               std::abs(ga) <= std::abs(gb) && (gs[i - 1] > 0.0) == (ga > 0.0)) {
      out.contacts.push_back(xs[i]);
    }
  }
  return out;
}

void BatteryReport::finish() {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SampleRow& a, const SampleRow& b) { return a.id < b.id; });
  std::stable_sort(violations.begin(), violations.end(), [](const Violation& a, const Violation& b) {
    return a.id != b.id ? a.id < b.id : a.kind < b.kind;
  });
  std::sort(warnings.begin(), warnings.end());
  min_margin = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) min_margin = std::min(min_margin, r.margin);
  if (rows.empty()) min_margin = 0.0;
}

nlohmann::json BatteryReport::to_json() const {
  nlohmann::json rows_j = nlohmann::json::array();
  for (const auto& r : rows) {
    rows_j.push_back({{"id", r.id},
                      {"seed", r.seed},
                      {"hash", r.hash},
                      {"lambda1", r.lambda1},
                      {"lambda2", r.lambda2},
                      {"value", r.value},
                      {"margin", r.margin},
                      {"crossings", r.crossings}});
  }
  nlohmann::json viol = nlohmann::json::array();
  for (const auto& v : violations) {
    viol.push_back({{"id", v.id}, {"kind", v.kind}, {"measured", v.measured}, {"bound", v.bound}});
  }
  nlohmann::json summ = nlohmann::json::object();
  for (const auto& [k, v] : summary) summ[k] = v;
  return {{"suite", suite},     {"p", p},
          {"samples", samples}, {"seed", seed},
          {"gating", gating},   {"passed", passed()},
          {"min_margin", min_margin},
          {"violations", viol}, {"warnings", warnings},
          {"summary", summ},    {"rows", rows_j},
          {"runtime_ms", runtime_ms}};
}

std::string BatteryReport::to_csv() const {
  std::ostringstream os;
  os << "id,seed,hash,lambda1,lambda2,value,margin,crossings\n";
  for (const auto& r : rows) {
    os << r.id << ',' << r.seed << ',' << r.hash << ',' << format_g17(r.lambda1) << ','
       << format_g17(r.lambda2) << ',' << format_g17(r.value) << ',' << format_g17(r.margin) << ','
       << r.crossings << '\n';
  }
  return os.str();
}

BatteryReport check_gap_bound(const PExponent& p, const BatteryOptions& opt) {
  if (opt.samples < 1) throw DomainError("battery needs samples >= 1");
  const auto t0 = Clock::now();
  const double len = p.pi_hat();
  const double bound = std::pow(2.0, p.value()) - 1.0;
  const Profile one = Profile::constant(p, Role::density, 1.0);

  BatteryReport report;
  report.suite = "gap";
  report.p = p.value();
  report.samples = opt.samples;
  report.seed = opt.seed;

  const std::vector<double> levels{opt.q_lo, 0.5 * (opt.q_lo + opt.q_hi), opt.q_hi};
  const std::size_t n_random = static_cast<std::size_t>(opt.samples);
  std::vector<Partial> parts(n_random + levels.size());

  parallel_for(parts.size(), [&](std::size_t k) {
    Partial& part = parts[k];
    const bool constant = k >= n_random;
    const std::string id =
        constant ? sample_id("const", k - n_random) : sample_id("well", k);
    const std::uint64_t seed = constant ? 0 : derive_seed(opt.seed, k);
    try {
      const Profile q = constant ? Profile::constant(p, Role::potential, levels[k - n_random])
                                 : random_single_well(p, 0.5 * len, opt.q_lo, opt.q_hi,
                                                      draw_cells(seed, 2, opt.max_cells), seed);
      const PruferSolver solver(q, one, opt.solver);
      const FirstTwo e = first_two(solver, opt.intersections);
      const double gap = e.lambda2 - e.lambda1;
      const double margin = gap - bound;
      part.rows.push_back({id, seed, q.hash(), e.lambda1, e.lambda2, gap, margin, e.crossings});
      if (margin < -opt.bound_tol) part.violations.push_back({id, "bound", gap, bound});
      if (constant) {
        part.note_max("max_equality_error", std::abs(margin));
        if (std::abs(margin) > opt.equality_tol)
          part.violations.push_back({id, "equality", gap, bound});
      } else if (std::abs(margin) <= opt.equality_tol && !q.is_constant()) {
        part.violations.push_back({id, "equality_nonconstant", gap, bound});
      }
      record_pattern(part, id, e, len, false, opt.symmetry_tol);
    } catch (const Error& err) {
      numerical_failure(part, id, err);
    }
  });
  merge(report, parts);
  report.finish();
  report.runtime_ms = elapsed_ms(t0);
  return report;
}

BatteryReport check_ratio_bound(const PExponent& p, const std::string& suite,
                                const BatteryOptions& opt) {
  if (opt.samples < 1) throw DomainError("battery needs samples >= 1");
  const bool barrier = suite == "barrier";
  const bool sym_well = suite == "symmetric_well";
  const bool sym_barrier = suite == "symmetric_barrier";
  if (!barrier && !sym_well && !sym_barrier)
    throw DomainError("unknown ratio suite '" + suite + "'");
  const auto t0 = Clock::now();
  const double len = p.pi_hat();
  const double bound = std::pow(2.0, p.value());
  const Profile zero = Profile::constant(p, Role::potential, 0.0);

  BatteryReport report;
  report.suite = "ratio_" + suite;
  report.p = p.value();
  report.samples = opt.samples;
  report.seed = opt.seed;
  report.gating = !sym_barrier;

  const std::vector<double> levels{opt.rho_lo, 1.0, opt.rho_hi};
  const std::size_t n_random = static_cast<std::size_t>(opt.samples);
  std::vector<Partial> parts(n_random + levels.size());
  const char* prefix = barrier ? "barrier" : sym_well ? "symwell" : "symbarrier";

  parallel_for(parts.size(), [&](std::size_t k) {
    Partial& part = parts[k];
    const bool constant = k >= n_random;
    const std::string id = constant ? sample_id("const", k - n_random) : sample_id(prefix, k);
    const std::uint64_t seed = constant ? 0 : derive_seed(opt.seed, k);
    try {
      Profile rho = Profile::constant(p, Role::density, constant ? levels[k - n_random] : 1.0);
      if (!constant) {
        // A two-cell well about the midpoint symmetrizes to a constant; symmetric suites
        // start at four cells so every sample keeps some shape.
        const int cells = draw_cells(seed, barrier ? 2 : 4, opt.max_cells);
        const double mid = 0.5 * len;
        if (barrier) {
          rho = random_single_barrier(p, mid, opt.rho_lo, opt.rho_hi, cells, seed, Role::density);
        } else if (sym_well) {
          rho = symmetrize(
              random_single_well(p, mid, opt.rho_lo, opt.rho_hi, cells, seed, Role::density));
        } else {
          rho = symmetrize(
              random_single_barrier(p, mid, opt.rho_lo, opt.rho_hi, cells, seed, Role::density));
        }
      }
      const PruferSolver solver(zero, rho, opt.solver);
      const FirstTwo e = first_two(solver, opt.intersections);
      const double ratio = e.lambda2 / e.lambda1;
      // Upper bound for symmetric wells, lower bound otherwise.
      const double margin = sym_well ? bound - ratio : ratio - bound;
      part.rows.push_back({id, seed, rho.hash(), e.lambda1, e.lambda2, ratio, margin, e.crossings});
      if (margin < -opt.bound_tol) part.violations.push_back({id, "bound", ratio, bound});
      if (constant) {
        part.note_max("max_equality_error", std::abs(margin));
        if (std::abs(margin) > opt.equality_tol)
          part.violations.push_back({id, "equality", ratio, bound});
      } else if (std::abs(margin) <= opt.equality_tol && !rho.is_constant()) {
        part.violations.push_back({id, "equality_nonconstant", ratio, bound});
      }
      record_pattern(part, id, e, len, sym_well || sym_barrier || constant, opt.symmetry_tol);

      if (sym_well && !constant && k < static_cast<std::size_t>(opt.homotopy_samples)) {
        for (int j = 1; j <= 8; ++j) {
          const double t = j / 9.0;
          const HomotopyIntegrals h = homotopy_integrals(rho, opt.homotopy_eps, t, opt.solver);
          const double defect = std::abs(h.normalization_defect(opt.homotopy_eps));
          part.note_max("max_homotopy_derivative", h.ratio_derivative);
          part.note_max("max_identity_defect", defect);
          const std::string hid = id + "/t" + std::to_string(j);
          if (h.ratio_derivative > opt.derivative_tol)
            part.violations.push_back({hid, "homotopy_derivative", h.ratio_derivative,
                                       opt.derivative_tol});
          if (defect > opt.identity_tol)
            part.violations.push_back({hid, "normalization_identity", defect, opt.identity_tol});
        }
      }
    } catch (const Error& err) {
      numerical_failure(part, id, err);
    }
  });
  merge(report, parts);
  if (sym_well) {
    report.summary["homotopy_samples"] =
        std::min<double>(opt.homotopy_samples, static_cast<double>(opt.samples));
  }
  report.finish();
  report.runtime_ms = elapsed_ms(t0);
  return report;
}

namespace {

// Shared grid search of the two counterexample families.
Counterexample search(const PExponent& p, bool gap, double margin, SolverOptions options) {
  const double len = p.pi_hat();
  const double pv = p.value();
  const double bound = gap ? std::pow(2.0, pv) - 1.0 : std::pow(2.0, pv);
  std::vector<double> offsets;
  for (int k = 1; k <= 6; ++k) offsets.push_back(0.05 * k);
  std::vector<double> ts;
  for (int k = 1; k <= 8; ++k) ts.push_back(gap ? 0.25 * k : 1.0 + 0.25 * k);

  const Profile zero = Profile::constant(p, Role::potential, 0.0);
  const Profile one = Profile::constant(p, Role::density, 1.0);
  std::vector<double> values(offsets.size() * ts.size());
  parallel_for(values.size(), [&](std::size_t k) {
    const double a = gap ? 0.5 * len + offsets[k / ts.size()] : 0.5 * len - offsets[k / ts.size()];
    const double t = ts[k % ts.size()];
    if (gap) {
      const PruferSolver s(step_profile(p, t, 0.0, a), one, options);
      values[k] = s.eigenvalue(2) - s.eigenvalue(1);
    } else {
      const PruferSolver s(zero, step_profile(p, t, 1.0, a, Role::density), options);
      values[k] = s.eigenvalue(2) / s.eigenvalue(1);
    }
  });
  const std::size_t best =
      static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  if (!(values[best] < bound - margin)) {
    throw SearchFailure(std::string(gap ? "gap" : "ratio") +
                        " counterexample search exhausted its grid; best value " +
                        format_g17(values[best]) + " vs bound " + format_g17(bound));
  }
  const double a = gap ? 0.5 * len + offsets[best / ts.size()] : 0.5 * len - offsets[best / ts.size()];
  const double t = ts[best % ts.size()];
  Profile prof = gap ? step_profile(p, t, 0.0, a) : step_profile(p, t, 1.0, a, Role::density);
  return {a, t, values[best], bound, std::move(prof)};
}

}  // namespace

Counterexample find_gap_counterexample(const PExponent& p, double margin, SolverOptions options) {
  return search(p, true, margin, options);
}

Counterexample find_ratio_counterexample(const PExponent& p, double margin,
                                         SolverOptions options) {
  return search(p, false, margin, options);
}

BatteryReport monotonicity_scan(const PExponent& p, SecularCase kind, int grid, double m_lo,
                                double m_hi, double slack) {
  if (grid < 2) throw DomainError("monotonicity scan needs grid >= 2");
  const bool gap = kind == SecularCase::gap;
  if (gap && !(m_lo > 0.0 && m_hi > m_lo)) throw DomainError("gap scan needs 0 < m_lo < m_hi");
  if (!gap && !(m_lo > 0.0 && m_hi > 1.0 + m_lo))
    throw DomainError("ratio scan needs 0 < m_lo < m_hi - 1");
  const auto t0 = Clock::now();
  const double pv = p.value();
  const double limit = gap ? std::pow(2.0, pv) - 1.0 : 2.0;

  BatteryReport report;
  report.suite = gap ? "monotonicity_gap" : "monotonicity_ratio";
  report.p = pv;
  report.samples = grid;

  // Log-spaced in m (gap) or in m - 1 (ratio).
  const double lo = m_lo;
  const double hi = gap ? m_hi : m_hi - 1.0;
  std::vector<double> ms(static_cast<std::size_t>(grid));
  for (int k = 0; k < grid; ++k) {
    const double u = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * k / (grid - 1));
    ms[static_cast<std::size_t>(k)] = gap ? u : 1.0 + u;
  }
  ms.back() = m_hi;

  std::vector<SecularRoots> roots(ms.size());
  parallel_for(ms.size(), [&](std::size_t k) {
    roots[k] = gap ? gap_roots(p, ms[k]) : ratio_roots(p, ms[k]);
  });

  const double threshold_m = std::pow(3.0, pv) - 1.0;
  const double threshold_value = std::pow(3.0, pv) - std::pow(2.0, pv);
  double prev = limit;
  double min_excess = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ms.size(); ++k) {
    const std::string id = sample_id("m", k);
    const double v = gap ? roots[k].gap() : roots[k].roots[1] / roots[k].roots[0];
    const double inc = v - prev;
    report.rows.push_back({id, 0, 0, roots[k].eigenvalues[0], roots[k].eigenvalues[1], v, inc, -1});
    if (k == 0) {
      report.summary["m_first"] = ms[k];
      report.summary["limit_error"] = std::abs(v - limit);
      if (!gap && !(v > 2.0)) report.violations.push_back({id, "not_above_two", v, 2.0});
    }
    if (inc < -slack) report.violations.push_back({id, "decrease", v, prev});
    if (!gap && !(v > 2.0)) report.violations.push_back({id, "not_above_two", v, 2.0});
    if (gap && ms[k] >= threshold_m) {
      min_excess = std::min(min_excess, v - threshold_value);
      if (v < threshold_value - slack)
        report.violations.push_back({id, "large_m_bound", v, threshold_value});
    }
    prev = v;
  }
  if (gap && std::isfinite(min_excess)) report.summary["large_m_min_excess"] = min_excess;
  report.summary["limit"] = limit;
  report.summary["value_first"] = report.rows.front().value;
  report.summary["value_last"] = report.rows.back().value;

  // f_char on its first two pole-free cells: (-(2)^p, 2^p) and (2^p, 4^p).
  const double c1 = std::pow(2.0, pv);
  const double c2 = std::pow(4.0, pv);
  int fchecked = 0;
  for (const auto& [a, b] : {std::pair{-c1, c1}, std::pair{c1, c2}}) {
    double last = std::numeric_limits<double>::infinity();
    const int n = 256;
    for (int i = 1; i < n; ++i) {
      const double t = a + (b - a) * i / n;
      const double f = f_char(p, t);
      if (!(f < last)) {
        report.violations.push_back({"f_char", "not_decreasing", f, last});
        break;
      }
      last = f;
      ++fchecked;
    }
  }
  report.summary["f_char_points"] = fchecked;
  report.finish();
  report.runtime_ms = elapsed_ms(t0);
  return report;
}

double cross_validate(const PExponent& p, SecularCase kind, double m, SolverOptions options) {
  const SecularRoots roots = kind == SecularCase::gap ? gap_roots(p, m) : ratio_roots(p, m);
  const auto [q, rho] = step_coefficients(p, kind, m);
  const PruferSolver solver(q, rho, options);
  double worst = 0.0;
  for (int n = 1; n <= 2; ++n) {
    const double shoot = solver.eigenvalue(n);
    const double sec = roots.eigenvalues[static_cast<std::size_t>(n - 1)];
    worst = std::max(worst, std::abs(shoot - sec) / std::max(std::abs(sec), 1e-300));
  }
  if (worst > 1e-6) {
    throw InconsistencyError("secular and shooting eigenvalues disagree: relative " +
                             format_g17(worst));
  }
  return worst;
}

}  // namespace plap
