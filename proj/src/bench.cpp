#include "patchloc/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "patchloc/baselines.hpp"
#include "patchloc/geometry.hpp"

namespace patchloc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr int kMaxRejectionAttempts = 10000;

Vec3 random_displacement(DeterministicRng& rng, int dim, double radius_cap) {
  const double r = rng.uniform(0.0, radius_cap);
  if (dim == 2) {
    const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return {r * std::cos(theta), r * std::sin(theta), 0.0};
  }
  const double t1 = rng.uniform(0.0, std::numbers::pi);
  const double t2 = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return {r * std::sin(t1) * std::cos(t2), r * std::sin(t1) * std::sin(t2),
          r * std::cos(t1)};
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::Patch:
      return "patch";
    case Method::Walk:
      return "walk";
    case Method::AuxGrid:
      return "auxgrid";
    default:
      return "brute";
  }
}

Method method_from_name(const std::string& name) {
  if (name == "patch") return Method::Patch;
  if (name == "walk") return Method::Walk;
  if (name == "auxgrid") return Method::AuxGrid;
  if (name == "brute") return Method::Brute;
  throw Error("unknown method: " + name);
}

ExperimentOutput run_experiment(const MeshTopology& mesh, const WalkConfig& config) {
  if (config.particles < 1 || config.steps < 1 || config.delta <= 0.0) {
    throw Error("run_experiment: particles, steps and delta must be positive");
  }
  ExperimentOutput out;
  const auto n = config.particles;

  // Canonical infrastructure shared by every method: trajectories are driven
  // by the candidate-grid hosts so one seed yields one trajectory stream no
  // matter which method is being timed.
  const CandidateListGrid clg = build_candidate_grid(mesh);
  const double tol = clg.tol;
  std::vector<double> h_k(mesh.n_elements());
  for (std::int32_t k = 0; k < mesh.n_elements(); ++k) {
    h_k[k] = element_circumdiameter(mesh, k);
  }

  MethodTiming timing;
  timing.method = method_name(config.method);
  timing.delta = config.delta;

  LocatorIndex index;
  CandidateListGrid timed_clg;
  if (config.method == Method::Patch) {
    BuildConfig bc;
    bc.patch_radius_override = config.patch_radius_override;
    bc.padding = config.padding;
    bc.parallel = config.parallel;
    bc.seed = config.seed;
    const auto t0 = Clock::now();
    index = build_index(mesh, bc);
    timing.init_seconds = seconds_since(t0);
  } else if (config.method == Method::AuxGrid) {
    const auto t0 = Clock::now();
    timed_clg = build_candidate_grid(mesh);
    timing.init_seconds = seconds_since(t0);
  }

  out.report.dim = mesh.dim;
  out.report.n_elements = mesh.n_elements();
  if (config.method == Method::Patch) {
    out.report.mesh_size = index.metrics.mesh_size;
    out.report.grid_spacing = index.grid.spacing;
    out.report.active_cells = index.stats.active_cells;
  } else {
    out.report.mesh_size = *std::max_element(h_k.begin(), h_k.end());
  }

  DeterministicRng rng(config.seed);
  const Box bounds = mesh.bounds();

  // Initial particles: uniform rejection sampling against the oracle.
  std::vector<Vec3> pos(n);
  std::vector<std::int32_t> host(n);
  for (std::int64_t i = 0; i < n; ++i) {
    int attempts = 0;
    while (true) {
      if (++attempts > kMaxRejectionAttempts) {
        throw Error("run_experiment: rejection sampling failed for initial point " +
                    std::to_string(i));
      }
      Vec3 p{rng.uniform(bounds.lo.x, bounds.hi.x), rng.uniform(bounds.lo.y, bounds.hi.y),
             mesh.dim == 3 ? rng.uniform(bounds.lo.z, bounds.hi.z) : 0.0};
      const LocateOutcome hit = aux_grid_locate(p, clg);
      if (hit.inside()) {
        pos[i] = p;
        host[i] = hit.element;
        break;
      }
    }
  }

  std::vector<Vec3> next(n);
  std::vector<std::int32_t> next_host(n);
  std::vector<LocateOutcome> located(n);
  const std::int64_t check_count = std::max<std::int64_t>(1, n / 100);

  for (int step = 0; step < config.steps; ++step) {
    // Displacements (untimed): bounded by delta * h_K of the current host,
    // re-drawn until the particle stays inside the domain.
    for (std::int64_t i = 0; i < n; ++i) {
      const double cap = config.delta * h_k[host[i]];
      int attempts = 0;
      while (true) {
        if (++attempts > kMaxRejectionAttempts) {
          throw Error("run_experiment: rejection sampling failed for particle " +
                      std::to_string(i) + " at step " + std::to_string(step));
        }
        const Vec3 v = random_displacement(rng, mesh.dim, cap);
        const Vec3 p = pos[i] + v;
        const LocateOutcome hit = aux_grid_locate(p, clg);
        if (hit.inside()) {
          next[i] = p;
          next_host[i] = hit.element;
          if (cap > 0.0) {
            out.max_step_ratio = std::max(out.max_step_ratio, v.norm() / cap);
          }
          break;
        }
      }
    }

    // Timed relocation with the configured method. Repeats re-run the same
    // batch and keep the fastest wall time; outcomes come from the first run.
    double best = std::numeric_limits<double>::max();
    for (int rep = 0; rep < std::max(1, config.timing_repeats); ++rep) {
      const auto t0 = Clock::now();
      switch (config.method) {
        case Method::Patch: {
          auto res = locate_batch(next, index, config.parallel);
          const double dt = seconds_since(t0);
          if (rep == 0) located = std::move(res);
          best = std::min(best, dt);
          break;
        }
        case Method::AuxGrid: {
          std::vector<LocateOutcome> res(n);
          for (std::int64_t i = 0; i < n; ++i) {
            res[i] = aux_grid_locate(next[i], timed_clg);
          }
          const double dt = seconds_since(t0);
          if (rep == 0) located = std::move(res);
          best = std::min(best, dt);
          break;
        }
        case Method::Brute: {
          std::vector<LocateOutcome> res(n);
          for (std::int64_t i = 0; i < n; ++i) {
            res[i] = brute_force_locate(next[i], mesh, tol);
          }
          const double dt = seconds_since(t0);
          if (rep == 0) located = std::move(res);
          best = std::min(best, dt);
          break;
        }
        case Method::Walk: {
          std::vector<LocateOutcome> res(n);
          for (std::int64_t i = 0; i < n; ++i) {
            res[i] = neighbour_walk_locate(host[i], pos[i], next[i], mesh);
          }
          const double dt = seconds_since(t0);
          if (rep == 0) located = std::move(res);
          best = std::min(best, dt);
          break;
        }
      }
    }
    timing.per_step_seconds.push_back(best);

    // Oracle cross-check on a deterministic random subsample.
    for (std::int64_t c = 0; c < check_count; ++c) {
      const auto i = static_cast<std::int64_t>(rng.next() % static_cast<std::uint64_t>(n));
      ++timing.checks_total;
      const bool contained =
          located[i].inside() &&
          element_contains(mesh, located[i].element, next[i], tol) != Containment::Outside;
      const LocateOutcome oracle = brute_force_locate(next[i], mesh, tol);
      if (contained && oracle.inside()) {
        ++timing.checks_passed;
      } else {
        std::ostringstream what;
        what << "run_experiment: cross-check failed at step " << step << ", particle " << i
             << ", p=(" << next[i].x << ',' << next[i].y << ',' << next[i].z << "), method "
             << timing.method << " returned " << located[i].element << ", oracle "
             << oracle.element;
        throw Error(what.str());
      }
    }

    std::vector<std::int32_t> row(n);
    for (std::int64_t i = 0; i < n; ++i) row[i] = located[i].element;
    out.outcomes.push_back(std::move(row));

    pos.swap(next);
    host.swap(next_host);
  }

  timing.locate_seconds = 0.0;
  for (double s : timing.per_step_seconds) timing.locate_seconds += s;
  out.report.entries.push_back(std::move(timing));
  return out;
}

namespace {

nlohmann::json to_json(const BenchReport& report) {
  nlohmann::json j;
  j["dim"] = report.dim;
  j["n_elements"] = report.n_elements;
  j["mesh_size"] = report.mesh_size;
  j["grid_spacing"] = report.grid_spacing;
  j["active_cells"] = report.active_cells;
  j["entries"] = nlohmann::json::array();
  for (const MethodTiming& e : report.entries) {
    nlohmann::json je;
    je["method"] = e.method;
    je["delta"] = e.delta;
    je["init_seconds"] = e.init_seconds;
    je["locate_seconds"] = e.locate_seconds;
    je["per_step_seconds"] = e.per_step_seconds;
    je["checks_passed"] = e.checks_passed;
    je["checks_total"] = e.checks_total;
    j["entries"].push_back(std::move(je));
  }
  return j;
}

}  // namespace

std::string emit_report(const BenchReport& report, ReportFormat format) {
  std::ostringstream out;
  switch (format) {
    case ReportFormat::Csv: {
      out << "method,delta,init_s,locate_s,n_e,h,s,checks_passed\n";
      out.precision(9);
      for (const MethodTiming& e : report.entries) {
        out << e.method << ',' << e.delta << ',' << e.init_seconds << ','
            << e.locate_seconds << ',' << report.n_elements << ',' << report.mesh_size
            << ',' << report.grid_spacing << ',' << e.checks_passed << '\n';
      }
      return out.str();
    }
    case ReportFormat::Json:
      return to_json(report).dump(2);
    case ReportFormat::Table: {
      // One row per method, one locate column per delta.
      std::set<double> deltas;
      std::map<std::string, std::map<double, const MethodTiming*>> rows;
      std::map<std::string, double> init;
      std::vector<std::string> order;
      for (const MethodTiming& e : report.entries) {
        deltas.insert(e.delta);
        if (rows.find(e.method) == rows.end()) order.push_back(e.method);
        rows[e.method][e.delta] = &e;
        init[e.method] = e.init_seconds;
      }
      out << std::left << std::setw(10) << "method" << std::right << std::setw(14)
          << "init";
      for (double d : deltas) {
        std::ostringstream col;
        col << "delta=" << d;
        out << std::setw(14) << col.str();
      }
      out << '\n';
      out << std::fixed << std::setprecision(6);
      for (const std::string& m : order) {
        out << std::left << std::setw(10) << m << std::right << std::setw(14) << init[m];
        for (double d : deltas) {
          auto it = rows[m].find(d);
          if (it == rows[m].end()) {
            out << std::setw(14) << "-";
          } else {
            out << std::setw(14) << it->second->locate_seconds;
          }
        }
        out << '\n';
      }
      return out.str();
    }
  }
  throw Error("emit_report: unknown format");
}

BenchReport report_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  BenchReport report;
  report.dim = j.at("dim").get<int>();
  report.n_elements = j.at("n_elements").get<std::int64_t>();
  report.mesh_size = j.at("mesh_size").get<double>();
  report.grid_spacing = j.at("grid_spacing").get<double>();
  report.active_cells = j.at("active_cells").get<std::int64_t>();
  for (const auto& je : j.at("entries")) {
    MethodTiming e;
    e.method = je.at("method").get<std::string>();
    e.delta = je.at("delta").get<double>();
    e.init_seconds = je.at("init_seconds").get<double>();
    e.locate_seconds = je.at("locate_seconds").get<double>();
    e.per_step_seconds = je.at("per_step_seconds").get<std::vector<double>>();
    e.checks_passed = je.at("checks_passed").get<std::int64_t>();
    e.checks_total = je.at("checks_total").get<std::int64_t>();
    report.entries.push_back(std::move(e));
  }
  return report;
}

}  // namespace patchloc
