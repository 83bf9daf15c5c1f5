#include "agglab/run.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "agglab/acceptance.hpp"
#include "agglab/exact_constant.hpp"
#include "agglab/mass_selfsim.hpp"
#include "agglab/moment_lab.hpp"
#include "agglab/particle_sim.hpp"

#ifndef AGGLAB_VERSION
#define AGGLAB_VERSION "unknown"
#endif

namespace agglab {

using ojson = nlohmann::ordered_json;

std::string code_version() { return AGGLAB_VERSION; }

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : emit_config(cfg)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

ojson num_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson base_metadata(const RunConfig& cfg) {
  ojson m;
  m["command"] = to_string(cfg.command());
  m["config_hash"] = config_hash(cfg);
  m["code_version"] = code_version();
  return m;
}

const std::vector<std::string> kMomentColumns{"t", "alpha", "beta", "value", "stderr", "n_runs"};

ResultTable moment_table(const MomentSeries& s) {
  ResultTable t;
  t.columns = kMomentColumns;
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    for (std::size_t c = 0; c < s.keys.size(); ++c) {
      t.rows.push_back({s.t[k], s.keys[c].alpha, s.keys[c].beta, s.values[c][k],
                        s.error ? num_or_null((*s.error)[c][k]) : ojson(nullptr),
                        static_cast<std::uint64_t>(s.n_runs)});
    }
  }
  return t;
}

ResultTable run_simulate(const RunConfig& cfg, const SimulateParams& p, unsigned threads) {
  const auto s = ensemble_moments(p.sim, p.moments, threads);
  auto t = moment_table(s);
  t.metadata = base_metadata(cfg);
  t.metadata["seed"] = p.sim.seed;
  t.metadata["generator"] = generator_description();
  t.metadata["provenance"] = to_string(s.provenance);
  t.metadata["kernel"] = p.sim.kernel.tag();
  t.metadata["tolerances"] = {{"stderr", "sample standard deviation / sqrt(ensemble)"}};
  t.log.push_back("simulated " + std::to_string(p.sim.ensemble) + " runs of n0 = " +
                  std::to_string(p.sim.n0));
  return t;
}

ResultTable run_ode(const RunConfig& cfg, const OdeParams& p) {
  Gamma2State s0{p.d, p.k_d.value_or(sphere_constant(p.d)),
                 Eigen::Map<const Eigen::VectorXd>(p.moments.data(), static_cast<Eigen::Index>(p.moments.size()))};
  const auto s = integrate_gamma2(s0, p.t_end, p.dt, {p.rel_tol, p.record_stride, true});
  double worst = 0.0;
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    const auto cf = gamma2_closed_form(s0, s.t[k]);
    for (Eigen::Index j = 0; j < cf.size(); ++j)
      worst = std::max(worst, std::abs(s.values[static_cast<std::size_t>(j)][k] - cf(j)) / std::abs(cf(j)));
  }
  auto t = moment_table(s);
  t.metadata = base_metadata(cfg);
  t.metadata["seed"] = nullptr;
  t.metadata["generator"] = nullptr;
  t.metadata["provenance"] = to_string(s.provenance);
  t.metadata["k_d"] = s0.k_d;
  t.metadata["closed_form_max_rel_dev"] = worst;
  t.metadata["tolerances"] = {{"step_doubling_rel", p.rel_tol}};
  t.log.push_back("closed-form max relative deviation " + format_number(worst));
  return t;
}

ResultTable run_exact(const RunConfig& cfg, const ExactParams& p) {
  const auto sol = TransformSolution::exponential_gaussian(p.number, p.rate, p.sigma);
  ResultTable t;
  t.columns = {"t", "zeta", "xi", "F_re", "F_im", "rescaled", "psi_infty", "bernoulli_residual"};
  for (double time : p.t)
    for (double z : p.zeta)
      for (double x : p.xi) {
        const cplx F = F_exact(sol, time, z, x);
        const double resc = (time * F_exact(sol, time, z / time, x / std::sqrt(time))).real();
        t.rows.push_back({time, z, x, F.real(), F.imag(), resc, psi_infty(sol, z, x),
                          bernoulli_residual(sol, time, z, x, p.h)});
      }
  t.metadata = base_metadata(cfg);
  t.metadata["seed"] = nullptr;
  t.metadata["generator"] = nullptr;
  t.metadata["H0"] = sol.H0;
  t.metadata["A"] = sol.A;
  t.metadata["B"] = sol.B;
  t.metadata["limit_moments"] = {{"mu_00", limit_profile_moments(sol, 0, 0)},
                                 {"mu_10", limit_profile_moments(sol, 1, 0)},
                                 {"mu_02", limit_profile_moments(sol, 0, 2)}};
  for (auto [name, w] : {std::pair{"profile_transform_width", ProfileWidth::Transform},
                         std::pair{"profile_displayed_width", ProfileWidth::Displayed}}) {
    const auto c = profile_coefficients(sol, w);
    t.metadata[name] = {{"C", c.C}, {"a", c.a}, {"D", c.D}};
  }
  t.metadata["tolerances"] = {{"finite_difference_step", p.h}};
  return t;
}

ResultTable run_lift(const RunConfig& cfg, const LiftParams& p) {
  auto spec = LiftSpec::quadratic(p.scale);
  spec.theta = p.theta;
  const auto F = constant_kernel_solution();
  ResultTable t;
  t.columns = {"t", "k", "P_k"};
  ojson slopes = ojson::array();
  bool ok = true;
  std::vector<PkScaling> fits;
  for (double k : p.k) fits.push_back(pk_scaling_check(F, spec, k, p.t_grid));
  for (std::size_t i = 0; i < fits.size(); ++i) {
    const auto& f = fits[i];
    const bool pass = std::abs(f.slope - f.expected) < 0.05;
    ok = ok && pass;
    slopes.push_back({{"k", p.k[i]}, {"slope", f.slope}, {"expected", f.expected}, {"pass", pass}});
    t.log.push_back("k = " + format_number(p.k[i]) + ": slope " + format_number(f.slope) +
                    ", expected " + format_number(f.expected) + (pass ? "" : "  FAIL"));
  }
  for (std::size_t j = 0; j < p.t_grid.size(); ++j)
    for (std::size_t i = 0; i < fits.size(); ++i) t.rows.push_back({p.t_grid[j], p.k[i], fits[i].P[j]});

  std::vector<Vec3> etas;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b) etas.emplace_back(a, b, 0.5 * (a - b));
  t.metadata = base_metadata(cfg);
  t.metadata["seed"] = nullptr;
  t.metadata["generator"] = nullptr;
  t.metadata["mass_solution"] = F.name;
  t.metadata["slopes"] = slopes;
  t.metadata["factorization_residual"] = factorization_check(spec, 2.0, 0.7, etas);
  t.metadata["tolerances"] = {{"slope_abs", 0.05}};
  t.status = ok ? 0 : 1;
  return t;
}

ResultTable run_verify(const RunConfig& cfg, const VerifyParams& p, unsigned threads) {
  AcceptanceOptions opts;
  opts.threads = threads;
  opts.seed = p.seed;
  opts.inject_k1 = p.inject_k1;
  const auto ids = p.criteria.empty() ? criterion_ids() : p.criteria;
  ResultTable t;
  t.columns = {"criterion", "title", "status", "tolerance", "detail"};
  ojson tol;
  for (const auto& id : ids) {
    const auto r = run_criterion(id, opts);
    t.rows.push_back({r.id, r.title, r.pass ? "PASS" : "FAIL", r.tolerance, r.detail});
    tol[r.id] = r.tolerance;
    t.log.push_back(format_result(r));
    if (!r.pass) {
      t.status = 1;
      t.log.push_back("FAILED: " + r.id + " (" + r.title + ")");
    }
  }
  t.metadata = base_metadata(cfg);
  t.metadata["seed"] = p.seed;
  t.metadata["generator"] = generator_description();
  if (p.inject_k1) t.metadata["inject_k1"] = *p.inject_k1;
  t.metadata["tolerances"] = tol;
  return t;
}

std::string csv_cell(const ojson& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  const std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

ResultTable run(const RunConfig& cfg, unsigned threads) {
  return std::visit(
      [&](const auto& p) -> ResultTable {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, SimulateParams>) return run_simulate(cfg, p, threads);
        if constexpr (std::is_same_v<P, OdeParams>) return run_ode(cfg, p);
        if constexpr (std::is_same_v<P, ExactParams>) return run_exact(cfg, p);
        if constexpr (std::is_same_v<P, LiftParams>) return run_lift(cfg, p);
        if constexpr (std::is_same_v<P, VerifyParams>) return run_verify(cfg, p, threads);
      },
      cfg.params);
}

std::string to_csv(const ResultTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
    out += "\n";
  }
  return out;
}

std::string to_json(const ResultTable& table) {
  ojson j;
  j["metadata"] = table.metadata;
  j["columns"] = table.columns;
  j["rows"] = table.rows;
  return j.dump(2) + "\n";
}

}  // namespace agglab
