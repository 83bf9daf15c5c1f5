#include "agglab/config.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "agglab/acceptance.hpp"
#include "agglab/mass_selfsim.hpp"

namespace agglab {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string to_string(Command c) {
  switch (c) {
    case Command::Simulate: return "simulate";
    case Command::Ode: return "ode";
    case Command::Exact: return "exact";
    case Command::Lift: return "lift";
    case Command::Verify: return "verify";
  }
  return "?";
}

std::optional<Command> command_from_string(std::string_view s) {
  for (auto c : {Command::Simulate, Command::Ode, Command::Exact, Command::Lift, Command::Verify})
    if (to_string(c) == s) return c;
  return std::nullopt;
}

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : "; ") + s;
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error("invalid config: " + join(errors)), errors_(std::move(errors)) {}

namespace {

// DOM builder that also records keys repeated within one object.
class StrictSax : public nlohmann::detail::json_sax_dom_parser<json> {
 public:
  using Base = nlohmann::detail::json_sax_dom_parser<json>;
  explicit StrictSax(json& root) : Base(root, false) {}

  bool start_object(std::size_t n) {
    keys_.emplace_back();
    return Base::start_object(n);
  }
  bool key(string_t& k) {
    if (!keys_.back().insert(k).second) duplicates.push_back(k);
    return Base::key(k);
  }
  bool end_object() {
    keys_.pop_back();
    return Base::end_object();
  }
  template <typename Exception>
  bool parse_error(std::size_t pos, const std::string& tok, const Exception& ex) {
    syntax = ex.what();
    return Base::parse_error(pos, tok, ex);
  }

  std::vector<std::string> duplicates;
  std::string syntax;

 private:
  std::vector<std::set<std::string>> keys_;
};

class Reader {
 public:
  std::vector<std::string> errs;

  void fail(const std::string& path, const std::string& msg) { errs.push_back(path + ": " + msg); }

  // False (and an error) unless j is an object whose keys are all allowed.
  bool object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
      fail(path, "expected an object");
      return false;
    }
    for (const auto& [k, _] : j.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || k == a;
      if (!ok) fail(path, "unknown key '" + k + "'");
    }
    return true;
  }

  const json* at(const json& o, const std::string& path, const char* key, bool required) {
    auto it = o.find(key);
    if (it == o.end()) {
      if (required) fail(path, "missing required key '" + std::string(key) + "'");
      return nullptr;
    }
    return &*it;
  }

  bool number(const json& o, const std::string& path, const char* key, double& out, bool required = false) {
    const json* v = at(o, path, key, required);
    if (!v) return false;
    if (!v->is_number()) {
      fail(path + "." + key, "expected a number");
      return false;
    }
    out = v->get<double>();
    if (!std::isfinite(out)) {
      fail(path + "." + key, "must be finite");
      return false;
    }
    return true;
  }

  bool count(const json& o, const std::string& path, const char* key, std::uint64_t& out, bool required = false) {
    const json* v = at(o, path, key, required);
    if (!v) return false;
    if (v->is_number_unsigned()) {
      out = v->get<std::uint64_t>();
      return true;
    }
    if (v->is_number_integer() && v->get<std::int64_t>() >= 0) {
      out = static_cast<std::uint64_t>(v->get<std::int64_t>());
      return true;
    }
    if (v->is_number_float()) {
      const double d = v->get<double>();
      if (d >= 0 && d < 9.007199254740992e15 && d == std::floor(d)) {
        out = static_cast<std::uint64_t>(d);
        return true;
      }
    }
    fail(path + "." + key, "expected a non-negative integer");
    return false;
  }

  bool boolean(const json& o, const std::string& path, const char* key, bool& out) {
    const json* v = at(o, path, key, false);
    if (!v) return false;
    if (!v->is_boolean()) {
      fail(path + "." + key, "expected true or false");
      return false;
    }
    out = v->get<bool>();
    return true;
  }

  bool string(const json& o, const std::string& path, const char* key, std::string& out, bool required = false) {
    const json* v = at(o, path, key, required);
    if (!v) return false;
    if (!v->is_string()) {
      fail(path + "." + key, "expected a string");
      return false;
    }
    out = v->get<std::string>();
    return true;
  }

  bool numbers(const json& v, const std::string& path, std::vector<double>& out) {
    if (!v.is_array()) {
      fail(path, "expected an array of numbers");
      return false;
    }
    std::vector<double> r;
    for (const auto& x : v) {
      if (!x.is_number() || !std::isfinite(x.get<double>())) {
        fail(path, "expected an array of finite numbers");
        return false;
      }
      r.push_back(x.get<double>());
    }
    out = std::move(r);
    return true;
  }

  bool numbers(const json& o, const std::string& path, const char* key, std::vector<double>& out,
               bool required = false) {
    const json* v = at(o, path, key, required);
    return v && numbers(*v, path + "." + key, out);
  }

  void range(bool ok, const std::string& path, const std::string& msg) {
    if (!ok) fail(path, msg);
  }
};

bool increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return true;
}

std::optional<KernelSpec> read_kernel(Reader& r, const json& j, const std::string& path) {
  if (!j.is_object()) {
    r.fail(path, "expected an object");
    return std::nullopt;
  }
  std::string type;
  if (!r.string(j, path, "type", type, true)) return std::nullopt;
  if (type == "constant" || type == "hard_sphere" || type == "manev") {
    r.object(j, path, {"type"});
    if (type == "constant") return KernelSpec::constant();
    if (type == "hard_sphere") return KernelSpec::hard_sphere();
    return KernelSpec::manev();
  }
  if (type == "impulsion_power") {
    r.object(j, path, {"type", "gamma"});
    double g = 0;
    if (!r.number(j, path, "gamma", g, true)) return std::nullopt;
    if (!(g >= 0.0 && g <= 2.0)) {
      r.fail(path + ".gamma", "gamma = " + std::to_string(g) + " is outside [0, 2]");
      return std::nullopt;
    }
    return KernelSpec::impulsion_power(g);
  }
  if (type == "mass_only") {
    r.object(j, path, {"type", "form", "bound"});
    std::string form;
    double bound = 0;
    const bool ok = r.string(j, path, "form", form, true) & r.number(j, path, "bound", bound, true);
    if (!ok) return std::nullopt;
    if (form != "constant" && form != "sum" && form != "product") {
      r.fail(path + ".form", "expected one of constant, sum, product");
      return std::nullopt;
    }
    if (!(bound > 0.0)) {
      r.fail(path + ".bound", "must be positive");
      return std::nullopt;
    }
    return KernelSpec::mass_only(mass_form_from_string(form), bound);
  }
  r.fail(path + ".type", "unknown kernel '" + type + "'");
  return std::nullopt;
}

void read_init(Reader& r, const json& j, const std::string& path, InitialCondition& init) {
  if (!r.object(j, path, {"mass", "momentum", "symmetrize"})) return;
  r.boolean(j, path, "symmetrize", init.symmetrize);

  if (const json* m = r.at(j, path, "mass", false)) {
    const std::string p = path + ".mass";
    std::string law;
    if (m->is_object() && r.string(*m, p, "law", law, true)) {
      if (law == "monodisperse") {
        r.object(*m, p, {"law", "m0"});
        Monodisperse md;
        r.number(*m, p, "m0", md.m0);
        r.range(md.m0 > 0.0, p + ".m0", "must be positive");
        init.mass = md;
      } else if (law == "exponential") {
        r.object(*m, p, {"law", "rate"});
        ExponentialMass ex;
        r.number(*m, p, "rate", ex.rate);
        r.range(ex.rate > 0.0, p + ".rate", "must be positive");
        init.mass = ex;
      } else {
        r.fail(p + ".law", "expected monodisperse or exponential");
      }
    } else if (!m->is_object()) {
      r.fail(p, "expected an object");
    }
  }

  if (const json* m = r.at(j, path, "momentum", false)) {
    const std::string p = path + ".momentum";
    std::string law;
    if (m->is_object() && r.string(*m, p, "law", law, true)) {
      if (law == "gaussian") {
        r.object(*m, p, {"law", "sigma"});
        GaussianIsotropic g;
        r.number(*m, p, "sigma", g.sigma);
        r.range(g.sigma >= 0.0, p + ".sigma", "must be non-negative");
        init.momentum = g;
      } else if (law == "samples") {
        r.object(*m, p, {"law", "samples"});
        SymmetrizedSamples s;
        if (const json* list = r.at(*m, p, "samples", true)) {
          if (!list->is_array() || list->empty()) {
            r.fail(p + ".samples", "expected a non-empty array of impulsion vectors");
          } else {
            for (const auto& v : *list) {
              std::vector<double> x;
              if (!r.numbers(v, p + ".samples", x)) break;
              s.samples.push_back(std::move(x));
            }
          }
        }
        init.momentum = s;
      } else {
        r.fail(p + ".law", "expected gaussian or samples");
      }
    } else if (!m->is_object()) {
      r.fail(p, "expected an object");
    }
  }
}

SimulateParams read_simulate(Reader& r, const json& j, const std::string& path) {
  SimulateParams out;
  if (!r.object(j, path, {"kernel", "n0", "d", "t_grid", "init", "ensemble", "seed", "moments"}))
    return out;
  const std::size_t before = r.errs.size();
  auto& s = out.sim;
  if (const json* k = r.at(j, path, "kernel", true)) {
    if (auto spec = read_kernel(r, *k, path + ".kernel")) {
      if (spec->is<ManevKernel>())
        r.fail(path + ".kernel", "the manev kernel has no finite majorant and cannot be simulated");
      s.kernel = *spec;
    }
  }
  std::uint64_t n = 0;
  if (r.count(j, path, "n0", n)) {
    s.n0 = n;
    r.range(n >= 2, path + ".n0", "n0 = " + std::to_string(n) + " must be at least 2");
  }
  if (r.count(j, path, "d", n)) {
    s.d = static_cast<int>(std::min<std::uint64_t>(n, 1000));
    r.range(n >= 1 && n <= 3, path + ".d", "must be 1, 2 or 3");
  }
  if (r.numbers(j, path, "t_grid", s.t_grid, true)) {
    r.range(!s.t_grid.empty(), path + ".t_grid", "must not be empty");
    r.range(s.t_grid.empty() || s.t_grid.front() >= 0.0, path + ".t_grid", "times must be >= 0");
    r.range(increasing(s.t_grid), path + ".t_grid", "must be strictly increasing");
  }
  if (const json* i = r.at(j, path, "init", false)) read_init(r, *i, path + ".init", s.init);
  if (r.count(j, path, "ensemble", n)) {
    s.ensemble = n;
    r.range(n >= 1, path + ".ensemble", "must be at least 1");
  }
  r.count(j, path, "seed", s.seed);
  if (const json* m = r.at(j, path, "moments", false)) {
    if (!m->is_array() || m->empty()) {
      r.fail(path + ".moments", "expected a non-empty array of [alpha, beta] pairs");
    } else {
      out.moments.clear();
      for (const auto& pr : *m) {
        std::vector<double> ab;
        if (!r.numbers(pr, path + ".moments", ab)) break;
        if (ab.size() != 2) {
          r.fail(path + ".moments", "each entry must be [alpha, beta]");
          break;
        }
        out.moments.push_back({ab[0], ab[1]});
      }
    }
  }
  if (r.errs.size() == before) {
    try {
      s.validate();
    } catch (const std::exception& e) {
      r.fail(path, e.what());
    }
  }
  return out;
}

OdeParams read_ode(Reader& r, const json& j, const std::string& path) {
  OdeParams out;
  if (!r.object(j, path, {"d", "k_d", "moments", "t_end", "dt", "record_stride", "rel_tol"})) return out;
  std::uint64_t n = 0;
  if (r.count(j, path, "d", n)) {
    out.d = static_cast<int>(std::min<std::uint64_t>(n, 1000));
    r.range(n >= 1 && n <= 3, path + ".d", "must be 1, 2 or 3");
  }
  double k = 0;
  if (r.number(j, path, "k_d", k)) {
    out.k_d = k;
    r.range(k > 0.0, path + ".k_d", "must be positive");
  }
  if (r.numbers(j, path, "moments", out.moments, true)) {
    r.range(out.moments.size() >= 2, path + ".moments", "need at least M0 and M2");
    r.range(out.moments.size() <= 3 || out.d == 1, path + ".moments",
            "moments beyond M4 close only in d = 1");
    for (double v : out.moments) r.range(v > 0.0, path + ".moments", "entries must be positive");
  }
  r.number(j, path, "t_end", out.t_end);
  r.range(out.t_end > 0.0, path + ".t_end", "must be positive");
  r.number(j, path, "dt", out.dt);
  r.range(out.dt > 0.0 && out.dt <= out.t_end, path + ".dt", "must lie in (0, t_end]");
  if (r.count(j, path, "record_stride", n)) {
    out.record_stride = n;
    r.range(n >= 1, path + ".record_stride", "must be at least 1");
  }
  r.number(j, path, "rel_tol", out.rel_tol);
  r.range(out.rel_tol > 0.0, path + ".rel_tol", "must be positive");
  return out;
}

ExactParams read_exact(Reader& r, const json& j, const std::string& path) {
  ExactParams out;
  if (!r.object(j, path, {"number", "rate", "sigma", "t", "zeta", "xi", "h"})) return out;
  r.number(j, path, "number", out.number);
  r.range(out.number > 0.0, path + ".number", "must be positive");
  r.number(j, path, "rate", out.rate);
  r.range(out.rate > 0.0, path + ".rate", "must be positive");
  r.number(j, path, "sigma", out.sigma);
  r.range(out.sigma > 0.0, path + ".sigma", "must be positive");
  r.numbers(j, path, "t", out.t);
  r.numbers(j, path, "zeta", out.zeta);
  r.numbers(j, path, "xi", out.xi);
  r.number(j, path, "h", out.h);
  r.range(out.h > 0.0, path + ".h", "must be positive");
  for (double t : out.t) r.range(t >= out.h, path + ".t", "times must be >= h");
  for (double z : out.zeta) r.range(z >= 0.0, path + ".zeta", "entries must be >= 0");
  r.range(!out.t.empty() && !out.zeta.empty() && !out.xi.empty(), path, "grids must not be empty");
  return out;
}

LiftParams read_lift(Reader& r, const json& j, const std::string& path) {
  LiftParams out;
  if (!r.object(j, path, {"theta", "scale", "k", "t_grid"})) return out;
  r.number(j, path, "theta", out.theta);
  r.range(out.theta == 0.5, path + ".theta", "the quadratic symbol has theta = 1/2");
  r.number(j, path, "scale", out.scale);
  r.range(out.scale > 0.0, path + ".scale", "must be positive");
  r.numbers(j, path, "k", out.k);
  for (double k : out.k) r.range(k >= 0.0, path + ".k", "entries must be >= 0");
  r.numbers(j, path, "t_grid", out.t_grid);
  r.range(!out.t_grid.empty() && out.t_grid.front() > 0.0 && increasing(out.t_grid), path + ".t_grid",
          "must be positive and strictly increasing");
  r.range(!out.t_grid.empty() && out.t_grid.front() * 10.0 <= out.t_grid.back(), path + ".t_grid",
          "must span at least one decade");
  return out;
}

VerifyParams read_verify(Reader& r, const json& j, const std::string& path) {
  VerifyParams out;
  if (!r.object(j, path, {"criteria", "seed", "inject_k1"})) return out;
  if (const json* c = r.at(j, path, "criteria", false)) {
    const auto known = criterion_ids();
    if (!c->is_array()) {
      r.fail(path + ".criteria", "expected an array of criterion ids");
    } else {
      for (const auto& id : *c) {
        if (!id.is_string() || std::find(known.begin(), known.end(), id.get<std::string>()) == known.end()) {
          r.fail(path + ".criteria", "unknown criterion " + id.dump());
          continue;
        }
        out.criteria.push_back(id.get<std::string>());
      }
    }
  }
  r.count(j, path, "seed", out.seed);
  double k = 0;
  if (r.number(j, path, "inject_k1", k)) {
    out.inject_k1 = k;
    r.range(k > 0.0, path + ".inject_k1", "must be positive");
  }
  return out;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  json root;
  StrictSax sax(root);
  const bool ok = json::sax_parse(text.begin(), text.end(), &sax);
  if (!ok || sax.is_errored())
    throw ConfigError({"syntax: " + (sax.syntax.empty() ? std::string("malformed JSON") : sax.syntax)});

  Reader r;
  for (const auto& k : sax.duplicates) r.fail("config", "duplicate key '" + k + "'");

  RunConfig cfg;
  if (!root.is_object()) throw ConfigError({"config: expected a JSON object"});
  std::string name;
  if (!r.string(root, "config", "command", name, true)) throw ConfigError(r.errs);
  const auto cmd = command_from_string(name);
  if (!cmd) {
    r.fail("config.command", "unknown command '" + name + "'");
    throw ConfigError(r.errs);
  }
  r.object(root, "config", {"command", name.c_str()});
  const json empty = json::object();
  const json& block = root.contains(name) ? root.at(name) : empty;
  switch (*cmd) {
    case Command::Simulate:
      if (!root.contains(name)) r.fail("config", "missing required key 'simulate'");
      cfg.params = read_simulate(r, block, name);
      break;
    case Command::Ode: cfg.params = read_ode(r, block, name); break;
    case Command::Exact: cfg.params = read_exact(r, block, name); break;
    case Command::Lift: cfg.params = read_lift(r, block, name); break;
    case Command::Verify: cfg.params = read_verify(r, block, name); break;
  }
  if (!r.errs.empty()) throw ConfigError(r.errs);
  return cfg;
}

namespace {

ojson emit_kernel(const KernelSpec& k) {
  ojson j;
  j["type"] = k.tag();
  if (k.is<ImpulsionPowerKernel>()) j["gamma"] = k.as<ImpulsionPowerKernel>().gamma;
  if (k.is<MassOnlyKernel>()) {
    j["form"] = to_string(k.as<MassOnlyKernel>().form);
    j["bound"] = k.as<MassOnlyKernel>().bound;
  }
  return j;
}

ojson emit(const SimulateParams& p) {
  const auto& s = p.sim;
  ojson init;
  if (const auto* m = std::get_if<Monodisperse>(&s.init.mass)) {
    init["mass"] = {{"law", "monodisperse"}, {"m0", m->m0}};
  } else {
    init["mass"] = {{"law", "exponential"}, {"rate", std::get<ExponentialMass>(s.init.mass).rate}};
  }
  if (const auto* g = std::get_if<GaussianIsotropic>(&s.init.momentum)) {
    init["momentum"] = {{"law", "gaussian"}, {"sigma", g->sigma}};
  } else {
    init["momentum"] = {{"law", "samples"}, {"samples", std::get<SymmetrizedSamples>(s.init.momentum).samples}};
  }
  init["symmetrize"] = s.init.symmetrize;
  ojson moments = ojson::array();
  for (const auto& k : p.moments) moments.push_back({k.alpha, k.beta});
  ojson j;
  j["kernel"] = emit_kernel(s.kernel);
  j["n0"] = static_cast<std::uint64_t>(s.n0);
  j["d"] = s.d;
  j["t_grid"] = s.t_grid;
  j["init"] = init;
  j["ensemble"] = static_cast<std::uint64_t>(s.ensemble);
  j["seed"] = s.seed;
  j["moments"] = moments;
  return j;
}

ojson emit(const OdeParams& p) {
  ojson j;
  j["d"] = p.d;
  if (p.k_d) j["k_d"] = *p.k_d;
  j["moments"] = p.moments;
  j["t_end"] = p.t_end;
  j["dt"] = p.dt;
  j["record_stride"] = static_cast<std::uint64_t>(p.record_stride);
  j["rel_tol"] = p.rel_tol;
  return j;
}

ojson emit(const ExactParams& p) {
  return ojson{{"number", p.number}, {"rate", p.rate}, {"sigma", p.sigma}, {"t", p.t},
               {"zeta", p.zeta},     {"xi", p.xi},     {"h", p.h}};
}

ojson emit(const LiftParams& p) {
  return ojson{{"theta", p.theta}, {"scale", p.scale}, {"k", p.k}, {"t_grid", p.t_grid}};
}

ojson emit(const VerifyParams& p) {
  ojson j;
  j["criteria"] = p.criteria;
  j["seed"] = p.seed;
  if (p.inject_k1) j["inject_k1"] = *p.inject_k1;
  return j;
}

}  // namespace

std::string emit_config(const RunConfig& cfg) {
  ojson j;
  const std::string name = to_string(cfg.command());
  j["command"] = name;
  j[name] = std::visit([](const auto& p) { return emit(p); }, cfg.params);
  return j.dump(2) + "\n";
}

}  // namespace agglab
