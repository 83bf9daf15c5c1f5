#include "agglab/particle_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

namespace agglab {

std::string generator_description() {
  return "std::mt19937_64 per run, seeded with splitmix64(splitmix64(seed) ^ splitmix64(~run_index)); "
         "std::exponential/normal/uniform distributions (libstdc++)";
}

void SimConfig::validate() const {
  if (n0 < 2) throw std::invalid_argument("n0 must be at least 2");
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("dimension must be 1, 2 or 3");
  if (ensemble < 1) throw std::invalid_argument("ensemble size must be at least 1");
  if (t_grid.empty()) throw std::invalid_argument("t_grid must not be empty");
  if (!(t_grid.front() >= 0.0)) throw std::invalid_argument("t_grid must start at t >= 0");
  for (std::size_t k = 1; k < t_grid.size(); ++k)
    if (!(t_grid[k] > t_grid[k - 1])) throw std::invalid_argument("t_grid must be strictly increasing");
  if (init.symmetrize && n0 % 2 != 0)
    throw std::invalid_argument("symmetrized initial data need an even n0");
  if (const auto* mono = std::get_if<Monodisperse>(&init.mass); mono && !(mono->m0 > 0.0))
    throw std::invalid_argument("monodisperse mass must be positive");
  if (const auto* ex = std::get_if<ExponentialMass>(&init.mass); ex && !(ex->rate > 0.0))
    throw std::invalid_argument("exponential mass rate must be positive");
  if (const auto* g = std::get_if<GaussianIsotropic>(&init.momentum); g && !(g->sigma >= 0.0))
    throw std::invalid_argument("gaussian sigma must be non-negative");
  if (const auto* s = std::get_if<SymmetrizedSamples>(&init.momentum)) {
    if (s->samples.empty()) throw std::invalid_argument("sample list must not be empty");
    for (const auto& p : s->samples)
      if (static_cast<int>(p.size()) != d)
        throw std::invalid_argument("sample impulsion dimension does not match d");
  }
}

ParticleSystem::ParticleSystem(KernelSpec kernel, std::vector<ParticleState> particles,
                               std::size_t n0, Engine rng)
    : kernel_(std::move(kernel)),
      particles_(std::move(particles)),
      n0_(n0),
      rng_(std::move(rng)),
      d_(particles_.empty() ? 1 : particles_.front().dim()),
      stats_(summarize(particles_)),
      refresh_interval_(std::max<std::size_t>(1, n0 / 10)) {
  if (n0_ == 0) throw std::invalid_argument("n0 must be positive");
  for (const auto& y : particles_)
    if (y.dim() != d_) throw std::invalid_argument("all particles must share one dimension");
}

void ParticleSystem::absorb(const ParticleState& merged) {
  // Cheap upward updates keep the majorant valid after every merge; the
  // periodic full rescan lets it shrink again.
  if (++since_refresh_ >= refresh_interval_) {
    stats_ = summarize(particles_);
    since_refresh_ = 0;
    return;
  }
  const double pn = merged.impulsion().norm();
  stats_.max_abs_p = std::max(stats_.max_abs_p, pn);
  stats_.max_cbrt_m = std::max(stats_.max_cbrt_m, std::cbrt(merged.mass()));
  stats_.max_abs_v = std::max(stats_.max_abs_v, pn / merged.mass());
}

std::optional<CoalescenceEvent> ParticleSystem::step(double t_limit) {
  if (t_limit < t_) throw std::invalid_argument("cannot step backwards in time");
  const double lambda = majorant(kernel_, stats_);
  std::uniform_int_distribution<std::size_t> pick;
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (;;) {
    const std::size_t n = particles_.size();
    if (n < 2 || !(lambda > 0.0)) {
      t_ = t_limit;
      return std::nullopt;
    }
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    const double rate = pairs * lambda / static_cast<double>(n0_);
    const double dt = std::exponential_distribution<double>(rate)(rng_);
    if (t_ + dt > t_limit) {
      t_ = t_limit;
      return std::nullopt;
    }
    t_ += dt;
    ++candidates_;

    using Range = std::uniform_int_distribution<std::size_t>::param_type;
    const std::size_t a = pick(rng_, Range(0, n - 1));
    std::size_t b = a;
    while (b == a) b = pick(rng_, Range(0, n - 1));
    const std::size_t i = std::min(a, b), j = std::max(a, b);

    const double ratio = eval_kernel(kernel_, particles_[i], particles_[j]) / lambda;
    if (ratio > 1.0 + 1e-12)
      throw std::logic_error("majorant violated: a/Lambda = " + std::to_string(ratio));
    if (unif(rng_) >= ratio) continue;

    CoalescenceEvent ev{t_, i, j, particles_[i], particles_[j], coalesce(particles_[i], particles_[j])};
    particles_[i] = ev.merged;
    particles_[j] = particles_.back();
    particles_.pop_back();
    ++accepted_;
    absorb(ev.merged);
    return ev;
  }
}

void ParticleSystem::advance_to(double t_target, const Observer& observer) {
  if (t_target < t_) throw std::invalid_argument("run_to target lies in the past");
  if (particles_.size() >= 2) (void)majorant(kernel_, stats_);  // rejects Manev up front
  while (auto ev = step(t_target)) {
    if (observer) observer(*ev, *this);
  }
}

void run_to(ParticleSystem& sys, double t_target) { sys.advance_to(t_target); }

namespace {

double sample_mass(const MassLaw& law, Engine& rng) {
  if (const auto* mono = std::get_if<Monodisperse>(&law)) return mono->m0;
  const auto& ex = std::get<ExponentialMass>(law);
  double m = 0.0;
  while (!(m > 0.0)) m = std::exponential_distribution<double>(ex.rate)(rng);
  return m;
}

}  // namespace

ParticleSystem init_system(const SimConfig& cfg, std::uint64_t run_index) {
  cfg.validate();
  Engine rng = make_stream(cfg.seed, run_index);
  std::vector<ParticleState> particles;
  particles.reserve(cfg.n0);

  const std::size_t draws = cfg.init.symmetrize ? cfg.n0 / 2 : cfg.n0;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t k = 0; k < draws; ++k) {
    const double m = sample_mass(cfg.init.mass, rng);
    Impulsion p(cfg.d);
    if (const auto* g = std::get_if<GaussianIsotropic>(&cfg.init.momentum)) {
      for (int c = 0; c < cfg.d; ++c) p(c) = g->sigma * normal(rng);
    } else {
      const auto& list = std::get<SymmetrizedSamples>(cfg.init.momentum).samples;
      const auto& s = list[k % list.size()];
      for (int c = 0; c < cfg.d; ++c) p(c) = s[static_cast<std::size_t>(c)];
    }
    particles.emplace_back(m, p);
    if (cfg.init.symmetrize) particles.emplace_back(m, Impulsion(-p));
  }
  return ParticleSystem(cfg.kernel, std::move(particles), cfg.n0, std::move(rng));
}

double empirical_moment(std::span<const ParticleState> particles, std::size_t n0, double alpha,
                        double beta) {
  double sum = 0.0;
  for (const auto& y : particles) {
    const double mp = alpha == 0.0 ? 1.0 : (alpha == 1.0 ? y.mass() : std::pow(y.mass(), alpha));
    double pp = 1.0;
    if (beta != 0.0) {
      const double r = y.impulsion().norm();
      if (beta < 0.0 && r == 0.0)
        throw std::domain_error("moment with beta < 0 is undefined for a particle at p = 0");
      pp = beta == 1.0 ? r : (beta == 2.0 ? y.impulsion().squaredNorm() : std::pow(r, beta));
    }
    sum += mp * pp;
  }
  return sum / static_cast<double>(n0);
}

double empirical_moment(const ParticleSystem& sys, double alpha, double beta) {
  return empirical_moment(sys.particles(), sys.n0(), alpha, beta);
}

MomentSeries ensemble_moments(const SimConfig& cfg, const std::vector<MomentKey>& pairs,
                              unsigned threads) {
  cfg.validate();
  if (pairs.empty()) throw std::invalid_argument("no moments requested");
  const std::size_t runs = cfg.ensemble, nt = cfg.t_grid.size(), nk = pairs.size();

  // per_run[r][k * nt + ti]
  std::vector<std::vector<double>> per_run(runs);
  std::vector<std::exception_ptr> failures(runs);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t r = next++; r < runs; r = next++) {
      try {
        ParticleSystem sys = init_system(cfg, r);
        std::vector<double> out(nk * nt);
        for (std::size_t ti = 0; ti < nt; ++ti) {
          run_to(sys, cfg.t_grid[ti]);
          for (std::size_t k = 0; k < nk; ++k)
            out[k * nt + ti] = empirical_moment(sys, pairs[k].alpha, pairs[k].beta);
        }
        per_run[r] = std::move(out);
      } catch (...) {
        failures[r] = std::current_exception();
      }
    }
  };

  const unsigned nthreads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(runs)));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < nthreads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);

  MomentSeries series;
  series.t = cfg.t_grid;
  series.provenance = Provenance::MonteCarlo;
  series.kernel = cfg.kernel;
  series.dim = cfg.d;
  series.n_runs = runs;
  for (std::size_t k = 0; k < nk; ++k) {
    std::vector<double> mean(nt), se(nt);
    for (std::size_t ti = 0; ti < nt; ++ti) {
      double s = 0.0;
      for (std::size_t r = 0; r < runs; ++r) s += per_run[r][k * nt + ti];
      const double mu = s / static_cast<double>(runs);
      double ss = 0.0;
      for (std::size_t r = 0; r < runs; ++r) {
        const double dev = per_run[r][k * nt + ti] - mu;
        ss += dev * dev;
      }
      mean[ti] = mu;
      se[ti] = runs > 1 ? std::sqrt(ss / static_cast<double>(runs - 1) / static_cast<double>(runs))
                        : std::nan("");
    }
    series.add_column(pairs[k], std::move(mean), std::move(se));
  }
  return series;
}

}  // namespace agglab
