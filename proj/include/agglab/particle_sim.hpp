#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "agglab/kernels.hpp"
#include "agglab/moment_series.hpp"
#include "agglab/particle.hpp"
#include "agglab/random.hpp"

namespace agglab {

struct Monodisperse {
  double m0 = 1.0;
  friend bool operator==(const Monodisperse&, const Monodisperse&) = default;
};
struct ExponentialMass {
  double rate = 1.0;
  friend bool operator==(const ExponentialMass&, const ExponentialMass&) = default;
};
using MassLaw = std::variant<Monodisperse, ExponentialMass>;

/// Every component i.i.d. N(0, sigma^2).
struct GaussianIsotropic {
  double sigma = 1.0;
  friend bool operator==(const GaussianIsotropic&, const GaussianIsotropic&) = default;
};
/// Impulsions taken cyclically from a fixed list.
struct SymmetrizedSamples {
  std::vector<std::vector<double>> samples;
  friend bool operator==(const SymmetrizedSamples&, const SymmetrizedSamples&) = default;
};
using MomentumLaw = std::variant<GaussianIsotropic, SymmetrizedSamples>;

/// With `symmetrize`, particles come in pairs (m, p), (m, -p) so the empirical
/// measure is exactly even in p.
struct InitialCondition {
  MassLaw mass = ExponentialMass{1.0};
  MomentumLaw momentum = GaussianIsotropic{1.0};
  bool symmetrize = true;
  friend bool operator==(const InitialCondition&, const InitialCondition&) = default;
};

struct SimConfig {
  KernelSpec kernel;
  std::size_t n0 = 1000;
  int d = 1;
  std::vector<double> t_grid{0.0, 1.0};
  InitialCondition init;
  std::size_t ensemble = 8;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument with a description of the first problem.
  void validate() const;
  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// One accepted coalescence. `i < j` index the pre-event particle list.
struct CoalescenceEvent {
  double t = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  ParticleState first;
  ParticleState second;
  ParticleState merged;
};

/// Finite mean-field particle system: per-unordered-pair rate a(y_i, y_j)/n0,
/// sampled by acceptance-rejection against a global majorant.
class ParticleSystem {
 public:
  using Observer = std::function<void(const CoalescenceEvent&, const ParticleSystem&)>;

  ParticleSystem(KernelSpec kernel, std::vector<ParticleState> particles, std::size_t n0,
                 Engine rng);

  const std::vector<ParticleState>& particles() const { return particles_; }
  std::size_t size() const { return particles_.size(); }
  std::size_t n0() const { return n0_; }
  double time() const { return t_; }
  int dim() const { return d_; }
  const KernelSpec& kernel() const { return kernel_; }
  const SystemStats& stats() const { return stats_; }
  std::uint64_t candidates() const { return candidates_; }
  std::uint64_t accepted() const { return accepted_; }

  /// Advances to the next accepted event if it happens no later than
  /// `t_limit`; otherwise parks the clock at `t_limit` and returns nullopt.
  std::optional<CoalescenceEvent> step(double t_limit);

  /// Runs until `t_target` or until a single particle is left. Throws
  /// std::domain_error for kernels without a finite majorant.
  void advance_to(double t_target, const Observer& observer = {});

  /// Majorant refresh period in accepted events (default max(1, n0/10)).
  void set_refresh_interval(std::size_t events) { refresh_interval_ = events == 0 ? 1 : events; }

  friend bool operator==(const ParticleSystem& a, const ParticleSystem& b) {
    return a.particles_ == b.particles_ && a.n0_ == b.n0_ && a.t_ == b.t_ && a.rng_ == b.rng_;
  }

 private:
  void absorb(const ParticleState& merged);

  KernelSpec kernel_;
  std::vector<ParticleState> particles_;
  std::size_t n0_;
  double t_ = 0.0;
  Engine rng_;
  int d_;
  SystemStats stats_;
  std::size_t since_refresh_ = 0;
  std::size_t refresh_interval_;
  std::uint64_t candidates_ = 0;
  std::uint64_t accepted_ = 0;
};

/// n0 particles drawn from `cfg.init` on the stream (cfg.seed, run_index).
/// Throws std::invalid_argument for symmetrize with odd n0.
ParticleSystem init_system(const SimConfig& cfg, std::uint64_t run_index);

void run_to(ParticleSystem& sys, double t_target);

/// (1/n0) sum_i m_i^alpha |p_i|^beta with |p|^0 = 1. Throws std::domain_error
/// for beta < 0 when some p_i = 0.
double empirical_moment(const ParticleSystem& sys, double alpha, double beta);
double empirical_moment(std::span<const ParticleState> particles, std::size_t n0, double alpha,
                        double beta);

/// Runs cfg.ensemble independent realizations and reports the mean and
/// standard error of each requested moment on cfg.t_grid. The result does not
/// depend on `threads`.
MomentSeries ensemble_moments(const SimConfig& cfg, const std::vector<MomentKey>& pairs,
                              unsigned threads = 1);

}  // namespace agglab
