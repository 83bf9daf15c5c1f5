#pragma once

#include <initializer_list>
#include <utility>

#include <Eigen/Core>

namespace agglab {

/// Impulsion vector in dimension 1..3. Fixed capacity, so no heap traffic in
/// the simulator's hot loop.
template <typename Scalar>
using ImpulsionT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, 3, 1>;
using Impulsion = ImpulsionT<double>;

constexpr int kMaxDim = 3;

/// One particle y = (m, p). The velocity p/m is derived on demand.
class ParticleState {
 public:
  ParticleState() = default;

  /// Throws std::invalid_argument unless m > 0, 1 <= dim(p) <= 3 and every
  /// entry is finite.
  ParticleState(double m, Impulsion p);

  double mass() const { return m_; }
  const Impulsion& impulsion() const { return p_; }
  int dim() const { return static_cast<int>(p_.size()); }

  Impulsion velocity() const { return p_ / m_; }
  double speed() const { return p_.norm() / m_; }
  double kinetic_energy() const { return 0.5 * p_.squaredNorm() / m_; }

  friend bool operator==(const ParticleState& a, const ParticleState& b) {
    return a.m_ == b.m_ && a.p_.size() == b.p_.size() && a.p_ == b.p_;
  }

 private:
  friend ParticleState coalesce(const ParticleState& a, const ParticleState& b);
  struct Unchecked {};
  ParticleState(Unchecked, double m, Impulsion p) : m_(m), p_(std::move(p)) {}

  double m_ = 1.0;
  Impulsion p_ = Impulsion::Zero(1);
};

/// Builds a state from an initializer list of impulsion components.
ParticleState make_particle(double m, std::initializer_list<double> p);

/// m'' = m + m', p'' = p + p'. Throws std::invalid_argument on dimension
/// mismatch.
ParticleState coalesce(const ParticleState& a, const ParticleState& b);

/// (1/2) m m' / (m + m') |v - v'|^2: the kinetic energy destroyed by merging
/// a and b.
double kinetic_energy_loss(const ParticleState& a, const ParticleState& b);

void require_same_dim(const ParticleState& a, const ParticleState& b);

}  // namespace agglab
