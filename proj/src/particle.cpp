#include "agglab/particle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace agglab {

ParticleState::ParticleState(double m, Impulsion p) : m_(m), p_(std::move(p)) {
  if (!(m_ > 0.0) || !std::isfinite(m_))
    throw std::invalid_argument("particle mass must be positive and finite, got " +
                                std::to_string(m_));
  if (p_.size() < 1 || p_.size() > kMaxDim)
    throw std::invalid_argument("impulsion dimension must be 1, 2 or 3");
  if (!p_.allFinite()) throw std::invalid_argument("impulsion must be finite");
}

ParticleState make_particle(double m, std::initializer_list<double> p) {
  if (p.size() < 1 || p.size() > kMaxDim)
    throw std::invalid_argument("impulsion dimension must be 1, 2 or 3");
  Impulsion v(static_cast<Eigen::Index>(p.size()));
  Eigen::Index i = 0;
  for (double x : p) v(i++) = x;
  return ParticleState(m, std::move(v));
}

void require_same_dim(const ParticleState& a, const ParticleState& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()));
}

ParticleState coalesce(const ParticleState& a, const ParticleState& b) {
  require_same_dim(a, b);
  return ParticleState(ParticleState::Unchecked{}, a.m_ + b.m_, a.p_ + b.p_);
}

double kinetic_energy_loss(const ParticleState& a, const ParticleState& b) {
  require_same_dim(a, b);
  const double reduced = a.mass() * b.mass() / (a.mass() + b.mass());
  return 0.5 * reduced * (a.velocity() - b.velocity()).squaredNorm();
}

}  // namespace agglab
