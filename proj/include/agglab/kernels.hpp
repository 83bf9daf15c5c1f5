#pragma once

#include <span>
#include <string>
#include <variant>

#include "agglab/particle.hpp"

namespace agglab {

struct ConstantKernel {
  friend bool operator==(const ConstantKernel&, const ConstantKernel&) = default;
};

/// a(p, p') = |p - p'|^gamma, gamma in [0, 2].
struct ImpulsionPowerKernel {
  double gamma = 1.0;
  friend bool operator==(const ImpulsionPowerKernel&, const ImpulsionPowerKernel&) = default;
};

/// a = (m^{1/3} + m'^{1/3})^2 |v - v'|.
struct HardSphereKernel {
  friend bool operator==(const HardSphereKernel&, const HardSphereKernel&) = default;
};

/// a = ((m + m') / (m m')) |v - v'|^{-2}. Evaluable only; it has no finite
/// majorant, so the simulator rejects it.
struct ManevKernel {
  friend bool operator==(const ManevKernel&, const ManevKernel&) = default;
};

enum class MassForm { Constant, Sum, Product };

/// Kernels that see only the masses: 1, m + m', or m m'. `bound` must dominate
/// a(m, m') over (0, total mass]^2; the simulator uses it as the majorant.
struct MassOnlyKernel {
  MassForm form = MassForm::Constant;
  double bound = 1.0;
  friend bool operator==(const MassOnlyKernel&, const MassOnlyKernel&) = default;
};

class KernelSpec {
 public:
  using Variant =
      std::variant<ConstantKernel, ImpulsionPowerKernel, HardSphereKernel, ManevKernel, MassOnlyKernel>;

  KernelSpec() = default;

  static KernelSpec constant() { return KernelSpec(ConstantKernel{}); }
  /// Throws std::invalid_argument unless 0 <= gamma <= 2.
  static KernelSpec impulsion_power(double gamma);
  static KernelSpec hard_sphere() { return KernelSpec(HardSphereKernel{}); }
  static KernelSpec manev() { return KernelSpec(ManevKernel{}); }
  static KernelSpec mass_only(MassForm form, double bound);

  const Variant& variant() const { return v_; }
  template <typename T>
  bool is() const { return std::holds_alternative<T>(v_); }
  template <typename T>
  const T& as() const { return std::get<T>(v_); }

  /// Short tag used in configs and output metadata.
  std::string tag() const;
  /// Mass homogeneity degree for mass-only kernels (0, 1, 2), else 0.
  double mass_homogeneity() const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

 private:
  explicit KernelSpec(Variant v) : v_(std::move(v)) {}
  Variant v_ = ConstantKernel{};
};

/// Throws std::invalid_argument on dimension mismatch and std::domain_error
/// for the Manev kernel at v = v'.
double eval_kernel(const KernelSpec& k, const ParticleState& a, const ParticleState& b);

/// What the majorant needs to know about the current particle cloud.
struct SystemStats {
  double max_abs_p = 0.0;
  double max_cbrt_m = 0.0;
  double max_abs_v = 0.0;
  double total_mass = 0.0;
};

SystemStats summarize(std::span<const ParticleState> particles);

/// Upper bound on a(y, y') over all pairs described by `stats`. Throws
/// std::domain_error for kernels with no finite bound (Manev).
double majorant(const KernelSpec& k, const SystemStats& stats);

std::string to_string(MassForm f);
MassForm mass_form_from_string(const std::string& s);

}  // namespace agglab
