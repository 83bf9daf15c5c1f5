#include "agglab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace agglab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

KernelSpec KernelSpec::impulsion_power(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 2.0))
    throw std::invalid_argument("impulsion-power exponent must lie in [0, 2], got " +
                                std::to_string(gamma));
  return KernelSpec(ImpulsionPowerKernel{gamma});
}

KernelSpec KernelSpec::mass_only(MassForm form, double bound) {
  if (!(bound > 0.0) || !std::isfinite(bound))
    throw std::invalid_argument("mass-only kernel needs a positive finite bound");
  return KernelSpec(MassOnlyKernel{form, bound});
}

std::string KernelSpec::tag() const {
  return std::visit(overloaded{
                        [](const ConstantKernel&) { return std::string("constant"); },
                        [](const ImpulsionPowerKernel&) { return std::string("impulsion_power"); },
                        [](const HardSphereKernel&) { return std::string("hard_sphere"); },
                        [](const ManevKernel&) { return std::string("manev"); },
                        [](const MassOnlyKernel&) { return std::string("mass_only"); },
                    },
                    v_);
}

double KernelSpec::mass_homogeneity() const {
  if (const auto* mk = std::get_if<MassOnlyKernel>(&v_)) {
    switch (mk->form) {
      case MassForm::Constant: return 0.0;
      case MassForm::Sum: return 1.0;
      case MassForm::Product: return 2.0;
    }
  }
  return 0.0;
}

double eval_kernel(const KernelSpec& k, const ParticleState& a, const ParticleState& b) {
  require_same_dim(a, b);
  return std::visit(
      overloaded{
          [](const ConstantKernel&) { return 1.0; },
          [&](const ImpulsionPowerKernel& ip) {
            const double r = (a.impulsion() - b.impulsion()).norm();
            if (ip.gamma == 1.0) return r;
            if (ip.gamma == 2.0) return r * r;
            return std::pow(r, ip.gamma);
          },
          [&](const HardSphereKernel&) {
            const double s = std::cbrt(a.mass()) + std::cbrt(b.mass());
            return s * s * (a.velocity() - b.velocity()).norm();
          },
          [&](const ManevKernel&) {
            const double dv2 = (a.velocity() - b.velocity()).squaredNorm();
            if (dv2 == 0.0) throw std::domain_error("Manev kernel is singular at v = v'");
            return (a.mass() + b.mass()) / (a.mass() * b.mass()) / dv2;
          },
          [&](const MassOnlyKernel& mk) {
            switch (mk.form) {
              case MassForm::Constant: return 1.0;
              case MassForm::Sum: return a.mass() + b.mass();
              case MassForm::Product: return a.mass() * b.mass();
            }
            return 0.0;
          },
      },
      k.variant());
}

SystemStats summarize(std::span<const ParticleState> particles) {
  SystemStats s;
  for (const auto& y : particles) {
    const double pn = y.impulsion().norm();
    s.max_abs_p = std::max(s.max_abs_p, pn);
    s.max_cbrt_m = std::max(s.max_cbrt_m, std::cbrt(y.mass()));
    s.max_abs_v = std::max(s.max_abs_v, pn / y.mass());
    s.total_mass += y.mass();
  }
  return s;
}

double majorant(const KernelSpec& k, const SystemStats& stats) {
  return std::visit(
      overloaded{
          [](const ConstantKernel&) { return 1.0; },
          [&](const ImpulsionPowerKernel& ip) { return std::pow(2.0 * stats.max_abs_p, ip.gamma); },
          [&](const HardSphereKernel&) {
            const double s = 2.0 * stats.max_cbrt_m;
            return s * s * (2.0 * stats.max_abs_v);
          },
          [](const ManevKernel&) -> double {
            throw std::domain_error("Manev kernel has no finite majorant; it cannot be simulated");
          },
          [](const MassOnlyKernel& mk) { return mk.bound; },
      },
      k.variant());
}

std::string to_string(MassForm f) {
  switch (f) {
    case MassForm::Constant: return "constant";
    case MassForm::Sum: return "sum";
    case MassForm::Product: return "product";
  }
  return "?";
}

MassForm mass_form_from_string(const std::string& s) {
  if (s == "constant") return MassForm::Constant;
  if (s == "sum") return MassForm::Sum;
  if (s == "product") return MassForm::Product;
  throw std::invalid_argument("unknown mass kernel form '" + s + "'");
}

}  // namespace agglab
