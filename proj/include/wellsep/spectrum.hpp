// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WELLSEP_SPECTRUM_HPP
#define WELLSEP_SPECTRUM_HPP

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wellsep/quadrature.hpp"
#include "wellsep/units.hpp"

namespace wellsep {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Relative amplitude below which a state is treated as zero when deriving
/// support hints.
inline constexpr double kTailTolerance = 1e-12;

/// Default continuum cutoff in units of the spectrum's momentum scale. The
/// truncated tail of a point-source kernel oscillates like
/// cos(R q_max) / (R q_max^3), R the summed distance of the two points from
/// the scattering centre; at 400 this stays below ~1e-7 relative for R >= 2.
inline constexpr double kDefaultQMaxFactor = 400.0;

class SpectralExpansion;

/// A real wavefunction: immutable, cheap to copy, safe to share across
/// threads. `support` is the interval outside which |psi| is below
/// kTailTolerance of its peak; `kinks` lists points where the derivative
/// jumps (quadrature starts new panels there).
class StateFunction {
 public:
  using Eval = std::function<double(double)>;

  StateFunction();
  StateFunction(Eval f, Interval support, std::vector<double> kinks = {});

  double operator()(double x) const { return impl_->f(x); }
  const Interval& support() const { return impl_->support; }
  std::span<const double> kinks() const { return impl_->kinks; }

  /// Non-null when this function is a spectral expansion over some local
  /// spectrum (the result of apply_green).
  const SpectralExpansion* expansion() const { return impl_->expansion.get(); }

  /// True when both handles refer to the same underlying function object.
  bool same_object(const StateFunction& other) const { return impl_ == other.impl_; }

  StateFunction scaled(double factor) const;
  friend StateFunction operator+(const StateFunction& a, const StateFunction& b);
  friend StateFunction operator-(const StateFunction& a, const StateFunction& b);

  static StateFunction from_expansion(std::shared_ptr<const SpectralExpansion> expansion);

 private:
  struct Impl {
    Eval f;
    Interval support;
    std::vector<double> kinks;
    std::shared_ptr<const SpectralExpansion> expansion;
  };
  std::shared_ptr<const Impl> impl_;
};

/// Uniformly sampled potential shape, linearly interpolated, zero outside
/// [lo, hi] (offsets relative to the potential centre).
struct SampledProfile {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> values;

  double operator()(double offset) const;
};

/// V(x) = -strength * delta(x - center) for DeltaSpike,
/// V(x) = -strength * profile(x - center) for Sampled.
struct Potential {
  enum class Kind { DeltaSpike, Sampled };

  Kind kind = Kind::DeltaSpike;
  double strength = 0.0;
  double center = 0.0;
  std::optional<SampledProfile> profile;

  static Potential delta(double strength, double center);
  static Potential sampled(double strength, double center, SampledProfile profile);

  bool is_delta() const { return kind == Kind::DeltaSpike; }
  /// Pointwise value; Sampled kind only.
  double value(double x) const;
  Interval support() const;
  void validate() const;
};

struct PointMass {
  double position = 0.0;
  double weight = 0.0;
};

/// A vector that may appear on either side of a projection: a smooth density
/// plus point masses. V|psi> for a delta V is a single point mass, which
/// keeps every delta matrix element a point evaluation.
class Ket {
 public:
  Ket() = default;
  explicit Ket(StateFunction smooth) : smooth_(std::move(smooth)) {}
  Ket(std::optional<StateFunction> smooth, std::vector<PointMass> points)
      : smooth_(std::move(smooth)), points_(std::move(points)) {}

  /// V|psi>.
  static Ket apply(const Potential& v, const StateFunction& psi);

  const std::optional<StateFunction>& smooth() const { return smooth_; }
  std::span<const PointMass> points() const { return points_; }
  bool empty() const { return !smooth_ && points_.empty(); }

  Ket scaled(double factor) const;
  friend Ket operator+(const Ket& a, const Ket& b);

  /// Smallest interval containing the smooth support and every point mass.
  std::optional<Interval> extent() const;

 private:
  std::optional<StateFunction> smooth_;
  std::vector<PointMass> points_;
};

struct BoundState {
  double energy = 0.0;
  StateFunction wavefunction;
  std::string label;
};

/// One-parameter family of delta-normalized scattering states,
/// <x|q> = wavefunction_at(q, x), energy q^2/2 (natural units).
struct ContinuumFamily {
  std::string label;
  double center = 0.0;
  std::function<double(double q, double x)> wavefunction_at;
  std::function<double(double q)> asymptotic_amplitude;
  std::function<double(double q)> asymptotic_phase;
  /// Optional large-q tail. A state f kinked or nonzero at the centre has
  /// <q|f> ~ tail_source(f) * s(q) with s(q) ~ 1/q^2; tail_profile(Q, x) is
  /// int_Q^inf s(q) <x|q> dq. Used to close truncated completeness sums.
  std::function<double(const StateFunction& f)> tail_source;
  std::function<double(double q)> tail_coefficient;
  std::function<double(double q_cut, double x)> tail_profile;

  static double energy_of(double q) { return 0.5 * q * q; }
};

/// Complete eigen-decomposition of one local Hamiltonian, natural units.
struct LocalSpectrum {
  std::vector<BoundState> bound;
  std::vector<ContinuumFamily> continuum;
  Potential potential;
  Units units;
  /// Internal momentum scale (m*gamma/hbar^2 for a delta well); sets the
  /// default continuum cutoff.
  double momentum_scale = 1.0;

  const BoundState& bound_state(std::string_view label) const;
  bool has_bound_state(std::string_view label) const;
  double q_max(const QuadratureSpec& spec) const;
};

/// <f|g> by adaptive quadrature over the common support.
double inner_product(const StateFunction& f, const StateFunction& g, const QuadratureSpec& spec);

/// <bra|ket> where ket may carry point masses.
double overlap(const StateFunction& bra, const Ket& ket, const QuadratureSpec& spec);
/// <a|b> where both sides may carry point masses; point-point pairs at the
/// same position are not representable and throw InvalidArgument.
double overlap(const Ket& a, const Ket& b, const QuadratureSpec& spec);

/// <bra|V|ket>. Delta spikes are evaluated exactly as
/// -strength * (bra(c) * ket(c)); Sampled potentials by quadrature.
double matrix_element(const StateFunction& bra, const Potential& v, const StateFunction& ket,
                      const QuadratureSpec& spec);

/// <q|ket> for one continuum family.
double continuum_projection(const ContinuumFamily& family, double q, const Ket& ket,
                            const QuadratureSpec& spec);

/// Tabulated <q_j|ket> on a shared node set, for many-q work.
std::vector<double> continuum_projection_table(const ContinuumFamily& family,
                                               std::span<const double> q_nodes, const Ket& ket,
                                               const QuadratureSpec& spec);

struct CompletenessReport {
  double residual = 0.0;   ///< L2 norm of f minus its spectral reconstruction
  double norm = 0.0;       ///< L2 norm of f
  double bound_weight = 0.0;
  double continuum_weight = 0.0;  ///< includes tail_weight
  double tail_weight = 0.0;       ///< closed-form part above q_max
};

/// Reconstructs test_fn from the bound states plus every continuum family
/// truncated at q_max, plus each family's closed-form tail above q_max when
/// it has one, and measures the L2 residual on the support of test_fn
/// widened by 25% on each side.
CompletenessReport check_completeness(const LocalSpectrum& spectrum, const StateFunction& test_fn,
                                      const QuadratureSpec& q_spec);

}  // namespace wellsep

#endif  // WELLSEP_SPECTRUM_HPP
