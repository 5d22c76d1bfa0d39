#pragma once

// Atomic reduced density matrix and von Neumann entropy.  With the joint
// atom + emission-field state pure at all times, the entropy of the 3x3
// atomic reduced density matrix equals the field entropy and measures the
// entanglement between the atom and its spontaneous emission.
//
// Basis ordering of the reduced matrix:
//   upper scheme: (|c>, |a>, |b>)            labels "c", "a", "b"
//   lower scheme: (|a>, |chi+>, |chi->)      labels "a", "chi+", "chi-"
// Entry (i, j) is sum_field conj(amp_i) amp_j over shared field states.

#include <array>
#include <vector>

#include "tla/analytic.hpp"
#include "tla/model.hpp"

namespace tla {

struct DensityMatrix3 {
  std::array<cplx, 9> m{};  // row-major
  std::array<const char*, 3> basis{"", "", ""};

  cplx& at(int i, int j) { return m[std::size_t(3 * i + j)]; }
  const cplx& at(int i, int j) const { return m[std::size_t(3 * i + j)]; }
  double trace() const { return (m[0] + m[4] + m[8]).real(); }
};

// Eigenvalues in descending order, by cyclic complex Jacobi rotations (the
// input is symmetrized first, so only the upper triangle really matters).
// Backward-stable: absolute accuracy is a small multiple of machine epsilon
// times the matrix scale, degenerate spectra included, and the sum
// reproduces the trace to the same accuracy.
std::array<double, 3> eig3_hermitian(const DensityMatrix3& rho);

// S = -sum lambda ln lambda in nats, 0 ln 0 = 0.  Eigenvalues within 1e-10
// below 0 or above 1 are clamped; anything further out, or a trace away from
// 1 by more than 1e-8, throws std::runtime_error naming the offender.
// Result is in [0, ln 3].
double von_neumann_entropy(const DensityMatrix3& rho);

// Atomic reduced density matrix at time t for any scheme/field combination.
// The result is Hermitian by construction; unit trace and positivity are
// verified (1e-10) before returning.
DensityMatrix3 reduced_density(const PhysParams& p, const InitialAtomState& init, double t);

struct EntropyTrace {
  std::vector<double> times;
  std::vector<double> entropy;
  std::vector<std::array<double, 3>> populations;  // diagonal of the reduced matrix
  std::array<const char*, 3> basis{"", "", ""};
};

EntropyTrace entropy_trace(const PhysParams& p, const InitialAtomState& init,
                           const std::vector<double>& times);

std::vector<std::array<double, 3>> populations(const PhysParams& p, const InitialAtomState& init,
                                               const std::vector<double>& times);

struct SteadyState {
  DensityMatrix3 rho;
  double entropy = 0.0;
};

// t -> infinity limit.  Upper scheme: everything decays to |b> (entropy 0);
// requires a non-zero coupling, because an undriven |c> never empties and
// the limit would depend on the initial state.  Lower scheme: the decayed
// population stays distributed over the dressed pair with a persistent
// coherence, so the entropy limit is finite and laser-controlled.
SteadyState steady_state(const PhysParams& p);

}  // namespace tla
