#pragma once

// Brute-force reference integrator: the emission continuum is replaced by a
// dense comb of discrete modes and the full joint Schrodinger equation is
// integrated with fixed-step RK4, with no Weisskopf-Wigner approximation.
// Used to validate the closed-form solutions.
//
// Flat comb on a midpoint grid over [-W, W]:
//   delta_k = -W + (k + 1/2) dw,  dw = 2W/N,  g_b = sqrt(gamma dw / 2 pi)
// so that 2 pi g_b^2 / dw = gamma exactly.  The dominant discrepancy against
// the flat-continuum closed forms is the finite bandwidth, which renormalizes
// the decay at relative order gamma / (pi W); it shrinks with W, not with N.

#include <vector>

#include "tla/analytic.hpp"
#include "tla/entropy.hpp"
#include "tla/model.hpp"

namespace tla {

struct ModeBath {
  double gamma = 1.0;
  double bandwidth = 0.0;        // W
  int count = 0;                 // N
  double spacing = 0.0;          // dw
  double coupling = 0.0;         // g_b, identical for every mode
  std::vector<double> offsets;   // delta_k, ascending
};

// Throws std::invalid_argument unless bandwidth >= 20 gamma +
// 4 max_rabi_splitting (the comb must enclose every dressed emission line
// with room for its wings) and count >= 8.
ModeBath build_bath(double gamma, double bandwidth, int count, double max_rabi_splitting = 0.0);

// Largest admissible RK4 step: min(0.01/gamma, 0.1/bandwidth).
double max_oracle_dt(const ModeBath& bath);

struct UpperOracleTrajectory {
  std::vector<double> times;
  std::vector<cplx> c, a;
  std::vector<double> bath_population;   // sum_k |b_k|^2 at each sample
  double norm_drift = 0.0;               // max |norm(t) - norm(0)|
};

struct LowerOracleTrajectory {
  std::vector<double> times;
  std::vector<cplx> a;
  std::vector<double> plus_population;   // sum_k |x+_k|^2
  std::vector<double> minus_population;  // sum_k |x-_k|^2
  std::vector<cplx> cross_coherence;     // sum_k conj(x-_k) x+_k
  double norm_drift = 0.0;
};

// Upper scheme pair (c, a) with every bath mode attached to the decay:
//   dc/dt   = -i w a e^{+i d t}
//   da/dt   = -i w* c e^{-i d t} - i g_b sum_k b_k e^{+i delta_k t}
//   db_k/dt = -i g_b a e^{-i delta_k t}
// Samples must be non-empty, ascending, starting at >= 0; each is hit
// exactly (the step is shrunk per segment, never stretched beyond dt).
UpperOracleTrajectory integrate_upper(const ModeBath& bath, cplx omega_eff, double detuning,
                                      cplx c0, cplx a0, const std::vector<double>& samples,
                                      double dt);

// Lower scheme: |a> decays into the dressed doublet of the driven pair,
//   da/dt   = -i g_b [ eta sum_k x+_k e^{-i(delta_k + l1) t}
//                    + eps sum_k x-_k e^{-i(delta_k + l2) t} ]
//   dx+_k/dt = -i g_b conj(eta) a e^{+i(delta_k + l1) t}
//   dx-_k/dt = -i g_b eps       a e^{+i(delta_k + l2) t}
LowerOracleTrajectory integrate_lower(const ModeBath& bath, const DressedBasis& dressed,
                                      cplx a0, const std::vector<double>& samples, double dt);

// Reduced density matrix at sample i, built from the discrete-mode state.
// Its trace equals the conserved norm, so it deviates from 1 only by the
// integrator drift.
DensityMatrix3 oracle_reduced_density(const UpperOracleTrajectory& tr, std::size_t i);
DensityMatrix3 oracle_reduced_density(const LowerOracleTrajectory& tr, std::size_t i);

struct QuantizedOracleResult {
  std::vector<double> times;
  std::vector<DensityMatrix3> rho;
  double norm_drift = 0.0;
};

// Quantized-field reference: one independent bath integration per photon
// sector (parallelized over sectors), merged in ascending sector order.
// Works for both schemes.
QuantizedOracleResult oracle_quantized_densities(const PhysParams& p, const InitialAtomState& init,
                                                 const ModeBath& bath,
                                                 const std::vector<double>& samples, double dt);

}  // namespace tla
