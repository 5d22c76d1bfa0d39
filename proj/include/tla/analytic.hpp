#pragma once

// Closed-form amplitude dynamics for both coupling schemes, derived in the
// Weisskopf-Wigner approximation (flat emission continuum, no memory).
//
// Upper scheme: the laser-coupled pair (|c>, |a>) with decay gamma out of
// |a> obeys
//     dC/dt = -i w A e^{+i d t}
//     dA/dt = -i w* C e^{-i d t} - (gamma/2) A
// (w = effective Rabi frequency, d = detuning).  The solution is a sum of
// two exponentials whose exponents are the roots below.
//
// Lower scheme: |a> decays while the laser dresses the pair (|c>, |b>); the
// upper-level amplitude is then a bare exponential independent of the laser.

#include "tla/model.hpp"

namespace tla {

// Characteristic data of the damped driven pair.
//   alpha = gamma/2 + i d
//   beta  = sqrt(conj(alpha)^2 - 4 |w|^2)   (principal branch)
//   x_1,2 = -(conj(alpha) +/- beta)/2        exponents of C
//   y_1,2 = -(alpha       +/- beta)/2        exponents of A
// Identities: x_j = y_j + i d,  x1 x2 = |w|^2,  x_j (y_j + gamma/2) = -|w|^2,
// and Re beta < gamma/2 strictly whenever w != 0 (both branches decay).
// All observables are invariant under the branch swap beta -> -beta.
struct UpperRoots {
  cplx alpha;
  cplx beta;
  cplx x1, x2;
  cplx y1, y2;
  bool confluent = false;  // |beta| < 1e-9 * gamma: double root, t e^{xt} regime
};

UpperRoots upper_roots(double gamma, double detuning, cplx omega_eff);

struct UpperAmplitudes {
  cplx c, a;
};

// Prepared closed-form evolution for one driven decaying pair.  eval() uses
// the branch-symmetric form
//   C(t) = e^{xbar t} [ C0 cosh(beta t/2) + (alpha* C0 - 2i w A0) sinhc ]
//   A(t) = e^{ybar t} [ A0 cosh(beta t/2) - (alpha* A0 + 2i w* C0) sinhc ]
// with xbar = -alpha*/2, ybar = -alpha/2, sinhc = sinh(beta t/2)/beta.  The
// sinhc factor is evaluated by series for small |beta t|, so the confluent
// (double-root) case needs no separate branch; for very large |Re beta| t the
// two-exponential form is used instead to avoid overflow in cosh.
struct UpperSolution {
  UpperRoots roots;
  double gamma = 1.0;
  double detuning = 0.0;
  cplx omega;
  cplx c0, a0;

  UpperAmplitudes eval(double t) const;
};

UpperSolution make_upper_solution(double gamma, double detuning, cplx omega_eff,
                                  cplx c0, cplx a0);

// Upper scheme, classical laser: amplitudes of |c> and |a> at time t >= 0.
UpperAmplitudes upper_classical_amplitudes(const PhysParams& p, const InitialAtomState& init,
                                           double t);

// Upper scheme, quantized laser: joint amplitudes of sector n, which couples
// |c, n-1> to |a, n> with effective Rabi frequency g sqrt(n).  The
// coherent-state weights are included: sector n starts from
// (w_{n-1} c0, w_n a0); indices outside 0..n_max contribute zero, and n = 0
// is the uncoupled |a, 0> that decays freely.  Returned c is the |c, n-1>
// amplitude (zero for n = 0).
UpperAmplitudes upper_quantized_amplitudes(const PhysParams& p, const InitialAtomState& init,
                                           int n, double t);

// Dressed pair of the laser-driven (|c>, |b>) transition.  Columns of the
// transformation, in the bare basis (|c>, |b>):
//   |chi+> = ( epsilon, eta )     |chi-> = ( -conj(eta), epsilon )
// with epsilon = lambda1 / sqrt(lambda1^2 + |w|^2) real and non-negative,
// eta = w / sqrt(lambda1^2 + |w|^2), and quasi-energies
// lambda_{1,2} = (d' +/- sqrt(d'^2 + 4 |w|^2)) / 2, lambda1 >= lambda2.
// They diagonalize H = [[d', w*], [w, 0]].  At w = 0 the normalization is
// pinned to (epsilon, eta) = (1, 0); every observable built from the basis
// is insensitive to this choice because eta = 0 kills the dressed coupling.
struct DressedBasis {
  double epsilon = 1.0;
  cplx eta{0.0, 0.0};
  double lambda1 = 0.0, lambda2 = 0.0;
};

DressedBasis dressed_basis(double detuning, cplx omega_eff);

// Lower scheme: the decaying-level amplitude |a> keeps A(t) = A0 e^{-gamma
// t/2} for every laser strength and detuning; the laser only redistributes
// what has decayed.
cplx lower_survival_amplitude(const PhysParams& p, cplx a0, double t);

}  // namespace tla
