#include "tla/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace tla {

namespace {

constexpr cplx I{0.0, 1.0};

// sinh(beta t/2) / beta, series-expanded when the argument is small so the
// confluent limit beta -> 0 is smooth.
cplx sinhc_half(cplx beta, double t) {
  const cplx z = beta * (t / 2.0);
  if (std::abs(z) < 1e-4) {
    const cplx z2 = z * z;
    return (t / 2.0) * (1.0 + z2 / 6.0 * (1.0 + z2 / 20.0));
  }
  return std::sinh(z) / beta;
}

}  // namespace

UpperRoots upper_roots(double gamma, double detuning, cplx omega_eff) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  UpperRoots r;
  r.alpha = cplx(gamma / 2.0, detuning);
  const cplx as = std::conj(r.alpha);
  r.beta = std::sqrt(as * as - 4.0 * std::norm(omega_eff));
  r.x1 = -(as + r.beta) / 2.0;
  r.x2 = -(as - r.beta) / 2.0;
  r.y1 = -(r.alpha + r.beta) / 2.0;
  r.y2 = -(r.alpha - r.beta) / 2.0;
  r.confluent = std::abs(r.beta) < 1e-9 * gamma;
  return r;
}

UpperSolution make_upper_solution(double gamma, double detuning, cplx omega_eff,
                                  cplx c0, cplx a0) {
  UpperSolution s;
  s.roots = upper_roots(gamma, detuning, omega_eff);
  s.gamma = gamma;
  s.detuning = detuning;
  s.omega = omega_eff;
  s.c0 = c0;
  s.a0 = a0;
  return s;
}

UpperAmplitudes UpperSolution::eval(double t) const {
  if (t < 0.0) throw std::invalid_argument("time must be non-negative");
  const cplx as = std::conj(roots.alpha);
  const cplx pc = as * c0 - 2.0 * I * omega * a0;
  const cplx pa = as * a0 + 2.0 * I * std::conj(omega) * c0;
  if (std::abs(roots.beta.real()) * t < 1200.0) {
    const cplx ch = std::cosh(roots.beta * (t / 2.0));
    const cplx sc = sinhc_half(roots.beta, t);
    const cplx ex = std::exp(-as * (t / 2.0));   // e^{xbar t}
    const cplx ey = std::exp(-roots.alpha * (t / 2.0));  // e^{ybar t}
    return {ex * (c0 * ch + pc * sc), ey * (a0 * ch - pa * sc)};
  }
  // Exponent spread too large for cosh: fall back to the explicit pair of
  // exponentials (safe here, since |beta t| >> 1 rules out cancellation).
  const cplx c1 = (c0 - pc / roots.beta) / 2.0;
  const cplx c2 = (c0 + pc / roots.beta) / 2.0;
  const cplx a1 = (a0 + pa / roots.beta) / 2.0;
  const cplx a2 = (a0 - pa / roots.beta) / 2.0;
  return {c1 * std::exp(roots.x1 * t) + c2 * std::exp(roots.x2 * t),
          a1 * std::exp(roots.y1 * t) + a2 * std::exp(roots.y2 * t)};
}

UpperAmplitudes upper_classical_amplitudes(const PhysParams& p, const InitialAtomState& init,
                                           double t) {
  if (p.scheme != Scheme::upper) throw std::invalid_argument("upper-scheme amplitudes need Scheme::upper");
  if (p.is_quantized()) throw std::invalid_argument("classical amplitudes need a classical field");
  validate(p);
  validate(init);
  return make_upper_solution(p.gamma, p.detuning, p.classical().omega, init.c0, init.a0).eval(t);
}

UpperAmplitudes upper_quantized_amplitudes(const PhysParams& p, const InitialAtomState& init,
                                           int n, double t) {
  if (p.scheme != Scheme::upper) throw std::invalid_argument("upper-scheme amplitudes need Scheme::upper");
  if (!p.is_quantized()) throw std::invalid_argument("quantized amplitudes need a quantized field");
  if (n < 0) throw std::invalid_argument("sector index must be >= 0");
  validate(p);
  validate(init);
  const auto& f = p.quantized();
  const auto w = coherent_weights(f);
  const int n_max = int(w.size()) - 1;
  const cplx c0 = (n >= 1 && n - 1 <= n_max) ? w[std::size_t(n - 1)] * init.c0 : cplx{};
  const cplx a0 = (n <= n_max) ? w[std::size_t(n)] * init.a0 : cplx{};
  const cplx omega_n = f.g * std::sqrt(double(n));
  return make_upper_solution(p.gamma, p.detuning, omega_n, c0, a0).eval(t);
}

DressedBasis dressed_basis(double detuning, cplx omega_eff) {
  DressedBasis d;
  const double split = std::sqrt(detuning * detuning + 4.0 * std::norm(omega_eff));
  d.lambda1 = (detuning + split) / 2.0;
  d.lambda2 = (detuning - split) / 2.0;
  if (omega_eff == cplx{}) {
    d.epsilon = 1.0;
    d.eta = 0.0;
    return d;
  }
  const double norm = std::sqrt(d.lambda1 * d.lambda1 + std::norm(omega_eff));
  d.epsilon = d.lambda1 / norm;
  d.eta = omega_eff / norm;
  return d;
}

cplx lower_survival_amplitude(const PhysParams& p, cplx a0, double t) {
  if (t < 0.0) throw std::invalid_argument("time must be non-negative");
  validate(p);
  return a0 * std::exp(-p.gamma * t / 2.0);
}

}  // namespace tla
