#include "tla/entropy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tla {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr std::array<const char*, 3> kUpperBasis{"c", "a", "b"};
constexpr std::array<const char*, 3> kLowerBasis{"a", "chi+", "chi-"};

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

void check_density(const DensityMatrix3& rho) {
  const double tr = rho.trace();
  if (std::abs(tr - 1.0) > 1e-10)
    throw std::runtime_error("reduced density trace deviates from 1 by " +
                             std::to_string(tr - 1.0));
  const auto ev = eig3_hermitian(rho);
  for (double v : ev)
    if (v < -1e-10)
      throw std::runtime_error("reduced density has negative eigenvalue " + std::to_string(v));
}

DensityMatrix3 upper_density_from_sums(double pp, double qq, cplx pq) {
  DensityMatrix3 rho;
  rho.basis = kUpperBasis;
  rho.at(0, 0) = pp;
  rho.at(1, 1) = qq;
  rho.at(0, 1) = pq;
  rho.at(1, 0) = std::conj(pq);
  rho.at(2, 2) = clamp01(1.0 - pp - qq);
  return rho;
}

// Coherence between the dressed components fed by the decay, integrated over
// the emission continuum: gamma eps conj(eta) [1 - e^{(i dl - gamma) t}] /
// (gamma - i dl) with dl = lambda1 - lambda2.  t < 0 selects the steady part.
cplx dressed_coherence(double gamma, const DressedBasis& d, double t) {
  const double dl = d.lambda1 - d.lambda2;
  const cplx denom(gamma, -dl);
  cplx osc{};
  if (t >= 0.0) osc = std::exp(cplx(-gamma * t, dl * t));
  return gamma * d.epsilon * std::conj(d.eta) * (1.0 - osc) / denom;
}

DensityMatrix3 lower_density_terms(const PhysParams& p, double t, bool steady) {
  // Accumulates |w_n|^2-weighted dressed-sector terms (a single unit-weight
  // "sector" for the classical field).
  DensityMatrix3 rho;
  rho.basis = kLowerBasis;
  const double decay = steady ? 0.0 : std::exp(-p.gamma * t);
  double qq = 0.0, rr = 0.0;
  cplx rq{};
  auto add = [&](double weight, const DressedBasis& d) {
    qq += weight * std::norm(d.eta);
    rr += weight * d.epsilon * d.epsilon;
    rq += weight * dressed_coherence(p.gamma, d, steady ? -1.0 : t);
  };
  if (p.is_quantized()) {
    const auto& f = p.quantized();
    const auto w = coherent_weights(f);
    for (std::size_t n = 0; n < w.size(); ++n) {
      const double weight = std::norm(w[n]);
      if (weight < 1e-16) continue;
      add(weight, dressed_basis(p.detuning, f.g * std::sqrt(double(n))));
    }
  } else {
    add(1.0, dressed_basis(p.detuning, p.classical().omega));
  }
  rho.at(0, 0) = decay;
  rho.at(1, 1) = qq * (1.0 - decay);
  rho.at(2, 2) = rr * (1.0 - decay);
  rho.at(2, 1) = rq;
  rho.at(1, 2) = std::conj(rq);
  return rho;
}

DensityMatrix3 upper_classical_density(const PhysParams& p, const InitialAtomState& init,
                                       double t) {
  const auto amp = make_upper_solution(p.gamma, p.detuning, p.classical().omega,
                                       init.c0, init.a0)
                       .eval(t);
  return upper_density_from_sums(std::norm(amp.c), std::norm(amp.a),
                                 std::conj(amp.c) * amp.a);
}

DensityMatrix3 upper_quantized_density(const PhysParams& p, const InitialAtomState& init,
                                       double t) {
  const auto& f = p.quantized();
  const auto w = coherent_weights(f);
  const int n_max = int(w.size()) - 1;
  // Sector n couples |c, n-1> and |a, n>; amplitudes per sector, ascending n
  // for a deterministic accumulation order.  c[n], a[n] below hold sector n
  // with c[0] identically zero.
  std::vector<cplx> c(std::size_t(n_max) + 2), a(std::size_t(n_max) + 2);
  a[0] = w[0] * init.a0 * std::exp(-p.gamma * t / 2.0);
  for (int n = 1; n <= n_max + 1; ++n) {
    const cplx c0 = (n - 1 <= n_max) ? w[std::size_t(n - 1)] * init.c0 : cplx{};
    const cplx a0 = (n <= n_max) ? w[std::size_t(n)] * init.a0 : cplx{};
    if (std::norm(c0) < 1e-28 && std::norm(a0) < 1e-28) continue;
    const cplx omega_n = f.g * std::sqrt(double(n));
    const auto amp = make_upper_solution(p.gamma, p.detuning, omega_n, c0, a0).eval(t);
    c[std::size_t(n)] = amp.c;
    a[std::size_t(n)] = amp.a;
  }
  double pp = 0.0, qq = 0.0;
  cplx pq{};
  for (int n = 0; n <= n_max + 1; ++n) {
    pp += std::norm(c[std::size_t(n)]);
    qq += std::norm(a[std::size_t(n)]);
    if (n <= n_max) pq += std::conj(c[std::size_t(n) + 1]) * a[std::size_t(n)];
  }
  return upper_density_from_sums(pp, qq, pq);
}

}  // namespace

std::array<double, 3> eig3_hermitian(const DensityMatrix3& rho) {
  // Cyclic complex Jacobi rotations.  Backward-stable, so degenerate pairs
  // (e.g. the double zero of a pure state) carry machine-epsilon absolute
  // error, unlike characteristic-polynomial formulas whose degenerate-pair
  // error grows like sqrt(epsilon).
  std::array<cplx, 9> h = rho.m;
  for (int i = 0; i < 3; ++i) {
    h[std::size_t(4 * i)] = h[std::size_t(4 * i)].real();
    for (int j = i + 1; j < 3; ++j) {
      const cplx sym = (h[std::size_t(3 * i + j)] + std::conj(h[std::size_t(3 * j + i)])) / 2.0;
      h[std::size_t(3 * i + j)] = sym;
      h[std::size_t(3 * j + i)] = std::conj(sym);
    }
  }
  double scale = 0.0;
  for (const cplx& z : h) scale = std::max(scale, std::abs(z));
  if (scale == 0.0) return {0.0, 0.0, 0.0};
  constexpr int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int sweep = 0; sweep < 60; ++sweep) {
    const double off = std::abs(h[1]) + std::abs(h[2]) + std::abs(h[5]);
    if (off <= 1e-15 * scale) break;
    for (const auto& pq : pairs) {
      const int p = pq[0], q = pq[1];
      const cplx hpq = h[std::size_t(3 * p + q)];
      const double mag = std::abs(hpq);
      if (mag <= 1e-18 * scale) continue;
      const cplx phase = hpq / mag;
      const double tau = (h[std::size_t(4 * q)].real() - h[std::size_t(4 * p)].real()) / (2.0 * mag);
      const double t = (tau >= 0.0) ? tau - std::sqrt(1.0 + tau * tau)
                                    : tau + std::sqrt(1.0 + tau * tau);
      const double c = 1.0 / std::sqrt(1.0 + t * t);
      const double s = t * c;
      // J = I except J_pp = J_qq = c, J_pq = -s phase, J_qp = s conj(phase);
      // apply h <- J^H h J.
      std::array<cplx, 9> j{};
      j[0] = j[4] = j[8] = 1.0;
      j[std::size_t(4 * p)] = c;
      j[std::size_t(4 * q)] = c;
      j[std::size_t(3 * p + q)] = -s * phase;
      j[std::size_t(3 * q + p)] = s * std::conj(phase);
      std::array<cplx, 9> hj{};
      for (int r = 0; r < 3; ++r)
        for (int cidx = 0; cidx < 3; ++cidx) {
          cplx acc{};
          for (int k = 0; k < 3; ++k)
            acc += h[std::size_t(3 * r + k)] * j[std::size_t(3 * k + cidx)];
          hj[std::size_t(3 * r + cidx)] = acc;
        }
      for (int r = 0; r < 3; ++r)
        for (int cidx = 0; cidx < 3; ++cidx) {
          cplx acc{};
          for (int k = 0; k < 3; ++k)
            acc += std::conj(j[std::size_t(3 * k + r)]) * hj[std::size_t(3 * k + cidx)];
          h[std::size_t(3 * r + cidx)] = acc;
        }
    }
  }
  std::array<double, 3> ev{h[0].real(), h[4].real(), h[8].real()};
  if (ev[0] < ev[1]) std::swap(ev[0], ev[1]);
  if (ev[1] < ev[2]) std::swap(ev[1], ev[2]);
  if (ev[0] < ev[1]) std::swap(ev[0], ev[1]);
  return ev;
}

double von_neumann_entropy(const DensityMatrix3& rho) {
  const double tr = rho.trace();
  if (std::abs(tr - 1.0) > 1e-8)
    throw std::runtime_error("entropy needs unit trace, got trace - 1 = " +
                             std::to_string(tr - 1.0));
  double s = 0.0;
  for (double v : eig3_hermitian(rho)) {
    if (v < -1e-10 || v > 1.0 + 1e-10)
      throw std::runtime_error("eigenvalue " + std::to_string(v) +
                               " outside [0, 1]: not a density matrix");
    v = clamp01(v);
    if (v > 0.0) s -= v * std::log(v);
  }
  return s < 0.0 ? 0.0 : s;
}

DensityMatrix3 reduced_density(const PhysParams& p, const InitialAtomState& init, double t) {
  if (t < 0.0) throw std::invalid_argument("time must be non-negative");
  validate(p);
  validate(init);
  DensityMatrix3 rho;
  if (p.scheme == Scheme::upper) {
    rho = p.is_quantized() ? upper_quantized_density(p, init, t)
                           : upper_classical_density(p, init, t);
  } else {
    if (std::norm(init.c0) > 0.0 || std::abs(std::norm(init.a0) - 1.0) > 1e-9)
      throw std::invalid_argument("lower scheme starts from the decaying level: (c0, a0) = (0, 1)");
    rho = lower_density_terms(p, t, /*steady=*/false);
  }
  check_density(rho);
  return rho;
}

EntropyTrace entropy_trace(const PhysParams& p, const InitialAtomState& init,
                           const std::vector<double>& times) {
  EntropyTrace tr;
  tr.times = times;
  tr.entropy.reserve(times.size());
  tr.populations.reserve(times.size());
  for (double t : times) {
    const auto rho = reduced_density(p, init, t);
    tr.basis = rho.basis;
    tr.entropy.push_back(von_neumann_entropy(rho));
    tr.populations.push_back(
        {rho.at(0, 0).real(), rho.at(1, 1).real(), rho.at(2, 2).real()});
  }
  return tr;
}

std::vector<std::array<double, 3>> populations(const PhysParams& p, const InitialAtomState& init,
                                               const std::vector<double>& times) {
  return entropy_trace(p, init, times).populations;
}

SteadyState steady_state(const PhysParams& p) {
  validate(p);
  SteadyState st;
  if (p.scheme == Scheme::upper) {
    const bool driven = p.is_quantized() ? (p.quantized().g != cplx{} && p.quantized().mean_photons >= 0.0)
                                         : (p.classical().omega != cplx{});
    // With no coupling an initial |c> population would survive forever and
    // the limit would depend on the initial state.
    if (!driven)
      throw std::invalid_argument("upper-scheme steady state needs a non-zero coupling");
    st.rho.basis = kUpperBasis;
    st.rho.at(2, 2) = 1.0;
    st.entropy = 0.0;
    return st;
  }
  st.rho = lower_density_terms(p, 0.0, /*steady=*/true);
  check_density(st.rho);
  st.entropy = von_neumann_entropy(st.rho);
  return st;
}

}  // namespace tla
