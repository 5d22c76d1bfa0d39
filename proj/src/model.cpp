#include "tla/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tla {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// log(n!) via lgamma; exact for the range we use.
double log_factorial(int n) { return std::lgamma(double(n) + 1.0); }

}  // namespace

void validate(const PhysParams& p) {
  if (!(p.gamma > 0.0) || !std::isfinite(p.gamma))
    throw std::invalid_argument("gamma must be positive and finite");
  if (!std::isfinite(p.detuning))
    throw std::invalid_argument("detuning must be finite");
  if (p.is_quantized()) {
    const auto& f = p.quantized();
    if (!finite(f.g)) throw std::invalid_argument("vacuum coupling g must be finite");
    if (!(f.mean_photons >= 0.0) || !std::isfinite(f.mean_photons))
      throw std::invalid_argument("mean_photons must be >= 0 and finite");
    if (!std::isfinite(f.theta)) throw std::invalid_argument("theta must be finite");
  } else {
    if (!finite(p.classical().omega))
      throw std::invalid_argument("Rabi frequency omega must be finite");
  }
}

void validate(const InitialAtomState& s) {
  if (!finite(s.c0) || !finite(s.a0))
    throw std::invalid_argument("initial amplitudes must be finite");
  const double norm = std::norm(s.c0) + std::norm(s.a0);
  if (norm > 1.0 + 1e-9)
    throw std::invalid_argument("initial amplitudes exceed unit norm: |c0|^2+|a0|^2 = " +
                                std::to_string(norm));
  if (norm < 1e-30)
    throw std::invalid_argument("initial amplitudes are both zero");
}

double poisson_tail(double m, int n_max) {
  if (m < 0.0) throw std::invalid_argument("mean_photons must be >= 0");
  if (m == 0.0) return 0.0;
  // Sum upward from n_max+1 until terms are negligible.  Terms peak at
  // n ~ m, so if n_max+1 < m we must sum through the mode.
  const double log_m = std::log(m);
  double tail = 0.0;
  int n = n_max + 1;
  for (;; ++n) {
    const double log_p = -m + n * log_m - log_factorial(n);
    const double p = std::exp(log_p);
    tail += p;
    if (n > m && (p < 1e-18 * tail || p < 1e-300)) break;
    if (n > n_max + 10'000'000) throw std::runtime_error("poisson tail failed to converge");
  }
  return tail;
}

int auto_truncation(double m) {
  if (m < 0.0) throw std::invalid_argument("mean_photons must be >= 0");
  if (m == 0.0) return 0;
  // Start from a generous Gaussian-tail guess, confirm it, then trim to the
  // smallest n_max that still meets the bound.
  int n = int(std::ceil(m + 10.0 * std::sqrt(m) + 20.0));
  if (poisson_tail(m, n) >= 1e-12)
    throw std::runtime_error("photon-number truncation guess too small");
  while (n > 0 && poisson_tail(m, n - 1) < 1e-12) --n;
  return n;
}

std::vector<cplx> coherent_weights(const QuantizedField& f, int n_max) {
  const double m = f.mean_photons;
  if (m < 0.0) throw std::invalid_argument("mean_photons must be >= 0");
  if (n_max < 0) {
    n_max = auto_truncation(m);
  } else if (poisson_tail(m, n_max) >= 1e-12) {
    throw std::invalid_argument("n_max = " + std::to_string(n_max) +
                                " leaves photon-number tail " +
                                std::to_string(poisson_tail(m, n_max)) +
                                " >= 1e-12; need n_max >= " +
                                std::to_string(auto_truncation(m)));
  }
  std::vector<cplx> w(std::size_t(n_max) + 1);
  if (m == 0.0) {
    w[0] = 1.0;
    return w;
  }
  const double log_m = std::log(m);
  for (int n = 0; n <= n_max; ++n) {
    const double log_mag = -m / 2.0 + n * log_m / 2.0 - log_factorial(n) / 2.0;
    w[std::size_t(n)] = std::polar(std::exp(log_mag), n * f.theta);
  }
  return w;
}

}  // namespace tla
