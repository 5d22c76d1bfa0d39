#pragma once

// Model definition for a three-level atom whose one transition decays by
// spontaneous emission while another is driven by a coupling laser.  The
// decaying transition fixes the unit system: all rates and frequencies are
// quoted in units of the decay rate gamma, all times in units of 1/gamma.

#include <complex>
#include <variant>
#include <vector>

namespace tla {

using cplx = std::complex<double>;

// Which transition the coupling laser addresses.  In both schemes the decay
// runs from the upper level |a> to the middle level |b>.
//   upper: laser couples the third level |c> to the decaying upper level |a>.
//   lower: laser couples the third level |c> to the lower level |b>, i.e. it
//          drives the level the decay feeds into.
enum class Scheme { upper, lower };

// Monochromatic classical coupling laser of complex Rabi frequency omega
// (half the conventional Rabi splitting; the driving term in the amplitude
// equations is -i*omega).
struct ClassicalField {
  cplx omega;
};

// Single-mode quantized coupling laser prepared in a coherent state
// |alpha|^2 = mean_photons, arg(alpha) = theta, with vacuum coupling g.
struct QuantizedField {
  cplx g;
  double mean_photons = 0.0;
  double theta = 0.0;
};

struct PhysParams {
  double gamma = 1.0;     // spontaneous decay rate |a> -> |b>; the unit scale
  double detuning = 0.0;  // laser detuning from the driven transition
  Scheme scheme = Scheme::upper;
  std::variant<ClassicalField, QuantizedField> field{ClassicalField{}};

  bool is_quantized() const { return std::holds_alternative<QuantizedField>(field); }
  const ClassicalField& classical() const { return std::get<ClassicalField>(field); }
  const QuantizedField& quantized() const { return std::get<QuantizedField>(field); }
};

// Throws std::invalid_argument unless gamma > 0, mean_photons >= 0 and the
// field amplitude is finite.
void validate(const PhysParams& p);

// Initial atomic amplitudes.  Upper scheme: c0 on the laser-coupled level
// |c>, a0 on the decaying level |a>.  Lower scheme: the excited level |a>
// starts fully populated, so (c0, a0) = (0, 1) always.
struct InitialAtomState {
  cplx c0{0.0, 0.0};
  cplx a0{1.0, 0.0};
};

// Throws std::invalid_argument if |c0|^2 + |a0|^2 exceeds 1 beyond rounding
// or both amplitudes vanish.
void validate(const InitialAtomState& s);

// Poisson upper tail sum_{n > n_max} e^-m m^n / n!, evaluated by direct
// log-domain summation.
double poisson_tail(double mean_photons, int n_max);

// Smallest n_max whose excluded photon-number weight satisfies
// poisson_tail(m, n_max) < 1e-12.  m = 0 gives 0.
int auto_truncation(double mean_photons);

// Coherent-state amplitudes w_n = e^{-m/2} m^{n/2} e^{i n theta} / sqrt(n!)
// for n = 0 .. n_max, computed in the log domain so large m stays finite.
// n_max < 0 selects auto_truncation(m).  Throws std::invalid_argument when a
// non-negative n_max is too small for the 1e-12 tail bound.
std::vector<cplx> coherent_weights(const QuantizedField& f, int n_max = -1);

}  // namespace tla
