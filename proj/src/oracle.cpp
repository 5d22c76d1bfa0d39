#include "tla/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <string>
#include <thread>

namespace tla {

namespace {

constexpr cplx I{0.0, 1.0};

void check_samples(const std::vector<double>& samples) {
  if (samples.empty()) throw std::invalid_argument("need at least one sample time");
  double prev = 0.0;
  for (double t : samples) {
    if (!(t >= prev)) throw std::invalid_argument("sample times must be ascending and >= 0");
    prev = t;
  }
}

void check_dt(const ModeBath& bath, double dt) {
  const double cap = max_oracle_dt(bath);
  if (!(dt > 0.0) || dt > cap * (1.0 + 1e-12))
    throw std::invalid_argument("dt = " + std::to_string(dt) +
                                " exceeds the RK4 stability/accuracy cap " + std::to_string(cap));
}

// Steps inside [t0, t1] never exceed dt; the count is chosen so the segment
// ends exactly on t1.
int segment_steps(double t0, double t1, double dt) {
  const double span = t1 - t0;
  if (span <= 0.0) return 0;
  return std::max(1, int(std::ceil(span / dt - 1e-9)));
}

}  // namespace

ModeBath build_bath(double gamma, double bandwidth, int count, double max_rabi_splitting) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (max_rabi_splitting < 0.0) throw std::invalid_argument("max_rabi_splitting must be >= 0");
  const double needed = 20.0 * gamma + 4.0 * max_rabi_splitting;
  if (bandwidth < needed * (1.0 - 1e-12))
    throw std::invalid_argument("bandwidth " + std::to_string(bandwidth) +
                                " too small: the mode comb must cover every dressed emission line; "
                                "need >= 20 gamma + 4 max_rabi_splitting = " +
                                std::to_string(needed));
  if (count < 8) throw std::invalid_argument("need at least 8 bath modes");
  ModeBath bath;
  bath.gamma = gamma;
  bath.bandwidth = bandwidth;
  bath.count = count;
  bath.spacing = 2.0 * bandwidth / count;
  bath.coupling = std::sqrt(gamma * bath.spacing / (2.0 * M_PI));
  bath.offsets.resize(std::size_t(count));
  for (int k = 0; k < count; ++k)
    bath.offsets[std::size_t(k)] = -bandwidth + (k + 0.5) * bath.spacing;
  return bath;
}

double max_oracle_dt(const ModeBath& bath) {
  return std::min(0.01 / bath.gamma, 0.1 / bath.bandwidth);
}

UpperOracleTrajectory integrate_upper(const ModeBath& bath, cplx omega_eff, double detuning,
                                      cplx c0, cplx a0, const std::vector<double>& samples,
                                      double dt) {
  check_samples(samples);
  check_dt(bath, dt);
  const std::size_t n = std::size_t(bath.count);
  const double g = bath.coupling;
  const cplx w = omega_eff, wc = std::conj(omega_eff);

  cplx c = c0, a = a0;
  std::vector<cplx> b(n), ph(n), eh(n), ef(n);
  const double norm0 = std::norm(c0) + std::norm(a0);

  UpperOracleTrajectory out;
  out.times = samples;
  out.c.reserve(samples.size());
  out.a.reserve(samples.size());
  out.bath_population.reserve(samples.size());

  double t_cur = 0.0;
  for (double ts : samples) {
    const int steps = segment_steps(t_cur, ts, dt);
    if (steps > 0) {
      const double h = (ts - t_cur) / steps;
      for (std::size_t k = 0; k < n; ++k) {
        ph[k] = std::polar(1.0, bath.offsets[k] * t_cur);
        eh[k] = std::polar(1.0, bath.offsets[k] * h / 2.0);
        ef[k] = eh[k] * eh[k];
      }
      cplx uh{};  // sum_k e^{i delta_k h/2}
      for (std::size_t k = 0; k < n; ++k) uh += eh[k];
      cplx el = std::polar(1.0, detuning * t_cur);  // e^{i detuning t}
      const cplx elh = std::polar(1.0, detuning * h / 2.0), elf = elh * elh;
      for (int step = 0; step < steps; ++step) {
        // Bath-weighted sums at the three phase offsets of this step; the
        // bath derivative is rank-one, so these plus a few scalars carry the
        // whole RK4 update (see the stage algebra below).
        cplx s_now{}, s_half{}, s_full{};
        for (std::size_t k = 0; k < n; ++k) {
          cplx u = b[k] * ph[k];
          s_now += u;
          u *= eh[k];
          s_half += u;
          u *= eh[k];
          s_full += u;
        }
        const cplx e2 = el * elh, e4 = el * elf;
        // Stage 1
        const cplx dc1 = -I * w * a * el;
        const cplx da1 = -I * wc * c * std::conj(el) - I * g * s_now;
        const cplx s1 = -I * g * a;
        // Stage 2: bath sum = s_half + (h/2) s1 sum(e^{i d h/2})
        const cplx a2 = a + 0.5 * h * da1, c2 = c + 0.5 * h * dc1;
        const cplx sum2 = s_half + 0.5 * h * s1 * uh;
        const cplx dc2 = -I * w * a2 * e2;
        const cplx da2 = -I * wc * c2 * std::conj(e2) - I * g * sum2;
        const cplx s2 = -I * g * a2;
        // Stage 3: bath sum = s_half + (h/2) s2 N
        const cplx a3 = a + 0.5 * h * da2, c3 = c + 0.5 * h * dc2;
        const cplx sum3 = s_half + 0.5 * h * s2 * double(n);
        const cplx dc3 = -I * w * a3 * e2;
        const cplx da3 = -I * wc * c3 * std::conj(e2) - I * g * sum3;
        const cplx s3 = -I * g * a3;
        // Stage 4: bath sum = s_full + h s3 sum(e^{i d h/2})
        const cplx a4 = a + h * da3, c4 = c + h * dc3;
        const cplx sum4 = s_full + h * s3 * uh;
        const cplx dc4 = -I * w * a4 * e4;
        const cplx da4 = -I * wc * c4 * std::conj(e4) - I * g * sum4;
        const cplx s4 = -I * g * a4;

        c += h / 6.0 * (dc1 + 2.0 * (dc2 + dc3) + dc4);
        a += h / 6.0 * (da1 + 2.0 * (da2 + da3) + da4);
        const cplx w1 = h / 6.0 * s1, w23 = h / 6.0 * 2.0 * (s2 + s3), w4 = h / 6.0 * s4;
        for (std::size_t k = 0; k < n; ++k) {
          const cplx q = std::conj(eh[k]);
          b[k] += std::conj(ph[k]) * (w1 + q * (w23 + q * w4));
          ph[k] *= ef[k];
        }
        el *= elf;
      }
      t_cur = ts;
    }
    double bpop = 0.0;
    for (std::size_t k = 0; k < n; ++k) bpop += std::norm(b[k]);
    out.c.push_back(c);
    out.a.push_back(a);
    out.bath_population.push_back(bpop);
    const double drift = std::abs(std::norm(c) + std::norm(a) + bpop - norm0);
    out.norm_drift = std::max(out.norm_drift, drift);
  }
  return out;
}

LowerOracleTrajectory integrate_lower(const ModeBath& bath, const DressedBasis& dressed,
                                      cplx a0, const std::vector<double>& samples, double dt) {
  check_samples(samples);
  check_dt(bath, dt);
  const std::size_t n = std::size_t(bath.count);
  const double g = bath.coupling;
  const cplx eta = dressed.eta, etac = std::conj(dressed.eta);
  const double eps = dressed.epsilon;
  const double l1 = dressed.lambda1, l2 = dressed.lambda2;

  cplx a = a0;
  std::vector<cplx> xp(n), xm(n), ph(n), eh(n), ef(n);
  const double norm0 = std::norm(a0);

  LowerOracleTrajectory out;
  out.times = samples;

  double t_cur = 0.0;
  for (double ts : samples) {
    const int steps = segment_steps(t_cur, ts, dt);
    if (steps > 0) {
      const double h = (ts - t_cur) / steps;
      for (std::size_t k = 0; k < n; ++k) {
        ph[k] = std::polar(1.0, bath.offsets[k] * t_cur);
        eh[k] = std::polar(1.0, bath.offsets[k] * h / 2.0);
        ef[k] = eh[k] * eh[k];
      }
      cplx uhc{};  // sum_k e^{-i delta_k h/2}
      for (std::size_t k = 0; k < n; ++k) uhc += std::conj(eh[k]);
      cplx lp = std::polar(1.0, l1 * t_cur), lm = std::polar(1.0, l2 * t_cur);
      const cplx lph = std::polar(1.0, l1 * h / 2.0), lpf = lph * lph;
      const cplx lmh = std::polar(1.0, l2 * h / 2.0), lmf = lmh * lmh;
      for (int step = 0; step < steps; ++step) {
        // Mode-weighted sums against conj(ph) at the three step offsets.
        cplx sp_now{}, sp_half{}, sp_full{}, sm_now{}, sm_half{}, sm_full{};
        for (std::size_t k = 0; k < n; ++k) {
          const cplx pc = std::conj(ph[k]);
          const cplx qc = std::conj(eh[k]);
          cplx u = xp[k] * pc;
          sp_now += u;
          u *= qc;
          sp_half += u;
          u *= qc;
          sp_full += u;
          cplx v = xm[k] * pc;
          sm_now += v;
          v *= qc;
          sm_half += v;
          v *= qc;
          sm_full += v;
        }
        const cplx lp2 = lp * lph, lp4 = lp * lpf;
        const cplx lm2 = lm * lmh, lm4 = lm * lmf;
        // Stage 1
        const cplx da1 = -I * g * (eta * std::conj(lp) * sp_now + eps * std::conj(lm) * sm_now);
        const cplx rp1 = -I * g * etac * a * lp;
        const cplx rm1 = -I * g * eps * a * lm;
        // Stage 2
        const cplx a2 = a + 0.5 * h * da1;
        const cplx xps2 = sp_half + 0.5 * h * rp1 * uhc;
        const cplx xms2 = sm_half + 0.5 * h * rm1 * uhc;
        const cplx da2 = -I * g * (eta * std::conj(lp2) * xps2 + eps * std::conj(lm2) * xms2);
        const cplx rp2 = -I * g * etac * a2 * lp2;
        const cplx rm2 = -I * g * eps * a2 * lm2;
        // Stage 3
        const cplx a3 = a + 0.5 * h * da2;
        const cplx xps3 = sp_half + 0.5 * h * rp2 * double(n);
        const cplx xms3 = sm_half + 0.5 * h * rm2 * double(n);
        const cplx da3 = -I * g * (eta * std::conj(lp2) * xps3 + eps * std::conj(lm2) * xms3);
        const cplx rp3 = -I * g * etac * a3 * lp2;
        const cplx rm3 = -I * g * eps * a3 * lm2;
        // Stage 4
        const cplx a4 = a + h * da3;
        const cplx xps4 = sp_full + h * rp3 * uhc;
        const cplx xms4 = sm_full + h * rm3 * uhc;
        const cplx da4 = -I * g * (eta * std::conj(lp4) * xps4 + eps * std::conj(lm4) * xms4);
        const cplx rp4 = -I * g * etac * a4 * lp4;
        const cplx rm4 = -I * g * eps * a4 * lm4;

        a += h / 6.0 * (da1 + 2.0 * (da2 + da3) + da4);
        const cplx p1 = h / 6.0 * rp1, p23 = h / 6.0 * 2.0 * (rp2 + rp3), p4 = h / 6.0 * rp4;
        const cplx m1 = h / 6.0 * rm1, m23 = h / 6.0 * 2.0 * (rm2 + rm3), m4 = h / 6.0 * rm4;
        for (std::size_t k = 0; k < n; ++k) {
          const cplx q = eh[k];
          xp[k] += ph[k] * (p1 + q * (p23 + q * p4));
          xm[k] += ph[k] * (m1 + q * (m23 + q * m4));
          ph[k] *= ef[k];
        }
        lp *= lpf;
        lm *= lmf;
      }
      t_cur = ts;
    }
    double pp = 0.0, mp = 0.0;
    cplx cross{};
    for (std::size_t k = 0; k < n; ++k) {
      pp += std::norm(xp[k]);
      mp += std::norm(xm[k]);
      cross += std::conj(xm[k]) * xp[k];
    }
    out.a.push_back(a);
    out.plus_population.push_back(pp);
    out.minus_population.push_back(mp);
    out.cross_coherence.push_back(cross);
    const double drift = std::abs(std::norm(a) + pp + mp - norm0);
    out.norm_drift = std::max(out.norm_drift, drift);
  }
  return out;
}

DensityMatrix3 oracle_reduced_density(const UpperOracleTrajectory& tr, std::size_t i) {
  DensityMatrix3 rho;
  rho.basis = {"c", "a", "b"};
  rho.at(0, 0) = std::norm(tr.c[i]);
  rho.at(1, 1) = std::norm(tr.a[i]);
  rho.at(0, 1) = std::conj(tr.c[i]) * tr.a[i];
  rho.at(1, 0) = std::conj(rho.at(0, 1));
  rho.at(2, 2) = tr.bath_population[i];
  return rho;
}

DensityMatrix3 oracle_reduced_density(const LowerOracleTrajectory& tr, std::size_t i) {
  DensityMatrix3 rho;
  rho.basis = {"a", "chi+", "chi-"};
  rho.at(0, 0) = std::norm(tr.a[i]);
  rho.at(1, 1) = tr.plus_population[i];
  rho.at(2, 2) = tr.minus_population[i];
  rho.at(2, 1) = tr.cross_coherence[i];
  rho.at(1, 2) = std::conj(rho.at(2, 1));
  return rho;
}

namespace {

struct UpperSector {
  int n = 0;
  cplx c0, a0;
};

struct LowerSector {
  int n = 0;
  cplx a0;
};

}  // namespace

QuantizedOracleResult oracle_quantized_densities(const PhysParams& p, const InitialAtomState& init,
                                                 const ModeBath& bath,
                                                 const std::vector<double>& samples, double dt) {
  if (!p.is_quantized())
    throw std::invalid_argument("quantized oracle needs a quantized field");
  validate(p);
  validate(init);
  check_samples(samples);
  const auto& f = p.quantized();
  const auto w = coherent_weights(f);
  const int n_max = int(w.size()) - 1;

  QuantizedOracleResult out;
  out.times = samples;
  out.rho.resize(samples.size());

  if (p.scheme == Scheme::upper) {
    std::vector<UpperSector> jobs;
    for (int n = 0; n <= n_max + 1; ++n) {
      UpperSector s;
      s.n = n;
      s.c0 = (n >= 1 && n - 1 <= n_max) ? w[std::size_t(n - 1)] * init.c0 : cplx{};
      s.a0 = (n <= n_max) ? w[std::size_t(n)] * init.a0 : cplx{};
      if (std::norm(s.c0) < 1e-14 && std::norm(s.a0) < 1e-14) continue;
      jobs.push_back(s);
    }
    struct Run {
      int n;
      UpperOracleTrajectory tr;
    };
    const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
    std::vector<Run> runs(jobs.size());
    for (std::size_t begin = 0; begin < jobs.size(); begin += width) {
      const std::size_t end = std::min(begin + width, jobs.size());
      std::vector<std::future<Run>> futs;
      for (std::size_t i = begin; i < end; ++i)
        futs.push_back(std::async(std::launch::async, [&, i] {
          const auto& s = jobs[i];
          const cplx omega_n = f.g * std::sqrt(double(s.n));
          return Run{s.n, integrate_upper(bath, omega_n, p.detuning, s.c0, s.a0, samples, dt)};
        }));
      for (std::size_t i = begin; i < end; ++i) runs[i] = futs[i - begin].get();
    }
    double norm0 = 0.0;
    for (const auto& s : jobs) norm0 += std::norm(s.c0) + std::norm(s.a0);
    // Sector amplitudes indexed by n for the cross terms; ascending merge.
    for (std::size_t si = 0; si < samples.size(); ++si) {
      std::vector<cplx> c(std::size_t(n_max) + 2), a(std::size_t(n_max) + 2);
      double rr = 0.0, norm_s = 0.0;
      for (const auto& r : runs) {
        c[std::size_t(r.n)] = r.tr.c[si];
        a[std::size_t(r.n)] = r.tr.a[si];
        rr += r.tr.bath_population[si];
        norm_s += std::norm(r.tr.c[si]) + std::norm(r.tr.a[si]) + r.tr.bath_population[si];
      }
      double pp = 0.0, qq = 0.0;
      cplx pq{};
      for (int n = 0; n <= n_max + 1; ++n) {
        pp += std::norm(c[std::size_t(n)]);
        qq += std::norm(a[std::size_t(n)]);
        if (n <= n_max) pq += std::conj(c[std::size_t(n) + 1]) * a[std::size_t(n)];
      }
      DensityMatrix3 rho;
      rho.basis = {"c", "a", "b"};
      rho.at(0, 0) = pp;
      rho.at(1, 1) = qq;
      rho.at(0, 1) = pq;
      rho.at(1, 0) = std::conj(pq);
      rho.at(2, 2) = rr;
      out.rho[si] = rho;
      out.norm_drift = std::max(out.norm_drift, std::abs(norm_s - norm0));
    }
    return out;
  }

  // Lower scheme: one dressed bath problem per photon sector.
  if (std::norm(init.c0) > 0.0 || std::abs(std::norm(init.a0) - 1.0) > 1e-9)
    throw std::invalid_argument("lower scheme starts from the decaying level: (c0, a0) = (0, 1)");
  std::vector<LowerSector> jobs;
  for (int n = 0; n <= n_max; ++n) {
    if (std::norm(w[std::size_t(n)]) < 1e-14) continue;
    jobs.push_back({n, w[std::size_t(n)] * init.a0});
  }
  struct Run {
    int n;
    LowerOracleTrajectory tr;
  };
  const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
  std::vector<Run> runs(jobs.size());
  for (std::size_t begin = 0; begin < jobs.size(); begin += width) {
    const std::size_t end = std::min(begin + width, jobs.size());
    std::vector<std::future<Run>> futs;
    for (std::size_t i = begin; i < end; ++i)
      futs.push_back(std::async(std::launch::async, [&, i] {
        const auto& s = jobs[i];
        const auto d = dressed_basis(p.detuning, f.g * std::sqrt(double(s.n)));
        return Run{s.n, integrate_lower(bath, d, s.a0, samples, dt)};
      }));
    for (std::size_t i = begin; i < end; ++i) runs[i] = futs[i - begin].get();
  }
  double norm0 = 0.0;
  for (const auto& s : jobs) norm0 += std::norm(s.a0);
  for (std::size_t si = 0; si < samples.size(); ++si) {
    double p00 = 0.0, p11 = 0.0, p22 = 0.0;
    cplx rq{};
    for (const auto& r : runs) {
      p00 += std::norm(r.tr.a[si]);
      p11 += r.tr.plus_population[si];
      p22 += r.tr.minus_population[si];
      rq += r.tr.cross_coherence[si];
    }
    DensityMatrix3 rho;
    rho.basis = {"a", "chi+", "chi-"};
    rho.at(0, 0) = p00;
    rho.at(1, 1) = p11;
    rho.at(2, 2) = p22;
    rho.at(2, 1) = rq;
    rho.at(1, 2) = std::conj(rq);
    out.rho[si] = rho;
    out.norm_drift = std::max(out.norm_drift, std::abs(p00 + p11 + p22 - norm0));
  }
  return out;
}

}  // namespace tla
