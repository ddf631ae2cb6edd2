#include "spinmech/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "spinmech/constants.hpp"
#include "spinmech/errors.hpp"
#include "spinmech/parallel.hpp"

namespace spinmech {

namespace {

using cd = std::complex<double>;

// In-place iterative radix-2 FFT.
void fft(std::vector<cd>& a) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -constants::two_pi / static_cast<double>(len);
    const cd wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      cd w(1.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const cd u = a[i + k];
        const cd v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

size_t next_pow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<cd> padded_dft(double sample_dt, const std::vector<double>& values, int pad_factor,
                           double* df_out) {
  if (values.size() < 64) throw std::invalid_argument("spectrum needs at least 64 samples");
  if (sample_dt <= 0.0) throw NonUniformSampling("sample spacing must be positive");
  if (pad_factor < 1) throw std::invalid_argument("pad_factor must be >= 1");
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  std::vector<cd> buf(next_pow2(values.size() * static_cast<size_t>(pad_factor)), cd(0.0));
  for (size_t i = 0; i < values.size(); ++i) buf[i] = values[i] - mean;
  fft(buf);
  *df_out = 1.0 / (static_cast<double>(buf.size()) * sample_dt);
  return buf;
}

// 3-point quadratic apex through (f[i-1..i+1], y): returns (freq, height).
std::pair<double, double> quadratic_apex(const Spectrum& spec, size_t i) {
  const double a = spec.magnitude[i - 1];
  const double b = spec.magnitude[i];
  const double c = spec.magnitude[i + 1];
  const double denom = a - 2.0 * b + c;
  if (denom == 0.0) return {spec.frequency(i), b};
  const double shift = 0.5 * (a - c) / denom;
  return {spec.frequency(i) + shift * spec.df, b - 0.25 * (a - c) * shift};
}

} // namespace

Spectrum rabi_spectrum(const std::vector<double>& times, const std::vector<double>& values,
                       int pad_factor) {
  if (times.size() != values.size() || times.size() < 2)
    throw NonUniformSampling("times and values must match and hold >= 2 samples");
  const double dt = times[1] - times[0];
  for (size_t i = 1; i + 1 < times.size(); ++i) {
    const double step = times[i + 1] - times[i];
    if (std::abs(step - dt) > 1e-9 * std::max(std::abs(dt), std::abs(step)))
      throw NonUniformSampling("time grid is not uniform");
  }
  return rabi_spectrum(dt, values, pad_factor);
}

Spectrum rabi_spectrum(double sample_dt, const std::vector<double>& values, int pad_factor) {
  Spectrum out;
  const auto buf = padded_dft(sample_dt, values, pad_factor, &out.df);
  out.magnitude.resize(buf.size() / 2 + 1);
  for (size_t k = 0; k < out.magnitude.size(); ++k) out.magnitude[k] = std::abs(buf[k]);
  return out;
}

ComplexSpectrum rabi_spectrum_complex(double sample_dt, const std::vector<double>& values,
                                      int pad_factor) {
  ComplexSpectrum out;
  const auto buf = padded_dft(sample_dt, values, pad_factor, &out.df);
  out.bins.assign(buf.begin(), buf.begin() + static_cast<long>(buf.size() / 2 + 1));
  return out;
}

TripletFit detect_triplet(const Spectrum& spec, double drive_freq, double band) {
  if (spec.size() < 3 || spec.df <= 0.0)
    throw std::invalid_argument("detect_triplet needs a non-empty spectrum");
  const double f_lo = drive_freq - 0.5 * band;
  const double f_hi = drive_freq + 0.5 * band;
  if (f_lo < 0.0 || f_hi > spec.frequency(spec.size() - 1))
    throw std::invalid_argument("search band outside spectrum support");

  std::vector<size_t> maxima;
  const size_t i_lo = std::max<size_t>(1, static_cast<size_t>(std::ceil(f_lo / spec.df)));
  const size_t i_hi = std::min(spec.size() - 2, static_cast<size_t>(std::floor(f_hi / spec.df)));
  for (size_t i = i_lo; i <= i_hi; ++i) {
    if (spec.magnitude[i] > spec.magnitude[i - 1] && spec.magnitude[i] >= spec.magnitude[i + 1])
      maxima.push_back(i);
  }

  TripletFit fit;
  if (maxima.empty()) {
    fit.center = drive_freq;
    return fit;
  }

  const size_t ic = *std::min_element(maxima.begin(), maxima.end(), [&](size_t a, size_t b) {
    return std::abs(spec.frequency(a) - drive_freq) < std::abs(spec.frequency(b) - drive_freq);
  });
  const auto [fc, ac] = quadratic_apex(spec, ic);
  fit.center = fc;
  fit.amplitudes[1] = ac;

  // Strongest near-symmetric pair of side maxima around the center.
  double best_score = -1.0;
  size_t best_lo = 0, best_hi = 0;
  for (const size_t i : maxima) {
    if (spec.frequency(i) >= fc - 2.0 * spec.df) continue;
    for (const size_t j : maxima) {
      if (spec.frequency(j) <= fc + 2.0 * spec.df) continue;
      const double off_lo = fc - spec.frequency(i);
      const double off_hi = spec.frequency(j) - fc;
      const double asym = std::abs(off_hi - off_lo);
      if (asym > std::max(0.25 * 0.5 * (off_lo + off_hi), 6.0 * spec.df)) continue;
      const double score = std::min(spec.magnitude[i], spec.magnitude[j]);
      if (score > best_score) {
        best_score = score;
        best_lo = i;
        best_hi = j;
      }
    }
  }
  if (best_score < 0.0) return fit; // fewer than 3 resolvable maxima

  const auto [fl, al] = quadratic_apex(spec, best_lo);
  const auto [fh, ah] = quadratic_apex(spec, best_hi);
  fit.separation = fh - fl;
  fit.amplitudes[0] = al;
  fit.amplitudes[2] = ah;
  fit.quality = TripletQuality::good;
  return fit;
}

double mollow_splitting(double drive_freq, double rabi_freq, double depth) {
  const double det = drive_freq - rabi_freq;
  return std::sqrt(det * det + 0.25 * depth * depth);
}

double modulation_depth(const std::array<ModeParams, 2>& modes, const DriveSpec& drive,
                        const CouplingVector& coupling) {
  cd sum(0.0);
  const cd force = drive.force * std::exp(cd(0.0, drive.phase));
  for (int m = 0; m < 2; ++m) {
    const double f_proj = drive.direction.dot(modes[m].orientation);
    const double l_proj = modes[m].orientation.dot(coupling.lambda);
    sum += susceptibility(modes[m], drive.omega) * force * f_proj * l_proj;
  }
  return std::abs(sum) / constants::two_pi;
}

double fit_center_line(const ComplexSpectrum& spec, double f0, double half_band,
                       double gamma_guess_hz) {
  const size_t k_lo = static_cast<size_t>(std::max(0.0, std::ceil((f0 - half_band) / spec.df)));
  const size_t k_hi =
      std::min(spec.bins.size() - 1, static_cast<size_t>(std::floor((f0 + half_band) / spec.df)));
  const long n = static_cast<long>(k_hi - k_lo + 1);
  if (n < 8) throw std::invalid_argument("fit_center_line band too narrow");

  Eigen::VectorXd freqs(n);
  Eigen::VectorXcd data(n);
  for (long i = 0; i < n; ++i) {
    freqs(i) = (k_lo + i) * spec.df;
    data(i) = spec.bins[k_lo + i];
  }

  double fc = f0;
  double gamma = constants::two_pi * gamma_guess_hz; // angular half width
  for (int iter = 0; iter < 80; ++iter) {
    Eigen::MatrixXcd model(n, 3);
    for (long i = 0; i < n; ++i) {
      const cd denom(gamma, constants::two_pi * (freqs(i) - fc));
      model(i, 0) = 1.0 / denom;
      model(i, 1) = 1.0;
      model(i, 2) = (freqs(i) - fc) / half_band;
    }
    const Eigen::Vector3cd coef = model.colPivHouseholderQr().solve(data);
    const Eigen::VectorXcd resid = data - model * coef;

    Eigen::MatrixXd jac(2 * n, 2);
    Eigen::VectorXd rhs(2 * n);
    for (long i = 0; i < n; ++i) {
      const cd denom(gamma, constants::two_pi * (freqs(i) - fc));
      const cd d_fc = coef(0) * cd(0.0, constants::two_pi) / (denom * denom);
      const cd d_gamma = -coef(0) / (denom * denom);
      jac(2 * i, 0) = d_fc.real();
      jac(2 * i, 1) = d_gamma.real();
      jac(2 * i + 1, 0) = d_fc.imag();
      jac(2 * i + 1, 1) = d_gamma.imag();
      rhs(2 * i) = resid(i).real();
      rhs(2 * i + 1) = resid(i).imag();
    }
    const Eigen::Vector2d step = jac.colPivHouseholderQr().solve(rhs);
    fc += step(0);
    gamma += step(1);
    fc = std::clamp(fc, f0 - half_band, f0 + half_band);
    gamma = std::max(gamma, 1e-3 * constants::two_pi * gamma_guess_hz);
    if (std::abs(step(0)) < 0.05) break;
  }
  return fc;
}

TripletAnalysis analyze_triplet(double rabi_freq, double drive_freq, double depth,
                                const TripletSettings& settings) {
  RabiRun run;
  run.rabi = constants::two_pi * rabi_freq;
  run.drive_omega = constants::two_pi * drive_freq;
  run.depth = constants::two_pi * depth;
  run.detuning = constants::two_pi * settings.detuning;
  run.gamma1 = run.gamma2 = constants::two_pi * settings.gamma_spin;
  run.duration = settings.duration;
  run.dt = settings.dt;
  run.sample_stride = settings.sample_stride;

  std::vector<double> phases;
  if (settings.phase_average)
    phases = {0.0, 0.5 * constants::pi, constants::pi, 1.5 * constants::pi};
  else
    phases = {settings.phase};

  TripletAnalysis out;
  std::vector<double> power;
  for (const double phi : phases) {
    run.phase = phi;
    const TimeSeries series = integrate_rabi(run);
    const ComplexSpectrum cs =
        rabi_spectrum_complex(series.sample_dt, series.sz(), settings.pad_factor);
    if (power.empty()) {
      power.assign(cs.bins.size(), 0.0);
      out.coherent.df = cs.df;
      out.coherent.bins.assign(cs.bins.size(), cd(0.0));
    }
    for (size_t k = 0; k < cs.bins.size(); ++k) {
      power[k] += std::norm(cs.bins[k]);
      out.coherent.bins[k] += cs.bins[k];
    }
  }
  const double inv = 1.0 / static_cast<double>(phases.size());
  out.spectrum.df = out.coherent.df;
  out.spectrum.magnitude.resize(power.size());
  for (size_t k = 0; k < power.size(); ++k) {
    out.spectrum.magnitude[k] = std::sqrt(power[k] * inv);
    out.coherent.bins[k] *= inv;
  }

  double band = settings.search_band;
  if (band <= 0.0)
    band = 4.4 * mollow_splitting(drive_freq, rabi_freq, depth) + 2e6;
  band = std::min(band, 2.0 * std::min(drive_freq, out.spectrum.frequency(out.spectrum.size() - 1) -
                                                       drive_freq));
  out.fit = detect_triplet(out.spectrum, drive_freq, band);
  out.refined_center =
      fit_center_line(out.coherent, drive_freq, 3.5e5, settings.gamma_spin);
  return out;
}

std::vector<SweepPoint> bimodal_sweep(const std::array<ModeParams, 2>& modes,
                                      const DriveSpec& drive, const CouplingVector& coupling,
                                      const std::vector<double>& drive_freqs,
                                      const SweepSettings& settings) {
  std::vector<SweepPoint> points(drive_freqs.size());
  parallel_for(static_cast<long>(drive_freqs.size()), settings.threads, [&](long i) {
    const double f = drive_freqs[i];
    DriveSpec d = drive;
    d.omega = constants::two_pi * f;
    SweepPoint& p = points[i];
    p.drive_freq = f;
    p.depth = modulation_depth(modes, d, coupling);
    p.sideband_lo = f - 0.5 * p.depth;
    p.sideband_hi = f + 0.5 * p.depth;
    if (settings.simulate) {
      p.simulated = true;
      p.fit = analyze_triplet(f, f, p.depth, settings.dynamics).fit;
    }
  });
  return points;
}

double quantum_coupling_rate(double lambda_mag, const ModeParams& mode) {
  return lambda_mag * zero_point(mode) / constants::two_pi;
}

double thermal_modulation(double lambda_mag, const ModeParams& mode, double temp) {
  return lambda_mag * thermal_spread(mode, temp) / constants::two_pi;
}

double mollow_resolution_length(double gamma_spin_hz, double lambda_mag) {
  if (lambda_mag <= 0.0) throw DivisionByZeroCoupling("coupling magnitude must be positive");
  return constants::two_pi * gamma_spin_hz / lambda_mag;
}

} // namespace spinmech
