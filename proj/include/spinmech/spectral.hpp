#pragma once

#include <array>
#include <complex>
#include <vector>

#include "spinmech/bloch.hpp"
#include "spinmech/mechanics.hpp"
#include "spinmech/nv_spin.hpp"

namespace spinmech {

// One-sided magnitude spectrum on a uniform frequency grid f_k = k * df.
struct Spectrum {
  double df = 0.0; // Hz
  std::vector<double> magnitude;

  double frequency(size_t k) const { return k * df; }
  size_t size() const { return magnitude.size(); }
};

struct ComplexSpectrum {
  double df = 0.0;
  std::vector<std::complex<double>> bins;
};

// Magnitude DFT of the mean-subtracted series, zero-padded by pad_factor
// (rounded up to a power of two), one-sided. Throws NonUniformSampling if
// the time grid is not uniform.
Spectrum rabi_spectrum(const std::vector<double>& times, const std::vector<double>& values,
                       int pad_factor = 8);
Spectrum rabi_spectrum(double sample_dt, const std::vector<double>& values, int pad_factor = 8);
ComplexSpectrum rabi_spectrum_complex(double sample_dt, const std::vector<double>& values,
                                      int pad_factor = 8);

enum class TripletQuality { good, degraded };

struct TripletFit {
  double center = 0.0;     // Hz
  double separation = 0.0; // Hz, sideband-to-sideband
  std::array<double, 3> amplitudes{}; // lower, center, upper
  TripletQuality quality = TripletQuality::degraded;
};

// Center = local maximum nearest drive_freq; sidebands = strongest
// symmetric pair of local maxima inside [drive_freq - band/2, + band/2].
// Sub-bin refinement by 3-point quadratic interpolation.
TripletFit detect_triplet(const Spectrum& spec, double drive_freq, double band);

// Dressed-state splitting ((Omega_d - Omega_R)^2 + depth^2/4)^{1/2}; the
// sidebands sit at Omega_d +- this, full separation twice it. Any single
// frequency unit, used here in Hz.
double mollow_splitting(double drive_freq, double rabi_freq, double depth);

// Parametric modulation depth |sum_m chi_m (dF·e_m)(e_m·lambda)| of the
// driven two-mode response, returned in Hz.
double modulation_depth(const std::array<ModeParams, 2>& modes, const DriveSpec& drive,
                        const CouplingVector& coupling);

// Refines the central line position by fitting a damped-line model
// A/(gamma + 2pi i (f - fc)) plus a slowly varying complex background to
// the complex spectrum inside [f0 - half_band, f0 + half_band]. Immune to
// the apex pull that sideband tails exert on the magnitude peak.
double fit_center_line(const ComplexSpectrum& spec, double f0, double half_band,
                       double gamma_guess_hz);

// Settings for a simulated triplet measurement (Bloch integration + FFT).
struct TripletSettings {
  double gamma_spin = 100e3;  // Hz
  double detuning = 0.0;      // static MW detuning, Hz
  double duration = 40e-6;    // s
  double dt = 2e-9;           // s
  int sample_stride = 8;
  int pad_factor = 8;
  bool phase_average = true;  // average over 4 drive phases
  double phase = 0.0;         // used when phase_average is off
  double search_band = 0.0;   // Hz; 0 = auto from the predicted splitting
};

struct TripletAnalysis {
  Spectrum spectrum;          // phase-averaged (rms) magnitude
  ComplexSpectrum coherent;   // phase-averaged complex spectrum
  TripletFit fit;
  double refined_center = 0.0; // Hz, from fit_center_line
};

// Full pipeline: integrate the Bloch equations at (rabi, drive, depth),
// all in Hz, and extract the triplet from the phase-averaged spectrum.
TripletAnalysis analyze_triplet(double rabi_freq, double drive_freq, double depth,
                                const TripletSettings& settings);

struct SweepPoint {
  double drive_freq = 0.0;  // Hz
  double depth = 0.0;       // Hz
  double sideband_lo = 0.0; // Hz, drive - depth/2
  double sideband_hi = 0.0; // Hz, drive + depth/2
  bool simulated = false;
  TripletFit fit{};
};

struct SweepSettings {
  bool simulate = false;
  TripletSettings dynamics{};
  int threads = 1;
};

// Drive-frequency sweep across both eigenmodes with constant force
// amplitude and Omega_R tracked to Omega_d. drive.omega is ignored;
// drive_freqs are in Hz.
std::vector<SweepPoint> bimodal_sweep(const std::array<ModeParams, 2>& modes,
                                      const DriveSpec& drive, const CouplingVector& coupling,
                                      const std::vector<double>& drive_freqs,
                                      const SweepSettings& settings);

// Derived coupling scales. lambda_mag in rad/s per m, results in Hz / m.
double quantum_coupling_rate(double lambda_mag, const ModeParams& mode);           // g_z, Hz
double thermal_modulation(double lambda_mag, const ModeParams& mode, double temp); // Hz
double mollow_resolution_length(double gamma_spin_hz, double lambda_mag);          // m

} // namespace spinmech
