#pragma once

#include <array>
#include <string>

#include "spinmech/geometry.hpp"
#include "spinmech/magnetostatics.hpp"
#include "spinmech/mechanics.hpp"
#include "spinmech/nv_spin.hpp"
#include "spinmech/spectral.hpp"

namespace spinmech {

// Full experiment description, loaded from JSON. All config frequencies
// are cycles per second (Hz); angular conversion happens internally.
struct SystemConfig {
  MagnetModel magnet;
  double remanence = 1.4; // T, used when the moment is not given explicitly

  QubitModel qubit;
  double dip_depth = 0.3;  // ESR dip contrast
  double linewidth = 4e6;  // Hz FWHM

  std::array<ModeParams, 2> modes{};
  Vec3 plane_origin = Vec3::Zero(); // oscillation plane embedded in 3-space
  Vec3 plane_e1 = Vec3::UnitX();
  Vec3 plane_e2 = Vec3::UnitY();
  double temperature = 300.0; // K

  DriveSpec drive;
  struct SweepGrid {
    double min = 5.7e6; // Hz
    double max = 6.6e6; // Hz
    int points = 91;
  } sweep;

  struct Dynamics {
    bool track_drive = true; // Omega_R := Omega_d
    double rabi = 6.29e6;    // Hz, used when tracking is off
    double detuning = 0.0;   // Hz
    double phase = 0.0;      // rad
    double duration = 40e-6; // s
    double dt = 2e-9;        // s
    int sample_stride = 8;
  } dynamics;

  struct Analysis {
    int pad_factor = 8;
    double search_band = 0.0; // Hz, 0 = auto
    bool phase_average = true;
  } analysis;

  struct Scan {
    PlaneSpec plane;
    GridSpec grid;
    double mw_frequency = 2.87e9; // Hz, for resonance images
  } scan;

  // Optional explicit coupling vector (rad/s per m along the plane basis);
  // when absent the dipole model provides it at the qubit rest position.
  bool coupling_explicit = false;
  CouplingVector coupling{};

  std::string config_hash; // FNV-1a of the canonical serialized form
  std::string canonical;   // defaults-filled canonical JSON text

  // Coupling vector actually in effect for dynamics recipes.
  CouplingVector effective_coupling(double fd_step = 1e-9) const;

  TripletSettings triplet_settings() const;
};

SystemConfig load_config(const std::string& path);
SystemConfig parse_config(const std::string& json_text);

} // namespace spinmech
