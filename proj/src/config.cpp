#include "spinmech/config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "spinmech/constants.hpp"
#include "spinmech/errors.hpp"

namespace spinmech {

namespace {

using nlohmann::json;

// Collects violations with their key paths so a single load reports
// everything that is wrong at once.
struct Checker {
  std::vector<std::string> violations;

  void require(bool ok, const std::string& path, const std::string& msg) {
    if (!ok) violations.push_back(path + ": " + msg);
  }

  void reject_unknown(const json& node, const std::string& path,
                      const std::set<std::string>& allowed) {
    if (!node.is_object()) return;
    for (const auto& [key, _] : node.items()) {
      if (!allowed.count(key)) violations.push_back(path + "." + key + ": unknown key");
    }
  }
};

Vec3 get_vec3(const json& node, const std::string& path, Checker& chk, const Vec3& fallback) {
  if (!node.is_array() || node.size() != 3) {
    chk.require(false, path, "expected an array of 3 numbers");
    return fallback;
  }
  return Vec3(node[0].get<double>(), node[1].get<double>(), node[2].get<double>());
}

Vec2 get_vec2(const json& node, const std::string& path, Checker& chk, const Vec2& fallback) {
  if (!node.is_array() || node.size() != 2) {
    chk.require(false, path, "expected an array of 2 numbers");
    return fallback;
  }
  return Vec2(node[0].get<double>(), node[1].get<double>());
}

template <typename T>
T get_or(const json& node, const std::string& key, T fallback) {
  if (node.contains(key)) return node.at(key).get<T>();
  return fallback;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

ModeParams parse_mode(const json& node, const std::string& path, Checker& chk) {
  chk.reject_unknown(node, path, {"frequency_hz", "damping_hz", "mass_kg", "orientation"});
  ModeParams mode;
  mode.omega = constants::two_pi * get_or(node, "frequency_hz", 6e6);
  mode.damping = constants::two_pi * get_or(node, "damping_hz", 180e3);
  mode.mass = get_or(node, "mass_kg", 1e-15);
  if (node.contains("orientation"))
    mode.orientation = get_vec2(node.at("orientation"), path + ".orientation", chk, Vec2::UnitX());
  chk.require(mode.omega > 0.0, path + ".frequency_hz", "must be positive");
  chk.require(mode.damping > 0.0, path + ".damping_hz", "must be positive");
  chk.require(mode.mass > 0.0, path + ".mass_kg", "must be positive");
  chk.require(std::abs(mode.orientation.norm() - 1.0) <= 1e-9, path + ".orientation",
              "must be a unit vector");
  return mode;
}

json canonical_json(const SystemConfig& c) {
  json j;
  j["magnet"]["position"] = {c.magnet.position.x(), c.magnet.position.y(), c.magnet.position.z()};
  j["magnet"]["moment"] = {c.magnet.moment.x(), c.magnet.moment.y(), c.magnet.moment.z()};
  j["magnet"]["radius_m"] = c.magnet.radius;
  j["magnet"]["remanence_t"] = c.remanence;
  j["qubit"]["zero_field_splitting_hz"] = c.qubit.zero_field_splitting;
  j["qubit"]["gyromagnetic_ratio_hz_per_t"] = c.qubit.gyromagnetic_ratio;
  j["qubit"]["axis"] = {c.qubit.quantization_axis.x(), c.qubit.quantization_axis.y(),
                        c.qubit.quantization_axis.z()};
  j["qubit"]["branch"] = c.qubit.branch == Branch::upper ? "upper" : "lower";
  j["qubit"]["rest_position"] = {c.qubit.rest_position.x(), c.qubit.rest_position.y(),
                                 c.qubit.rest_position.z()};
  j["qubit"]["gamma_spin_hz"] = c.qubit.decay_rate;
  j["qubit"]["dip_depth"] = c.dip_depth;
  j["qubit"]["linewidth_hz"] = c.linewidth;
  for (int m = 0; m < 2; ++m) {
    json jm;
    jm["frequency_hz"] = c.modes[m].omega / constants::two_pi;
    jm["damping_hz"] = c.modes[m].damping / constants::two_pi;
    jm["mass_kg"] = c.modes[m].mass;
    jm["orientation"] = {c.modes[m].orientation.x(), c.modes[m].orientation.y()};
    j["mechanics"]["modes"].push_back(jm);
  }
  j["mechanics"]["plane_origin"] = {c.plane_origin.x(), c.plane_origin.y(), c.plane_origin.z()};
  j["mechanics"]["plane_e1"] = {c.plane_e1.x(), c.plane_e1.y(), c.plane_e1.z()};
  j["mechanics"]["plane_e2"] = {c.plane_e2.x(), c.plane_e2.y(), c.plane_e2.z()};
  j["mechanics"]["temperature_k"] = c.temperature;
  j["drive"]["force_n"] = c.drive.force;
  j["drive"]["direction"] = {c.drive.direction.x(), c.drive.direction.y()};
  j["drive"]["frequency_hz"] = c.drive.omega / constants::two_pi;
  j["drive"]["phase_rad"] = c.drive.phase;
  j["drive"]["sweep"] = {{"min_hz", c.sweep.min}, {"max_hz", c.sweep.max},
                         {"points", c.sweep.points}};
  j["dynamics"] = {{"track_drive", c.dynamics.track_drive}, {"rabi_hz", c.dynamics.rabi},
                   {"detuning_hz", c.dynamics.detuning}, {"phase_rad", c.dynamics.phase},
                   {"duration_s", c.dynamics.duration}, {"dt_s", c.dynamics.dt},
                   {"sample_stride", c.dynamics.sample_stride}};
  j["analysis"] = {{"pad_factor", c.analysis.pad_factor},
                   {"search_band_hz", c.analysis.search_band},
                   {"phase_average", c.analysis.phase_average}};
  j["scan"] = {{"origin", {c.scan.plane.origin.x(), c.scan.plane.origin.y(),
                           c.scan.plane.origin.z()}},
               {"e1", {c.scan.plane.e1.x(), c.scan.plane.e1.y(), c.scan.plane.e1.z()}},
               {"e2", {c.scan.plane.e2.x(), c.scan.plane.e2.y(), c.scan.plane.e2.z()}},
               {"nu", c.scan.grid.nu},
               {"nv", c.scan.grid.nv},
               {"u_min", c.scan.grid.u_min},
               {"u_max", c.scan.grid.u_max},
               {"v_min", c.scan.grid.v_min},
               {"v_max", c.scan.grid.v_max},
               {"mw_frequency_hz", c.scan.mw_frequency}};
  if (c.coupling_explicit)
    j["coupling"]["lambda_rad_per_s_per_m"] = {c.coupling.lambda.x(), c.coupling.lambda.y()};
  return j;
}

} // namespace

SystemConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config parse error: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("config root must be a JSON object");

  Checker chk;
  chk.reject_unknown(root, "config",
                     {"magnet", "qubit", "mechanics", "drive", "dynamics", "analysis", "scan",
                      "coupling"});

  SystemConfig c;

  const json magnet = root.value("magnet", json::object());
  chk.reject_unknown(magnet, "magnet",
                     {"position", "easy_axis", "radius_m", "remanence_t", "moment"});
  c.magnet.radius = get_or(magnet, "radius_m", 9e-6);
  c.remanence = get_or(magnet, "remanence_t", 1.4);
  Vec3 easy_axis = Vec3::UnitZ();
  if (magnet.contains("position"))
    c.magnet.position = get_vec3(magnet.at("position"), "magnet.position", chk, Vec3::Zero());
  if (magnet.contains("easy_axis"))
    easy_axis = get_vec3(magnet.at("easy_axis"), "magnet.easy_axis", chk, Vec3::UnitZ());
  chk.require(c.magnet.radius > 0.0, "magnet.radius_m", "must be positive");
  chk.require(c.remanence >= 0.0, "magnet.remanence_t", "must be non-negative");
  if (magnet.contains("moment")) {
    c.magnet.moment = get_vec3(magnet.at("moment"), "magnet.moment", chk, Vec3::Zero());
  } else if (c.magnet.radius > 0.0 && c.remanence >= 0.0) {
    c.magnet.moment = calibrate_moment(c.magnet.radius, c.remanence, easy_axis);
  }

  const json qubit = root.value("qubit", json::object());
  chk.reject_unknown(qubit, "qubit",
                     {"zero_field_splitting_hz", "gyromagnetic_ratio_hz_per_t", "axis", "branch",
                      "rest_position", "gamma_spin_hz", "dip_depth", "linewidth_hz"});
  c.qubit.zero_field_splitting = get_or(qubit, "zero_field_splitting_hz", 2.870e9);
  c.qubit.gyromagnetic_ratio = get_or(qubit, "gyromagnetic_ratio_hz_per_t", 28.0e9);
  if (qubit.contains("axis"))
    c.qubit.quantization_axis = get_vec3(qubit.at("axis"), "qubit.axis", chk, Vec3::UnitZ());
  const std::string branch = get_or<std::string>(qubit, "branch", "upper");
  chk.require(branch == "upper" || branch == "lower", "qubit.branch",
              "must be 'upper' or 'lower'");
  c.qubit.branch = branch == "lower" ? Branch::lower : Branch::upper;
  if (qubit.contains("rest_position"))
    c.qubit.rest_position =
        get_vec3(qubit.at("rest_position"), "qubit.rest_position", chk, Vec3::Zero());
  c.qubit.decay_rate = get_or(qubit, "gamma_spin_hz", 100e3);
  c.dip_depth = get_or(qubit, "dip_depth", 0.3);
  c.linewidth = get_or(qubit, "linewidth_hz", 4e6);
  chk.require(c.qubit.zero_field_splitting > 0.0, "qubit.zero_field_splitting_hz",
              "must be positive");
  chk.require(c.qubit.gyromagnetic_ratio > 0.0, "qubit.gyromagnetic_ratio_hz_per_t",
              "must be positive");
  chk.require(std::abs(c.qubit.quantization_axis.norm() - 1.0) <= 1e-12 ||
                  c.qubit.quantization_axis.norm() > 0.0,
              "qubit.axis", "must be a non-zero vector");
  c.qubit.quantization_axis.normalize();
  chk.require(c.qubit.decay_rate >= 0.0, "qubit.gamma_spin_hz", "must be non-negative");
  chk.require(c.dip_depth >= 0.0 && c.dip_depth <= 1.0, "qubit.dip_depth", "must be in [0,1]");
  chk.require(c.linewidth > 0.0, "qubit.linewidth_hz", "must be positive");

  const json mech = root.value("mechanics", json::object());
  chk.reject_unknown(mech, "mechanics",
                     {"modes", "plane_origin", "plane_e1", "plane_e2", "temperature_k"});
  // paper-scale defaults: 5.99 / 6.29 MHz, 180 / 190 kHz, 1e-15 kg
  json modes = mech.value("modes", json::array());
  if (modes.size() == 0) {
    modes = json::array({{{"frequency_hz", 5.99e6}, {"damping_hz", 180e3}},
                         {{"frequency_hz", 6.29e6}, {"damping_hz", 190e3},
                          {"orientation", {0.0, 1.0}}}});
  }
  chk.require(modes.size() == 2, "mechanics.modes", "exactly two modes required");
  if (modes.size() == 2) {
    c.modes[0] = parse_mode(modes[0], "mechanics.modes[0]", chk);
    c.modes[1] = parse_mode(modes[1], "mechanics.modes[1]", chk);
    if (!modes[0].contains("orientation")) c.modes[0].orientation = Vec2::UnitX();
    if (!modes[1].contains("orientation")) c.modes[1].orientation = Vec2::UnitY();
    chk.require(std::abs(c.modes[0].orientation.dot(c.modes[1].orientation)) <= 1e-9,
                "mechanics.modes", "mode orientations must be orthogonal");
  }
  if (mech.contains("plane_origin"))
    c.plane_origin = get_vec3(mech.at("plane_origin"), "mechanics.plane_origin", chk, Vec3::Zero());
  if (mech.contains("plane_e1"))
    c.plane_e1 = get_vec3(mech.at("plane_e1"), "mechanics.plane_e1", chk, Vec3::UnitX());
  if (mech.contains("plane_e2"))
    c.plane_e2 = get_vec3(mech.at("plane_e2"), "mechanics.plane_e2", chk, Vec3::UnitY());
  c.temperature = get_or(mech, "temperature_k", 300.0);
  chk.require(c.temperature >= 0.0, "mechanics.temperature_k", "must be non-negative");

  const json drive = root.value("drive", json::object());
  chk.reject_unknown(drive, "drive", {"force_n", "direction", "frequency_hz", "phase_rad",
                                      "sweep"});
  c.drive.force = get_or(drive, "force_n", 0.0);
  if (drive.contains("direction"))
    c.drive.direction = get_vec2(drive.at("direction"), "drive.direction", chk, Vec2::UnitX());
  c.drive.omega = constants::two_pi * get_or(drive, "frequency_hz", 6.29e6);
  c.drive.phase = get_or(drive, "phase_rad", 0.0);
  chk.require(c.drive.force >= 0.0, "drive.force_n", "must be non-negative");
  const double dirnorm = c.drive.direction.norm();
  chk.require(dirnorm > 0.0, "drive.direction", "must be non-zero");
  if (dirnorm > 0.0) c.drive.direction /= dirnorm;
  const json sweep = drive.value("sweep", json::object());
  chk.reject_unknown(sweep, "drive.sweep", {"min_hz", "max_hz", "points"});
  c.sweep.min = get_or(sweep, "min_hz", 5.7e6);
  c.sweep.max = get_or(sweep, "max_hz", 6.6e6);
  c.sweep.points = get_or(sweep, "points", 91);
  chk.require(c.sweep.max > c.sweep.min, "drive.sweep", "max_hz must exceed min_hz");
  chk.require(c.sweep.points >= 2, "drive.sweep.points", "must be >= 2");

  const json dyn = root.value("dynamics", json::object());
  chk.reject_unknown(dyn, "dynamics",
                     {"track_drive", "rabi_hz", "detuning_hz", "phase_rad", "duration_s", "dt_s",
                      "sample_stride"});
  c.dynamics.track_drive = get_or(dyn, "track_drive", true);
  c.dynamics.rabi = get_or(dyn, "rabi_hz", 6.29e6);
  c.dynamics.detuning = get_or(dyn, "detuning_hz", 0.0);
  c.dynamics.phase = get_or(dyn, "phase_rad", 0.0);
  c.dynamics.duration = get_or(dyn, "duration_s", 40e-6);
  c.dynamics.dt = get_or(dyn, "dt_s", 2e-9);
  c.dynamics.sample_stride = get_or(dyn, "sample_stride", 8);
  chk.require(c.dynamics.rabi >= 0.0, "dynamics.rabi_hz", "must be non-negative");
  chk.require(c.dynamics.duration > 0.0, "dynamics.duration_s", "must be positive");
  chk.require(c.dynamics.dt > 0.0, "dynamics.dt_s", "must be positive");
  chk.require(c.dynamics.sample_stride >= 1, "dynamics.sample_stride", "must be >= 1");

  const json analysis = root.value("analysis", json::object());
  chk.reject_unknown(analysis, "analysis", {"pad_factor", "search_band_hz", "phase_average"});
  c.analysis.pad_factor = get_or(analysis, "pad_factor", 8);
  c.analysis.search_band = get_or(analysis, "search_band_hz", 0.0);
  c.analysis.phase_average = get_or(analysis, "phase_average", true);
  chk.require(c.analysis.pad_factor >= 1, "analysis.pad_factor", "must be >= 1");

  const json scan = root.value("scan", json::object());
  chk.reject_unknown(scan, "scan", {"origin", "e1", "e2", "nu", "nv", "u_min", "u_max", "v_min",
                                    "v_max", "mw_frequency_hz"});
  if (scan.contains("origin"))
    c.scan.plane.origin = get_vec3(scan.at("origin"), "scan.origin", chk, Vec3::Zero());
  if (scan.contains("e1")) c.scan.plane.e1 = get_vec3(scan.at("e1"), "scan.e1", chk, Vec3::UnitX());
  if (scan.contains("e2")) c.scan.plane.e2 = get_vec3(scan.at("e2"), "scan.e2", chk, Vec3::UnitY());
  c.scan.grid.nu = get_or(scan, "nu", 64);
  c.scan.grid.nv = get_or(scan, "nv", 64);
  c.scan.grid.u_min = get_or(scan, "u_min", -10e-6);
  c.scan.grid.u_max = get_or(scan, "u_max", 10e-6);
  c.scan.grid.v_min = get_or(scan, "v_min", -10e-6);
  c.scan.grid.v_max = get_or(scan, "v_max", 10e-6);
  c.scan.mw_frequency = get_or(scan, "mw_frequency_hz", 2.87e9);
  chk.require(c.scan.grid.nu >= 2 && c.scan.grid.nv >= 2, "scan", "grid must be at least 2x2");
  chk.require(c.scan.mw_frequency > 0.0, "scan.mw_frequency_hz", "must be positive");

  if (root.contains("coupling")) {
    const json coupling = root.at("coupling");
    chk.reject_unknown(coupling, "coupling", {"lambda_rad_per_s_per_m", "lambda_mhz_per_nm"});
    if (coupling.contains("lambda_mhz_per_nm")) {
      const Vec2 v = get_vec2(coupling.at("lambda_mhz_per_nm"), "coupling.lambda_mhz_per_nm", chk,
                              Vec2::Zero());
      c.coupling.lambda = constants::two_pi * 1e15 * v; // MHz/nm -> rad/s per m
      c.coupling_explicit = true;
    } else if (coupling.contains("lambda_rad_per_s_per_m")) {
      c.coupling.lambda = get_vec2(coupling.at("lambda_rad_per_s_per_m"),
                                   "coupling.lambda_rad_per_s_per_m", chk, Vec2::Zero());
      c.coupling_explicit = true;
    } else {
      chk.require(false, "coupling", "needs lambda_mhz_per_nm or lambda_rad_per_s_per_m");
    }
  }

  // dt invariant: >= 50 steps per fastest configured cycle
  {
    const double rabi = c.dynamics.track_drive
                            ? std::max(c.dynamics.rabi, c.sweep.max)
                            : c.dynamics.rabi;
    const double fastest = std::max({rabi, c.drive.omega / constants::two_pi,
                                     std::abs(c.dynamics.detuning)});
    chk.require(c.dynamics.dt * fastest <= 0.02, "dynamics.dt_s",
                "too large: fewer than 50 steps per fastest cycle");
  }

  if (!chk.violations.empty()) throw ValidationError(chk.violations);

  c.canonical = canonical_json(c).dump();
  c.config_hash = fnv1a_hex(c.canonical);
  return c;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

CouplingVector SystemConfig::effective_coupling(double fd_step) const {
  if (coupling_explicit) return coupling;
  return coupling_vector_at(qubit, magnet, qubit.rest_position, plane_e1, plane_e2, fd_step);
}

TripletSettings SystemConfig::triplet_settings() const {
  TripletSettings s;
  s.gamma_spin = qubit.decay_rate;
  s.detuning = dynamics.detuning;
  s.duration = dynamics.duration;
  s.dt = dynamics.dt;
  s.sample_stride = dynamics.sample_stride;
  s.pad_factor = analysis.pad_factor;
  s.phase_average = analysis.phase_average;
  s.phase = dynamics.phase;
  s.search_band = analysis.search_band;
  return s;
}

} // namespace spinmech
