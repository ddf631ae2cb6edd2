#include "spinmech/orchestrator.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "spinmech/constants.hpp"
#include "spinmech/errors.hpp"
#include "spinmech/parallel.hpp"

namespace spinmech {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::ofstream open_output(const fs::path& path, const SystemConfig& config) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  out << std::setprecision(17);
  out << "# config_hash=" << config.config_hash << " version=" << tool_version << "\n";
  return out;
}

json map_header(const SystemConfig& config, const ScalarMap& map, const std::string& units) {
  json j;
  j["config_hash"] = config.config_hash;
  j["units"] = units;
  j["grid"] = {{"nu", map.grid.nu},       {"nv", map.grid.nv},     {"u_min", map.grid.u_min},
               {"u_max", map.grid.u_max}, {"v_min", map.grid.v_min}, {"v_max", map.grid.v_max}};
  j["plane"] = {{"origin", {map.plane.origin.x(), map.plane.origin.y(), map.plane.origin.z()}},
                {"e1", {map.plane.e1.x(), map.plane.e1.y(), map.plane.e1.z()}},
                {"e2", {map.plane.e2.x(), map.plane.e2.y(), map.plane.e2.z()}}};
  j["parameters"] = {{"zero_field_splitting_hz", config.qubit.zero_field_splitting},
                     {"gyromagnetic_ratio_hz_per_t", config.qubit.gyromagnetic_ratio},
                     {"mw_frequency_hz", config.scan.mw_frequency},
                     {"linewidth_hz", config.linewidth},
                     {"dip_depth", config.dip_depth}};
  return j;
}

void write_scalar_map(const fs::path& csv_path, const fs::path& json_path,
                      const SystemConfig& config, const ScalarMap& map, const std::string& units) {
  auto out = open_output(csv_path, config);
  out << "x,y,value\n";
  for (int i = 0; i < map.grid.nu; ++i)
    for (int j = 0; j < map.grid.nv; ++j)
      out << map.grid.u(i) << "," << map.grid.v(j) << "," << map.values[map.grid.index(i, j)]
          << "\n";
  std::ofstream hdr(json_path);
  hdr << map_header(config, map, units).dump(2) << "\n";
}

std::vector<double> sweep_grid(const SystemConfig& config) {
  std::vector<double> freqs(config.sweep.points);
  for (int i = 0; i < config.sweep.points; ++i)
    freqs[i] = config.sweep.min +
               (config.sweep.max - config.sweep.min) * i / (config.sweep.points - 1);
  return freqs;
}

double drive_frequency(const SystemConfig& config) {
  return config.drive.omega / constants::two_pi;
}

// Rabi frequency actually used by dynamics recipes (tracking policy).
double rabi_frequency(const SystemConfig& config) {
  return config.dynamics.track_drive ? drive_frequency(config) : config.dynamics.rabi;
}

json scales_json(const SystemConfig& config) {
  const CouplingVector coupling = config.effective_coupling();
  const double lambda = coupling.magnitude();
  const ModeParams& mode = config.modes[1]; // resonantly driven mode
  json j;
  j["delta_x_th_mode1_m"] = thermal_spread(config.modes[0], config.temperature);
  j["delta_x_th_mode2_m"] = thermal_spread(mode, config.temperature);
  j["delta_x_q_mode1_m"] = zero_point(config.modes[0]);
  j["delta_x_q_mode2_m"] = zero_point(mode);
  j["lambda_rad_per_s_per_m"] = lambda;
  j["lambda_mhz_per_nm"] = lambda / constants::two_pi / 1e15;
  j["delta_omega0_th_hz"] = thermal_modulation(lambda, mode, config.temperature);
  j["g_z_hz"] = quantum_coupling_rate(lambda, mode);
  j["delta_r_mollow_m"] =
      lambda > 0.0 ? mollow_resolution_length(config.qubit.decay_rate, lambda) : 0.0;
  return j;
}

void write_manifest(const fs::path& dir, const SystemConfig& config,
                    const std::vector<std::string>& files) {
  json j;
  j["config_hash"] = config.config_hash;
  j["tool_version"] = tool_version;
  j["input_digest"] = config.config_hash;
  const auto now = std::chrono::system_clock::now();
  j["timestamp_unix"] = std::chrono::duration_cast<std::chrono::seconds>(
                            now.time_since_epoch()).count();
  j["files"] = files;
  std::ofstream out(dir / "run_manifest.json");
  out << j.dump(2) << "\n";
}

} // namespace

std::vector<std::string> run_subcommand(const std::string& name, const SystemConfig& config,
                                        const std::string& out_dir, int threads) {
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  std::vector<std::string> files;
  auto emit = [&](const fs::path& p) { files.push_back(p.string()); };

  if (name == "field-map") {
    const FieldMap map = field_map(config.magnet, config.scan.plane, config.scan.grid);
    auto out = open_output(dir / "field_map.csv", config);
    out << "x,y,z,Bx,By,Bz\n";
    for (int i = 0; i < map.grid.nu; ++i) {
      for (int j = 0; j < map.grid.nv; ++j) {
        const Vec3 r = map.plane.point(map.grid.u(i), map.grid.v(j));
        const Vec3& b = map.values[map.grid.index(i, j)];
        out << r.x() << "," << r.y() << "," << r.z() << "," << b.x() << "," << b.y() << ","
            << b.z() << "\n";
      }
    }
    emit(dir / "field_map.csv");
  } else if (name == "esr-map") {
    const ScalarMap freq_map =
        qubit_frequency_map(config.qubit, config.magnet, config.scan.plane, config.scan.grid);
    write_scalar_map(dir / "esr_frequency_map.csv", dir / "esr_frequency_map.json", config,
                     freq_map, "Hz");
    emit(dir / "esr_frequency_map.csv");
    emit(dir / "esr_frequency_map.json");
    const ScalarMap image =
        resonance_image(config.qubit, config.magnet, config.scan.plane, config.scan.grid,
                        config.scan.mw_frequency, config.linewidth, config.dip_depth);
    write_scalar_map(dir / "resonance_image.csv", dir / "resonance_image.json", config, image,
                     "arb");
    emit(dir / "resonance_image.csv");
    emit(dir / "resonance_image.json");
  } else if (name == "mech-response") {
    const std::vector<double> freqs = sweep_grid(config);
    std::vector<PlanePhasor> response(freqs.size());
    parallel_for(static_cast<long>(freqs.size()), threads, [&](long i) {
      DriveSpec d = config.drive;
      d.omega = constants::two_pi * freqs[i];
      response[i] = driven_response(config.modes, d);
    });
    auto out = open_output(dir / "mech_response.csv", config);
    out << "f_Hz,re_dr1,im_dr1,re_dr2,im_dr2,abs_dr\n";
    for (size_t i = 0; i < freqs.size(); ++i) {
      const PlanePhasor& dr = response[i];
      out << freqs[i] << "," << dr(0).real() << "," << dr(0).imag() << "," << dr(1).real() << ","
          << dr(1).imag() << "," << dr.norm() << "\n";
    }
    emit(dir / "mech_response.csv");
  } else if (name == "rabi") {
    const CouplingVector coupling = config.effective_coupling();
    DriveSpec d = config.drive;
    const double depth = modulation_depth(config.modes, d, coupling);
    RabiRun run;
    run.rabi = constants::two_pi * rabi_frequency(config);
    run.drive_omega = d.omega;
    run.depth = constants::two_pi * depth;
    run.detuning = constants::two_pi * config.dynamics.detuning;
    run.phase = config.dynamics.phase;
    run.gamma1 = run.gamma2 = constants::two_pi * config.qubit.decay_rate;
    run.duration = config.dynamics.duration;
    run.dt = config.dynamics.dt;
    run.sample_stride = config.dynamics.sample_stride;
    const TimeSeries series = integrate_rabi(run);
    auto out = open_output(dir / "rabi.csv", config);
    out << "t_s,s_x,s_y,s_z\n";
    for (size_t i = 0; i < series.samples.size(); ++i) {
      const BlochState& s = series.samples[i];
      out << i * series.sample_dt << "," << s.x << "," << s.y << "," << s.z << "\n";
    }
    emit(dir / "rabi.csv");
  } else if (name == "triplet") {
    const CouplingVector coupling = config.effective_coupling();
    const double depth = modulation_depth(config.modes, config.drive, coupling);
    const TripletAnalysis analysis = analyze_triplet(
        rabi_frequency(config), drive_frequency(config), depth, config.triplet_settings());
    auto out = open_output(dir / "spectrum.csv", config);
    out << "f_Hz,magnitude\n";
    for (size_t k = 0; k < analysis.spectrum.size(); ++k)
      out << analysis.spectrum.frequency(k) << "," << analysis.spectrum.magnitude[k] << "\n";
    emit(dir / "spectrum.csv");
    json j;
    j["config_hash"] = config.config_hash;
    j["depth_hz"] = depth;
    j["center_hz"] = analysis.fit.center;
    j["separation_hz"] = analysis.fit.separation;
    j["refined_center_hz"] = analysis.refined_center;
    j["amplitudes"] = analysis.fit.amplitudes;
    j["quality"] = analysis.fit.quality == TripletQuality::good ? "good" : "degraded";
    j["predicted_separation_hz"] =
        2.0 * mollow_splitting(drive_frequency(config), rabi_frequency(config), depth);
    std::ofstream fit_out(dir / "triplet_fit.json");
    fit_out << j.dump(2) << "\n";
    emit(dir / "triplet_fit.json");
  } else if (name == "mollow-sweep") {
    const CouplingVector coupling = config.effective_coupling();
    SweepSettings settings;
    settings.simulate = true;
    settings.dynamics = config.triplet_settings();
    settings.threads = threads;
    const std::vector<SweepPoint> points =
        bimodal_sweep(config.modes, config.drive, coupling, sweep_grid(config), settings);
    auto out = open_output(dir / "mollow_sweep.csv", config);
    out << "f_drive_Hz,delta_omega0_Hz,sideband_lo_Hz,sideband_hi_Hz,fitted_center_Hz,"
           "fitted_separation_Hz,quality\n";
    for (const SweepPoint& p : points) {
      out << p.drive_freq << "," << p.depth << "," << p.sideband_lo << "," << p.sideband_hi << ","
          << p.fit.center << "," << p.fit.separation << ","
          << (p.fit.quality == TripletQuality::good ? "good" : "degraded") << "\n";
    }
    emit(dir / "mollow_sweep.csv");
  } else if (name == "scales") {
    const json j = scales_json(config);
    auto out = open_output(dir / "scales.csv", config);
    out << "name,value,unit\n";
    out << "delta_x_th_mode1," << j["delta_x_th_mode1_m"].get<double>() << ",m\n";
    out << "delta_x_th_mode2," << j["delta_x_th_mode2_m"].get<double>() << ",m\n";
    out << "delta_x_q_mode1," << j["delta_x_q_mode1_m"].get<double>() << ",m\n";
    out << "delta_x_q_mode2," << j["delta_x_q_mode2_m"].get<double>() << ",m\n";
    out << "lambda," << j["lambda_mhz_per_nm"].get<double>() << ",MHz_per_nm\n";
    out << "delta_omega0_th," << j["delta_omega0_th_hz"].get<double>() << ",Hz\n";
    out << "g_z," << j["g_z_hz"].get<double>() << ",Hz\n";
    out << "delta_r_mollow," << j["delta_r_mollow_m"].get<double>() << ",m\n";
    emit(dir / "scales.csv");
  } else if (name == "report") {
    json j;
    j["config_hash"] = config.config_hash;
    j["tool_version"] = tool_version;
    j["scales"] = scales_json(config);

    const double b_work = 50e-3;
    const TransitionPair esr = spin_transition_frequencies(
        config.qubit, b_work * config.qubit.quantization_axis);
    j["esr"] = {{"field_t", b_work},
                {"lower_hz", esr.lower},
                {"upper_hz", esr.upper}};
    const TransitionPair zf = spin_transition_frequencies(config.qubit, Vec3::Zero());
    j["esr"]["zero_field_lower_hz"] = zf.lower;
    j["esr"]["zero_field_upper_hz"] = zf.upper;

    const CouplingVector coupling = config.effective_coupling();
    const double depth = modulation_depth(config.modes, config.drive, coupling);
    const TripletAnalysis analysis = analyze_triplet(
        rabi_frequency(config), drive_frequency(config), depth, config.triplet_settings());
    j["triplet"] = {{"depth_hz", depth},
                    {"center_hz", analysis.fit.center},
                    {"refined_center_hz", analysis.refined_center},
                    {"separation_hz", analysis.fit.separation},
                    {"predicted_separation_hz",
                     2.0 * mollow_splitting(drive_frequency(config), rabi_frequency(config),
                                            depth)},
                    {"quality",
                     analysis.fit.quality == TripletQuality::good ? "good" : "degraded"}};

    SweepSettings settings; // prediction only
    settings.threads = threads;
    const std::vector<SweepPoint> points =
        bimodal_sweep(config.modes, config.drive, coupling, sweep_grid(config), settings);
    json maxima = json::array();
    for (size_t i = 1; i + 1 < points.size(); ++i) {
      if (points[i].depth > points[i - 1].depth && points[i].depth >= points[i + 1].depth)
        maxima.push_back({{"f_drive_hz", points[i].drive_freq}, {"depth_hz", points[i].depth}});
    }
    j["sweep_maxima"] = maxima;

    std::ofstream out(dir / "report.json");
    out << j.dump(2) << "\n";
    emit(dir / "report.json");
  } else {
    throw std::invalid_argument("unknown subcommand: " + name);
  }

  write_manifest(dir, config, files);
  return files;
}

} // namespace spinmech
