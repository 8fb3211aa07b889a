#include "qma/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>

#include "json.hpp"
#include "qma/errors.hpp"

namespace qma {

using nlohmann::json;

namespace {

static_assert(std::endian::native == std::endian::little,
              "field snapshots are little-endian");

json config_json(const RunConfig& cfg) {
  json modes = json::array();
  for (const FMode& m : cfg.F_modes)
    modes.push_back({{"wave", m.wave}, {"amplitude", m.amplitude}});
  return json{{"n", cfg.n},
              {"N", cfg.N},
              {"F_modes", modes},
              {"sigma", cfg.sigma},
              {"eps_pos", cfg.eps_pos},
              {"tol_conv", cfg.tol_conv},
              {"max_steps", cfg.max_steps},
              {"cadence", cfg.cadence},
              {"out_dir", cfg.out_dir},
              {"calibration_path", cfg.calibration_path},
              {"stepper", cfg.stepper},
              {"derivative_mode", cfg.derivative_mode},
              {"seed", cfg.seed},
              {"residual_tol", cfg.residual_tol}};
}

RunConfig config_from_json(const json& j) {
  static const std::set<std::string> known = {
      "n",         "N",         "F_modes",   "sigma",
      "eps_pos",   "tol_conv",  "max_steps", "cadence",
      "out_dir",   "calibration_path",       "stepper",
      "derivative_mode",        "seed",      "residual_tol"};
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw ConfigError("config: unknown key \"" + it.key() + "\"");

  RunConfig cfg;
  try {
    cfg.n = j.at("n").get<int>();
    cfg.N = j.at("N").get<int>();
    for (const json& m : j.at("F_modes")) {
      for (auto it = m.begin(); it != m.end(); ++it)
        if (it.key() != "wave" && it.key() != "amplitude")
          throw ConfigError("config: unknown key \"" + it.key() +
                            "\" in F_modes entry");
      FMode fm;
      fm.wave = m.at("wave").get<std::vector<long long>>();
      fm.amplitude = m.at("amplitude").get<double>();
      cfg.F_modes.push_back(fm);
    }
    if (j.contains("sigma")) cfg.sigma = j.at("sigma").get<double>();
    if (j.contains("eps_pos")) cfg.eps_pos = j.at("eps_pos").get<double>();
    if (j.contains("tol_conv")) cfg.tol_conv = j.at("tol_conv").get<double>();
    if (j.contains("max_steps"))
      cfg.max_steps = j.at("max_steps").get<std::int64_t>();
    if (j.contains("cadence")) cfg.cadence = j.at("cadence").get<std::int64_t>();
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("calibration_path"))
      cfg.calibration_path = j.at("calibration_path").get<std::string>();
    if (j.contains("stepper")) cfg.stepper = j.at("stepper").get<std::string>();
    if (j.contains("derivative_mode"))
      cfg.derivative_mode = j.at("derivative_mode").get<std::string>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("residual_tol"))
      cfg.residual_tol = j.at("residual_tol").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  if (cfg.n != 1 && cfg.n != 2)
    throw ConfigError("config: n must be 1 or 2");
  if (cfg.N < 5) throw ConfigError("config: N must be at least 5");
  if (cfg.n == 1 && cfg.N > 64)
    throw ConfigError("config: N too large for n = 1 (max 64)");
  if (cfg.n == 2 && cfg.N > 6)
    throw ConfigError("config: N too large for n = 2 (max 6)");
  if (!(cfg.sigma > 0.0 && cfg.sigma < 1.0))
    throw ConfigError("config: sigma must lie in (0, 1)");
  if (!(cfg.eps_pos > 0.0)) throw ConfigError("config: eps_pos must be > 0");
  if (!(cfg.tol_conv > 0.0)) throw ConfigError("config: tol_conv must be > 0");
  if (cfg.max_steps < 1) throw ConfigError("config: max_steps must be >= 1");
  if (cfg.cadence < 1) throw ConfigError("config: cadence must be >= 1");
  if (cfg.stepper != "heun" && cfg.stepper != "rk4")
    throw ConfigError("config: stepper must be \"heun\" or \"rk4\"");
  if (cfg.derivative_mode != "fd4" && cfg.derivative_mode != "spectral")
    throw ConfigError("config: derivative_mode must be \"fd4\" or \"spectral\"");
  if (!(cfg.residual_tol > 0.0))
    throw ConfigError("config: residual_tol must be > 0");
  for (const FMode& m : cfg.F_modes) {
    if (int(m.wave.size()) != 4 * cfg.n)
      throw ConfigError("config: F_modes wave vectors must have length 4n");
    if (!std::isfinite(m.amplitude))
      throw ConfigError("config: F_modes amplitude must be finite");
  }
  return cfg;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::string s((std::istreambuf_iterator<char>(in)),
                std::istreambuf_iterator<char>());
  return s;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out.write(content.data(), std::streamsize(content.size()));
}

RunConfig parse_run_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  return config_from_json(j);
}

RunConfig parse_run_config_file(const std::string& path) {
  return parse_run_config_text(read_text_file(path));
}

std::string run_config_to_json(const RunConfig& cfg) {
  return config_json(cfg).dump(2) + "\n";
}

std::string config_hash_hex(const RunConfig& cfg) {
  const std::string s = config_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
  return buf;
}

PeriodicScalarField build_forcing(const RunConfig& cfg) {
  const GridShape shape{cfg.n, cfg.N};
  return PeriodicScalarField::from_function(
      shape, [&](const std::vector<double>& x) {
        double v = 0.0;
        for (const FMode& m : cfg.F_modes) {
          double phase = 0.0;
          for (int a = 0; a < int(m.wave.size()); ++a)
            phase += double(m.wave[a]) * x[a];
          v += m.amplitude * std::cos(2.0 * M_PI * phase);
        }
        return v;
      });
}

FlowParams flow_params_from_config(const RunConfig& cfg, double kappa) {
  FlowParams p;
  p.shape = GridShape{cfg.n, cfg.N};
  p.kappa = kappa;
  p.sigma = cfg.sigma;
  p.eps_pos = cfg.eps_pos;
  p.tol_conv = cfg.tol_conv;
  p.max_steps = cfg.max_steps;
  p.cadence = cfg.cadence;
  p.stepper = cfg.stepper == "rk4" ? Stepper::RK4 : Stepper::Heun;
  p.deriv = cfg.derivative_mode == "spectral" ? DerivMode::Spectral
                                              : DerivMode::FD4;
  return p;
}

void write_calibration(const std::string& path, const CalibrationReport& rep) {
  json j{{"kappa", rep.kappa},
         {"c_grad", rep.c_grad},
         {"residuals", rep.residuals}};
  write_text_file(path, j.dump(2) + "\n");
}

CalibrationReport read_calibration(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
    CalibrationReport rep;
    rep.kappa = j.at("kappa").get<double>();
    rep.c_grad = j.at("c_grad").get<double>();
    if (j.contains("residuals"))
      rep.residuals = j.at("residuals").get<std::map<std::string, double>>();
    if (!(rep.kappa > 0.0))
      throw Error("calibration: kappa must be positive");
    return rep;
  } catch (const json::exception& e) {
    throw Error("calibration: " + path + ": " + e.what());
  }
}

void write_field_snapshot(const std::string& f64_path,
                          const PeriodicScalarField& field) {
  {
    std::ofstream out(f64_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + f64_path);
    out.write(reinterpret_cast<const char*>(field.data()),
              std::streamsize(field.size() * sizeof(double)));
  }
  const GridShape& s = field.shape();
  json sidecar{
      {"n", s.n},
      {"N", s.N},
      {"axis_order",
       "x^r_0 blocks then x^r_1 blocks then x^r_2 blocks then x^r_3 blocks"},
      {"layout", "row-major"},
      {"endianness", "little"}};
  write_text_file(std::filesystem::path(f64_path).replace_extension(".json").string(),
                  sidecar.dump(2) + "\n");
}

PeriodicScalarField read_field_snapshot(const std::string& f64_path) {
  const std::string sidecar_path =
      std::filesystem::path(f64_path).replace_extension(".json").string();
  json sidecar;
  try {
    sidecar = json::parse(read_text_file(sidecar_path));
  } catch (const json::exception& e) {
    throw Error("sidecar " + sidecar_path + ": " + e.what());
  }
  GridShape shape;
  shape.n = sidecar.at("n").get<int>();
  shape.N = sidecar.at("N").get<int>();
  if (sidecar.at("endianness").get<std::string>() != "little" ||
      sidecar.at("layout").get<std::string>() != "row-major")
    throw Error("sidecar " + sidecar_path + ": unsupported layout");

  PeriodicScalarField field(shape);
  std::ifstream in(f64_path, std::ios::binary);
  if (!in) throw Error("cannot open " + f64_path);
  in.read(reinterpret_cast<char*>(field.data()),
          std::streamsize(field.size() * sizeof(double)));
  if (std::size_t(in.gcount()) != field.size() * sizeof(double))
    throw Error("snapshot " + f64_path + ": truncated");
  return field;
}

void write_hyperhermitian_snapshot(const std::string& f64_path,
                                   const HyperhermitianField& field) {
  const GridShape& s = field.shape;
  const int n = s.n;
  std::ofstream out(f64_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + f64_path);
  std::vector<double> quad(4 * std::size_t(n) * n);
  for (std::size_t p = 0; p < s.npoints(); ++p) {
    const HyperhermitianMatrix m = field.at(p);
    std::size_t k = 0;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        const Quaternion& q = m(r, c);
        quad[k++] = q.w;
        quad[k++] = q.x;
        quad[k++] = q.y;
        quad[k++] = q.z;
      }
    out.write(reinterpret_cast<const char*>(quad.data()),
              std::streamsize(quad.size() * sizeof(double)));
  }
  json sidecar{
      {"n", s.n},
      {"N", s.N},
      {"kind", "hyperhermitian"},
      {"axis_order",
       "x^r_0 blocks then x^r_1 blocks then x^r_2 blocks then x^r_3 blocks"},
      {"layout", "row-major"},
      {"endianness", "little"}};
  write_text_file(
      std::filesystem::path(f64_path).replace_extension(".json").string(),
      sidecar.dump(2) + "\n");
}

HyperhermitianField read_hyperhermitian_snapshot(const std::string& f64_path) {
  const std::string sidecar_path =
      std::filesystem::path(f64_path).replace_extension(".json").string();
  json sidecar;
  try {
    sidecar = json::parse(read_text_file(sidecar_path));
  } catch (const json::exception& e) {
    throw Error("sidecar " + sidecar_path + ": " + e.what());
  }
  GridShape shape;
  shape.n = sidecar.at("n").get<int>();
  shape.N = sidecar.at("N").get<int>();
  if (sidecar.at("kind").get<std::string>() != "hyperhermitian")
    throw Error("sidecar " + sidecar_path + ": not a hyperhermitian field");
  const int n = shape.n;

  HyperhermitianField field;
  field.shape = shape;
  field.ch.assign(HyperhermitianField::channel_count(n),
                  std::vector<double>(shape.npoints(), 0.0));
  std::ifstream in(f64_path, std::ios::binary);
  if (!in) throw Error("cannot open " + f64_path);
  std::vector<double> quad(4 * std::size_t(n) * n);
  for (std::size_t p = 0; p < shape.npoints(); ++p) {
    in.read(reinterpret_cast<char*>(quad.data()),
            std::streamsize(quad.size() * sizeof(double)));
    if (std::size_t(in.gcount()) != quad.size() * sizeof(double))
      throw Error("snapshot " + f64_path + ": truncated");
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        const double* q = &quad[4 * std::size_t(r * n + c)];
        if (r == c) field.ch[field.diag_channel(r)][p] = q[0];
        if (r < c)
          for (int comp = 0; comp < 4; ++comp)
            field.ch[field.offdiag_channel(r, c, comp)][p] = q[comp];
      }
  }
  return field;
}

std::string records_csv(const std::vector<DiagnosticsRecord>& records) {
  std::string out =
      "step,t,dt,max_phi_t,min_phi_t,osc_phi,max_lap,maxQ,f,D,M,residual,b\n";
  for (const DiagnosticsRecord& r : records) {
    out += std::to_string(r.step);
    const double cols[] = {r.t, r.dt, r.max_phi_t, r.min_phi_t, r.osc_phi,
                           r.max_lap, r.maxQ, r.f, r.D, r.M, r.residual, r.b};
    for (double v : cols) {
      out += ',';
      out += format_g17(v);
    }
    out += '\n';
  }
  return out;
}

std::vector<DiagnosticsRecord> parse_records_csv(const std::string& text) {
  std::vector<DiagnosticsRecord> out;
  std::size_t pos = text.find('\n');
  if (pos == std::string::npos) throw Error("records: missing header");
  while (pos + 1 < text.size()) {
    const std::size_t end = text.find('\n', pos + 1);
    if (end == std::string::npos) break;
    const std::string line = text.substr(pos + 1, end - pos - 1);
    pos = end;
    if (line.empty()) continue;
    DiagnosticsRecord r;
    const char* s = line.c_str();
    char* next = nullptr;
    r.step = std::strtoll(s, &next, 10);
    double* cols[] = {&r.t, &r.dt, &r.max_phi_t, &r.min_phi_t, &r.osc_phi,
                      &r.max_lap, &r.maxQ, &r.f, &r.D, &r.M, &r.residual, &r.b};
    for (double* c : cols) {
      if (*next != ',') throw Error("records: malformed line: " + line);
      s = next + 1;
      *c = std::strtod(s, &next);
    }
    out.push_back(r);
  }
  return out;
}

void write_manifest(const std::string& path, const Manifest& man) {
  json j{{"schema", "qmaflow-manifest-v1"},
         {"step", man.step},
         {"t", man.t},
         {"dt", man.dt},
         {"accept_streak", man.accept_streak},
         {"config_hash", man.config_hash},
         {"config", config_json(man.config)},
         {"kappa", man.kappa},
         {"c_grad", man.c_grad},
         {"phi_file", man.phi_file},
         {"records_file", man.records_file}};
  write_text_file(path, j.dump(2) + "\n");
}

Manifest read_manifest(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
    Manifest man;
    if (j.at("schema").get<std::string>() != "qmaflow-manifest-v1")
      throw Error("manifest: unknown schema");
    man.step = j.at("step").get<std::int64_t>();
    man.t = j.at("t").get<double>();
    man.dt = j.at("dt").get<double>();
    man.accept_streak = j.at("accept_streak").get<std::int64_t>();
    man.config_hash = j.at("config_hash").get<std::string>();
    man.config = config_from_json(j.at("config"));
    man.kappa = j.at("kappa").get<double>();
    man.c_grad = j.at("c_grad").get<double>();
    man.phi_file = j.at("phi_file").get<std::string>();
    man.records_file = j.at("records_file").get<std::string>();
    return man;
  } catch (const json::exception& e) {
    throw Error("manifest " + path + ": " + e.what());
  }
}

void write_summary(const std::string& path, const Summary& s) {
  json j{{"converged", s.converged},
         {"steps", s.steps},
         {"final_residual", s.final_residual},
         {"b", s.b},
         {"f_final", s.f_final}};
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace qma
