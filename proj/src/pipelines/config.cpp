#include "oblivdsp/pipelines/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "oblivdsp/ckks/params.hpp"
#include "oblivdsp/error.hpp"

namespace oblivdsp::pipelines {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double toDouble(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
  }
}

long long toInt(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError("'" + key + "' expects an integer, got '" + v + "'");
  return x;
}

std::size_t toSize(const std::string& key, const std::string& v) {
  const long long x = toInt(key, v);
  if (x < 0) throw ConfigError("'" + key + "' must be nonnegative");
  return static_cast<std::size_t>(x);
}

std::vector<std::string> splitList(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::string num(double v) {
  std::ostringstream o;
  o.precision(17);
  o << v;
  return o.str();
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
  return s;
}

}  // namespace

PipelineConfig PipelineConfig::vitalsDefault() {
  PipelineConfig c;
  c.kernel.R = 16;
  c.kernel.A = 1;
  c.kernel.D = 1;
  c.kernel.F = 200;
  return c;
}

PipelineConfig PipelineConfig::gestureDefault() {
  PipelineConfig c;
  c.kernel.R = 16;
  c.kernel.D = 32;
  c.kernel.A = 3;
  c.kernel.F = 10;
  c.kernel.fcDims = {c.kernel.A * c.kernel.R * c.kernel.D, 32, 16, 5};
  return c;
}

void PipelineConfig::set(const std::string& rawKey, const std::string& rawValue) {
  const std::string key = trim(rawKey), v = trim(rawValue);
  auto& k = kernel;
  if (key == "R") k.R = toSize(key, v);
  else if (key == "D") k.D = toSize(key, v);
  else if (key == "A") k.A = toSize(key, v);
  else if (key == "F") k.F = toSize(key, v);
  else if (key == "gamma") k.gamma = static_cast<int>(toInt(key, v));
  else if (key == "gamma_doppler") k.gammaDoppler = static_cast<int>(toInt(key, v));
  else if (key == "p_phi") k.pPhi = static_cast<int>(toInt(key, v));
  else if (key == "taylor_order") k.taylorOrder = static_cast<int>(toInt(key, v));
  else if (key == "taylor_form") {
    if (v == "arcsin") k.taylorForm = kernels::TaylorForm::arcsin;
    else if (v == "literal") k.taylorForm = kernels::TaylorForm::literal;
    else throw ConfigError("taylor_form must be arcsin or literal");
  } else if (key == "notch_width") k.notchWidth = static_cast<int>(toInt(key, v));
  else if (key == "fc_dims") {
    k.fcDims.clear();
    if (!v.empty()) {
      for (const auto& s : splitList(v)) k.fcDims.push_back(toSize(key, s));
    }
  } else if (key == "resp_taps") {
    k.respirationTaps.clear();
    for (const auto& s : splitList(v)) k.respirationTaps.push_back(toDouble(key, s));
  } else if (key == "heart_taps") {
    k.heartTaps.clear();
    for (const auto& s : splitList(v)) k.heartTaps.push_back(toDouble(key, s));
  } else if (key == "frame_rate") frameRate = toDouble(key, v);
  else if (key == "resp_band" || key == "heart_band") {
    const auto parts = splitList(v);
    if (parts.size() != 2) throw ConfigError("'" + key + "' expects low,high");
    const double lo = toDouble(key, parts[0]), hi = toDouble(key, parts[1]);
    (key == "resp_band" ? respLow : heartLow) = lo;
    (key == "resp_band" ? respHigh : heartHigh) = hi;
  } else if (key == "fir_design") {
    if (v == "lowpass") firDesign = FirDesign::lowpass;
    else if (v == "bandpass") firDesign = FirDesign::bandpass;
    else if (v == "file") firDesign = FirDesign::file;
    else throw ConfigError("fir_design must be lowpass, bandpass or file");
  } else if (key == "fir_taps") firTaps = toSize(key, v);
  else if (key == "fir_cutoff") firCutoff = toDouble(key, v);
  else if (key == "resp_taps_file") respTapsFile = v;
  else if (key == "heart_taps_file") heartTapsFile = v;
  else if (key == "phase_scale") phaseScale = toDouble(key, v);
  else if (key == "resp_gain") respGain = toDouble(key, v);
  else if (key == "heart_gain") heartGain = toDouble(key, v);
  else if (key == "spectral_scale") spectralScale = toDouble(key, v);
  else if (key == "seed") seed = static_cast<std::uint64_t>(toInt(key, v));
  else throw ConfigError("unknown config key '" + key + "'");
}

std::map<std::string, std::string> PipelineConfig::entries() const {
  const auto& k = kernel;
  std::map<std::string, std::string> e;
  e["R"] = std::to_string(k.R);
  e["D"] = std::to_string(k.D);
  e["A"] = std::to_string(k.A);
  e["F"] = std::to_string(k.F);
  e["gamma"] = std::to_string(k.gamma);
  e["gamma_doppler"] = std::to_string(k.gammaDoppler);
  e["p_phi"] = std::to_string(k.pPhi);
  e["taylor_order"] = std::to_string(k.taylorOrder);
  e["taylor_form"] = k.taylorForm == kernels::TaylorForm::arcsin ? "arcsin" : "literal";
  e["notch_width"] = std::to_string(k.notchWidth);
  std::string dims;
  for (std::size_t i = 0; i < k.fcDims.size(); ++i) dims += (i ? "," : "") + std::to_string(k.fcDims[i]);
  e["fc_dims"] = dims;
  e["resp_taps"] = join(k.respirationTaps);
  e["heart_taps"] = join(k.heartTaps);
  e["frame_rate"] = num(frameRate);
  e["resp_band"] = num(respLow) + "," + num(respHigh);
  e["heart_band"] = num(heartLow) + "," + num(heartHigh);
  e["fir_design"] = firDesign == FirDesign::lowpass ? "lowpass" : firDesign == FirDesign::bandpass ? "bandpass" : "file";
  e["fir_taps"] = std::to_string(firTaps);
  e["fir_cutoff"] = num(firCutoff);
  e["resp_taps_file"] = respTapsFile;
  e["heart_taps_file"] = heartTapsFile;
  e["phase_scale"] = num(phaseScale);
  e["spectral_scale"] = num(spectralScale);
  e["resp_gain"] = num(respGain);
  e["heart_gain"] = num(heartGain);
  e["seed"] = std::to_string(seed);
  return e;
}

std::string PipelineConfig::serialize() const {
  std::string s;
  for (const auto& [k, v] : entries()) s += k + "=" + v + "\n";
  return s;
}

std::string PipelineConfig::digest() const {
  const auto s = serialize();
  return ckks::hex64(ckks::fnv1a(s.data(), s.size()));
}

void PipelineConfig::validate() const {
  kernel.validate();
  if (!(frameRate > 0)) throw ConfigError("frame_rate must be positive");
  if (!(respLow > 0 && respLow < respHigh && heartLow > 0 && heartLow < heartHigh)) {
    throw ConfigError("band edges must be positive and increasing");
  }
  if (respHigh >= frameRate / 2 || heartHigh >= frameRate / 2) throw ConfigError("band edge above Nyquist");
  if (!(phaseScale > 0)) throw ConfigError("phase_scale must be positive");
  if (!(respGain > 0 && heartGain > 0)) throw ConfigError("band gains must be positive");
  if (spectralScale < 0) throw ConfigError("spectral_scale must be nonnegative");
}

void PipelineConfig::validateVitals() const {
  validate();
  if (firTaps == 0 || firTaps > kernel.F) throw ConfigError("fir_taps must lie in [1, F]");
}

PipelineConfig parseConfig(std::istream& in, PipelineConfig base) {
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineNo) + ": expected key=value");
    base.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

PipelineConfig loadConfig(const std::string& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  return parseConfig(in, std::move(base));
}

}  // namespace oblivdsp::pipelines
