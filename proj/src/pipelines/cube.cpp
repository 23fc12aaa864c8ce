#include "oblivdsp/pipelines/cube.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "oblivdsp/error.hpp"

namespace oblivdsp::pipelines {

namespace {

constexpr char kMagic[8] = {'O', 'B', 'L', 'V', 'C', 'U', 'B', 'E'};
constexpr std::size_t kMaxSamples = std::size_t{1} << 30;

static_assert(std::endian::native == std::endian::little, "cube IO assumes a little-endian host");

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw FormatError("truncated cube file");
  return v;
}

}  // namespace

RadarCube::RadarCube(std::size_t f, std::size_t a, std::size_t r, std::size_t d, double rate, double lambda)
    : F(f), A(a), R(r), D(d), frameRate(rate), wavelength(lambda), samples(f * a * r * d) {}

void RadarCube::validate() const {
  if (F == 0 || A == 0 || R == 0 || D == 0) throw FormatError("cube dimensions must be positive");
  if (samples.size() != F * A * R * D) throw FormatError("cube sample count does not match its dimensions");
  if (!(frameRate > 0) || !(wavelength > 0)) throw FormatError("frame rate and wavelength must be positive");
  for (const auto& z : samples) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw FormatError("cube holds non-finite samples");
  }
}

void writeCube(std::ostream& out, const RadarCube& cube) {
  cube.validate();
  out.write(kMagic, sizeof kMagic);
  for (auto d : {cube.F, cube.A, cube.R, cube.D}) put<std::uint32_t>(out, static_cast<std::uint32_t>(d));
  put(out, cube.frameRate);
  put(out, cube.wavelength);
  for (const auto& z : cube.samples) {
    put(out, z.real());
    put(out, z.imag());
  }
  if (!out) throw Error("failed writing cube");
}

RadarCube readCube(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw FormatError("not a cube file (bad magic)");
  }
  const auto F = get<std::uint32_t>(in), A = get<std::uint32_t>(in), R = get<std::uint32_t>(in),
             D = get<std::uint32_t>(in);
  if (std::uint64_t{F} * A * R * D > kMaxSamples) throw FormatError("cube dimensions too large");
  const double frameRate = get<double>(in);
  const double wavelength = get<double>(in);
  RadarCube cube(F, A, R, D, frameRate, wavelength);
  for (auto& z : cube.samples) {
    const double re = get<double>(in);
    z = cplx(re, get<double>(in));
  }
  cube.validate();
  return cube;
}

void writeCubeFile(const std::string& path, const RadarCube& cube) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  writeCube(out, cube);
}

RadarCube readCubeFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  return readCube(in);
}

RadarCube readCubeCsv(std::istream& in) {
  std::string line;
  auto nextLine = [&]() -> bool {
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line[0] != '#') return true;
    }
    return false;
  };
  auto split = [](const std::string& s) {
    std::vector<std::string> f;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    return f;
  };
  auto number = [](const std::string& s) {
    try {
      return std::stod(s);
    } catch (const std::exception&) {
      throw FormatError("bad number in cube CSV: '" + s + "'");
    }
  };
  if (!nextLine()) throw FormatError("empty cube CSV");
  if (split(line).size() != 6) throw FormatError("cube CSV header must have 6 fields");
  if (!nextLine()) throw FormatError("cube CSV missing dimension line");
  const auto dims = split(line);
  if (dims.size() != 6) throw FormatError("cube CSV dimension line must have 6 fields");
  std::size_t d[4];
  for (int i = 0; i < 4; ++i) {
    const double v = number(dims[i]);
    if (v < 1 || v != std::floor(v) || v > 1e6) throw FormatError("cube CSV dimensions must be positive integers");
    d[i] = static_cast<std::size_t>(v);
  }
  if (d[0] * d[1] * d[2] * d[3] > kMaxSamples) throw FormatError("cube dimensions too large");
  RadarCube cube(d[0], d[1], d[2], d[3], number(dims[4]), number(dims[5]));
  while (nextLine()) {
    if (line.rfind("t,", 0) == 0) continue;  // column header
    const auto f = split(line);
    if (f.size() != 6) throw FormatError("cube CSV rows need t,a,r,c,re,im");
    std::size_t idx[4];
    const std::size_t lim[4] = {cube.F, cube.A, cube.R, cube.D};
    for (int i = 0; i < 4; ++i) {
      const double v = number(f[i]);
      if (v < 0 || v != std::floor(v) || v >= static_cast<double>(lim[i])) throw FormatError("cube CSV index out of range");
      idx[i] = static_cast<std::size_t>(v);
    }
    cube.at(idx[0], idx[1], idx[2], idx[3]) = cplx(number(f[4]), number(f[5]));
  }
  cube.validate();
  return cube;
}

void writeCubeCsv(std::ostream& out, const RadarCube& cube) {
  out << "F,A,R,D,frameRate,wavelength\n";
  out << cube.F << ',' << cube.A << ',' << cube.R << ',' << cube.D << ',';
  out.precision(17);
  out << cube.frameRate << ',' << cube.wavelength << "\nt,a,r,c,re,im\n";
  for (std::size_t t = 0; t < cube.F; ++t)
    for (std::size_t a = 0; a < cube.A; ++a)
      for (std::size_t r = 0; r < cube.R; ++r)
        for (std::size_t c = 0; c < cube.D; ++c) {
          const auto z = cube.at(t, a, r, c);
          if (z == cplx{}) continue;
          out << t << ',' << a << ',' << r << ',' << c << ',' << z.real() << ',' << z.imag() << '\n';
        }
}

RadarCube loadCube(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  char head[8] = {};
  in.read(head, sizeof head);
  in.clear();
  in.seekg(0);
  if (std::memcmp(head, kMagic, sizeof kMagic) == 0) return readCube(in);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return readCubeCsv(in);
  throw FormatError(path + " is neither a cube binary nor a .csv file");
}

}  // namespace oblivdsp::pipelines
