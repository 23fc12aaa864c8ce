#include "oblivdsp/kernels/operand.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "oblivdsp/error.hpp"

namespace oblivdsp::kernels {

namespace {

bool nextContent(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

std::string expectKey(std::istream& in, const char* key) {
  std::string line;
  if (!nextContent(in, line)) throw FormatError(std::string("operand file ends before '") + key + "'");
  std::istringstream ss(line);
  std::string k;
  ss >> k;
  if (k != key) throw FormatError(std::string("expected '") + key + "', found '" + k + "'");
  std::string rest;
  std::getline(ss, rest);
  return rest;
}

}  // namespace

std::vector<PlainOperand> readOperands(std::istream& in) {
  std::vector<PlainOperand> ops;
  std::string line;
  while (nextContent(in, line)) {
    std::istringstream head(line);
    std::string k;
    PlainOperand op;
    head >> k >> op.role;
    if (k != "role" || op.role.empty()) throw FormatError("operand block must start with 'role <name>'");
    std::istringstream dims(expectKey(in, "dims"));
    long long r = -1, c = -1;
    if (!(dims >> r >> c) || r < 1 || c < 1 || r * c > (1LL << 26)) throw FormatError("bad operand dims");
    op.rows = static_cast<std::size_t>(r);
    op.cols = static_cast<std::size_t>(c);
    std::istringstream sc(expectKey(in, "scale"));
    if (!(sc >> op.scale) || !std::isfinite(op.scale)) throw FormatError("bad operand scale");
    for (std::size_t i = 0; i < op.rows; ++i) {
      if (!nextContent(in, line)) throw FormatError("operand '" + op.role + "' has too few rows");
      std::istringstream row(line);
      double v;
      std::size_t n = 0;
      while (row >> v) {
        if (!std::isfinite(v)) throw FormatError("non-finite operand value");
        op.values.push_back(op.scale * v);
        ++n;
      }
      if (!row.eof() || n != op.cols) throw FormatError("operand '" + op.role + "' row " + std::to_string(i) + " has wrong width");
    }
    ops.push_back(std::move(op));
  }
  return ops;
}

void writeOperands(std::ostream& out, const std::vector<PlainOperand>& ops) {
  out.precision(17);
  for (const auto& op : ops) {
    if (op.values.size() != op.rows * op.cols) throw FormatError("operand size mismatch");
    const double scale = op.scale != 0 ? op.scale : 1.0;
    out << "role " << op.role << "\ndims " << op.rows << ' ' << op.cols << "\nscale " << scale << '\n';
    for (std::size_t i = 0; i < op.rows; ++i) {
      for (std::size_t j = 0; j < op.cols; ++j) out << (j ? " " : "") << op.values[i * op.cols + j] / scale;
      out << '\n';
    }
  }
}

std::vector<PlainOperand> loadOperands(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  return readOperands(in);
}

void saveOperands(const std::string& path, const std::vector<PlainOperand>& ops) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  writeOperands(out, ops);
}

std::vector<FcLayer> fcLayersFromOperands(const std::vector<PlainOperand>& ops) {
  if (ops.empty() || ops.size() % 2 != 0) throw FormatError("FC operands come in weight/bias pairs");
  std::vector<FcLayer> layers;
  for (std::size_t i = 0; i < ops.size(); i += 2) {
    const auto& w = ops[i];
    const auto& b = ops[i + 1];
    if (w.role != "fc_weight" || b.role != "fc_bias") throw FormatError("expected fc_weight followed by fc_bias");
    if (b.rows * b.cols != w.rows) throw FormatError("FC bias length does not match the weight rows");
    layers.push_back(FcLayer{w.rows, w.cols, w.values, b.values});
  }
  return layers;
}

std::vector<PlainOperand> operandsFromFcLayers(const std::vector<FcLayer>& layers) {
  std::vector<PlainOperand> ops;
  for (const auto& l : layers) {
    ops.push_back(PlainOperand{"fc_weight", l.rows, l.cols, 1.0, l.weights});
    ops.push_back(PlainOperand{"fc_bias", 1, l.rows, 1.0, l.bias});
  }
  return ops;
}

}  // namespace oblivdsp::kernels
