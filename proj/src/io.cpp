#include "men/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace men {
namespace {

using json = nlohmann::json;
using cd = std::complex<double>;

constexpr double kReadNormSlack = 1e-6;

std::string real_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string complex_text(cd v) { return "[" + real_text(v.real()) + ", " + real_text(v.imag()) + "]"; }

json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FileFormat, e.what());
  }
}

template <typename T>
T field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw Error(ErrorCode::FileFormat, std::string("missing '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FileFormat, std::string("field '") + key + "': " + e.what());
  }
}

cd complex_of(const json& pair) {
  if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
    throw Error(ErrorCode::FileFormat, "complex values are [re, im] pairs");
  }
  return {pair[0].get<double>(), pair[1].get<double>()};
}

}  // namespace

std::string state_to_json(const PureState& psi) {
  std::string out = "{\n  \"n\": " + std::to_string(psi.num_qubits()) + ",\n  \"amplitudes\": [\n";
  for (std::uint64_t i = 0; i < psi.dimension(); ++i) {
    out += "    " + complex_text(psi[i]) + (i + 1 < psi.dimension() ? ",\n" : "\n");
  }
  out += "  ]\n}\n";
  return out;
}

PureState state_from_json(std::string_view text) {
  const json doc = parse(text);
  const int n = field<int>(doc, "n");
  const json amplitudes = field<json>(doc, "amplitudes");
  if (n < 1 || n > 30) throw Error(ErrorCode::InvalidState, "qubit count must lie in 1..30");
  if (!amplitudes.is_array() || amplitudes.size() != (std::size_t{1} << n)) {
    throw Error(ErrorCode::InvalidState, "expected 2^n amplitudes");
  }
  ComplexVector<double> v(static_cast<Eigen::Index>(amplitudes.size()));
  for (std::size_t i = 0; i < amplitudes.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_of(amplitudes[i]);
  const double norm = v.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) >= kReadNormSlack) {
    throw Error(ErrorCode::InvalidState, "norm " + real_text(norm) + " is not within 1e-6 of 1");
  }
  return PureState::normalized(n, std::move(v));
}

std::string model_to_json(const MenModel& model) {
  const int n = model.num_qubits();
  std::string out = "{\n  \"n\": " + std::to_string(n) + ",\n  \"edges\": [";
  const auto edges = model.graph.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    out += (e ? ", [" : "[") + std::to_string(edges[e].first) + ", " + std::to_string(edges[e].second) + "]";
  }
  out += "],\n  \"reference\": \"" + model.reference.to_string() + "\",\n";
  out += "  \"reference_modulus\": " + real_text(model.reference_modulus) + ",\n";
  out += "  \"log_reference_modulus\": " + real_text(model.log_reference_modulus) + ",\n";
  out += "  \"q\": {\n";
  for (int i = 1; i <= n; ++i) {
    const auto& table = model.potentials[static_cast<std::size_t>(i - 1)];
    out += "    \"" + std::to_string(i) + "\": {\n      \"neighbors\": [";
    for (std::size_t k = 0; k < table.neighbors.size(); ++k) {
      out += (k ? ", " : "") + std::to_string(table.neighbors[k]);
    }
    out += "],\n      \"values\": {\n";
    for (std::size_t key = 0; key < table.size(); ++key) {
      out += "        \"" + table.key_string(key) + "\": " + complex_text(table.values[key]) +
             (key + 1 < table.size() ? ",\n" : "\n");
    }
    out += std::string("      }\n    }") + (i < n ? ",\n" : "\n");
  }
  out += "  }\n}\n";
  return out;
}

MenModel model_from_json(std::string_view text, const ToleranceConfig& tol) {
  const json doc = parse(text);
  const int n = field<int>(doc, "n");
  if (n < 1 || n > 62) throw Error(ErrorCode::InvalidModel, "qubit count out of range");

  MenModel model;
  model.graph = MenGraph(n);
  for (const auto& edge : field<std::vector<std::vector<int>>>(doc, "edges")) {
    if (edge.size() != 2) throw Error(ErrorCode::FileFormat, "edges are [i, j] pairs");
    model.graph.add_edge(edge[0], edge[1]);
  }

  const auto reference = field<std::string>(doc, "reference");
  if (static_cast<int>(reference.size()) != n) throw Error(ErrorCode::InvalidModel, "reference needs n bits");
  try {
    model.reference = Assignment::from_bits(reference);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidModel, std::string("reference: ") + e.what());
  }
  if (doc.contains("log_reference_modulus")) {
    model.set_log_reference_modulus(field<double>(doc, "log_reference_modulus"));
  } else {
    model.set_log_reference_modulus(std::log(field<double>(doc, "reference_modulus")));
  }

  const json q = field<json>(doc, "q");
  for (int i = 1; i <= n; ++i) {
    const std::string name = std::to_string(i);
    if (!q.is_object() || !q.contains(name)) throw Error(ErrorCode::FileFormat, "missing q table for node " + name);
    QFunctionTable table;
    table.node = i;
    table.neighbors = field<std::vector<int>>(q[name], "neighbors");
    const json values = field<json>(q[name], "values");
    if (!values.is_object()) throw Error(ErrorCode::FileFormat, "q values must be an object");
    table.values.resize(std::size_t{2} << table.neighbors.size());
    if (values.size() != table.values.size()) {
      throw Error(ErrorCode::InvalidModel, "node " + name + " needs " + std::to_string(table.values.size()) + " values");
    }
    for (std::size_t key = 0; key < table.values.size(); ++key) {
      const std::string bits = table.key_string(key);
      if (!values.contains(bits)) throw Error(ErrorCode::InvalidModel, "node " + name + " lacks key " + bits);
      table.values[key] = complex_of(values[bits]);
    }
    model.potentials.push_back(std::move(table));
  }
  validate_model(model, tol);
  return model;
}

FileKind detect_kind(std::string_view text) {
  const json doc = parse(text);
  if (doc.is_object() && doc.contains("amplitudes")) return FileKind::state;
  if (doc.is_object() && doc.contains("q")) return FileKind::model;
  throw Error(ErrorCode::FileFormat, "neither a state nor a model document");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileFormat, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(text.data(), static_cast<std::streamsize>(text.size()))) {
    throw Error(ErrorCode::FileFormat, "cannot write " + path.string());
  }
}

}  // namespace men
