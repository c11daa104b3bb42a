#include "optensor/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace optensor::io {
namespace {

json complex_matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (long r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (long c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix complex_matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw IoError("matrix must be a nonempty array");
  const long rows = static_cast<long>(j.size());
  const long cols = static_cast<long>(j[0].size());
  Matrix m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    if (static_cast<long>(j[r].size()) != cols)
      throw IoError("matrix rows differ in length");
    for (long c = 0; c < cols; ++c) {
      const auto& e = j[r][c];
      if (!e.is_array() || e.size() != 2)
        throw IoError("matrix entries must be [re, im] pairs");
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

json wires_to_json(const std::vector<WireInstance>& ws) {
  json out = json::array();
  for (const auto& w : ws)
    out.push_back({{"type", w.type.name}, {"dim", w.type.dim}, {"id", w.id}});
  return out;
}

std::vector<WireInstance> wires_from_json(const json& j, Orientation o) {
  std::vector<WireInstance> ws;
  for (const auto& e : j)
    ws.push_back({{e.at("type").get<std::string>(), e.at("dim").get<int>()},
                  e.at("id").get<int>(),
                  o});
  return ws;
}

json parse(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw IoError("malformed JSON in " + what);
  return j;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
}

std::string dump(const json& j) { return j.dump(2); }

json operator_to_json(const OperatorTensor& t) {
  const OperatorTensor c = t.canonical();
  return {{"outputs", wires_to_json(c.outputs())},
          {"inputs", wires_to_json(c.inputs())},
          {"matrix", complex_matrix_to_json(c.matrix())}};
}

OperatorTensor operator_from_json(const json& j) {
  std::vector<WireInstance> factors =
      wires_from_json(j.value("outputs", json::array()), Orientation::output);
  const auto ins =
      wires_from_json(j.value("inputs", json::array()), Orientation::input);
  factors.insert(factors.end(), ins.begin(), ins.end());
  try {
    return OperatorTensor(std::move(factors),
                          complex_matrix_from_json(j.at("matrix")));
  } catch (const json::exception& e) {
    throw IoError(std::string("bad operator JSON: ") + e.what());
  }
}

OperatorTensor load_operator(const std::string& path) {
  return operator_from_json(parse(read_file(path), path));
}

Fragment load_circuit(const std::string& path) {
  const json j = parse(read_file(path), path);
  Fragment f;
  try {
    for (const auto& node : j.at("nodes")) {
      if (node.contains("file"))
        f.nodes.push_back(load_operator(node.at("file").get<std::string>()));
      else
        f.nodes.push_back(operator_from_json(node));
    }
    if (j.contains("links"))
      for (const auto& l : j.at("links")) {
        if (!l.is_array() || l.size() != 4)
          throw IoError("links must be [nodeA, idA, nodeB, idB]");
        f.links.push_back({l[0].get<int>(), l[1].get<int>(), l[2].get<int>(),
                           l[3].get<int>()});
      }
    else
      f.links = auto_links(f.nodes);
  } catch (const json::exception& e) {
    throw IoError(std::string("bad circuit JSON: ") + e.what());
  }
  return f;
}

ProbabilityTable load_table(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty table " + path);
  const auto header = split_csv_line(line);
  if (header.size() < 2) throw IoError("table needs at least one column");
  ProbabilityTable t;
  t.col_labels.assign(header.begin() + 1, header.end());
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw IoError("table row has wrong cell count");
    t.row_labels.push_back(cells[0]);
    std::vector<double> row;
    for (size_t i = 1; i < cells.size(); ++i) {
      try {
        row.push_back(std::stod(cells[i]));
      } catch (const std::exception&) {
        throw IoError("non-numeric table entry: " + cells[i]);
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("table has no rows");
  t.entries.resize(rows.size(), t.col_labels.size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < rows[r].size(); ++c) t.entries(r, c) = rows[r][c];
  return t;
}

json verdict_to_json(const PhysicalityVerdict& v) {
  json spectrum = json::array();
  for (long i = 0; i < v.causal_slack_spectrum.size(); ++i)
    spectrum.push_back(v.causal_slack_spectrum(i));
  return {{"physical", v.ok()},
          {"psd_ok", v.psd_ok},
          {"causal_ok", v.causal_ok},
          {"min_eigen_after_input_transpose", v.min_eigen_after_input_transpose},
          {"causal_slack_spectrum", spectrum}};
}

json herald_to_json(const HeraldReport& r) {
  return {{"heralded", r.heralded}, {"k", r.k}, {"residual", r.residual}};
}

std::string sweep_to_csv(const WitnessReport& r) {
  std::ostringstream out;
  out << "m,l,F,A_l,W_l\n";
  char buf[64];
  for (const auto& row : r.rows) {
    out << row.m << ',';
    std::snprintf(buf, sizeof buf, "%.17g", row.l);
    out << buf << ',' << row.F << ',';
    std::snprintf(buf, sizeof buf, "%.17g", row.A_l);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", row.W_l);
    out << buf << '\n';
  }
  return out.str();
}

json witness_to_json(const WitnessReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"m", row.m},
                    {"l", row.l},
                    {"F", row.F},
                    {"A_l", row.A_l},
                    {"W_l", row.W_l}});
  return {{"physical", r.physical},
          {"approximation_ok", r.approximation_ok},
          {"slope", r.slope},
          {"rows", rows}};
}

std::pair<LatticeSpec, std::vector<std::pair<int, int>>> load_lattice(
    const std::string& path) {
  const json j = parse(read_file(path), path);
  LatticeSpec lat;
  std::vector<std::pair<int, int>> region;
  try {
    lat.width = j.value("width", 4);
    lat.height = j.value("height", 4);
    if (j.contains("vertices"))
      for (const auto& v : j.at("vertices")) {
        const int r = v.at("r").get<int>();
        const int c = v.at("c").get<int>();
        Matrix m;
        if (v.contains("unitary")) {
          const Matrix u = complex_matrix_from_json(v.at("unitary"));
          if (u.rows() != 4 || u.cols() != 4)
            throw IoError("vertex unitary must be 4x4");
          m = gate_vertex(u);
        } else {
          m = complex_matrix_from_json(v.at("matrix"));
          if (m.rows() != 16 || m.cols() != 16)
            throw IoError("vertex matrix must be 16x16");
        }
        lat.vertex_ops[r * lat.width + c] = std::move(m);
      }
    for (const auto& rc : j.at("region")) {
      if (!rc.is_array() || rc.size() != 2)
        throw IoError("region entries must be [r, c]");
      region.emplace_back(rc[0].get<int>(), rc[1].get<int>());
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("bad lattice JSON: ") + e.what());
  }
  return {std::move(lat), std::move(region)};
}

FieldSample load_field_sample(const std::string& path) {
  std::istringstream in(read_file(path));
  FieldSample f;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() < 2) throw IoError("field sample rows need id + scalars");
    try {
      const int id = std::stoi(cells[0]);
      Eigen::VectorXd s(cells.size() - 1);
      for (size_t i = 1; i < cells.size(); ++i) s(i - 1) = std::stod(cells[i]);
      f.scalars[id] = std::move(s);
    } catch (const std::exception&) {
      throw IoError("non-numeric field sample entry");
    }
  }
  if (f.scalars.empty()) throw IoError("field sample is empty");
  return f;
}

json gamma_to_json(const GammaSurface& g) {
  json pts = json::array();
  for (const auto& s : g.points) pts.push_back(s);
  return {{"gamma", pts}};
}

}  // namespace optensor::io
