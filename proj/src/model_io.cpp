#include "syswork/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "syswork/lie.hpp"
#include "syswork/simplicial.hpp"

namespace syswork {

using nlohmann::json;

namespace {

Rat rat_from_json(const json& v) {
  if (v.is_string()) return parse_rat(v.get<std::string>());
  if (v.is_number_integer()) return Rat(static_cast<long>(v.get<int64_t>()));
  if (v.is_number_float()) return Rat(v.get<double>());
  throw ModelLoadError("expected a rational (number or \"p/q\" string), got " + v.dump());
}

RatMatrix matrix_from_json(const json& rows, const std::string& what) {
  if (!rows.is_array()) throw ModelLoadError(what + " must be an array of rows");
  size_t r = rows.size();
  size_t c = r == 0 ? 0 : rows[0].size();
  RatMatrix m(r, c);
  for (size_t i = 0; i < r; ++i) {
    if (!rows[i].is_array() || rows[i].size() != c)
      throw ModelLoadError(what + " rows must all have the same length");
    for (size_t j = 0; j < c; ++j) m.at(i, j) = rat_from_json(rows[i][j]);
  }
  return m;
}

CochainModel lie_model_from_json(const json& j) {
  if (!j.contains("dim")) throw ModelLoadError("lie model needs \"dim\"");
  size_t dim = j.at("dim").get<size_t>();
  std::vector<std::tuple<size_t, size_t, size_t, Rat>> entries;
  for (const json& row : j.value("c", json::array())) {
    if (!row.is_array() || row.size() != 4)
      throw ModelLoadError("\"c\" entries must be [i, j, k, value]");
    size_t i = row[0].get<size_t>(), jj = row[1].get<size_t>(), k = row[2].get<size_t>();
    if (i < 1 || jj < 1 || k < 1 || i > dim || jj > dim || k > dim)
      throw ModelLoadError("\"c\" indices are 1-based and must lie in 1.." + std::to_string(dim));
    entries.emplace_back(i - 1, jj - 1, k - 1, rat_from_json(row[3]));
  }
  return build_chevalley_eilenberg(LieStructure(dim, entries));
}

CochainModel simplicial_model_from_json(const json& j) {
  std::vector<std::vector<size_t>> simplices;
  for (const json& s : j.at("simplices")) simplices.push_back(s.get<std::vector<size_t>>());
  return build_simplicial_cochains(SimplicialComplex::from_simplices(simplices));
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelLoadError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ModelFile parse_model_json(const std::string& text, const std::string& name_hint) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ModelLoadError("invalid JSON in " + name_hint + ": " + e.what());
  }
  std::string type = j.value("type", "");
  ModelFile out;
  if (type == "lie") {
    out.model = lie_model_from_json(j);
  } else if (type == "simplicial") {
    out.model = simplicial_model_from_json(j);
  } else {
    throw ModelLoadError("model \"type\" must be \"lie\" or \"simplicial\" in " + name_hint);
  }
  out.model.name = j.value("name", name_hint);
  if (j.contains("covolume")) out.model.covolume = rat_from_json(j.at("covolume"));
  if (j.contains("cycles")) {
    const json& cyc = j.at("cycles");
    if (!cyc.is_object()) throw ModelLoadError("\"cycles\" must map degree to rows");
    for (auto it = cyc.begin(); it != cyc.end(); ++it) {
      size_t k = std::stoul(it.key());
      if (k > out.model.top_degree) throw ModelLoadError("cycle degree above top degree");
      RatMatrix rows = matrix_from_json(it.value(), "cycles[" + it.key() + "]");
      if (rows.rows() > 0 && rows.cols() != out.model.dims[k])
        throw ModelLoadError("cycle rows in degree " + it.key() + " have wrong length");
      out.model.cycles[k] = rows;
    }
  }
  if (j.contains("metric")) {
    const json& met = j.at("metric");
    RatMatrix g = matrix_from_json(met.at("gram"), "metric.gram");
    if (g.rows() != g.cols()) throw ModelLoadError("metric.gram must be square");
    out.gram = g;
  }
  return out;
}

ModelFile load_model_file(const std::string& path) {
  std::string base = path;
  auto slash = base.find_last_of('/');
  if (slash != std::string::npos) base = base.substr(slash + 1);
  auto dot = base.find_last_of('.');
  if (dot != std::string::npos) base = base.substr(0, dot);
  return parse_model_json(read_text_file(path), base);
}

NormedLattice parse_lattice_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ModelLoadError(std::string("invalid lattice JSON: ") + e.what());
  }
  RatMatrix basis = matrix_from_json(j.at("basis"), "basis");
  const json& nj = j.at("norm");
  std::string kind = nj.value("kind", "");
  if (kind == "quadratic")
    return NormedLattice{basis, NormOracle::quadratic(matrix_from_json(nj.at("gram"), "norm.gram"))};
  if (kind == "polyhedral") {
    if (nj.contains("vertices"))
      return NormedLattice{
          basis, NormOracle::polyhedral_from_vertices(matrix_from_json(nj.at("vertices"), "norm.vertices"))};
    if (nj.contains("facets"))
      return NormedLattice{
          basis, NormOracle::polyhedral_from_facets(matrix_from_json(nj.at("facets"), "norm.facets"))};
    throw ModelLoadError("polyhedral norm needs \"vertices\" or \"facets\"");
  }
  throw ModelLoadError("norm \"kind\" must be \"quadratic\" or \"polyhedral\"");
}

NormedLattice load_lattice_file(const std::string& path) {
  return parse_lattice_json(read_text_file(path));
}

bool is_lattice_file(const std::string& path) {
  json j = json::parse(read_text_file(path), nullptr, false);
  return j.is_object() && j.contains("basis");
}

}  // namespace syswork
