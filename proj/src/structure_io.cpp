#include "cqglab/structure_io.hpp"

#include <fstream>
#include <sstream>

#include "cqglab/errors.hpp"

namespace cqg {

using nlohmann::json;

namespace {

const json& member(const json& doc, const std::string& key) {
  if (!doc.is_object()) throw StructureError("/: expected a JSON object");
  auto it = doc.find(key);
  if (it == doc.end()) throw StructureError("/" + key + ": missing");
  return *it;
}

void expect_array(const json& j, std::size_t n, const std::string& where) {
  if (!j.is_array()) throw StructureError(where + ": expected an array");
  if (j.size() != n)
    throw StructureError(where + ": expected " + std::to_string(n) + " entries, found " +
                         std::to_string(j.size()));
}

Tensor3 tensor_from_json(const json& j, int n, const std::string& where) {
  Tensor3 t(n);
  expect_array(j, n, where);
  for (int a = 0; a < n; ++a) {
    std::string wa = where + "/" + std::to_string(a);
    expect_array(j[a], n, wa);
    for (int b = 0; b < n; ++b) {
      std::string wb = wa + "/" + std::to_string(b);
      expect_array(j[a][b], n, wb);
      for (int c = 0; c < n; ++c)
        t(a, b, c) = complex_from_json(j[a][b][c], wb + "/" + std::to_string(c));
    }
  }
  return t;
}

CVector vector_from_json(const json& j, int n, const std::string& where) {
  expect_array(j, n, where);
  CVector v(n);
  for (int a = 0; a < n; ++a) v(a) = complex_from_json(j[a], where + "/" + std::to_string(a));
  return v;
}

} // namespace

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw StructureError(where + ": expected an [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const CMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    out.push_back(row);
  }
  return out;
}

CMatrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw StructureError(where + ": expected an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? (j[0].is_array() ? j[0].size() : 0) : 0;
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    std::string wi = where + "/" + std::to_string(i);
    expect_array(j[i], cols, wi);
    for (std::size_t k = 0; k < cols; ++k)
      m(i, k) = complex_from_json(j[i][k], wi + "/" + std::to_string(k));
  }
  return m;
}

StructureConstants structure_from_json(const json& doc) {
  StructureConstants sc;
  const json& dim = member(doc, "dim");
  if (!dim.is_number_integer() || dim.get<int>() <= 0)
    throw StructureError("/dim: expected a positive integer");
  sc.dim = dim.get<int>();
  if (sc.dim > 64) throw StructureError("/dim: " + std::to_string(sc.dim) + " exceeds 64");
  auto name = doc.find("name");
  sc.name = (name != doc.end() && name->is_string()) ? name->get<std::string>() : "";
  const int n = sc.dim;
  sc.mult = tensor_from_json(member(doc, "mult"), n, "/mult");
  sc.comult = tensor_from_json(member(doc, "comult"), n, "/comult");
  sc.unit = vector_from_json(member(doc, "unit"), n, "/unit");
  sc.counit = vector_from_json(member(doc, "counit"), n, "/counit");
  const json& s = member(doc, "antipode");
  expect_array(s, n, "/antipode");
  sc.antipode = matrix_from_json(s, "/antipode");
  if (sc.antipode.cols() != n) throw StructureError("/antipode/0: expected " + std::to_string(n) + " entries");
  const json& st = member(doc, "star");
  expect_array(st, n, "/star");
  sc.star = matrix_from_json(st, "/star");
  if (sc.star.cols() != n) throw StructureError("/star/0: expected " + std::to_string(n) + " entries");
  return sc;
}

json structure_to_json(const StructureConstants& sc) {
  const int n = sc.dim;
  auto tensor = [n](const Tensor3& t) {
    json out = json::array();
    for (int a = 0; a < n; ++a) {
      json ja = json::array();
      for (int b = 0; b < n; ++b) {
        json jb = json::array();
        for (int c = 0; c < n; ++c) jb.push_back(complex_to_json(t(a, b, c)));
        ja.push_back(jb);
      }
      out.push_back(ja);
    }
    return out;
  };
  auto vec = [](const CVector& v) {
    json out = json::array();
    for (Eigen::Index a = 0; a < v.size(); ++a) out.push_back(complex_to_json(v(a)));
    return out;
  };
  json doc;
  doc["name"] = sc.name;
  doc["dim"] = n;
  doc["mult"] = tensor(sc.mult);
  doc["comult"] = tensor(sc.comult);
  doc["unit"] = vec(sc.unit);
  doc["counit"] = vec(sc.counit);
  doc["antipode"] = matrix_to_json(sc.antipode);
  doc["star"] = matrix_to_json(sc.star);
  return doc;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

FiniteQuantumGroup load_structure(const std::filesystem::path& path) {
  json doc = read_json_file(path);
  try {
    return FiniteQuantumGroup(structure_from_json(doc));
  } catch (const StructureError& e) {
    throw StructureError(path.string() + ": " + e.what());
  }
}

void save_structure(const std::filesystem::path& path, const StructureConstants& sc) {
  std::ofstream out(path);
  if (!out) throw InputError(path.string() + ": cannot open for writing");
  out << structure_to_json(sc).dump() << '\n';
}

} // namespace cqg
