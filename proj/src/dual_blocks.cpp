#include "cqglab/dual_blocks.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "cqglab/errors.hpp"
#include "cqglab/structure_io.hpp"

namespace cqg {

using nlohmann::json;

BlockElement::BlockElement(std::map<int, CMatrix> blocks, double prune_tol) {
  for (auto& [label, m] : blocks) {
    if (label < 0) throw StructureError("negative label " + std::to_string(label));
    if (m.rows() != m.cols())
      throw StructureError("block " + std::to_string(label) + " is not square");
    if (m.size() && max_abs(m) > prune_tol) blocks_.emplace(label, std::move(m));
  }
}

BlockElement BlockElement::single(int label, const CMatrix& block) {
  return BlockElement({{label, block}});
}

BlockElement BlockElement::matrix_unit(int label, int n, int i, int j) {
  CMatrix m = CMatrix::Zero(n, n);
  m(i, j) = 1.0;
  return single(label, m);
}

std::vector<int> BlockElement::support() const {
  std::vector<int> out;
  for (const auto& [label, m] : blocks_) out.push_back(label);
  return out;
}

CMatrix BlockElement::block(int label, Eigen::Index n) const {
  auto it = blocks_.find(label);
  if (it == blocks_.end()) return CMatrix::Zero(n, n);
  if (it->second.rows() != n)
    throw StructureError("block " + std::to_string(label) + " has size " +
                         std::to_string(it->second.rows()) + ", expected " + std::to_string(n));
  return it->second;
}

const CMatrix* BlockElement::find(int label) const {
  auto it = blocks_.find(label);
  return it == blocks_.end() ? nullptr : &it->second;
}

namespace {

template <typename Op>
BlockElement zip(const BlockElement& a, const BlockElement& b, Op op) {
  std::map<int, CMatrix> out;
  std::set<int> labels;
  for (const auto& [l, m] : a.blocks()) labels.insert(l);
  for (const auto& [l, m] : b.blocks()) labels.insert(l);
  for (int l : labels) {
    const CMatrix* x = a.find(l);
    const CMatrix* y = b.find(l);
    const Eigen::Index n = x ? x->rows() : y->rows();
    out[l] = op(x ? *x : CMatrix(CMatrix::Zero(n, n)), y ? *y : CMatrix(CMatrix::Zero(n, n)));
  }
  return BlockElement(std::move(out));
}

RVector sqrt_q(const QData::Entry& e) { return e.q.cwiseSqrt(); }

} // namespace

BlockElement BlockElement::operator+(const BlockElement& o) const {
  return zip(*this, o, [](const CMatrix& x, const CMatrix& y) -> CMatrix { return x + y; });
}

BlockElement BlockElement::operator-(const BlockElement& o) const {
  return zip(*this, o, [](const CMatrix& x, const CMatrix& y) -> CMatrix { return x - y; });
}

BlockElement BlockElement::operator*(cplx s) const {
  std::map<int, CMatrix> out;
  for (const auto& [l, m] : blocks_) out[l] = s * m;
  return BlockElement(std::move(out));
}

BlockElement BlockElement::compose(const BlockElement& o) const {
  std::map<int, CMatrix> out;
  for (const auto& [l, m] : blocks_)
    if (const CMatrix* y = o.find(l)) out[l] = m * *y;
  return BlockElement(std::move(out));
}

BlockElement BlockElement::adjoint() const {
  std::map<int, CMatrix> out;
  for (const auto& [l, m] : blocks_) out[l] = m.adjoint();
  return BlockElement(std::move(out));
}

double max_block_difference(const BlockElement& a, const BlockElement& b) {
  double worst = 0;
  const BlockElement diff = a - b;
  for (const auto& [l, m] : diff.blocks()) worst = std::max(worst, max_abs(m));
  return worst;
}

QData QData::kac(std::function<std::int64_t(int)> dims, int max_label) {
  std::map<int, Entry> e;
  for (int a = 0; a <= max_label; ++a) {
    const int n = static_cast<int>(dims(a));
    e[a] = Entry{n, double(n), RVector::Ones(n)};
  }
  return from_entries(std::move(e), true);
}

QData QData::kac(const IrrepCategory& cat, int max_label) {
  return kac([&cat](int a) { return cat.dim(a); }, max_label);
}

QData QData::geometric(double q, int max_label) {
  if (!(q > 0)) throw ConfigurationError("geometric Q-data needs q > 0");
  std::map<int, Entry> e;
  for (int a = 0; a <= max_label; ++a) {
    RVector diag(a + 1);
    for (int k = 0; k <= a; ++k) diag(k) = std::pow(q, a / 2.0 - k);
    e[a] = Entry{a + 1, diag.sum(), diag};
  }
  QData out = from_entries(std::move(e), q == 1.0);
  const double defect = fusion_dimension_defect(out, max_label);
  if (defect > 1e-9 * std::pow(out.d(max_label), 2))
    throw ConfigurationError("quantum dimensions violate the fusion rule (defect " +
                             std::to_string(defect) + ")");
  return out;
}

QData QData::from_entries(std::map<int, Entry> entries, bool kac_mode, double tol) {
  for (const auto& [label, e] : entries) {
    const std::string where = "label " + std::to_string(label);
    if (e.n <= 0 || e.q.size() != e.n) throw ConfigurationError(where + ": Q must be n_α×n_α");
    if ((e.q.array() <= 0).any()) throw ConfigurationError(where + ": Q must be positive");
    const double tq = e.q.sum(), tqi = e.q.cwiseInverse().sum();
    if (std::abs(tq - e.d) > tol * std::max(1.0, e.d) || std::abs(tqi - e.d) > tol * std::max(1.0, e.d))
      throw ConfigurationError(where + ": Tr Q = " + std::to_string(tq) + ", Tr Q⁻¹ = " +
                               std::to_string(tqi) + ", d = " + std::to_string(e.d));
    if (kac_mode && (std::abs(e.d - e.n) > tol || (e.q.array() - 1.0).abs().maxCoeff() > tol))
      throw ConfigurationError(where + ": Kac mode requires Q = I and d = n");
  }
  QData out;
  out.entries_ = std::move(entries);
  out.kac_ = kac_mode;
  return out;
}

const QData::Entry& QData::at(int label) const {
  auto it = entries_.find(label);
  if (it == entries_.end())
    throw ConfigurationError("no dimension data for label " + std::to_string(label));
  return it->second;
}

double fusion_dimension_defect(const QData& q, int max_label) {
  double worst = 0;
  for (int b = 0; b <= max_label; ++b)
    for (int g = 0; b + g <= max_label; ++g) {
      double sum = 0;
      for (int a : fusion_range(b, g).components) sum += q.d(a);
      worst = std::max(worst, std::abs(sum - q.d(b) * q.d(g)));
    }
  return worst;
}

int Conjugation::operator()(int label) const {
  if (identity_) return label;
  auto it = table_.find(label);
  if (it == table_.end())
    throw ConfigurationError("no conjugate configured for label " + std::to_string(label));
  return it->second;
}

const CMatrix* Conjugation::twist(int label) const {
  if (twists_.empty()) return nullptr;
  auto it = twists_.find(label);
  if (it == twists_.end())
    throw ConfigurationError("no conjugation matrix configured for label " + std::to_string(label));
  return &it->second;
}

Conjugation Conjugation::onplus(const IrrepCategory& cat, int max_label) {
  std::map<int, int> table;
  std::map<int, CMatrix> twists;
  for (int n = 0; n <= max_label; ++n) {
    table[n] = n;
    twists[n] = cat.conjugation_matrix(n).cast<cplx>();
  }
  return Conjugation(std::move(table), std::move(twists));
}

cplx haar_weight(const BlockElement& x, const QData& q) {
  cplx s = 0;
  for (const auto& [l, m] : x.blocks()) {
    const auto& e = q.at(l);
    s += e.d * (e.q.cast<cplx>().asDiagonal() * x.block(l, e.n)).trace();
  }
  return s;
}

cplx pairing(const BlockElement& x, const BlockElement& y, const QData& q) {
  cplx s = 0;
  for (const auto& [l, m] : x.blocks()) {
    const CMatrix* yb = y.find(l);
    if (!yb) continue;
    const auto& e = q.at(l);
    s += e.d * (e.q.cast<cplx>().asDiagonal() * (*yb * x.block(l, e.n))).trace();
  }
  return s;
}

double fourier_algebra_norm(const BlockElement& x, const QData& q) {
  double s = 0;
  for (const auto& [l, m] : x.blocks()) {
    const auto& e = q.at(l);
    s += e.d * trace_norm(x.block(l, e.n) * e.q.cast<cplx>().asDiagonal());
  }
  return s;
}

double adelta_norm(const BlockElement& x, const QData& q) {
  double s = 0;
  for (const auto& [l, m] : x.blocks()) {
    const auto& e = q.at(l);
    s += std::pow(e.d, 1.5) * hs_norm(x.block(l, e.n) * sqrt_q(e).cast<cplx>().asDiagonal());
  }
  return s;
}

double adelta_dual_norm(const BlockElement& x, const QData& q) {
  double s = 0;
  for (const auto& [l, m] : x.blocks()) {
    const auto& e = q.at(l);
    s = std::max(s, hs_norm(sqrt_q(e).cast<cplx>().asDiagonal() * x.block(l, e.n)) / std::sqrt(e.d));
  }
  return s;
}

BlockElement dual_antipode(const BlockElement& x, const Conjugation& conj) {
  std::map<int, CMatrix> out;
  for (const auto& [l, m] : x.blocks()) {
    const int a = conj(l);
    if (const CMatrix* j = conj.twist(a))
      out[a] = *j * m.transpose() * j->adjoint();
    else
      out[a] = m.transpose();
  }
  return BlockElement(std::move(out));
}

CMatrix coproduct_block(const BlockElement& x, int beta, int gamma, const IrrepCategory& cat) {
  const Eigen::Index n = cat.dim(beta) * cat.dim(gamma);
  CMatrix out = CMatrix::Zero(n, n);
  for (int a : fusion_range(beta, gamma).components) {
    const CMatrix* xa = x.find(a);
    if (!xa) continue;
    CMatrix t = cat.fusion_isometry(beta, gamma, a).cast<cplx>();
    out.noalias() += t * x.block(a, cat.dim(a)) * t.adjoint();
  }
  return out;
}

CMatrix coproduct_of_matrix_unit(int alpha, int i, int j, int beta, int gamma,
                                 const IrrepCategory& cat) {
  const std::int64_t na = cat.dim(alpha);
  if (i < 0 || j < 0 || i >= na || j >= na) throw DomainError("matrix unit index out of range");
  const Eigen::Index n = cat.dim(beta) * cat.dim(gamma);
  auto fr = fusion_range(beta, gamma).components;
  if (std::find(fr.begin(), fr.end(), alpha) == fr.end()) return CMatrix::Zero(n, n);
  const RMatrix& t = cat.fusion_isometry(beta, gamma, alpha);
  return (t.col(i) * t.col(j).transpose()).cast<cplx>();
}

double coproduct_dual_norm(const BlockElement& x, const IrrepCategory& cat, int window) {
  double s = 0;
  for (int b = 0; b <= window; ++b)
    for (int g = 0; g <= window; ++g) {
      const double nb = double(cat.dim(b)), ng = double(cat.dim(g));
      s = std::max(s, hs_norm(coproduct_block(x, b, g, cat)) / std::sqrt(nb * ng));
    }
  return s;
}

double coassociativity_residual(const BlockElement& x, int beta, int gamma, int delta,
                                const IrrepCategory& cat) {
  const Eigen::Index nb = cat.dim(beta), ng = cat.dim(gamma), nd = cat.dim(delta);
  CMatrix left = CMatrix::Zero(nb * ng * nd, nb * ng * nd);
  for (int e : fusion_range(beta, gamma).components) {
    CMatrix t = kron(CMatrix(cat.fusion_isometry(beta, gamma, e).cast<cplx>()),
                     CMatrix(CMatrix::Identity(nd, nd)));
    left.noalias() += t * coproduct_block(x, e, delta, cat) * t.adjoint();
  }
  CMatrix right = CMatrix::Zero(nb * ng * nd, nb * ng * nd);
  for (int e : fusion_range(gamma, delta).components) {
    CMatrix t = kron(CMatrix(CMatrix::Identity(nb, nb)),
                     CMatrix(cat.fusion_isometry(gamma, delta, e).cast<cplx>()));
    right.noalias() += t * coproduct_block(x, beta, e, cat) * t.adjoint();
  }
  return max_abs(CMatrix(left - right));
}

BlockElement adelta_product(const BlockElement& x, const BlockElement& y, const IrrepCategory& cat,
                            int bound) {
  for (int b : x.support())
    for (int g : y.support())
      for (int a : fusion_range(b, g).components)
        if (a > bound) throw TruncationError(a, bound);

  std::map<int, CMatrix> out;
  for (int b : x.support())
    for (int g : y.support()) {
      const Eigen::Index db = cat.dim(b), dg = cat.dim(g);
      const CMatrix xt = x.block(b, db).transpose(), yb = y.block(g, dg);
      for (int a : fusion_range(b, g).components) {
        const RMatrix& t = cat.fusion_isometry(b, g, a);
        // (X⊗Y)v is Y·M·Xᵗ with v reshaped to the dg × db matrix M
        CMatrix xyt(t.rows(), t.cols());
        for (Eigen::Index c = 0; c < t.cols(); ++c) {
          CMatrix m = Eigen::Map<const RMatrix>(t.col(c).data(), dg, db).cast<cplx>();
          Eigen::Map<CMatrix>(xyt.col(c).data(), dg, db).noalias() = yb * m * xt;
        }
        const double w = double(db * dg) / double(cat.dim(a));
        RMatrix re = w * (t.transpose() * xyt.real()), im = w * (t.transpose() * xyt.imag());
        CMatrix contrib(re.rows(), re.cols());
        contrib.real() = re;
        contrib.imag() = im;
        auto it = out.find(a);
        if (it == out.end())
          out.emplace(a, std::move(contrib));
        else
          it->second += contrib;
      }
    }
  return BlockElement(std::move(out));
}

BlockTensor twisted_convolution_adjoint(int alpha, int i, int j, int n_alpha, const Conjugation& conj) {
  if (i < 0 || j < 0 || i >= n_alpha || j >= n_alpha)
    throw DomainError("matrix unit index out of range");
  if (const CMatrix* t = conj.twist(conj(alpha)); t && max_abs(CMatrix(*t - CMatrix::Identity(t->rows(), t->cols()))) > 0)
    throw ConfigurationError("closed-form Φ* needs an untwisted conjugate basis");
  const int n = n_alpha;
  CMatrix m = CMatrix::Zero(n * n, n * n);
  for (int r = 0; r < n; ++r) m(i * n + j, r * n + r) = 1.0 / n;
  return {{{alpha, conj(alpha)}, m}};
}

cplx pair_with_coefficients(const BlockTensor& t, int beta, int gamma, int n_gamma, int k, int l,
                            int p, int q) {
  auto it = t.find({beta, gamma});
  if (it == t.end()) return 0.0;
  return it->second(k * n_gamma + p, l * n_gamma + q);
}

double twisted_unit_norm(int n) {
  CMatrix v = CMatrix::Zero(n * n, 1);
  for (int r = 0; r < n; ++r) v(r * n + r) = 1.0 / n;
  return hs_norm(v);
}

json block_to_json(const BlockElement& x) {
  json doc;
  doc["labels"] = x.support();
  doc["blocks"] = json::object();
  for (const auto& [l, m] : x.blocks()) doc["blocks"][std::to_string(l)] = matrix_to_json(m);
  return doc;
}

BlockElement block_from_json(const json& doc, const std::function<std::int64_t(int)>& dims) {
  if (!doc.is_object() || !doc.contains("labels") || !doc.contains("blocks"))
    throw StructureError("/: expected an object with \"labels\" and \"blocks\"");
  const json& labels = doc["labels"];
  const json& blocks = doc["blocks"];
  if (!labels.is_array()) throw StructureError("/labels: expected an array");
  if (!blocks.is_object()) throw StructureError("/blocks: expected an object");
  std::set<int> declared;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (!labels[k].is_number_integer() || labels[k].get<int>() < 0)
      throw StructureError("/labels/" + std::to_string(k) + ": expected a nonnegative integer");
    declared.insert(labels[k].get<int>());
  }
  std::map<int, CMatrix> out;
  for (const auto& [key, value] : blocks.items()) {
    const std::string where = "/blocks/" + key;
    int label;
    try {
      std::size_t used = 0;
      label = std::stoi(key, &used);
      if (used != key.size() || label < 0) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw StructureError(where + ": label must be a nonnegative integer");
    }
    if (!declared.count(label)) throw StructureError(where + ": label missing from /labels");
    CMatrix m = matrix_from_json(value, where);
    if (m.rows() != m.cols()) throw StructureError(where + ": block is not square");
    if (dims && m.rows() != dims(label))
      throw StructureError(where + ": expected a " + std::to_string(dims(label)) + "×" +
                           std::to_string(dims(label)) + " block");
    out.emplace(label, std::move(m));
  }
  for (int l : declared)
    if (!out.count(l)) throw StructureError("/labels: label " + std::to_string(l) + " has no block");
  return BlockElement(std::move(out));
}

BlockElement load_block(const std::filesystem::path& path, const std::function<std::int64_t(int)>& dims) {
  return block_from_json(read_json_file(path), dims);
}

void save_block(const std::filesystem::path& path, const BlockElement& x) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << block_to_json(x).dump(2) << '\n';
}

} // namespace cqg
