#include "cqglab/derivation_lab.hpp"

#include <cmath>

#include "cqglab/errors.hpp"

namespace cqg {

RMatrix torus_generator(int N) {
  if (N < 2) throw DomainError("N must be at least 2");
  RMatrix a = RMatrix::Zero(N, N);
  a(1, 0) = 1.0;
  a(0, 1) = -1.0;
  return a;
}

BlockElement grouplike_family(const IrrepCategory& cat, double t, int n_max) {
  std::map<int, CMatrix> blocks;
  const RMatrix r = rotation(cat.N(), t);
  for (int n = 0; n <= n_max; ++n) blocks[n] = cat.rho(n, r).cast<cplx>();
  return BlockElement(std::move(blocks));
}

const RMatrix& DerivationSymbol::at(int n) const {
  auto it = blocks.find(n);
  if (it == blocks.end())
    throw DomainError("symbol block " + std::to_string(n) + " not computed (n_max = " +
                      std::to_string(n_max) + ")");
  return it->second;
}

BlockElement DerivationSymbol::as_block_element() const {
  std::map<int, CMatrix> out;
  for (const auto& [n, m] : blocks) out[n] = m.cast<cplx>();
  return BlockElement(std::move(out));
}

DerivationSymbol derivation_symbol(const IrrepCategory& cat, int n_max) {
  const int N = cat.N();
  DerivationSymbol s;
  s.N = N;
  s.n_max = n_max;
  s.provenance = "rotation in the (e1,e2) plane of C^" + std::to_string(N);
  const RMatrix a1 = torus_generator(N);
  for (int n = 0; n <= n_max; ++n) {
    const RMatrix& w = cat.embedding(n);
    // G W with G = Σ_k I^{⊗(k−1)}⊗A_1⊗I^{⊗(n−k)}, applied slot by slot
    RMatrix gw = RMatrix::Zero(w.rows(), w.cols());
    for (int k = 0; k < n; ++k) {
      const Eigen::Index before = checked_pow(N, k), after = checked_pow(N, n - k - 1);
      for (Eigen::Index x = 0; x < before; ++x)
        for (Eigen::Index y = 0; y < after; ++y)
          for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
              if (a1(i, j) == 0.0) continue;
              gw.row((x * N + i) * after + y) += a1(i, j) * w.row((x * N + j) * after + y);
            }
    }
    s.blocks[n] = w.transpose() * gw;
  }
  return s;
}

double symbol_fd_residual(const IrrepCategory& cat, const DerivationSymbol& a, int n, double h) {
  const RMatrix plus = cat.rho(n, rotation(cat.N(), h));
  const RMatrix minus = cat.rho(n, rotation(cat.N(), -h));
  return max_abs(RMatrix((plus - minus) / (2 * h) - a.at(n)));
}

VerificationReport grouplike_check(const IrrepCategory& cat, double t, int beta, int gamma, double tol) {
  VerificationReport rep;
  rep.add(timed([&] {
    BlockElement c = grouplike_family(cat, t, beta + gamma);
    CMatrix lhs = coproduct_block(c, beta, gamma, cat);
    CMatrix rhs = kron(c.block(beta, cat.dim(beta)), c.block(gamma, cat.dim(gamma)));
    return Check::below("grouplike[" + std::to_string(beta) + "," + std::to_string(gamma) + "]",
                        "Δ̂(C_t) = C_t⊗C_t", max_abs(CMatrix(lhs - rhs)), tol);
  }));
  return rep;
}

double derivation_identity_residual(const IrrepCategory& cat, const DerivationSymbol& a, int beta,
                                    int gamma) {
  if (beta + gamma > a.n_max)
    throw DomainError("symbol known up to " + std::to_string(a.n_max) + ", but (" +
                      std::to_string(beta) + "," + std::to_string(gamma) + ") needs label " +
                      std::to_string(beta + gamma));
  const Eigen::Index nb = cat.dim(beta), ng = cat.dim(gamma);
  RMatrix lhs = RMatrix::Zero(nb * ng, nb * ng);
  for (int al : fusion_range(beta, gamma).components) {
    const RMatrix& t = cat.fusion_isometry(beta, gamma, al);
    lhs.noalias() += t * a.at(al) * t.transpose();
  }
  RMatrix rhs = kron(a.at(beta), RMatrix(RMatrix::Identity(ng, ng))) +
                kron(RMatrix(RMatrix::Identity(nb, nb)), a.at(gamma));
  return max_abs(RMatrix(lhs - rhs));
}

VerificationReport derivation_identity_check(const IrrepCategory& cat, const DerivationSymbol& a,
                                             int beta, int gamma, double tol) {
  VerificationReport rep;
  rep.add(timed([&] {
    return Check::below("derivation_identity[" + std::to_string(beta) + "," + std::to_string(gamma) + "]",
                        "Δ̂(A) = A⊗I + I⊗A", derivation_identity_residual(cat, a, beta, gamma), tol);
  }));
  return rep;
}

CbBound cb_bound(const IrrepCategory& cat, const DerivationSymbol& a) {
  CbBound out;
  for (const auto& [n, m] : a.blocks) out.norms[n] = n == 0 ? max_abs(m) : operator_norm(m);
  const double a1 = out.norms.count(1) ? out.norms.at(1) : 0.0;
  out.growth_excess = -INFINITY;
  for (const auto& [n, v] : out.norms) {
    if (n == 0) continue;
    out.value = std::max(out.value, v / double(cat.dim(n)));
    out.growth_excess = std::max(out.growth_excess, v - n * a1);
  }
  if (out.norms.size() <= 1) out.growth_excess = 0;
  return out;
}

BlockElement multiplier(const DerivationSymbol& a, const BlockElement& b) {
  std::map<int, CMatrix> out;
  for (const auto& [n, m] : b.blocks()) out[n] = a.at(n).cast<cplx>() * m;
  return BlockElement(std::move(out));
}

BlockElement psi(const IrrepCategory& cat, const BlockElement& b) {
  if (b.empty()) return b;
  return dual_antipode(b, Conjugation::onplus(cat, b.blocks().rbegin()->first));
}

BlockElement derivation(const IrrepCategory& cat, const DerivationSymbol& a, const BlockElement& b) {
  return psi(cat, multiplier(a, b));
}

double psi_ta_norm_bound(const IrrepCategory& cat, const DerivationSymbol& a) {
  return cb_bound(cat, a).value;
}

cplx dual_pairing(const BlockElement& phi, const BlockElement& w, const IrrepCategory& cat) {
  cplx s = 0;
  for (const auto& [n, m] : w.blocks())
    if (const CMatrix* p = phi.find(n)) s += double(cat.dim(n)) * (*p * m).trace();
  return s;
}

double leibniz_residual(const IrrepCategory& cat, const DerivationSymbol& a, const BlockElement& x,
                        const BlockElement& y, const BlockElement& w, int bound) {
  cplx lhs = dual_pairing(derivation(cat, a, adelta_product(x, y, cat, bound)), w, cat);
  cplx left = dual_pairing(derivation(cat, a, y), adelta_product(w, x, cat, bound), cat);
  cplx right = dual_pairing(derivation(cat, a, x), adelta_product(y, w, cat, bound), cat);
  return std::abs(lhs - left - right);
}

double bimodule_residual(const IrrepCategory& cat, const BlockElement& x, const BlockElement& y,
                         const BlockElement& w, int bound) {
  cplx whole = dual_pairing(psi(cat, adelta_product(x, y, cat, bound)), w, cat);
  cplx left = dual_pairing(psi(cat, y), adelta_product(w, x, cat, bound), cat);
  cplx right = dual_pairing(psi(cat, x), adelta_product(y, w, cat, bound), cat);
  return std::max(std::abs(whole - left), std::abs(whole - right));
}

CMatrix embed_y(int N, cplx y0, const CMatrix& y2) {
  const int n2 = N * N;
  if (y2.rows() != n2 - 1 || y2.cols() != n2 - 1)
    throw ConfigurationError("Y_2 must be " + std::to_string(n2 - 1) + "×" + std::to_string(n2 - 1));
  CMatrix y = CMatrix::Zero(n2, n2);
  y.topLeftCorner(n2 - 1, n2 - 1) = y2;
  y(n2 - 1, n2 - 1) = y0;
  return y;
}

namespace {

// four-case formula; sign = +1 reproduces U Ỹ U*, sign = −1 gives U* Ỹ U
CMatrix four_case(int N, cplx y0, const CMatrix& y2, int sign) {
  if (N < 2) throw DomainError("N must be at least 2");
  const CMatrix y = embed_y(N, y0, y2);
  const int n2 = N * N;
  auto idx = [N](int j, int k) { return (j - 1) * N + (k - 1); };
  auto omega = [N](int e) { return std::polar(1.0, 2.0 * M_PI * e / N); };
  const double s = 1.0 / std::sqrt(double(N));
  CMatrix out(n2, n2);
  for (int l = 1; l <= N; ++l)
    for (int m = 1; m <= N; ++m)
      for (int p = 1; p <= N; ++p)
        for (int q = 1; q <= N; ++q) {
          cplx v = 0;
          if (l != m && p != q) {
            v = y(idx(l, m), idx(p, q));
          } else if (l == m && p != q) {
            for (int j = 1; j <= N; ++j) v += s * omega(sign * j * l) * y(idx(j, j), idx(p, q));
          } else if (l != m && p == q) {
            for (int r = 1; r <= N; ++r) v += s * omega(-sign * p * r) * y(idx(l, m), idx(r, r));
          } else {
            for (int j = 1; j <= N; ++j)
              for (int r = 1; r <= N; ++r)
                v += omega(sign * (j * l - r * p)) / double(N) * y(idx(j, j), idx(r, r));
          }
          out(idx(l, m), idx(p, q)) = v;
        }
  return out;
}

} // namespace

CMatrix dhat_y_block11(int N, cplx y0, const CMatrix& y2) { return four_case(N, y0, y2, +1); }

CMatrix dhat_y_block11_conjugate(int N, cplx y0, const CMatrix& y2) { return four_case(N, y0, y2, -1); }

CMatrix antisymmetrize(const CMatrix& m, int N) {
  CMatrix f = flip_operator(N, N).cast<cplx>();
  return m - f * m * f;
}

std::vector<WitnessTerm> stated_witness(int N) {
  CMatrix c = CMatrix::Zero(N, N), b = CMatrix::Zero(N, N);
  c(0, 1) = c(1, 0) = 1.0;
  b(0, 0) = 1.0;
  return {{c, b, 1.0}};
}

std::vector<WitnessTerm> range_witness(int N) {
  std::vector<WitnessTerm> out;
  for (int i = 0; i < N; ++i) {
    CMatrix e2i = CMatrix::Zero(N, N), e1i = CMatrix::Zero(N, N);
    e2i(1, i) = 1.0;
    e1i(0, i) = 1.0;
    out.push_back({e2i, e1i, 1.0});
    out.push_back({e1i, e2i, -1.0});
  }
  return out;
}

WitnessValue inner_witness(int N, cplx y0, const CMatrix& y2, const std::vector<WitnessTerm>& terms) {
  const CMatrix z = antisymmetrize(dhat_y_block11(N, y0, y2), N);
  const CMatrix a1 = torus_generator(N).cast<cplx>();
  const double d1 = N;
  cplx tr1 = 0, tr2 = 0;
  for (const auto& t : terms) {
    if (t.c.rows() != N || t.c.cols() != N || t.b.rows() != N || t.b.cols() != N)
      throw DomainError("witness legs must be N×N blocks at label 1");
    tr1 += t.coeff * (t.c.transpose() * a1 * t.b).trace();
    tr2 += t.coeff * (z * kron(t.c, t.b)).trace();
  }
  return {d1 * tr1, d1 * d1 * tr2, 2.0 * tr1, 4.0 * tr2};
}

WitnessValue inner_witness(int N, cplx y0, const CMatrix& y2, const BlockElement& b, const BlockElement& c) {
  if (b.support() != std::vector<int>{1} || c.support() != std::vector<int>{1})
    throw DomainError("B and C must be supported on label 1 only");
  return inner_witness(N, y0, y2, {{c.block(1, N), b.block(1, N), 1.0}});
}

} // namespace cqg
