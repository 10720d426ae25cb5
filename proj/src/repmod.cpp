#include "qsp/repmod.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace qsp::repmod {

using linalg::add_scaled;
using qfield::LaurentPolynomial;
using qfield::q_binomial;
using qfield::q_factorial;
using qfield::q_integer;

namespace {

RationalFunction qpow(long k) { return RationalFunction::q_power(static_cast<int>(k)); }

int sym(const Realization& m, std::size_t i) { return m.datum.cartan.d[i]; }

long coroot(const Realization& m, std::size_t i, const IntVector& mu) { return m.datum.coroot_pairing(i, mu); }

IntVector add_root(const RootDatum& r, const IntVector& mu, std::size_t i, long k) {
  IntVector out = mu;
  for (std::size_t a = 0; a < out.size(); ++a) out[a] += k * r.roots[i][a];
  return out;
}

ModuleVector apply_power(const SparseMatrix& x, long n, const ModuleVector& v) {
  ModuleVector out = v;
  for (long k = 0; k < n && !out.empty(); ++k) out = x.apply(out);
  return out;
}

// X^{(n)} v = X^n v / [n]_i!
ModuleVector apply_divided(const SparseMatrix& x, long n, int d, const ModuleVector& v) {
  ModuleVector out = apply_power(x, n, v);
  if (n > 1 && !out.empty()) out = linalg::scaled(out, RationalFunction(1, q_factorial(n, d)));
  return out;
}

}  // namespace

void rebuild_blocks(Realization& m) {
  m.blocks.clear();
  m.block_of_weight.clear();
  for (std::size_t k = 0; k < m.weights.size(); ++k) {
    auto [it, inserted] = m.block_of_weight.try_emplace(m.weights[k], m.blocks.size());
    if (inserted) m.blocks.push_back({m.weights[k], {}});
    m.blocks[it->second].indices.push_back(k);
  }
}

// ---------------------------------------------------------------------------

ModuleVector Realization::block_component(const ModuleVector& v, std::size_t b) const {
  ModuleVector out;
  for (const auto& [k, x] : v)
    if (block_of_weight.at(weights[k]) == b) out.emplace(k, x);
  return out;
}

std::vector<std::size_t> Realization::support_blocks(const ModuleVector& v) const {
  std::set<std::size_t> s;
  for (const auto& [k, x] : v) {
    if (k >= weights.size()) throw std::out_of_range("module vector index outside realization");
    if (!x.is_zero()) s.insert(block_of_weight.at(weights[k]));
  }
  return {s.begin(), s.end()};
}

std::optional<IntVector> Realization::weight_of(const ModuleVector& v) const {
  auto blocks_hit = support_blocks(v);
  if (blocks_hit.size() != 1) return std::nullopt;
  return blocks[blocks_hit[0]].weight;
}

// ---------------------------------------------------------------------------
// V(λ)

Rational weyl_dimension(const rootdata::CartanDatum& cartan, const std::vector<long long>& lambda_coords) {
  std::vector<std::size_t> all(cartan.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  Rational dim = 1;
  for (const auto& beta : rootdata::positive_coroots(cartan, all)) {
    long long num = 0;
    long long den = 0;
    for (std::size_t k = 0; k < beta.size(); ++k) {
      num += beta[k] * (lambda_coords[k] + 1);
      den += beta[k];
    }
    dim *= Rational(static_cast<long>(num), static_cast<long>(den));
  }
  dim.canonicalize();
  return dim;
}

Realization build_irreducible(const RootDatum& datum, const IntVector& lambda) {
  const std::size_t n = datum.cartan.size();
  if (lambda.size() != datum.rank_x()) throw std::invalid_argument("highest weight has wrong number of coordinates");
  std::vector<long long> coords(n);
  for (std::size_t i = 0; i < n; ++i) {
    coords[i] = datum.coroot_pairing(i, lambda);
    if (coords[i] < 0) throw NotDominant("highest weight is not dominant at node " + datum.cartan.labels[i]);
  }
  if (!rootdata::is_finite_type(datum.cartan))
    throw std::domain_error("build_irreducible: Cartan datum is not of finite type");

  Realization m;
  m.datum = datum;
  m.highest_weight = lambda;

  struct Block {
    IntVector depth;
    IntVector weight;
    std::size_t offset = 0;
    std::size_t dim = 0;
  };
  std::vector<Block> blocks;
  std::map<IntVector, std::size_t> by_depth;
  std::vector<std::vector<ModuleVector>> e_img;  // [basis][k]
  std::vector<std::vector<ModuleVector>> f_img;  // [basis][i]
  std::vector<DenseMatrix> gram;

  blocks.push_back({IntVector(n, 0), lambda, 0, 1});
  by_depth[IntVector(n, 0)] = 0;
  e_img.emplace_back(n);
  f_img.emplace_back(n);
  DenseMatrix one(1, 1);
  one(0, 0) = 1;
  gram.push_back(one);
  m.weights.push_back(lambda);
  m.provenance.push_back("v");

  std::vector<std::size_t> current{0};
  std::set<IntVector> seen{IntVector(n, 0)};
  while (!current.empty()) {
    std::vector<IntVector> next_depths;
    for (auto b : current)
      for (std::size_t i = 0; i < n; ++i) {
        IntVector child = blocks[b].depth;
        ++child[i];
        if (seen.insert(child).second) next_depths.push_back(child);
      }
    std::vector<std::size_t> next;
    for (const auto& depth : next_depths) {
      IntVector mu = lambda;
      for (std::size_t i = 0; i < n; ++i) mu = add_root(datum, mu, i, -depth[i]);

      auto block_at = [&](IntVector dd) -> std::optional<std::size_t> {
        auto it = by_depth.find(dd);
        if (it == by_depth.end()) return std::nullopt;
        return it->second;
      };

      struct Candidate {
        std::size_t node;
        std::size_t parent;  // global basis index
      };
      std::vector<Candidate> cands;
      for (std::size_t i = 0; i < n; ++i) {
        if (depth[i] == 0) continue;
        IntVector pd = depth;
        --pd[i];
        auto pb = block_at(pd);
        if (!pb) continue;
        for (std::size_t k = 0; k < blocks[*pb].dim; ++k) cands.push_back({i, blocks[*pb].offset + k});
      }
      if (cands.empty()) continue;

      // E_k (F_i b) = F_i E_k b + δ_ik [<h_i, wt b>]_i b
      auto raise = [&](const Candidate& c, std::size_t k) {
        ModuleVector out;
        for (const auto& [x, coef] : e_img[c.parent][k]) add_scaled(out, coef, f_img[x][c.node]);
        if (k == c.node) {
          long p = coroot(m, c.node, m.weights[c.parent]);
          add_scaled(out, RationalFunction(q_integer(p, sym(m, c.node))), m.basis_vector(c.parent));
        }
        return out;
      };
      std::vector<std::vector<ModuleVector>> cand_e(cands.size(), std::vector<ModuleVector>(n));
      for (std::size_t c = 0; c < cands.size(); ++c)
        for (std::size_t k = 0; k < n; ++k)
          if (depth[k] > 0) cand_e[c][k] = raise(cands[c], k);

      // (F_i b, F_j b') = q_i (b, K_i^{-1} E_i F_j b')
      const std::size_t mc = cands.size();
      DenseMatrix g(mc, mc);
      for (std::size_t a = 0; a < mc; ++a) {
        const auto& ca = cands[a];
        const std::size_t pblock = block_at([&] {
                                     IntVector pd = depth;
                                     --pd[ca.node];
                                     return pd;
                                   }()).value();
        const std::size_t off = blocks[pblock].offset;
        const int d = sym(m, ca.node);
        const RationalFunction factor = qpow(d * (1 - coroot(m, ca.node, m.weights[ca.parent])));
        for (std::size_t b = a; b < mc; ++b) {
          RationalFunction s;
          for (const auto& [x, coef] : cand_e[b][ca.node]) {
            const auto& gx = gram[pblock](ca.parent - off, x - off);
            if (!gx.is_zero()) s += gx * coef;
          }
          if (!s.is_zero()) s *= factor;
          g(a, b) = s;
          g(b, a) = s;
        }
      }

      DenseMatrix reduced = g;
      const auto pivots = linalg::rref(reduced);
      if (pivots.empty()) continue;
      const std::size_t dim = pivots.size();
      const std::size_t offset = m.weights.size();
      DenseMatrix gpp(dim, dim);
      for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b) gpp(a, b) = g(pivots[a], pivots[b]);
      auto inv = linalg::inverse(gpp);
      if (!inv) throw std::logic_error("build_irreducible: Gram matrix of selected vectors is singular");

      for (std::size_t c = 0; c < mc; ++c) {
        ModuleVector coords;
        for (std::size_t a = 0; a < dim; ++a) {
          RationalFunction s;
          for (std::size_t b = 0; b < dim; ++b)
            if (!(*inv)(a, b).is_zero() && !g(pivots[b], c).is_zero()) s += (*inv)(a, b) * g(pivots[b], c);
          if (!s.is_zero()) coords.emplace(offset + a, s);
        }
        f_img[cands[c].parent][cands[c].node] = std::move(coords);
      }
      for (std::size_t a = 0; a < dim; ++a) {
        const auto& c = cands[pivots[a]];
        e_img.push_back(cand_e[pivots[a]]);
        f_img.emplace_back(n);
        m.weights.push_back(mu);
        m.provenance.push_back("F_" + datum.cartan.labels[c.node] + " " + m.provenance[c.parent]);
      }
      by_depth[depth] = blocks.size();
      blocks.push_back({depth, mu, offset, dim});
      gram.push_back(gpp);
      next.push_back(blocks.size() - 1);
    }
    current = std::move(next);
  }

  const std::size_t total = m.weights.size();
  m.e.assign(n, SparseMatrix(total, total));
  m.f.assign(n, SparseMatrix(total, total));
  for (std::size_t col = 0; col < total; ++col)
    for (std::size_t k = 0; k < n; ++k) {
      for (const auto& [row, x] : e_img[col][k]) m.e[k].add(row, col, x);
      for (const auto& [row, x] : f_img[col][k]) m.f[k].add(row, col, x);
    }
  rebuild_blocks(m);
  m.gram = std::move(gram);

  const Rational expected = weyl_dimension(datum.cartan, coords);
  if (expected != Rational(static_cast<long>(total)))
    throw std::logic_error("build_irreducible: dimension " + std::to_string(total) +
                           " disagrees with the Weyl dimension formula " + expected.get_str());
  return m;
}

// ---------------------------------------------------------------------------
// Generators

SparseMatrix k_matrix(const Realization& m, const IntVector& h) {
  std::vector<RationalFunction> diag;
  diag.reserve(m.dim());
  for (const auto& w : m.weights) diag.push_back(qpow(m.datum.pair(h, w)));
  return SparseMatrix::diagonal(diag);
}

SparseMatrix k_node_matrix(const Realization& m, std::size_t i, int sign) {
  std::vector<RationalFunction> diag;
  diag.reserve(m.dim());
  for (const auto& w : m.weights) diag.push_back(qpow(sign * sym(m, i) * coroot(m, i, w)));
  return SparseMatrix::diagonal(diag);
}

SparseMatrix divided_power(const SparseMatrix& x, long n, int d) {
  SparseMatrix p = SparseMatrix::identity(x.rows());
  for (long k = 0; k < n; ++k) p = x * p;
  if (n > 1) p = p.scaled(RationalFunction(1, q_factorial(n, d)));
  return p;
}

ModuleVector act(const Realization& m, const Generator& g, const ModuleVector& v) {
  if (g.kind != Generator::Kind::K && g.node >= m.rank()) throw std::out_of_range("generator index outside datum");
  switch (g.kind) {
    case Generator::Kind::E: return m.e[g.node].apply(v);
    case Generator::Kind::F: return m.f[g.node].apply(v);
    case Generator::Kind::EDiv:
      if (g.power < 0) throw std::invalid_argument("negative divided power");
      return apply_divided(m.e[g.node], g.power, sym(m, g.node), v);
    case Generator::Kind::FDiv:
      if (g.power < 0) throw std::invalid_argument("negative divided power");
      return apply_divided(m.f[g.node], g.power, sym(m, g.node), v);
    case Generator::Kind::K: {
      if (g.h.size() != m.datum.rank_y()) throw std::out_of_range("K_h: h is not an element of Y");
      ModuleVector out;
      for (const auto& [k, x] : v) out.emplace(k, x * qpow(m.datum.pair(g.h, m.weights[k])));
      return out;
    }
  }
  return {};
}

RelationReport verify_relations(const Realization& m) {
  const std::size_t n = m.rank();
  const auto& c = m.datum.cartan;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t col = 0; col < m.dim(); ++col) {
      for (const auto& [row, x] : m.e[i].column(col))
        if (m.weights[row] != add_root(m.datum, m.weights[col], i, 1))
          return {false, "K_h E_" + c.labels[i] + " = q^<h,alpha> E K_h"};
      for (const auto& [row, x] : m.f[i].column(col))
        if (m.weights[row] != add_root(m.datum, m.weights[col], i, -1))
          return {false, "K_h F_" + c.labels[i] + " = q^<h,-alpha> F K_h"};
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      SparseMatrix lhs = m.e[i] * m.f[j] - m.f[j] * m.e[i];
      SparseMatrix rhs(m.dim(), m.dim());
      if (i == j) {
        std::vector<RationalFunction> diag;
        for (const auto& w : m.weights) diag.emplace_back(q_integer(coroot(m, i, w), sym(m, i)));
        rhs = SparseMatrix::diagonal(diag);
      }
      if (lhs != rhs) return {false, "E_" + c.labels[i] + " F_" + c.labels[j] + " - F_" + c.labels[j] + " E_" + c.labels[i]};
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const long top = 1 - c.gcm[i][j];
      SparseMatrix se(m.dim(), m.dim());
      SparseMatrix sf(m.dim(), m.dim());
      for (long r = 0; r <= top; ++r) {
        const long s = top - r;
        const RationalFunction sign = (s % 2 == 0) ? 1 : -1;
        se += (divided_power(m.e[i], r, sym(m, i)) * m.e[j] * divided_power(m.e[i], s, sym(m, i))).scaled(sign);
        sf += (divided_power(m.f[i], r, sym(m, i)) * m.f[j] * divided_power(m.f[i], s, sym(m, i))).scaled(sign);
      }
      if (se.nonzeros() != 0) return {false, "q-Serre relation for E_" + c.labels[i] + ", E_" + c.labels[j]};
      if (sf.nonzeros() != 0) return {false, "q-Serre relation for F_" + c.labels[i] + ", F_" + c.labels[j]};
    }
  return {};
}

// ---------------------------------------------------------------------------
// Form

RationalFunction contragredient_form(const Realization& m, const ModuleVector& u, const ModuleVector& v) {
  if (!m.is_irreducible() || m.gram.size() != m.blocks.size())
    throw std::logic_error("contragredient_form: realization carries no form");
  RationalFunction s;
  for (const auto& [a, x] : u) {
    const std::size_t b = m.block_of_weight.at(m.weights[a]);
    const std::size_t off = m.blocks[b].indices.front();
    for (const auto& [c, y] : v) {
      if (m.weights[c] != m.weights[a]) continue;
      const auto& g = m.gram[b](a - off, c - off);
      if (!g.is_zero()) s += x * g * y;
    }
  }
  return s;
}

SparseMatrix rho_e(const Realization& m, std::size_t i) {
  return (k_node_matrix(m, i, 1) * m.f[i]).scaled(qpow(sym(m, i)));
}

SparseMatrix rho_f(const Realization& m, std::size_t i) {
  return (k_node_matrix(m, i, -1) * m.e[i]).scaled(qpow(sym(m, i)));
}

// ---------------------------------------------------------------------------
// Kashiwara operators

StringDecomposition string_decomposition(const Realization& m, std::size_t i, const ModuleVector& weight_vector) {
  StringDecomposition out;
  const int d = sym(m, i);
  ModuleVector rest = weight_vector;
  while (!linalg::is_zero(rest)) {
    auto wt = m.weight_of(rest);
    if (!wt) throw std::invalid_argument("string_decomposition: not a weight vector");
    const long mval = coroot(m, i, *wt);
    long top = 0;
    ModuleVector y = rest;
    while (true) {
      ModuleVector next = m.e[i].apply(y);
      if (next.empty()) break;
      y = std::move(next);
      ++top;
    }
    // y = E_i^top rest = [top]! [mval + 2 top choose top] u_top
    LaurentPolynomial scale = q_factorial(top, d) * q_binomial(mval + 2 * top, top, d);
    ModuleVector u = linalg::scaled(y, RationalFunction(1, scale));
    rest = linalg::difference(rest, apply_divided(m.f[i], top, d, u));
    if (out.parts.count(top)) throw std::logic_error("string_decomposition: repeated string length");
    out.parts[top] = std::move(u);
  }
  return out;
}

namespace {

ModuleVector kashiwara_shift(const Realization& m, std::size_t i, const ModuleVector& v, long shift) {
  ModuleVector out;
  const int d = sym(m, i);
  for (auto b : m.support_blocks(v)) {
    auto dec = string_decomposition(m, i, m.block_component(v, b));
    for (const auto& [k, u] : dec.parts) {
      if (k + shift < 0) continue;
      add_scaled(out, RationalFunction(1), apply_divided(m.f[i], k + shift, d, u));
    }
  }
  return out;
}

}  // namespace

ModuleVector kashiwara_f(const Realization& m, std::size_t i, const ModuleVector& v) {
  return kashiwara_shift(m, i, v, 1);
}

ModuleVector kashiwara_e(const Realization& m, std::size_t i, const ModuleVector& v) {
  return kashiwara_shift(m, i, v, -1);
}

// ---------------------------------------------------------------------------
// Crystal lattice

SparseVector CrystalLattice::coordinates(const Realization& m, const ModuleVector& v) const {
  SparseVector out;
  for (auto b : m.support_blocks(v)) {
    const auto& idx = m.blocks[b].indices;
    const auto& inv = block_inverse[b];
    for (std::size_t a = 0; a < idx.size(); ++a) {
      RationalFunction s;
      for (std::size_t c = 0; c < idx.size(); ++c) {
        auto it = v.find(idx[c]);
        if (it != v.end() && !inv(a, c).is_zero()) s += inv(a, c) * it->second;
      }
      if (!s.is_zero()) out.emplace(block_members[b][a], s);
    }
  }
  return out;
}

CrystalLattice build_crystal_lattice(const Realization& m) {
  if (!m.is_irreducible()) throw std::logic_error("build_crystal_lattice: needs an irreducible realization");
  CrystalLattice lat;
  const std::size_t nb = m.blocks.size();
  lat.block_members.resize(nb);
  lat.block_inverse.resize(nb);
  lat.basis.push_back(m.highest_vector());
  lat.paths.push_back("v");
  lat.block_members[0] = {0};
  lat.block_inverse[0] = DenseMatrix::identity(1);

  for (std::size_t b = 1; b < nb; ++b) {
    const auto& blk = m.blocks[b];
    const std::size_t dim = blk.indices.size();
    std::vector<ModuleVector> accepted;
    std::vector<std::string> paths;
    for (std::size_t i = 0; i < m.rank() && accepted.size() < dim; ++i) {
      auto parent = m.block_of_weight.find(add_root(m.datum, blk.weight, i, 1));
      if (parent == m.block_of_weight.end()) continue;
      for (auto t : lat.block_members[parent->second]) {
        if (accepted.size() == dim) break;
        ModuleVector x = kashiwara_f(m, i, lat.basis[t]);
        if (x.empty()) continue;
        // Accept x when it is orthonormal at q = ∞ to everything accepted so far,
        // i.e. when it represents a new element of the crystal basis.
        auto self = qfield::value_at_infinity(contragredient_form(m, x, x));
        if (!self || *self != 1) continue;
        bool fresh = true;
        for (const auto& y : accepted) {
          auto cross = qfield::value_at_infinity(contragredient_form(m, x, y));
          if (!cross || *cross != 0) {
            fresh = false;
            break;
          }
        }
        if (!fresh) continue;
        accepted.push_back(std::move(x));
        paths.push_back("f_" + m.datum.cartan.labels[i] + " " + lat.paths[t]);
      }
    }
    if (accepted.size() != dim)
      throw std::logic_error("build_crystal_lattice: found " + std::to_string(accepted.size()) +
                             " crystal vectors in a weight space of dimension " + std::to_string(dim));
    DenseMatrix cols(dim, dim);
    for (std::size_t a = 0; a < dim; ++a)
      for (const auto& [k, x] : accepted[a]) {
        auto pos = std::find(blk.indices.begin(), blk.indices.end(), k) - blk.indices.begin();
        cols(static_cast<std::size_t>(pos), a) = x;
      }
    auto inv = linalg::inverse(cols);
    if (!inv) throw std::logic_error("build_crystal_lattice: crystal vectors are dependent");
    lat.block_inverse[b] = *inv;
    for (std::size_t a = 0; a < dim; ++a) {
      lat.block_members[b].push_back(lat.basis.size());
      lat.basis.push_back(std::move(accepted[a]));
      lat.paths.push_back(std::move(paths[a]));
    }
  }
  return lat;
}

bool congruent_at_infinity(const Realization& m, const CrystalLattice& lattice, const ModuleVector& u,
                           const ModuleVector& v) {
  const auto coords = lattice.coordinates(m, linalg::difference(u, v));
  return std::all_of(coords.begin(), coords.end(),
                     [](const auto& e) { return qfield::in_q_inverse_a_infinity(e.second); });
}

bool in_lattice(const Realization& m, const CrystalLattice& lattice, const ModuleVector& v) {
  const auto coords = lattice.coordinates(m, v);
  return std::all_of(coords.begin(), coords.end(), [](const auto& e) { return qfield::in_a_infinity(e.second); });
}

HighestAtInfinity highest_at_infinity(const Realization& m, const CrystalLattice& lattice, const ModuleVector& v) {
  if (!in_lattice(m, lattice, v)) throw OutsideLattice("highest_at_infinity: vector is not in the crystal lattice");
  HighestAtInfinity out;
  for (std::size_t i = 0; i < m.rank(); ++i)
    if (!congruent_at_infinity(m, lattice, kashiwara_e(m, i, v), {})) out.failing_nodes.push_back(i);
  out.highest = out.failing_nodes.empty();
  if (out.highest) {
    const auto coords = lattice.coordinates(m, v);
    auto it = coords.find(0);
    out.c = it == coords.end() ? Rational(0) : *qfield::value_at_infinity(it->second);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Braid group action

namespace {

ModuleVector braid_weight_vector(const Realization& m, std::size_t i, const ModuleVector& z, bool inverse) {
  const int d = sym(m, i);
  const long nval = coroot(m, i, *m.weight_of(z));
  const SparseMatrix& outer = inverse ? m.f[i] : m.e[i];
  const SparseMatrix& middle = inverse ? m.e[i] : m.f[i];
  ModuleVector out;
  // T''_{i,1}:   Σ_{-a+b-c=n} (-1)^b q_i^{-ac+b} E^(a) F^(b) E^(c) z
  // T'_{i,-1}:   Σ_{ a-b+c=n} (-1)^b q_i^{ac-b}  F^(a) E^(b) F^(c) z
  for (long c = 0;; ++c) {
    ModuleVector y = apply_divided(outer, c, d, z);
    if (y.empty()) break;
    long a = inverse ? std::max(0L, nval - c) : std::max(0L, -nval - c);
    for (;; ++a) {
      const long b = inverse ? a + c - nval : nval + a + c;
      ModuleVector w = apply_divided(middle, b, d, y);
      if (w.empty()) break;
      ModuleVector term = apply_divided(outer, a, d, w);
      const long e = inverse ? (a * c - b) : (-a * c + b);
      RationalFunction coeff = qpow(d * e);
      if (b % 2 != 0) coeff = -coeff;
      add_scaled(out, coeff, term);
    }
  }
  return out;
}

ModuleVector braid_any(const Realization& m, std::size_t i, const ModuleVector& v, bool inverse) {
  if (i >= m.rank()) throw std::out_of_range("braid: node outside datum");
  ModuleVector out;
  for (auto b : m.support_blocks(v))
    add_scaled(out, RationalFunction(1), braid_weight_vector(m, i, m.block_component(v, b), inverse));
  return out;
}

SparseMatrix matrix_of(const Realization& m, const std::function<ModuleVector(const ModuleVector&)>& op) {
  SparseMatrix t(m.dim(), m.dim());
  for (std::size_t k = 0; k < m.dim(); ++k)
    for (const auto& [row, x] : op(m.basis_vector(k))) t.add(row, k, x);
  return t;
}

}  // namespace

ModuleVector braid(const Realization& m, std::size_t i, const ModuleVector& v) { return braid_any(m, i, v, false); }

ModuleVector braid_inverse(const Realization& m, std::size_t i, const ModuleVector& v) {
  return braid_any(m, i, v, true);
}

ModuleVector braid_word(const Realization& m, const Word& w, const ModuleVector& v) {
  ModuleVector out = v;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out = braid(m, *it, out);
  return out;
}

SparseMatrix braid_matrix(const Realization& m, std::size_t i) {
  return matrix_of(m, [&](const ModuleVector& v) { return braid(m, i, v); });
}

SparseMatrix braid_inverse_matrix(const Realization& m, std::size_t i) {
  return matrix_of(m, [&](const ModuleVector& v) { return braid_inverse(m, i, v); });
}

SparseMatrix braid_word_matrix(const Realization& m, const Word& w) {
  SparseMatrix t = SparseMatrix::identity(m.dim());
  for (auto i : w) t = t * braid_matrix(m, i);
  return t;
}

SparseMatrix braid_word_inverse_matrix(const Realization& m, const Word& w) {
  SparseMatrix t = SparseMatrix::identity(m.dim());
  for (auto it = w.rbegin(); it != w.rend(); ++it) t = t * braid_inverse_matrix(m, *it);
  return t;
}

ModuleVector conjugated_raising(const Realization& m, const Word& w, std::size_t j, const ModuleVector& v) {
  ModuleVector x = v;
  for (auto i : w) x = braid_inverse(m, i, x);
  x = m.e[j].apply(x);
  return braid_word(m, w, x);
}

SparseMatrix conjugated_raising_matrix(const Realization& m, const Word& w, std::size_t j) {
  if (w.empty()) return m.e[j];
  return braid_word_matrix(m, w) * m.e[j] * braid_word_inverse_matrix(m, w);
}

ModuleVector extremal_vector(const Realization& m, const Word& w) {
  if (!m.is_irreducible()) throw std::logic_error("extremal_vector: needs V(lambda)");
  ModuleVector v = m.highest_vector();
  IntVector wt = m.highest_weight;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    const std::size_t i = *it;
    const long p = coroot(m, i, wt);
    v = p >= 0 ? apply_divided(m.f[i], p, sym(m, i), v) : apply_divided(m.e[i], -p, sym(m, i), v);
    wt = add_root(m.datum, wt, i, -p);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Tensor products

Realization tensor(const Realization& a, const Realization& b) {
  if (a.datum.cartan.gcm != b.datum.cartan.gcm || a.datum.pairing != b.datum.pairing ||
      a.datum.roots != b.datum.roots || a.datum.coroots != b.datum.coroots)
    throw std::invalid_argument("tensor: realizations over different root data");
  Realization t;
  t.datum = a.datum;
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  for (std::size_t x = 0; x < na; ++x)
    for (std::size_t y = 0; y < nb; ++y) {
      IntVector w = a.weights[x];
      for (std::size_t k = 0; k < w.size(); ++k) w[k] += b.weights[y][k];
      t.weights.push_back(std::move(w));
      t.provenance.push_back("(" + a.provenance[x] + ") (x) (" + b.provenance[y] + ")");
    }
  const std::size_t n = a.rank();
  t.e.assign(n, SparseMatrix(na * nb, na * nb));
  t.f.assign(n, SparseMatrix(na * nb, na * nb));
  for (std::size_t i = 0; i < n; ++i) {
    const int d = sym(a, i);
    for (std::size_t x = 0; x < na; ++x)
      for (std::size_t y = 0; y < nb; ++y) {
        const std::size_t col = x * nb + y;
        const long ax = coroot(a, i, a.weights[x]);
        const long by = coroot(b, i, b.weights[y]);
        for (const auto& [r, c] : a.e[i].column(x)) t.e[i].add(r * nb + y, col, c);
        for (const auto& [r, c] : b.e[i].column(y)) t.e[i].add(x * nb + r, col, c * qpow(d * ax));
        for (const auto& [r, c] : b.f[i].column(y)) t.f[i].add(x * nb + r, col, c);
        for (const auto& [r, c] : a.f[i].column(x)) t.f[i].add(r * nb + y, col, c * qpow(-d * by));
      }
  }
  rebuild_blocks(t);
  return t;
}

ModuleVector tensor_vector(const Realization&, const Realization& b, const ModuleVector& u, const ModuleVector& v) {
  ModuleVector out;
  for (const auto& [x, cx] : u)
    for (const auto& [y, cy] : v) out.emplace(x * b.dim() + y, cx * cy);
  return out;
}

}  // namespace qsp::repmod
