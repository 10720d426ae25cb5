#include "qsp/rootdata.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qsp::rootdata {

IntMatrix identity_matrix(std::size_t n) {
  IntMatrix m(n, IntVector(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  if (a.empty()) return {};
  const std::size_t inner = b.size();
  const std::size_t cols = b.empty() ? 0 : b[0].size();
  IntMatrix m(a.size(), IntVector(cols, 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < cols; ++j) m[i][j] += a[i][k] * b[k][j];
  return m;
}

IntVector apply(const IntMatrix& m, const IntVector& v) {
  IntVector out(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

IntMatrix transpose(const IntMatrix& m) {
  if (m.empty()) return {};
  IntMatrix t(m[0].size(), IntVector(m.size(), 0));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

namespace {

std::string vec_text(const IntVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + ")";
}

// Rank of an integer matrix over Q.
std::size_t rational_rank(const IntMatrix& a) {
  if (a.empty()) return 0;
  std::vector<std::vector<mpq_class>> m(a.size(), std::vector<mpq_class>(a[0].size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) m[i][j] = static_cast<long>(a[i][j]);
  std::size_t r = 0;
  for (std::size_t c = 0; c < m[0].size() && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      if (m[i][c] == 0) continue;
      mpq_class f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < m[0].size(); ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

mpq_class rational_det(std::vector<std::vector<mpq_class>> m) {
  const std::size_t n = m.size();
  mpq_class det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      mpq_class f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

bool is_permutation_involution(const std::vector<std::size_t>& tau, std::size_t n) {
  if (tau.size() != n) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (tau[i] >= n || tau[tau[i]] != i) return false;
  return true;
}

bool is_positive(const IntVector& v) {
  bool nonzero = false;
  for (auto x : v) {
    if (x < 0) return false;
    if (x > 0) nonzero = true;
  }
  return nonzero;
}

std::vector<IntVector> positive_roots_for(const IntMatrix& gcm, const std::vector<std::size_t>& nodes,
                                          std::size_t limit) {
  const std::size_t n = gcm.size();
  std::set<IntVector> seen;
  std::vector<IntVector> out;
  std::deque<IntVector> queue;
  for (auto j : nodes) {
    IntVector e(n, 0);
    e[j] = 1;
    if (seen.insert(e).second) {
      out.push_back(e);
      queue.push_back(e);
    }
  }
  while (!queue.empty()) {
    IntVector beta = queue.front();
    queue.pop_front();
    for (auto j : nodes) {
      long long p = 0;
      for (std::size_t k = 0; k < n; ++k) p += gcm[j][k] * beta[k];
      IntVector r = beta;
      r[j] -= p;
      if (!is_positive(r) || seen.count(r)) continue;
      seen.insert(r);
      out.push_back(r);
      queue.push_back(r);
      if (out.size() > limit) throw std::domain_error("positive_roots: subsystem is not of finite type");
    }
  }
  std::sort(out.begin(), out.end(), [](const IntVector& a, const IntVector& b) {
    long long ha = std::accumulate(a.begin(), a.end(), 0LL);
    long long hb = std::accumulate(b.begin(), b.end(), 0LL);
    if (ha != hb) return ha < hb;
    return a > b;
  });
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

std::optional<std::size_t> CartanDatum::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return i;
  return std::nullopt;
}

CartanDatum CartanDatum::restricted(const std::vector<std::size_t>& nodes) const {
  CartanDatum c;
  for (auto i : nodes) {
    c.labels.push_back(labels[i]);
    c.d.push_back(d[i]);
    IntVector row;
    for (auto j : nodes) row.push_back(gcm[i][j]);
    c.gcm.push_back(row);
  }
  return c;
}

long long RootDatum::pair(const IntVector& h, const IntVector& lambda) const {
  long long s = 0;
  for (std::size_t a = 0; a < h.size(); ++a) {
    if (h[a] == 0) continue;
    for (std::size_t b = 0; b < lambda.size(); ++b) s += h[a] * pairing[a][b] * lambda[b];
  }
  return s;
}

std::vector<std::size_t> SatakeDatum::bullet_nodes() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bullet.size(); ++i)
    if (bullet[i]) out.push_back(i);
  return out;
}

std::vector<std::size_t> SatakeDatum::white_nodes() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bullet.size(); ++i)
    if (!bullet[i]) out.push_back(i);
  return out;
}

std::string SatakeDatum::canonical_text() const {
  std::ostringstream os;
  const auto& c = cartan();
  os << "nodes";
  for (const auto& l : c.labels) os << ' ' << l;
  os << "\ngcm";
  for (const auto& row : c.gcm) os << ' ' << vec_text(row);
  os << "\nd";
  for (auto x : c.d) os << ' ' << x;
  os << "\nbullet";
  for (bool b : bullet) os << ' ' << (b ? 1 : 0);
  os << "\ntau";
  for (auto t : tau) os << ' ' << t;
  os << "\npairing";
  for (const auto& row : root.pairing) os << ' ' << vec_text(row);
  os << "\ncoroots";
  for (const auto& h : root.coroots) os << ' ' << vec_text(h);
  os << "\nroots";
  for (const auto& a : root.roots) os << ' ' << vec_text(a);
  os << "\ntau_y";
  for (const auto& row : tau_y) os << ' ' << vec_text(row);
  os << "\ntau_x";
  for (const auto& row : tau_x) os << ' ' << vec_text(row);
  os << "\nmode " << (mode == Mode::Strict ? "strict" : "generalized") << '\n';
  return os.str();
}

bool ValidationReport::mentions(const std::string& axiom) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.axiom == axiom; });
}

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate(const CartanDatum& c) {
  ValidationReport rep;
  const std::size_t n = c.size();
  if (c.gcm.size() != n || c.d.size() != n) {
    rep.violations.push_back({"shape", "gcm/d sizes do not match the node list"});
    return rep;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (c.gcm[i].size() != n) {
      rep.violations.push_back({"shape", "gcm row " + c.labels[i] + " has wrong length"});
      return rep;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (c.d[i] <= 0) rep.violations.push_back({"positive-symmetrizer", "d_" + c.labels[i]});
    if (c.gcm[i][i] != 2) rep.violations.push_back({"diagonal", "a_" + c.labels[i] + c.labels[i]});
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const std::string w = "(" + c.labels[i] + "," + c.labels[j] + ")";
      if (c.gcm[i][j] > 0) rep.violations.push_back({"off-diagonal-nonpositive", w});
      if ((c.gcm[i][j] == 0) != (c.gcm[j][i] == 0)) rep.violations.push_back({"zero-pattern", w});
      if (j > i && static_cast<long long>(c.d[i]) * c.gcm[i][j] != static_cast<long long>(c.d[j]) * c.gcm[j][i])
        rep.violations.push_back({"symmetrizable", w});
    }
  }
  return rep;
}

ValidationReport validate(const RootDatum& r) {
  ValidationReport rep = validate(r.cartan);
  if (!rep.ok()) return rep;
  const std::size_t n = r.cartan.size();
  const std::size_t ny = r.rank_y();
  const std::size_t nx = r.rank_x();
  for (const auto& row : r.pairing)
    if (row.size() != nx) {
      rep.violations.push_back({"shape", "pairing rows have unequal length"});
      return rep;
    }
  if (r.coroots.size() != n || r.roots.size() != n) {
    rep.violations.push_back({"shape", "need one coroot and one root per node"});
    return rep;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (r.coroots[i].size() != ny || r.roots[i].size() != nx) {
      rep.violations.push_back({"shape", "coordinate length mismatch at node " + r.cartan.labels[i]});
      return rep;
    }
  if (ny != nx) {
    rep.violations.push_back({"perfect-pairing", "rank Y != rank X"});
  } else {
    std::vector<std::vector<mpq_class>> m(ny, std::vector<mpq_class>(nx));
    for (std::size_t a = 0; a < ny; ++a)
      for (std::size_t b = 0; b < nx; ++b) m[a][b] = static_cast<long>(r.pairing[a][b]);
    mpq_class det = rational_det(m);
    if (det != 1 && det != -1) rep.violations.push_back({"perfect-pairing", "det = " + det.get_str()});
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (r.pair(r.coroots[i], r.roots[j]) != r.cartan.gcm[i][j])
        rep.violations.push_back({"pairing-cartan", "<h_" + r.cartan.labels[i] + ",alpha_" + r.cartan.labels[j] + ">"});
  if (rational_rank(r.coroots) != n) rep.violations.push_back({"Y-regular", "coroots dependent"});
  if (rational_rank(r.roots) != n) rep.violations.push_back({"X-regular", "roots dependent"});
  return rep;
}

ValidationReport validate(const SatakeDatum& s) {
  ValidationReport rep = validate(s.root);
  if (!rep.ok()) return rep;
  const auto& c = s.cartan();
  const std::size_t n = c.size();
  if (s.bullet.size() != n) {
    rep.violations.push_back({"shape", "bullet flags length"});
    return rep;
  }
  if (!is_permutation_involution(s.tau, n)) {
    rep.violations.push_back({"tau-involution", "tau is not an involutive permutation of I"});
    return rep;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (c.d[s.tau[i]] != c.d[i]) rep.violations.push_back({"tau-automorphism", "d at " + c.labels[i]});
    for (std::size_t j = 0; j < n; ++j)
      if (c.gcm[s.tau[i]][s.tau[j]] != c.gcm[i][j])
        rep.violations.push_back({"tau-automorphism", "(" + c.labels[i] + "," + c.labels[j] + ")"});
  }
  const std::size_t ny = s.root.rank_y();
  const std::size_t nx = s.root.rank_x();
  auto square = [](const IntMatrix& m, std::size_t k) {
    if (m.size() != k) return false;
    return std::all_of(m.begin(), m.end(), [k](const IntVector& r) { return r.size() == k; });
  };
  if (!square(s.tau_y, ny) || !square(s.tau_x, nx)) {
    rep.violations.push_back({"shape", "tau_y / tau_x dimensions"});
    return rep;
  }
  if (multiply(s.tau_y, s.tau_y) != identity_matrix(ny)) rep.violations.push_back({"tau-lattice-involution", "tau_Y^2 != 1"});
  if (multiply(s.tau_x, s.tau_x) != identity_matrix(nx)) rep.violations.push_back({"tau-lattice-involution", "tau_X^2 != 1"});
  for (std::size_t i = 0; i < n; ++i) {
    if (rootdata::apply(s.tau_y, s.root.coroots[i]) != s.root.coroots[s.tau[i]])
      rep.violations.push_back({"tau-coroots", "tau(h_" + c.labels[i] + ")"});
    if (rootdata::apply(s.tau_x, s.root.roots[i]) != s.root.roots[s.tau[i]])
      rep.violations.push_back({"tau-roots", "tau(alpha_" + c.labels[i] + ")"});
  }
  if (multiply(multiply(transpose(s.tau_y), s.root.pairing), s.tau_x) != s.root.pairing)
    rep.violations.push_back({"tau-pairing", "<tau h, tau lambda> != <h, lambda>"});

  const auto bullets = s.bullet_nodes();
  for (auto j : bullets)
    if (!s.bullet[s.tau[j]]) rep.violations.push_back({"tau-preserves-bullet", c.labels[j]});
  if (!is_finite_type(c, bullets)) {
    rep.violations.push_back({"bullet-finite-type", "I_bullet is not of finite type"});
    return rep;
  }
  // τ restricted to I_• is the diagram involution of -w•.
  const Word wb = longest_element(c, bullets);
  for (auto j : bullets) {
    IntVector e(n, 0);
    e[j] = 1;
    IntVector img = apply_word_to_root(c, wb, e);
    IntVector expect(n, 0);
    expect[s.tau[j]] = -1;
    if (img != expect) rep.violations.push_back({"tau-equals-minus-w-bullet", c.labels[j]});
  }
  if (s.mode == Mode::Strict) {
    const DoubledRho rho = doubled_rho(s.root, bullets);
    for (std::size_t j = 0; j < n; ++j) {
      if (s.bullet[j] || s.tau[j] != j) continue;
      if (s.root.pair(rho.coweight, s.root.roots[j]) % 2 != 0)
        rep.violations.push_back({"admissible-integrality", "<2rho_bullet^vee, alpha_" + c.labels[j] + "> is odd"});
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Cartan combinatorics

std::vector<std::vector<std::size_t>> connected_components(const CartanDatum& c,
                                                           const std::vector<std::size_t>& nodes) {
  std::set<std::size_t> remaining(nodes.begin(), nodes.end());
  std::vector<std::vector<std::size_t>> out;
  while (!remaining.empty()) {
    std::vector<std::size_t> comp;
    std::deque<std::size_t> queue{*remaining.begin()};
    remaining.erase(remaining.begin());
    while (!queue.empty()) {
      std::size_t i = queue.front();
      queue.pop_front();
      comp.push_back(i);
      for (auto it = remaining.begin(); it != remaining.end();) {
        if (c.gcm[i][*it] != 0) {
          queue.push_back(*it);
          it = remaining.erase(it);
        } else {
          ++it;
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(comp);
  }
  return out;
}

bool is_finite_type(const CartanDatum& c, const std::vector<std::size_t>& nodes) {
  const std::size_t k = nodes.size();
  std::vector<std::vector<mpq_class>> b(k, std::vector<mpq_class>(k));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t e = 0; e < k; ++e)
      b[a][e] = static_cast<long>(c.d[nodes[a]]) * static_cast<long>(c.gcm[nodes[a]][nodes[e]]);
  for (std::size_t m = 1; m <= k; ++m) {
    std::vector<std::vector<mpq_class>> minor(m, std::vector<mpq_class>(m));
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t e = 0; e < m; ++e) minor[a][e] = b[a][e];
    if (rational_det(minor) <= 0) return false;
  }
  return true;
}

bool is_finite_type(const CartanDatum& c) {
  std::vector<std::size_t> all(c.size());
  std::iota(all.begin(), all.end(), 0);
  return is_finite_type(c, all);
}

std::vector<IntVector> positive_roots(const CartanDatum& c, const std::vector<std::size_t>& nodes) {
  if (!is_finite_type(c, nodes)) throw std::domain_error("positive_roots: subsystem is not of finite type");
  return positive_roots_for(c.gcm, nodes, 100000);
}

std::vector<IntVector> positive_coroots(const CartanDatum& c, const std::vector<std::size_t>& nodes) {
  if (!is_finite_type(c, nodes)) throw std::domain_error("positive_coroots: subsystem is not of finite type");
  return positive_roots_for(transpose(c.gcm), nodes, 100000);
}

IntVector reflect_root(const CartanDatum& c, std::size_t j, IntVector beta) {
  long long p = 0;
  for (std::size_t k = 0; k < beta.size(); ++k) p += c.gcm[j][k] * beta[k];
  beta[j] -= p;
  return beta;
}

IntVector apply_word_to_root(const CartanDatum& c, const Word& w, IntVector beta) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) beta = reflect_root(c, *it, std::move(beta));
  return beta;
}

Word longest_element(const CartanDatum& c, const std::vector<std::size_t>& nodes) {
  if (!is_finite_type(c, nodes)) throw std::domain_error("longest_element: subset is not of finite type");
  const std::size_t n = c.size();
  Word w;
  // Extend w by s_j while w(α_j) stays positive; each step raises the length by one.
  while (true) {
    bool extended = false;
    for (auto j : nodes) {
      IntVector e(n, 0);
      e[j] = 1;
      if (is_positive(apply_word_to_root(c, w, e))) {
        w.push_back(j);
        extended = true;
        break;
      }
    }
    if (!extended) break;
  }
  return w;
}

IntMatrix weyl_matrix_x(const RootDatum& r, const Word& w) {
  const std::size_t nx = r.rank_x();
  IntMatrix m = identity_matrix(nx);
  for (auto j : w) {
    // s_j(λ) = λ - <h_j, λ> α_j
    IntMatrix s = identity_matrix(nx);
    for (std::size_t b = 0; b < nx; ++b) {
      IntVector e(nx, 0);
      e[b] = 1;
      long long p = r.pair(r.coroots[j], e);
      for (std::size_t a = 0; a < nx; ++a) s[a][b] -= p * r.roots[j][a];
    }
    m = multiply(m, s);
  }
  return m;
}

IntMatrix weyl_matrix_y(const RootDatum& r, const Word& w) {
  const std::size_t ny = r.rank_y();
  IntMatrix m = identity_matrix(ny);
  for (auto j : w) {
    // s_j(h) = h - <h, α_j> h_j
    IntMatrix s = identity_matrix(ny);
    for (std::size_t b = 0; b < ny; ++b) {
      IntVector e(ny, 0);
      e[b] = 1;
      long long p = r.pair(e, r.roots[j]);
      for (std::size_t a = 0; a < ny; ++a) s[a][b] -= p * r.coroots[j][a];
    }
    m = multiply(m, s);
  }
  return m;
}

DoubledRho doubled_rho(const RootDatum& r, const std::vector<std::size_t>& nodes) {
  DoubledRho out{IntVector(r.rank_y(), 0), IntVector(r.rank_x(), 0)};
  for (const auto& beta : positive_coroots(r.cartan, nodes))
    for (std::size_t k = 0; k < beta.size(); ++k)
      for (std::size_t a = 0; a < out.coweight.size(); ++a) out.coweight[a] += beta[k] * r.coroots[k][a];
  for (const auto& beta : positive_roots(r.cartan, nodes))
    for (std::size_t k = 0; k < beta.size(); ++k)
      for (std::size_t a = 0; a < out.weight.size(); ++a) out.weight[a] += beta[k] * r.roots[k][a];
  return out;
}

// ---------------------------------------------------------------------------
// Smith normal form

SmithForm smith_normal_form(const IntMatrix& a) {
  SmithForm f;
  f.rows = a.size();
  f.cols = a.empty() ? 0 : a[0].size();
  const std::size_t m = f.rows;
  const std::size_t n = f.cols;
  IntMatrix d = a;
  f.u = identity_matrix(m);
  f.v = identity_matrix(n);

  auto swap_rows = [&](std::size_t i, std::size_t j) {
    std::swap(d[i], d[j]);
    std::swap(f.u[i], f.u[j]);
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    for (auto& row : d) std::swap(row[i], row[j]);
    for (auto& row : f.v) std::swap(row[i], row[j]);
  };
  auto add_row = [&](std::size_t target, std::size_t src, long long k) {  // row_t += k row_s
    for (std::size_t j = 0; j < n; ++j) d[target][j] += k * d[src][j];
    for (std::size_t j = 0; j < m; ++j) f.u[target][j] += k * f.u[src][j];
  };
  auto add_col = [&](std::size_t target, std::size_t src, long long k) {  // col_t += k col_s
    for (std::size_t i = 0; i < m; ++i) d[i][target] += k * d[i][src];
    for (std::size_t i = 0; i < n; ++i) f.v[i][target] += k * f.v[i][src];
  };

  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    while (true) {
      // Smallest nonzero entry of the trailing block goes to (t, t).
      std::size_t bi = m, bj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (d[i][j] != 0 && (bi == m || std::llabs(d[i][j]) < std::llabs(d[bi][bj]))) {
            bi = i;
            bj = j;
          }
      if (bi == m) break;
      swap_rows(t, bi);
      swap_cols(t, bj);
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        long long qt = d[i][t] / d[t][t];
        if (qt) add_row(i, t, -qt);
        if (d[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        long long qt = d[t][j] / d[t][t];
        if (qt) add_col(j, t, -qt);
        if (d[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (d[i][j] % d[t][t] != 0) {
            add_row(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (d[t][t] == 0) break;
    if (d[t][t] < 0) {
      for (std::size_t j = 0; j < n; ++j) d[t][j] = -d[t][j];
      for (std::size_t j = 0; j < m; ++j) f.u[t][j] = -f.u[t][j];
    }
    f.divisors.push_back(d[t][t]);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Derived sets

IntVector DerivedSets::xi_class(const IntVector& lambda) const {
  IntVector y = rootdata::apply(xi_smith.u, lambda);
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (k < xi_smith.divisors.size()) {
      long long dk = xi_smith.divisors[k];
      y[k] = ((y[k] % dk) + dk) % dk;
    }
  }
  return y;
}

bool DerivedSets::xi_is_zero(const IntVector& lambda) const {
  IntVector c = xi_class(lambda);
  return std::all_of(c.begin(), c.end(), [](long long x) { return x == 0; });
}

bool DerivedSets::in_i_circ_tau_bullet(std::size_t i) const {
  return std::find(i_circ_tau_bullet.begin(), i_circ_tau_bullet.end(), i) != i_circ_tau_bullet.end();
}

DerivedSets derive_sets(const SatakeDatum& s) {
  DerivedSets out;
  const auto& c = s.cartan();
  const std::size_t n = c.size();
  out.i_circ = s.white_nodes();
  out.i_bullet = s.bullet_nodes();
  out.w_bullet = longest_element(c, out.i_bullet);
  out.w_bullet_x = weyl_matrix_x(s.root, out.w_bullet);
  out.w_bullet_y = weyl_matrix_y(s.root, out.w_bullet);
  out.rho_bullet = doubled_rho(s.root, out.i_bullet);

  for (auto i : out.i_circ) {
    IntVector diff = s.root.coroots[i];
    IntVector img = rootdata::apply(out.w_bullet_y, s.root.coroots[s.tau[i]]);
    for (std::size_t a = 0; a < diff.size(); ++a) diff[a] -= img[a];
    if (std::all_of(diff.begin(), diff.end(), [](long long x) { return x == 0; })) out.i_circ_tau_bullet.push_back(i);
  }

  for (auto i : out.i_circ) {
    std::set<std::size_t> comp{i, s.tau[i]};
    std::deque<std::size_t> queue{i, s.tau[i]};
    while (!queue.empty()) {
      std::size_t a = queue.front();
      queue.pop_front();
      for (std::size_t j = 0; j < n; ++j)
        if (s.bullet[j] && c.gcm[a][j] != 0 && comp.insert(j).second) queue.push_back(j);
    }
    out.components[i] = std::vector<std::size_t>(comp.begin(), comp.end());
  }

  // λ + w•τ(λ) on X and h + w•τ(h) on Y.
  const std::size_t nx = s.root.rank_x();
  const std::size_t ny = s.root.rank_y();
  IntMatrix gx = multiply(out.w_bullet_x, s.tau_x);
  for (std::size_t a = 0; a < nx; ++a) gx[a][a] += 1;
  out.xi_generators = gx;
  out.xi_smith = smith_normal_form(gx);

  IntMatrix gy = multiply(out.w_bullet_y, s.tau_y);
  for (std::size_t a = 0; a < ny; ++a) gy[a][a] += 1;
  SmithForm sy = smith_normal_form(gy);
  for (std::size_t k = sy.divisors.size(); k < ny; ++k) {
    IntVector h(ny);
    for (std::size_t a = 0; a < ny; ++a) h[a] = sy.v[a][k];
    out.yi_basis.push_back(h);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rank one classification

std::string type_name(RankOneType t, std::size_t n) {
  switch (t) {
    case RankOneType::AI1: return "AI_1";
    case RankOneType::AII3: return "AII_3";
    case RankOneType::AIII2: return "AIII_2";
    case RankOneType::AIV: return "AIV_" + std::to_string(n);
    case RankOneType::BII: return "BII_" + std::to_string(n);
    case RankOneType::CII: return "CII_" + std::to_string(n);
    case RankOneType::DII: return "DII_" + std::to_string(n);
    case RankOneType::FII4: return "FII_4";
  }
  return "?";
}

namespace {

struct Shape {
  IntMatrix gcm;
  std::vector<bool> bullet;
  std::vector<std::size_t> tau;
};

bool isomorphic(const Shape& a, const Shape& b) {
  const std::size_t n = a.gcm.size();
  if (b.gcm.size() != n) return false;
  std::vector<std::size_t> map(n, n);  // node of b -> node of a
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> extend = [&](std::size_t k) -> bool {
    if (k == n) {
      for (std::size_t x = 0; x < n; ++x)
        if (map[b.tau[x]] != a.tau[map[x]]) return false;
      return true;
    }
    for (std::size_t cand = 0; cand < n; ++cand) {
      if (used[cand] || a.bullet[cand] != b.bullet[k] || a.gcm[cand][cand] != b.gcm[k][k]) continue;
      bool ok = true;
      for (std::size_t prev = 0; prev < k && ok; ++prev)
        ok = a.gcm[cand][map[prev]] == b.gcm[k][prev] && a.gcm[map[prev]][cand] == b.gcm[prev][k];
      if (!ok) continue;
      used[cand] = true;
      map[k] = cand;
      if (extend(k + 1)) return true;
      used[cand] = false;
    }
    return false;
  };
  return extend(0);
}

Shape shape_of(const SatakeDatum& s) { return {s.cartan().gcm, s.bullet, s.tau}; }

std::vector<std::pair<RankOneType, std::size_t>> candidates_of_size(std::size_t n) {
  std::vector<std::pair<RankOneType, std::size_t>> out;
  if (n == 1) out.emplace_back(RankOneType::AI1, 1);
  if (n == 3) out.emplace_back(RankOneType::AII3, 3);
  if (n == 2) out.emplace_back(RankOneType::AIII2, 2);
  if (n >= 2) out.emplace_back(RankOneType::AIV, n);
  if (n >= 2) out.emplace_back(RankOneType::BII, n);
  if (n >= 3) out.emplace_back(RankOneType::CII, n);
  if (n >= 4) out.emplace_back(RankOneType::DII, n);
  if (n == 4) out.emplace_back(RankOneType::FII4, 4);
  return out;
}

}  // namespace

ComponentReport rank_one_components(const SatakeDatum& s, const DerivedSets& derived) {
  ComponentReport rep;
  for (const auto& [i, nodes] : derived.components) {
    ComponentInfo info;
    info.nodes = nodes;
    CartanDatum sub = s.cartan().restricted(nodes);
    info.finite = is_finite_type(sub);
    if (!info.finite) rep.locally_finite = false;
    if (info.finite) {
      Shape shape;
      shape.gcm = sub.gcm;
      for (auto a : nodes) {
        shape.bullet.push_back(s.bullet[a]);
        auto pos = std::find(nodes.begin(), nodes.end(), s.tau[a]) - nodes.begin();
        shape.tau.push_back(static_cast<std::size_t>(pos));
      }
      for (auto [t, n] : candidates_of_size(nodes.size())) {
        if (isomorphic(shape, shape_of(rank_one_datum(t, n)))) {
          info.type = t;
          info.rank = n;
          break;
        }
      }
    }
    info.label = info.type ? type_name(*info.type, info.rank) : "not rank-1-finite";
    rep.components[i] = std::move(info);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Construction

CartanDatum cartan_of_type(char type, std::size_t n) {
  CartanDatum c;
  auto chain = [&](std::size_t k) {
    c.gcm.assign(k, IntVector(k, 0));
    for (std::size_t i = 0; i < k; ++i) {
      c.gcm[i][i] = 2;
      if (i + 1 < k) c.gcm[i][i + 1] = c.gcm[i + 1][i] = -1;
    }
    c.d.assign(k, 1);
  };
  switch (type) {
    case 'A':
      if (n < 1) throw std::invalid_argument("A_n needs n >= 1");
      chain(n);
      break;
    case 'B':
      if (n < 2) throw std::invalid_argument("B_n needs n >= 2");
      chain(n);
      c.gcm[n - 1][n - 2] = -2;
      c.d.assign(n, 2);
      c.d[n - 1] = 1;
      break;
    case 'C':
      if (n < 2) throw std::invalid_argument("C_n needs n >= 2");
      chain(n);
      c.gcm[n - 2][n - 1] = -2;
      c.d.assign(n, 1);
      c.d[n - 1] = 2;
      break;
    case 'D':
      if (n < 3) throw std::invalid_argument("D_n needs n >= 3");
      chain(n);
      c.gcm[n - 2][n - 1] = c.gcm[n - 1][n - 2] = 0;
      c.gcm[n - 3][n - 1] = c.gcm[n - 1][n - 3] = -1;
      break;
    case 'E': {
      if (n < 6 || n > 8) throw std::invalid_argument("E_n needs 6 <= n <= 8");
      c.gcm.assign(n, IntVector(n, 0));
      for (std::size_t i = 0; i < n; ++i) c.gcm[i][i] = 2;
      auto link = [&](std::size_t a, std::size_t b) { c.gcm[a - 1][b - 1] = c.gcm[b - 1][a - 1] = -1; };
      link(1, 3);
      link(3, 4);
      link(2, 4);
      for (std::size_t k = 4; k < n; ++k) link(k, k + 1);
      c.d.assign(n, 1);
      break;
    }
    case 'F':
      if (n != 4) throw std::invalid_argument("F_n needs n = 4");
      chain(4);
      c.gcm[2][1] = -2;
      c.d = {2, 2, 1, 1};
      break;
    case 'G':
      if (n != 2) throw std::invalid_argument("G_n needs n = 2");
      chain(2);
      c.gcm[0][1] = -3;
      c.d = {1, 3};
      break;
    default:
      throw std::invalid_argument(std::string("unknown Cartan type ") + type);
  }
  for (std::size_t i = 0; i < n; ++i) c.labels.push_back(std::to_string(i + 1));
  return c;
}

CartanDatum direct_sum(const CartanDatum& a, const CartanDatum& b) {
  CartanDatum c;
  const std::size_t n = a.size() + b.size();
  c.gcm.assign(n, IntVector(n, 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) c.gcm[i][j] = a.gcm[i][j];
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c.gcm[a.size() + i][a.size() + j] = b.gcm[i][j];
  c.d = a.d;
  c.d.insert(c.d.end(), b.d.begin(), b.d.end());
  for (std::size_t i = 0; i < n; ++i) c.labels.push_back(std::to_string(i + 1));
  return c;
}

SatakeDatum build_simply_connected(const CartanDatum& c, const std::vector<std::size_t>& tau,
                                   const std::vector<bool>& bullet, Mode mode) {
  const std::size_t n = c.size();
  if (!is_permutation_involution(tau, n)) throw std::invalid_argument("tau is not an involution of I");
  for (std::size_t i = 0; i < n; ++i) {
    if (c.d[tau[i]] != c.d[i]) throw std::invalid_argument("tau is not a Cartan datum automorphism");
    for (std::size_t j = 0; j < n; ++j)
      if (c.gcm[tau[i]][tau[j]] != c.gcm[i][j]) throw std::invalid_argument("tau is not a Cartan datum automorphism");
  }
  SatakeDatum s;
  s.root.cartan = c;
  s.root.pairing = identity_matrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    IntVector h(n, 0);
    h[i] = 1;
    s.root.coroots.push_back(h);
    IntVector alpha(n);
    for (std::size_t k = 0; k < n; ++k) alpha[k] = c.gcm[k][i];
    s.root.roots.push_back(alpha);
  }
  s.bullet = bullet.empty() ? std::vector<bool>(n, false) : bullet;
  s.tau = tau;
  s.tau_y.assign(n, IntVector(n, 0));
  s.tau_x.assign(n, IntVector(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    s.tau_y[tau[i]][i] = 1;
    s.tau_x[tau[i]][i] = 1;
  }
  s.mode = mode;
  return s;
}

SatakeDatum rank_one_datum(RankOneType t, std::size_t n) {
  auto ident = [](std::size_t k) {
    std::vector<std::size_t> tau(k);
    std::iota(tau.begin(), tau.end(), 0);
    return tau;
  };
  switch (t) {
    case RankOneType::AI1:
      return build_simply_connected(cartan_of_type('A', 1), {0}, {false});
    case RankOneType::AII3:
      return build_simply_connected(cartan_of_type('A', 3), ident(3), {true, false, true});
    case RankOneType::AIII2:
      return build_simply_connected(direct_sum(cartan_of_type('A', 1), cartan_of_type('A', 1)), {1, 0},
                                    {false, false});
    case RankOneType::AIV: {
      if (n < 2) throw std::invalid_argument("AIV_n needs n >= 2");
      std::vector<std::size_t> tau(n);
      for (std::size_t i = 0; i < n; ++i) tau[i] = n - 1 - i;
      std::vector<bool> bullet(n, true);
      bullet[0] = bullet[n - 1] = false;
      return build_simply_connected(cartan_of_type('A', n), tau, bullet);
    }
    case RankOneType::BII: {
      std::vector<bool> bullet(n, true);
      bullet[0] = false;
      return build_simply_connected(cartan_of_type('B', n), ident(n), bullet);
    }
    case RankOneType::CII: {
      if (n < 3) throw std::invalid_argument("CII_n needs n >= 3");
      std::vector<bool> bullet(n, true);
      bullet[1] = false;
      return build_simply_connected(cartan_of_type('C', n), ident(n), bullet);
    }
    case RankOneType::DII: {
      std::vector<bool> bullet(n, true);
      bullet[0] = false;
      auto tau = ident(n);
      // -w• on the D_{n-1} subdiagram swaps the two spin nodes when n-1 is odd.
      if (n >= 4 && n % 2 == 0) std::swap(tau[n - 2], tau[n - 1]);
      return build_simply_connected(cartan_of_type('D', n), tau, bullet);
    }
    case RankOneType::FII4:
      return build_simply_connected(cartan_of_type('F', 4), ident(4), {true, true, true, false});
  }
  throw std::invalid_argument("unknown rank one type");
}

IntVector fundamental_weight(const SatakeDatum& s, std::size_t i) {
  const std::size_t n = s.size();
  const std::size_t nx = s.root.rank_x();
  // Solve <h_j, λ> = δ_ij over Q and insist on an integral, unique answer.
  std::vector<std::vector<mpq_class>> m(n, std::vector<mpq_class>(nx + 1));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t b = 0; b < nx; ++b) {
      IntVector e(nx, 0);
      e[b] = 1;
      m[j][b] = static_cast<long>(s.root.pair(s.root.coroots[j], e));
    }
    m[j][nx] = (j == i) ? 1 : 0;
  }
  if (n != nx) throw std::domain_error("fundamental_weight: X is not spanned by fundamental weights");
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t col = 0; col < nx && r < n; ++col) {
    std::size_t p = r;
    while (p < n && m[p][col] == 0) ++p;
    if (p == n) continue;
    std::swap(m[p], m[r]);
    mpq_class inv = 1 / m[r][col];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == r || m[k][col] == 0) continue;
      mpq_class f = m[k][col];
      for (std::size_t b = 0; b <= nx; ++b) m[k][b] -= f * m[r][b];
    }
    piv.push_back(col);
    ++r;
  }
  if (piv.size() != nx) throw std::domain_error("fundamental_weight: pairing is degenerate");
  IntVector out(nx);
  for (std::size_t k = 0; k < nx; ++k) {
    if (m[k][nx].get_den() != 1) throw std::domain_error("fundamental_weight: not integral in X");
    out[piv[k]] = m[k][nx].get_num().get_si();
  }
  return out;
}

}  // namespace qsp::rootdata
