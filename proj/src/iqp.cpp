#include "qsp/iqp.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace qsp::iqp {

using linalg::add_scaled;
using linalg::DenseMatrix;
using qfield::LaurentPolynomial;
using qfield::q_factorial;
using qfield::q_integer;
using rootdata::RankOneType;

namespace {

RationalFunction qpow(long k) { return RationalFunction::q_power(static_cast<int>(k)); }

bool in_integral_laurent_ring(const RationalFunction& f) {
  return f.is_laurent() && f.numerator().has_integer_coefficients();
}

IntVector add_vectors(IntVector a, const IntVector& b) {
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
  return a;
}

// Restricts each vector of `basis` to the kernel of `op`.
std::vector<ModuleVector> refine(const std::vector<ModuleVector>& basis, const SparseMatrix& op,
                                 const std::optional<RationalFunction>& shift = std::nullopt) {
  if (basis.empty()) return basis;
  std::vector<ModuleVector> images;
  std::set<std::size_t> rows;
  bool all_zero = true;
  for (const auto& v : basis) {
    ModuleVector w = op.apply(v);
    if (shift) add_scaled(w, -*shift, v);
    for (const auto& [r, x] : w) rows.insert(r);
    if (!w.empty()) all_zero = false;
    images.push_back(std::move(w));
  }
  if (all_zero) return basis;
  std::map<std::size_t, std::size_t> row_of;
  for (auto r : rows) row_of.emplace(r, row_of.size());
  DenseMatrix mat(rows.size(), basis.size());
  for (std::size_t c = 0; c < images.size(); ++c)
    for (const auto& [r, x] : images[c]) mat(row_of[r], c) = x;
  std::vector<ModuleVector> out;
  for (const auto& comb : linalg::nullspace(mat)) {
    ModuleVector v;
    for (std::size_t c = 0; c < comb.size(); ++c) add_scaled(v, comb[c], basis[c]);
    out.push_back(std::move(v));
  }
  return out;
}

ModuleVector project_block(const CoidealAction& a, const ModuleVector& v, const IntVector& cls) {
  ModuleVector out;
  for (const auto& [k, x] : v)
    if (a.xi_class[k] == cls) out.emplace(k, x);
  return out;
}

}  // namespace

bool ParameterReport::fails(int constraint) const {
  return std::any_of(failures.begin(), failures.end(),
                     [&](const ConstraintFailure& f) { return f.constraint == constraint; });
}

// ---------------------------------------------------------------------------
// Parameters

ParameterReport validate_parameters(const ParameterSet& p, const SatakeDatum& s, const DerivedSets& d) {
  ParameterReport rep;
  const auto& c = s.cartan();
  const auto& r = s.root;
  auto label = [&](std::size_t i) { return c.labels[i]; };
  auto kappa_of = [&](std::size_t i) {
    auto it = p.kappa.find(i);
    return it == p.kappa.end() ? RationalFunction() : it->second;
  };

  std::set<std::size_t> circ(d.i_circ.begin(), d.i_circ.end());
  for (const auto& [i, x] : p.varsigma)
    if (!circ.count(i)) rep.failures.push_back({0, i, "varsigma given for node " + label(i) + " outside I_circ"});
  for (const auto& [i, x] : p.kappa)
    if (!circ.count(i)) rep.failures.push_back({0, i, "kappa given for node " + label(i) + " outside I_circ"});
  for (auto i : d.i_circ)
    if (!p.varsigma.count(i)) rep.failures.push_back({0, i, "missing varsigma for node " + label(i)});
  if (!rep.ok()) return rep;

  for (auto i : d.i_circ) {
    const auto& si = p.varsigma.at(i);
    const auto ki = kappa_of(i);
    const std::size_t ti = s.tau[i];
    if (si.is_zero()) rep.failures.push_back({1, i, "varsigma_" + label(i) + " is zero"});
    if (!in_integral_laurent_ring(si))
      rep.failures.push_back({1, i, "varsigma_" + label(i) + " = " + si.to_string() + " is not in Z[q,q^-1]"});
    if (!in_integral_laurent_ring(ki))
      rep.failures.push_back({1, i, "kappa_" + label(i) + " = " + ki.to_string() + " is not in Z[q,q^-1]"});

    const IntVector w_alpha_ti = rootdata::apply(d.w_bullet_x, r.roots[ti]);
    const auto& sti = p.varsigma.at(ti);
    if (r.coroot_pairing(i, w_alpha_ti) == 0 && !(sti == si))
      rep.failures.push_back({2, i, "varsigma_" + label(ti) + " != varsigma_" + label(i)});

    const long sign_exp = r.pair(d.rho_bullet.coweight, r.roots[i]);
    const long q_exp = -c.d[i] * r.coroot_pairing(i, add_vectors(d.rho_bullet.weight, w_alpha_ti));
    RationalFunction rhs = qpow(q_exp) * sti.bar();
    if (sign_exp % 2 != 0) rhs = -rhs;
    if (!(rhs == si))
      rep.failures.push_back({3, i, "varsigma_" + label(i) + " = " + si.to_string() + " but the twisted bar gives " +
                                        rhs.to_string()});

    if (!si.is_zero() && !(si.bar() * si).is_one())
      rep.failures.push_back({4, i, "bar(varsigma_" + label(i) + ") != varsigma_" + label(i) + "^-1"});

    if (!ki.is_zero()) {
      bool allowed = d.in_i_circ_tau_bullet(i);
      for (auto k : d.i_circ_tau_bullet)
        if (c.gcm[k][i] % 2 != 0) allowed = false;
      if (!allowed) rep.failures.push_back({5, i, "kappa_" + label(i) + " must vanish"});
    }
    if (!(ki.bar() == ki)) rep.failures.push_back({6, i, "kappa_" + label(i) + " is not bar-invariant"});
  }

  for (const auto& [i, sh] : p.shifts) {
    if (!d.in_i_circ_tau_bullet(i)) {
      rep.failures.push_back({0, i, "shift given for node " + label(i) + " outside I_circ^{tau,bullet}"});
      continue;
    }
    if (!(kappa_of(i) == RationalFunction(q_integer(sh, c.d[i]))))
      rep.failures.push_back({0, i, "kappa_" + label(i) + " differs from [" + std::to_string(sh) + "]"});
  }

  if (!p.order.empty()) {
    std::vector<std::size_t> sorted = p.order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != d.i_circ) rep.failures.push_back({0, 0, "order is not a permutation of I_circ"});
  }
  return rep;
}

ParameterSet default_parameters(const SatakeDatum& s, const DerivedSets& d, std::vector<std::size_t> order) {
  if (order.empty()) order = d.i_circ;
  {
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != d.i_circ) throw std::invalid_argument("order is not a permutation of I_circ");
  }
  std::map<std::size_t, std::size_t> pos;
  for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;

  const auto comps = rootdata::rank_one_components(s, d);
  ParameterSet p;
  p.order = order;
  p.provenance = "default";
  for (auto i : d.i_circ) {
    const auto& info = comps.components.at(i);
    if (!info.type) throw UnclassifiedComponent("component of node " + s.cartan().labels[i] + " is " + info.label);
    const long n = static_cast<long>(info.rank);
    RationalFunction v;
    switch (*info.type) {
      case RankOneType::AI1: v = qpow(-1); break;
      case RankOneType::AII3: v = qpow(1); break;
      case RankOneType::AIII2: v = 1; break;
      case RankOneType::AIV:
        if (pos[i] < pos[s.tau[i]]) {
          v = 1;
        } else {
          v = qpow(n - 1);
          if (n % 2 != 0) v = -v;
        }
        break;
      case RankOneType::BII: v = qpow(2 * n - 3); break;
      case RankOneType::CII: v = qpow(n - 1); break;
      case RankOneType::DII: v = qpow(n - 2); break;
      case RankOneType::FII4: v = qpow(5); break;
    }
    p.varsigma[i] = v;
    p.kappa[i] = RationalFunction();
  }
  return p;
}

IntVector zero_class_generator(const SatakeDatum& s, const DerivedSets& d) {
  if (d.i_circ.empty()) throw std::invalid_argument("datum has no white nodes");
  const std::size_t i = d.i_circ.front();
  const auto comps = rootdata::rank_one_components(s, d);
  const auto& info = comps.components.at(i);
  if (!info.type) throw UnclassifiedComponent("component of node " + s.cartan().labels[i] + " is " + info.label);
  IntVector w = rootdata::fundamental_weight(s, i);
  switch (*info.type) {
    case RankOneType::AI1:
      for (auto& x : w) x *= 2;
      break;
    case RankOneType::AIII2:
    case RankOneType::AIV:
      w = add_vectors(w, rootdata::fundamental_weight(s, s.tau[i]));
      break;
    default: break;
  }
  return w;
}

// ---------------------------------------------------------------------------
// Coideal action

CoidealAction build_coideal_action(const Realization& m, const SatakeDatum& s, const DerivedSets& d,
                                   const ParameterSet& p) {
  CoidealAction a;
  a.derived = d;
  a.d = s.cartan().d;
  a.kappa = p.kappa;
  a.shifts = p.shifts;
  const std::size_t n = s.size();
  std::optional<SparseMatrix> tw;
  std::optional<SparseMatrix> tw_inv;
  if (!d.w_bullet.empty()) {
    tw = repmod::braid_word_matrix(m, d.w_bullet);
    tw_inv = repmod::braid_word_inverse_matrix(m, d.w_bullet);
  }
  a.b.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (s.bullet[i]) {
      a.b[i] = m.f[i];
      continue;
    }
    const SparseMatrix kinv = repmod::k_node_matrix(m, i, -1);
    const SparseMatrix& e = m.e[s.tau[i]];
    SparseMatrix raised = tw ? (*tw) * e * (*tw_inv) : e;
    SparseMatrix bi = m.f[i] + (raised * kinv).scaled(p.varsigma.at(i));
    auto kit = p.kappa.find(i);
    if (kit != p.kappa.end() && !kit->second.is_zero()) bi += kinv.scaled(kit->second);
    a.b[i] = std::move(bi);
  }
  for (auto j : d.i_bullet) a.e_bullet.emplace(j, m.e[j]);
  for (const auto& h : d.yi_basis) a.k.push_back(repmod::k_matrix(m, h));
  for (const auto& w : m.weights) a.xi_class.push_back(d.xi_class(w));

  const auto& labels = s.cartan().labels;
  for (const auto& [j, e] : a.e_bullet) a.generators.push_back({"E_" + labels[j], e});
  for (std::size_t i = 0; i < n; ++i) a.generators.push_back({"B_" + labels[i], a.b[i]});
  for (std::size_t k = 0; k < a.k.size(); ++k) a.generators.push_back({"K_h" + std::to_string(k), a.k[k]});
  return a;
}

ModuleVector apply_word(const CoidealAction& a, const std::vector<std::size_t>& word, const ModuleVector& v) {
  ModuleVector out = v;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    if (*it >= a.generators.size()) throw std::out_of_range("apply_word: generator index");
    out = a.generators[*it].matrix.apply(out);
  }
  return out;
}

ModuleVector i_divided_power(const CoidealAction& a, std::size_t i, const IntVector& lambda, long lambda_i,
                             const ModuleVector& v, bool use_shift) {
  if (i >= a.b.size()) throw std::out_of_range("i_divided_power: node");
  if (lambda_i < 0) throw std::invalid_argument("i_divided_power: negative lambda_i");
  const IntVector cls = a.derived.xi_class(lambda);
  for (const auto& [k, x] : v)
    if (a.xi_class[k] != cls) throw BlockMismatch("i_divided_power: vector outside the requested X^i block");
  const int di = a.d[i];
  ModuleVector out = v;
  if (a.derived.in_i_circ_tau_bullet(i)) {
    long shift = 0;
    if (use_shift) {
      auto it = a.shifts.find(i);
      if (it == a.shifts.end()) throw std::invalid_argument("i_divided_power: no shift recorded for this node");
      shift = it->second;
    }
    for (long k = 0; k <= lambda_i; ++k) {
      ModuleVector next = a.b[i].apply(out);
      add_scaled(next, -RationalFunction(q_integer(shift - lambda_i + 2 * k, di)), out);
      out = std::move(next);
    }
  } else {
    for (long k = 0; k <= lambda_i; ++k) out = a.b[i].apply(out);
  }
  return linalg::scaled(out, RationalFunction(1, q_factorial(lambda_i + 1, di)));
}

// ---------------------------------------------------------------------------
// Trivial submodule

TrivialSearch find_trivial_vector(const CoidealAction& a, const Realization& m) {
  TrivialSearch out;
  std::vector<ModuleVector> basis;
  // E_j, F_j preserve X-weights, so their joint kernel is found block by block.
  for (const auto& blk : m.blocks) {
    if (!a.derived.xi_is_zero(blk.weight)) continue;
    out.unknowns += blk.indices.size();
    std::vector<ModuleVector> local;
    for (auto k : blk.indices) local.push_back(m.basis_vector(k));
    for (auto j : a.derived.i_bullet) {
      local = refine(local, m.e[j]);
      local = refine(local, m.f[j]);
    }
    basis.insert(basis.end(), local.begin(), local.end());
  }
  for (auto i : a.derived.i_circ) {
    auto it = a.kappa.find(i);
    RationalFunction kappa = it == a.kappa.end() ? RationalFunction() : it->second;
    basis = refine(basis, a.b[i], kappa);
  }
  for (const auto& k : a.k) basis = refine(basis, k, RationalFunction(1));

  out.kernel_dimension = basis.size();
  if (basis.size() > 1)
    throw TrivialMultiplicityError("trivial submodule occurs with multiplicity " + std::to_string(basis.size()),
                                   basis.size());
  if (basis.size() == 1) {
    ModuleVector w = basis.front();
    const RationalFunction lead = w.begin()->second;
    out.vector = linalg::scaled(w, lead.inverse());
  }
  return out;
}

Normalization infinity_normalize(const Realization& m, const CrystalLattice& lattice, const ModuleVector& w0) {
  if (linalg::is_zero(w0)) throw std::invalid_argument("infinity_normalize: zero vector");
  Normalization out;
  const auto coords = lattice.coordinates(m, w0);
  auto it = coords.find(0);
  if (it == coords.end()) {
    out.witness = "coordinate along v_lambda vanishes";
    return out;
  }
  const RationalFunction c = it->second.inverse();
  out.c = c;
  for (const auto& [k, x] : coords) {
    if (k == 0) continue;
    if (!qfield::in_q_inverse_a_infinity(c * x)) {
      out.witness = "coordinate along " + lattice.paths[k] + " is " + (c * x).to_string();
      return out;
    }
  }
  out.verdict = true;
  return out;
}

// ---------------------------------------------------------------------------
// Intertwiners

std::optional<ModuleVector> Intertwiner::apply(const ModuleVector& v) const {
  auto coords = span.coordinates(v);
  if (!coords) return std::nullopt;
  ModuleVector out;
  for (const auto& [k, c] : *coords) add_scaled(out, c, images[k]);
  return out;
}

std::vector<ModuleVector> Intertwiner::kernel() const {
  std::set<std::size_t> rows;
  for (const auto& img : images)
    for (const auto& [r, x] : img) rows.insert(r);
  std::map<std::size_t, std::size_t> row_of;
  for (auto r : rows) row_of.emplace(r, row_of.size());
  DenseMatrix mat(rows.size(), images.size());
  for (std::size_t c = 0; c < images.size(); ++c)
    for (const auto& [r, x] : images[c]) mat(row_of[r], c) = x;
  std::vector<ModuleVector> out;
  for (const auto& comb : linalg::nullspace(mat)) {
    ModuleVector v;
    for (std::size_t c = 0; c < comb.size(); ++c) add_scaled(v, comb[c], span.vectors()[c]);
    out.push_back(std::move(v));
  }
  return out;
}

Intertwiner solve_intertwiner(const CoidealAction& source_action, const ModuleVector& source,
                              const CoidealAction& target_action, const ModuleVector& target) {
  Intertwiner out;
  if (source_action.generators.size() != target_action.generators.size())
    throw std::invalid_argument("solve_intertwiner: generator lists differ");
  if (linalg::is_zero(source)) {
    out.failure = "source vector is zero";
    return out;
  }
  // Idempotents 1_ζ of the modified algebra act as X^ı block projections.
  std::set<IntVector> classes(source_action.xi_class.begin(), source_action.xi_class.end());
  classes.insert(target_action.xi_class.begin(), target_action.xi_class.end());

  const std::size_t ng = source_action.generators.size();
  const std::size_t nops = ng + classes.size();
  std::vector<IntVector> class_list(classes.begin(), classes.end());
  auto act = [&](const CoidealAction& a, std::size_t op, const ModuleVector& v) {
    if (op < ng) return a.generators[op].matrix.apply(v);
    return project_block(a, v, class_list[op - ng]);
  };
  auto op_name = [&](std::size_t op) {
    return op < ng ? source_action.generators[op].name : "1_zeta" + std::to_string(op - ng);
  };

  out.span.add(source);
  out.images.push_back(target);
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t k = queue.front();
    queue.pop_front();
    for (std::size_t op = 0; op < nops; ++op) {
      ModuleVector s = act(source_action, op, out.span.vectors()[k]);
      ModuleVector t = act(target_action, op, out.images[k]);
      if (out.span.add(s)) {
        out.images.push_back(std::move(t));
        queue.push_back(out.span.size() - 1);
        continue;
      }
      ModuleVector expected;
      const auto coords = out.span.coordinates(s);
      for (const auto& [j, c] : *coords) add_scaled(expected, c, out.images[j]);
      if (!linalg::is_zero(linalg::difference(expected, t))) {
        out.failure = "no module map: relation violated under " + op_name(op);
        return out;
      }
    }
  }
  out.exists = true;
  return out;
}

ProjectionMap projection_hom(const Realization& vl, const CoidealAction& al, const Realization& vm,
                             const CoidealAction& am) {
  ProjectionMap out;
  Intertwiner t = solve_intertwiner(al, vl.highest_vector(), am, vm.highest_vector());
  if (!t.exists) {
    out.failure = t.failure;
    return out;
  }
  if (t.span.size() != vl.dim()) {
    out.failure = "highest weight vector does not generate the source";
    return out;
  }
  out.map = SparseMatrix(vm.dim(), vl.dim());
  for (std::size_t j = 0; j < vl.dim(); ++j) {
    const auto image = t.apply(vl.basis_vector(j));
    for (const auto& [r, x] : *image) out.map.add(r, j, x);
  }
  out.exists = true;
  return out;
}

EchelonSpan coideal_closure(const CoidealAction& a, const ModuleVector& v) {
  EchelonSpan span;
  if (linalg::is_zero(v)) return span;
  span.add(v);
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t k = queue.front();
    queue.pop_front();
    for (const auto& g : a.generators)
      if (span.add(g.matrix.apply(span.vectors()[k]))) queue.push_back(span.size() - 1);
  }
  return span;
}

bool is_coideal_invariant(const CoidealAction& a, const std::vector<ModuleVector>& basis) {
  EchelonSpan span;
  for (const auto& v : basis) span.add(v);
  for (const auto& g : a.generators)
    for (const auto& v : basis)
      if (!span.contains(g.matrix.apply(v))) return false;
  return true;
}

ViModule vi_module(const IntVector& lambda, const IntVector& mu, const IntVector& nu, const SatakeDatum& s,
                   const DerivedSets& d, const ParameterSet& p) {
  const IntVector left = add_vectors(lambda, rootdata::apply(s.tau_x, nu));
  const IntVector right = add_vectors(mu, nu);
  const Realization a = repmod::build_irreducible(s.root, left);
  const Realization b = repmod::build_irreducible(s.root, right);
  ViModule out;
  out.ambient = repmod::tensor(a, b);
  out.generator = repmod::tensor_vector(a, b, repmod::extremal_vector(a, d.w_bullet), b.highest_vector());
  out.action = build_coideal_action(out.ambient, s, d, p);
  out.span = coideal_closure(out.action, out.generator);
  return out;
}

Intertwiner pi_imath(const ViModule& source, const ViModule& target) {
  return solve_intertwiner(source.action, source.generator, target.action, target.generator);
}

}  // namespace qsp::iqp
