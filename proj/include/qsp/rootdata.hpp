#pragma once

// Cartan data, root data and Satake data together with the index-set
// combinatorics they induce: I_circ, I_circ^{τ,•}, real rank one components,
// the longest element of W_•, doubled ρ•, ρ•∨, and the lattices X^ı, Y^ı.
//
// Lattice elements are integer coordinate vectors. For the simply connected
// datum Y has basis {h_i} and X has the dual basis of fundamental weights.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qsp::rootdata {

using IntVector = std::vector<long long>;
using IntMatrix = std::vector<IntVector>;  // row-major
using Word = std::vector<std::size_t>;     // s_{w[0]} s_{w[1]} ... as node indices

IntMatrix identity_matrix(std::size_t n);
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);
IntVector apply(const IntMatrix& m, const IntVector& v);
IntMatrix transpose(const IntMatrix& m);

struct CartanDatum {
  std::vector<std::string> labels;
  IntMatrix gcm;       // a_{ij} = <h_i, α_j>
  std::vector<int> d;  // symmetrizers

  std::size_t size() const { return labels.size(); }
  std::optional<std::size_t> index_of(const std::string& label) const;
  CartanDatum restricted(const std::vector<std::size_t>& nodes) const;
};

struct RootDatum {
  CartanDatum cartan;
  IntMatrix pairing;               // <y_a, x_b> for the coordinate bases of Y and X
  std::vector<IntVector> coroots;  // h_i in Y coordinates
  std::vector<IntVector> roots;    // α_i in X coordinates

  std::size_t rank_y() const { return pairing.size(); }
  std::size_t rank_x() const { return pairing.empty() ? 0 : pairing[0].size(); }
  long long pair(const IntVector& h, const IntVector& lambda) const;
  // <h_i, λ>
  long long coroot_pairing(std::size_t i, const IntVector& lambda) const { return pair(coroots[i], lambda); }
};

enum class Mode { Strict, Generalized };

struct SatakeDatum {
  RootDatum root;
  std::vector<bool> bullet;       // membership in I_•
  std::vector<std::size_t> tau;   // diagram involution of I
  IntMatrix tau_y;                // acts on Y coordinates
  IntMatrix tau_x;                // acts on X coordinates
  Mode mode = Mode::Strict;

  const CartanDatum& cartan() const { return root.cartan; }
  std::size_t size() const { return root.cartan.size(); }
  std::vector<std::size_t> bullet_nodes() const;
  std::vector<std::size_t> white_nodes() const;
  // Stable text used for hashing and cache keys.
  std::string canonical_text() const;
};

struct Violation {
  std::string axiom;
  std::string witness;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool mentions(const std::string& axiom) const;
};

ValidationReport validate(const CartanDatum& c);
ValidationReport validate(const RootDatum& r);
ValidationReport validate(const SatakeDatum& s);

// Connected components of the Dynkin graph restricted to `nodes`.
std::vector<std::vector<std::size_t>> connected_components(const CartanDatum& c,
                                                           const std::vector<std::size_t>& nodes);
// Positive definiteness of (d_i a_ij) restricted to `nodes` (empty set is finite).
bool is_finite_type(const CartanDatum& c, const std::vector<std::size_t>& nodes);
bool is_finite_type(const CartanDatum& c);

// Positive roots of the subsystem on `nodes`, as coordinate vectors over all
// of I (simple-root coordinates). Coroots use the transposed matrix.
std::vector<IntVector> positive_roots(const CartanDatum& c, const std::vector<std::size_t>& nodes);
std::vector<IntVector> positive_coroots(const CartanDatum& c, const std::vector<std::size_t>& nodes);

// s_j on simple-root coordinates.
IntVector reflect_root(const CartanDatum& c, std::size_t j, IntVector beta);
IntVector apply_word_to_root(const CartanDatum& c, const Word& w, IntVector beta);

// Reduced word of the longest element of W(nodes); throws std::domain_error
// when `nodes` is not of finite type.
Word longest_element(const CartanDatum& c, const std::vector<std::size_t>& nodes);

// Matrices of a Weyl group word on X and Y coordinates.
IntMatrix weyl_matrix_x(const RootDatum& r, const Word& w);
IntMatrix weyl_matrix_y(const RootDatum& r, const Word& w);

struct DoubledRho {
  IntVector coweight;  // 2ρ∨ ∈ Y
  IntVector weight;    // 2ρ ∈ X
};
DoubledRho doubled_rho(const RootDatum& r, const std::vector<std::size_t>& nodes);

// U * a * V = diag(divisors) with U, V unimodular.
struct SmithForm {
  IntMatrix u;
  IntMatrix v;
  std::vector<long long> divisors;  // nonzero invariant factors, length = rank
  std::size_t rows = 0;
  std::size_t cols = 0;
};
SmithForm smith_normal_form(const IntMatrix& a);

struct DerivedSets {
  std::vector<std::size_t> i_circ;
  std::vector<std::size_t> i_bullet;
  std::vector<std::size_t> i_circ_tau_bullet;
  std::map<std::size_t, std::vector<std::size_t>> components;  // i ∈ I_circ -> I_i (sorted)
  Word w_bullet;
  IntMatrix w_bullet_x;
  IntMatrix w_bullet_y;
  DoubledRho rho_bullet;
  IntMatrix xi_generators;  // columns λ + w•τ(λ) for the coordinate basis of X
  SmithForm xi_smith;
  std::vector<IntVector> yi_basis;  // integer basis of ker(1 + w•τ) on Y

  // Invariant of λ̄ ∈ X^ı: equal classes give equal vectors.
  IntVector xi_class(const IntVector& lambda) const;
  bool xi_is_zero(const IntVector& lambda) const;
  bool in_i_circ_tau_bullet(std::size_t i) const;
};

DerivedSets derive_sets(const SatakeDatum& s);

enum class RankOneType { AI1, AII3, AIII2, AIV, BII, CII, DII, FII4 };
std::string type_name(RankOneType t, std::size_t n);

struct ComponentInfo {
  std::vector<std::size_t> nodes;  // I_i, sorted
  bool finite = false;
  std::optional<RankOneType> type;  // set when the component matches the catalog
  std::size_t rank = 0;             // n in AIV_n, BII_n, ...
  std::string label;                // "AIV_3" or "not rank-1-finite"
};

struct ComponentReport {
  std::map<std::size_t, ComponentInfo> components;  // keyed by i ∈ I_circ
  bool locally_finite = true;
};

ComponentReport rank_one_components(const SatakeDatum& s, const DerivedSets& derived);

// ---------------------------------------------------------------------------
// Construction helpers

// Finite-type Cartan data in Bourbaki numbering. type ∈ {A,B,C,D,E,F,G}.
CartanDatum cartan_of_type(char type, std::size_t n);
CartanDatum direct_sum(const CartanDatum& a, const CartanDatum& b);

// Y = Z^I with basis h_i, X = Hom(Y, Z) with basis ϖ_i; τ permutes both.
// Throws std::invalid_argument when τ is not an automorphism of the Cartan datum.
SatakeDatum build_simply_connected(const CartanDatum& c, const std::vector<std::size_t>& tau,
                                   const std::vector<bool>& bullet, Mode mode = Mode::Strict);

// The catalog shape of a real rank one type, simply connected.
SatakeDatum rank_one_datum(RankOneType t, std::size_t n = 0);

// Fundamental weight ϖ_i for a simply connected datum.
IntVector fundamental_weight(const SatakeDatum& s, std::size_t i);

}  // namespace qsp::rootdata
