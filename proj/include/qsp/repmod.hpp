#pragma once

// Finite-dimensional weight modules of U: the irreducible modules V(λ) built
// as M(λ)/rad of the contragredient form, their tensor products, Kashiwara
// operators and the crystal lattice at q = ∞, Lusztig's braid operators
// T''_{i,1} and the extremal vectors v_{wλ}.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsp/linalg.hpp"
#include "qsp/qfield.hpp"
#include "qsp/rootdata.hpp"

namespace qsp::repmod {

using linalg::DenseMatrix;
using linalg::SparseMatrix;
using linalg::SparseVector;
using qfield::RationalFunction;
using qfield::Rational;
using rootdata::IntVector;
using rootdata::RootDatum;
using rootdata::Word;

// Coordinates with respect to the basis of a realization.
using ModuleVector = SparseVector;

struct WeightBlock {
  IntVector weight;                  // X coordinates
  std::vector<std::size_t> indices;  // basis vectors of this weight, increasing
};

struct Realization {
  RootDatum datum;
  IntVector highest_weight;  // empty for modules that are not V(λ)
  std::vector<IntVector> weights;  // weight of each basis vector
  std::vector<WeightBlock> blocks;
  std::map<IntVector, std::size_t> block_of_weight;
  std::vector<SparseMatrix> e;  // one per node
  std::vector<SparseMatrix> f;
  std::vector<DenseMatrix> gram;  // per block; only for V(λ)
  std::vector<std::string> provenance;

  std::size_t dim() const { return weights.size(); }
  std::size_t rank() const { return datum.cartan.size(); }
  bool is_irreducible() const { return !highest_weight.empty(); }
  ModuleVector basis_vector(std::size_t k) const { return {{k, RationalFunction(1)}}; }
  ModuleVector highest_vector() const { return basis_vector(0); }
  // Component of v in the weight block `b`.
  ModuleVector block_component(const ModuleVector& v, std::size_t b) const;
  // Weight blocks that meet the support of v.
  std::vector<std::size_t> support_blocks(const ModuleVector& v) const;
  std::optional<IntVector> weight_of(const ModuleVector& v) const;  // nullopt unless v is a weight vector
};

// Recomputes blocks and block_of_weight from weights.
void rebuild_blocks(Realization& m);

class NotDominant : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// V(λ). Throws NotDominant, std::domain_error for a non-finite Cartan datum,
// std::logic_error if the dimension disagrees with the Weyl dimension formula.
Realization build_irreducible(const RootDatum& datum, const IntVector& lambda);

// Weyl dimension formula; independent of any module construction.
Rational weyl_dimension(const rootdata::CartanDatum& cartan, const std::vector<long long>& lambda_coords);

// ---------------------------------------------------------------------------
// Generators

struct Generator {
  enum class Kind { E, F, K, EDiv, FDiv };
  Kind kind = Kind::E;
  std::size_t node = 0;
  IntVector h;    // for K
  long power = 1;  // for divided powers

  static Generator E(std::size_t i) { return {Kind::E, i, {}, 1}; }
  static Generator F(std::size_t i) { return {Kind::F, i, {}, 1}; }
  static Generator K(IntVector h) { return {Kind::K, 0, std::move(h), 1}; }
  static Generator EDiv(std::size_t i, long n) { return {Kind::EDiv, i, {}, n}; }
  static Generator FDiv(std::size_t i, long n) { return {Kind::FDiv, i, {}, n}; }
};

ModuleVector act(const Realization& m, const Generator& g, const ModuleVector& v);

// K_h as a diagonal matrix, K_i = K_{d_i h_i} and its inverse.
SparseMatrix k_matrix(const Realization& m, const IntVector& h);
SparseMatrix k_node_matrix(const Realization& m, std::size_t i, int sign);
SparseMatrix divided_power(const SparseMatrix& x, long n, int d);

struct RelationReport {
  bool ok = true;
  std::string failure;  // first violated identity
};
RelationReport verify_relations(const Realization& m);

// ---------------------------------------------------------------------------
// Contragredient form; requires an irreducible realization.

RationalFunction contragredient_form(const Realization& m, const ModuleVector& u, const ModuleVector& v);
// ρ(x) as a matrix: ρ(E_i) = q_i K_i F_i, ρ(F_i) = q_i K_i^{-1} E_i, ρ(K_h) = K_h.
SparseMatrix rho_e(const Realization& m, std::size_t i);
SparseMatrix rho_f(const Realization& m, std::size_t i);

// ---------------------------------------------------------------------------
// Kashiwara operators and the crystal lattice

struct StringDecomposition {
  // v = Σ_n F_i^{(n)} parts[n] with E_i parts[n] = 0.
  std::map<long, ModuleVector> parts;
};
StringDecomposition string_decomposition(const Realization& m, std::size_t i, const ModuleVector& weight_vector);

ModuleVector kashiwara_f(const Realization& m, std::size_t i, const ModuleVector& v);
ModuleVector kashiwara_e(const Realization& m, std::size_t i, const ModuleVector& v);

struct CrystalLattice {
  std::vector<ModuleVector> basis;       // basis[0] = v_λ
  std::vector<std::string> paths;        // F̃-monomial that produced each basis vector
  std::vector<std::vector<std::size_t>> block_members;  // lattice indices per weight block
  std::vector<DenseMatrix> block_inverse;  // module coords -> lattice coords, per block

  std::size_t size() const { return basis.size(); }
  // Coordinates of v in the lattice basis (exact solve).
  SparseVector coordinates(const Realization& m, const ModuleVector& v) const;
};

CrystalLattice build_crystal_lattice(const Realization& m);

bool congruent_at_infinity(const Realization& m, const CrystalLattice& lattice, const ModuleVector& u,
                           const ModuleVector& v);
bool in_lattice(const Realization& m, const CrystalLattice& lattice, const ModuleVector& v);

struct HighestAtInfinity {
  bool highest = false;           // Ẽ_i v ≡∞ 0 for all i
  std::optional<Rational> c;      // v ≡∞ c v_λ when highest
  std::vector<std::size_t> failing_nodes;
};

class OutsideLattice : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Throws OutsideLattice when v is not in the A∞-span of the lattice.
HighestAtInfinity highest_at_infinity(const Realization& m, const CrystalLattice& lattice, const ModuleVector& v);

// ---------------------------------------------------------------------------
// Braid group action T_i = T''_{i,1}

ModuleVector braid(const Realization& m, std::size_t i, const ModuleVector& v);
ModuleVector braid_inverse(const Realization& m, std::size_t i, const ModuleVector& v);
ModuleVector braid_word(const Realization& m, const Word& w, const ModuleVector& v);
SparseMatrix braid_matrix(const Realization& m, std::size_t i);
SparseMatrix braid_inverse_matrix(const Realization& m, std::size_t i);
SparseMatrix braid_word_matrix(const Realization& m, const Word& w);
SparseMatrix braid_word_inverse_matrix(const Realization& m, const Word& w);

// T_w(E_j) v computed as T_w E_j T_w^{-1} v.
ModuleVector conjugated_raising(const Realization& m, const Word& w, std::size_t j, const ModuleVector& v);
SparseMatrix conjugated_raising_matrix(const Realization& m, const Word& w, std::size_t j);

// v_{wλ}: F_i^{(<h_i, uλ>)} (or E_i^{(-<h_i, uλ>)}) applied along the word.
ModuleVector extremal_vector(const Realization& m, const Word& w);

// ---------------------------------------------------------------------------

// M ⊗ N with Δ(E_i) = E_i ⊗ 1 + K_i ⊗ E_i, Δ(F_i) = 1 ⊗ F_i + F_i ⊗ K_i^{-1}.
// Basis vector (a, b) has index a * dim(N) + b.
Realization tensor(const Realization& m, const Realization& n);
ModuleVector tensor_vector(const Realization& m, const Realization& n, const ModuleVector& u, const ModuleVector& v);

}  // namespace qsp::repmod
