#pragma once

// Parameters (ς, κ) of a quantum symmetric pair, the coideal generators
// E_j (j ∈ I_•), B_i (i ∈ I), K_h (h ∈ Y^ı) acting on a realization, the
// trivial-submodule solver, normalization at q = ∞ and the intertwiners
// between cyclic coideal modules.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsp/linalg.hpp"
#include "qsp/repmod.hpp"
#include "qsp/rootdata.hpp"

namespace qsp::iqp {

using linalg::EchelonSpan;
using linalg::SparseMatrix;
using qfield::Rational;
using qfield::RationalFunction;
using repmod::CrystalLattice;
using repmod::ModuleVector;
using repmod::Realization;
using rootdata::DerivedSets;
using rootdata::IntVector;
using rootdata::SatakeDatum;

struct ParameterSet {
  std::map<std::size_t, RationalFunction> varsigma;  // keyed by node index, i ∈ I_circ
  std::map<std::size_t, RationalFunction> kappa;
  std::map<std::size_t, long> shifts;  // κ_i = [s_i]_i variant, opt-in
  std::vector<std::size_t> order;      // total order on I_circ, smallest first
  std::string provenance;              // "default" or a file name
};

struct ConstraintFailure {
  int constraint = 0;  // 1..6, or 0 for shape problems
  std::size_t node = 0;
  std::string detail;
};

struct ParameterReport {
  std::vector<ConstraintFailure> failures;
  bool ok() const { return failures.empty(); }
  bool fails(int constraint) const;
};

ParameterReport validate_parameters(const ParameterSet& p, const SatakeDatum& s, const DerivedSets& d);

class UnclassifiedComponent : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Table values with κ = 0. `order` defaults to increasing node index.
ParameterSet default_parameters(const SatakeDatum& s, const DerivedSets& d, std::vector<std::size_t> order = {});

// The weight generating {λ ∈ X^+ : λ̄ = 0} for a simply connected real rank
// one datum: 2ϖ_i (AI_1), ϖ_i + ϖ_τ(i) (AIII_2, AIV_n) or ϖ_i, with i the
// first node of I_circ.
IntVector zero_class_generator(const SatakeDatum& s, const DerivedSets& d);

struct NamedOperator {
  std::string name;
  SparseMatrix matrix;
};

struct CoidealAction {
  DerivedSets derived;
  std::vector<int> d;
  std::vector<SparseMatrix> b;                   // B_i for every node
  std::map<std::size_t, SparseMatrix> e_bullet;  // E_j, j ∈ I_•
  std::vector<SparseMatrix> k;                   // K_h for h in derived.yi_basis
  std::map<std::size_t, RationalFunction> kappa;
  std::map<std::size_t, long> shifts;
  std::vector<IntVector> xi_class;  // X^ı class of each basis index
  // E_j (j ∈ I_•), then B_i (i ∈ I), then K_h, in that fixed order.
  std::vector<NamedOperator> generators;

  std::size_t dim() const { return xi_class.size(); }
};

CoidealAction build_coideal_action(const Realization& m, const SatakeDatum& s, const DerivedSets& d,
                                   const ParameterSet& p);

// x v for x = g_{word[0]} g_{word[1]} ... with g indexing action.generators.
ModuleVector apply_word(const CoidealAction& a, const std::vector<std::size_t>& word, const ModuleVector& v);

class BlockMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// B_{i,λ̄}^{(λ_i+1)} v. `lambda` is any representative of the block; v must lie
// in that X^ı block. With use_shift the factors become B_i - [s_i-λ_i+2k]_i.
ModuleVector i_divided_power(const CoidealAction& a, std::size_t i, const IntVector& lambda, long lambda_i,
                             const ModuleVector& v, bool use_shift = false);

class TrivialMultiplicityError : public std::logic_error {
 public:
  TrivialMultiplicityError(const std::string& what, std::size_t dim) : std::logic_error(what), dimension(dim) {}
  std::size_t dimension;
};

struct TrivialSearch {
  std::optional<ModuleVector> vector;  // first nonzero coordinate normalized to 1
  std::size_t kernel_dimension = 0;
  std::size_t unknowns = 0;
};

// Joint kernel of E_j, F_j (j ∈ I_•), B_i - κ_i (i ∈ I_circ), K_h - 1.
// Throws TrivialMultiplicityError when the kernel has dimension > 1.
TrivialSearch find_trivial_vector(const CoidealAction& a, const Realization& m);

struct Normalization {
  std::optional<RationalFunction> c;
  bool verdict = false;
  std::string witness;  // first offending lattice path when the verdict is false
};

Normalization infinity_normalize(const Realization& m, const CrystalLattice& lattice, const ModuleVector& w0);

// A U^ı-linear map determined on the cyclic span of a source vector.
struct Intertwiner {
  bool exists = false;
  std::string failure;
  EchelonSpan span;                 // basis of the cyclic source module
  std::vector<ModuleVector> images;  // image of span.vectors()[k]
  std::optional<ModuleVector> apply(const ModuleVector& v) const;
  // Kernel inside the source span, as ambient vectors.
  std::vector<ModuleVector> kernel() const;
};

// Grows the cyclic span of `source` under the generators and maps it along
// target; fails when some relation among source vectors is not respected.
Intertwiner solve_intertwiner(const CoidealAction& source_action, const ModuleVector& source,
                              const CoidealAction& target_action, const ModuleVector& target);

struct ProjectionMap {
  bool exists = false;
  std::string failure;
  SparseMatrix map;  // dim V(μ) × dim V(λ)
};

// π^{ı,λ}_μ: V(λ) → V(μ) with v_λ ↦ v_μ.
ProjectionMap projection_hom(const Realization& vl, const CoidealAction& al, const Realization& vm,
                             const CoidealAction& am);

struct ViModule {
  Realization ambient;  // V(λ+τν) ⊗ V(μ+ν)
  CoidealAction action;
  ModuleVector generator;
  EchelonSpan span;  // basis of the closure
  std::size_t dim() const { return span.size(); }
};

ViModule vi_module(const IntVector& lambda, const IntVector& mu, const IntVector& nu, const SatakeDatum& s,
                   const DerivedSets& d, const ParameterSet& p);

// Closure of a vector under all coideal generators.
EchelonSpan coideal_closure(const CoidealAction& a, const ModuleVector& v);
bool is_coideal_invariant(const CoidealAction& a, const std::vector<ModuleVector>& basis);

// π^ı_{λ,μ;ν}: V^ı(λ,μ;ν) → V^ı(λ,μ).
Intertwiner pi_imath(const ViModule& source, const ViModule& target);

}  // namespace qsp::iqp
