#pragma once

// End-to-end runs: build V(λ), its crystal lattice and the coideal action,
// find the trivial vector w0 and decide whether c w0 ≡∞ v_λ. Reports are
// rendered as JSON with sorted keys.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsp/cache.hpp"
#include "qsp/iqp.hpp"
#include "qsp/repmod.hpp"
#include "qsp/rootdata.hpp"

namespace qsp::verify {

using rootdata::IntVector;
using rootdata::RankOneType;
using rootdata::SatakeDatum;

enum class Status { Ok, VerdictFalse, InvalidInput, InvalidParameters, NoTrivialSubmodule, CapExceeded, Error };
std::string status_name(Status s);

// Short name of a parameter constraint 1..6 ("integrality", ...).
std::string constraint_name(int constraint);
std::string describe(const iqp::ConstraintFailure& f);

struct ReductionReport {
  bool verdict = false;
  bool bullet_annihilated = true;
  std::vector<std::size_t> failing_nodes;  // nodes with Ẽ_i w0 not ≡∞ 0
  std::optional<qfield::Rational> c;       // value at ∞ of the v_λ coordinate after rescaling
  std::string detail;
};

// Second route to the verdict: E_j w0 = F_j w0 = 0 on I_•, then w0 rescaled
// into ℒ(λ) \ q^-1 ℒ(λ) must satisfy Ẽ_i w0 ≡∞ 0 for every i with nonzero
// v_λ coordinate at ∞.
ReductionReport locally_finite_reduction_check(const SatakeDatum& s, const rootdata::DerivedSets& d,
                                               const repmod::Realization& m, const repmod::CrystalLattice& lattice,
                                               const repmod::ModuleVector& w0);

struct VerifyOptions {
  std::size_t cap_dim = 400;
  bool reduction = true;
  cache::RealizationCache* cache = nullptr;
};

struct VerificationReport {
  std::string datum_hash;
  IntVector lambda;
  std::optional<IntVector> nu;
  std::string parameter_provenance;
  std::vector<std::string> components;  // type label of each real rank one component
  Status status = Status::Error;
  std::size_t dimension = 0;
  std::size_t unknowns = 0;
  bool trivial_found = false;
  std::size_t kernel_dimension = 0;
  std::optional<std::string> c;
  bool verdict = false;
  std::optional<bool> reduction_verdict;
  bool routes_agree = true;
  bool from_cache = false;
  std::string note;
  std::vector<std::string> failures;
  std::vector<std::string> warnings;
  std::vector<std::pair<std::string, double>> timings;
  std::optional<repmod::ModuleVector> w0;  // not serialized

  std::string to_json(bool include_timings = false) const;
  std::string summary_row() const;
};

VerificationReport verify_strong(const SatakeDatum& s, const iqp::ParameterSet& p, const IntVector& lambda,
                                 const VerifyOptions& options = {});

// λ = ν + w•τ(ν), for which λ̄ = 0 always.
IntVector sufficient_weight(const SatakeDatum& s, const rootdata::DerivedSets& d, const IntVector& nu);
VerificationReport verify_sufficient_condition(const SatakeDatum& s, const iqp::ParameterSet& p, const IntVector& nu,
                                               const VerifyOptions& options = {});

struct SuiteFamily {
  RankOneType type;
  std::size_t n = 0;
  long k_max = 1;
  std::string key;  // "AI_1", "DII_3", ...
};

std::vector<SuiteFamily> default_suite();

struct SuiteEntry {
  std::string key;  // "<family>/k=<k>"
  std::string family;
  long k = 0;
  VerificationReport report;
};

struct SuiteReport {
  std::vector<SuiteEntry> entries;  // sorted by family order then k
  bool negative_control_rejected = false;
  std::string negative_control_detail;
  bool all_pass = false;

  std::string to_json(bool include_timings = false) const;
  std::string summary_table() const;
};

SuiteReport rank1_catalog_suite(const std::vector<SuiteFamily>& families, unsigned jobs = 1,
                                const VerifyOptions& options = {});

}  // namespace qsp::verify
