#include "qsp/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qsp/textio.hpp"

namespace qsp::verify {

using nlohmann::json;

std::string status_name(Status s) {
  switch (s) {
    case Status::Ok: return "ok";
    case Status::VerdictFalse: return "verdict_false";
    case Status::InvalidInput: return "invalid_input";
    case Status::InvalidParameters: return "invalid_parameters";
    case Status::NoTrivialSubmodule: return "no_trivial_submodule";
    case Status::CapExceeded: return "cap_exceeded";
    case Status::Error: return "error";
  }
  return "error";
}

std::string constraint_name(int constraint) {
  switch (constraint) {
    case 0: return "shape";
    case 1: return "integrality";
    case 2: return "tau-symmetry";
    case 3: return "twisted bar relation";
    case 4: return "unitarity";
    case 5: return "kappa support";
    case 6: return "kappa bar-invariance";
  }
  return "unknown";
}

std::string describe(const iqp::ConstraintFailure& f) {
  return "constraint " + std::to_string(f.constraint) + " (" + constraint_name(f.constraint) + "): " + f.detail;
}

namespace {

class Stopwatch {
 public:
  explicit Stopwatch(std::vector<std::pair<std::string, double>>& sink) : sink_(sink) {}
  void lap(const std::string& step) {
    auto now = std::chrono::steady_clock::now();
    sink_.emplace_back(step, std::chrono::duration<double>(now - last_).count());
    last_ = now;
  }

 private:
  std::vector<std::pair<std::string, double>>& sink_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

bool is_dominant(const SatakeDatum& s, const IntVector& lambda) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.root.coroot_pairing(i, lambda) < 0) return false;
  return true;
}

json weight_json(const IntVector& w) {
  json a = json::array();
  for (auto x : w) a.push_back(x);
  return a;
}

}  // namespace

// ---------------------------------------------------------------------------

ReductionReport locally_finite_reduction_check(const SatakeDatum& s, const rootdata::DerivedSets& d,
                                               const repmod::Realization& m, const repmod::CrystalLattice& lattice,
                                               const repmod::ModuleVector& w0) {
  ReductionReport out;
  const auto& labels = s.cartan().labels;
  for (auto j : d.i_bullet) {
    if (!linalg::is_zero(m.e[j].apply(w0)) || !linalg::is_zero(m.f[j].apply(w0))) {
      out.bullet_annihilated = false;
      out.detail = "E or F of bullet node " + labels[j] + " does not kill w0";
      return out;
    }
  }
  // Largest valuation among lattice coordinates; q^-vmax w0 lies in ℒ but not in q^-1 ℒ.
  const auto coords = lattice.coordinates(m, w0);
  std::optional<int> vmax;
  for (const auto& [k, x] : coords) {
    auto v = qfield::infinity_valuation(x);
    if (v && (!vmax || *v > *vmax)) vmax = v;
  }
  if (!vmax) {
    out.detail = "w0 is zero";
    return out;
  }
  const auto w = linalg::scaled(w0, qfield::RationalFunction::q_power(-*vmax));
  const auto h = repmod::highest_at_infinity(m, lattice, w);
  out.failing_nodes = h.failing_nodes;
  if (!h.highest) {
    out.detail = "E~_" + labels[h.failing_nodes.front()] + " w0 is not congruent to 0";
    return out;
  }
  out.c = h.c;
  if (!h.c || *h.c == 0) {
    out.detail = "w0 is highest at infinity but its v_lambda coordinate vanishes there";
    return out;
  }
  out.verdict = true;
  return out;
}

// ---------------------------------------------------------------------------

VerificationReport verify_strong(const SatakeDatum& s, const iqp::ParameterSet& p, const IntVector& lambda,
                                 const VerifyOptions& options) {
  VerificationReport r;
  r.datum_hash = textio::hex64(textio::fnv1a64(s.canonical_text()));
  r.lambda = lambda;
  r.parameter_provenance = p.provenance;
  Stopwatch clock(r.timings);

  const auto dv = rootdata::validate(s);
  if (!dv.ok()) {
    r.status = Status::InvalidInput;
    for (const auto& v : dv.violations) r.failures.push_back("datum: " + v.axiom + ": " + v.witness);
    return r;
  }
  if (lambda.size() != s.root.rank_x()) {
    r.status = Status::InvalidInput;
    r.failures.push_back("lambda has " + std::to_string(lambda.size()) + " coordinates, X has rank " +
                         std::to_string(s.root.rank_x()));
    return r;
  }
  if (!is_dominant(s, lambda)) {
    r.status = Status::InvalidInput;
    r.failures.push_back("lambda is not dominant");
    return r;
  }
  rootdata::DerivedSets d;
  try {
    d = rootdata::derive_sets(s);
    const auto comps = rootdata::rank_one_components(s, d);
    for (const auto& [i, info] : comps.components) r.components.push_back(s.cartan().labels[i] + ":" + info.label);
  } catch (const std::exception& e) {
    r.status = Status::InvalidInput;
    r.failures.push_back(std::string("derived sets: ") + e.what());
    return r;
  }
  const auto pr = iqp::validate_parameters(p, s, d);
  if (!pr.ok()) {
    r.status = Status::InvalidParameters;
    for (const auto& f : pr.failures) r.failures.push_back("parameters: " + describe(f));
    return r;
  }
  if (!rootdata::is_finite_type(s.cartan())) {
    r.status = Status::InvalidInput;
    r.failures.push_back("global Cartan datum is not of finite type");
    return r;
  }
  {
    std::vector<long long> coords;
    for (std::size_t i = 0; i < s.size(); ++i) coords.push_back(s.root.coroot_pairing(i, lambda));
    const auto expected = repmod::weyl_dimension(s.cartan(), coords);
    r.dimension = expected.get_num().get_ui();
    if (expected > qfield::Rational(static_cast<long>(options.cap_dim))) {
      r.status = Status::CapExceeded;
      r.failures.push_back("dim V(lambda) = " + expected.get_str() + " exceeds the cap " +
                           std::to_string(options.cap_dim));
      return r;
    }
  }
  const bool zero_class = d.xi_is_zero(lambda);
  clock.lap("validate");

  std::string stage = "module";
  try {
    repmod::Realization m;
    if (options.cache) {
      auto entry = options.cache->get_or_build(s, lambda);
      m = std::move(entry.realization);
      r.from_cache = entry.from_cache;
      r.warnings = entry.warnings;
    } else {
      m = repmod::build_irreducible(s.root, lambda);
    }
    r.dimension = m.dim();
    clock.lap("module");
    stage = "lattice";
    const auto lattice = repmod::build_crystal_lattice(m);
    clock.lap("lattice");
    stage = "coideal action";
    const auto action = iqp::build_coideal_action(m, s, d, p);
    clock.lap("coideal action");
    stage = "trivial vector";
    const auto tv = iqp::find_trivial_vector(action, m);
    clock.lap("trivial vector");
    r.kernel_dimension = tv.kernel_dimension;
    r.unknowns = tv.unknowns;
    r.trivial_found = tv.vector.has_value();
    if (!tv.vector) {
      r.status = Status::NoTrivialSubmodule;
      r.note = zero_class ? "no trivial vector although the class of lambda in X^i is zero"
                          : "the class of lambda in X^i is nonzero, so V(lambda) has no trivial submodule";
      if (zero_class) r.failures.push_back("trivial vector missing for a weight of zero class");
      return r;
    }
    if (!zero_class) r.failures.push_back("trivial vector found for a weight of nonzero class");
    r.w0 = tv.vector;
    stage = "normalization";
    const auto nz = iqp::infinity_normalize(m, lattice, *tv.vector);
    clock.lap("normalization");
    if (nz.c) r.c = nz.c->to_string();
    r.verdict = nz.verdict && r.kernel_dimension == 1;
    if (!nz.verdict) r.failures.push_back("congruence: " + nz.witness);
    if (options.reduction) {
      stage = "reduction check";
      const auto red = locally_finite_reduction_check(s, d, m, lattice, *tv.vector);
      clock.lap("reduction check");
      r.reduction_verdict = red.verdict;
      r.routes_agree = red.verdict == nz.verdict;
      if (!r.routes_agree)
        r.failures.push_back("route disagreement: reduction check says " + std::string(red.verdict ? "true" : "false") +
                             (red.detail.empty() ? "" : " (" + red.detail + ")"));
    }
  } catch (const iqp::TrivialMultiplicityError& e) {
    r.kernel_dimension = e.dimension;
    r.status = Status::Error;
    r.failures.push_back(stage + ": " + e.what());
    return r;
  } catch (const std::exception& e) {
    r.status = Status::Error;
    r.failures.push_back(stage + ": " + e.what());
    return r;
  }
  if (!r.routes_agree || !zero_class) {
    r.status = Status::Error;
  } else {
    r.status = r.verdict ? Status::Ok : Status::VerdictFalse;
  }
  return r;
}

IntVector sufficient_weight(const SatakeDatum& s, const rootdata::DerivedSets& d, const IntVector& nu) {
  const IntVector t = rootdata::apply(d.w_bullet_x, rootdata::apply(s.tau_x, nu));
  IntVector out = nu;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += t[k];
  return out;
}

VerificationReport verify_sufficient_condition(const SatakeDatum& s, const iqp::ParameterSet& p, const IntVector& nu,
                                               const VerifyOptions& options) {
  VerificationReport r;
  if (nu.size() != s.root.rank_x() || !rootdata::validate(s).ok()) {
    r = verify_strong(s, p, nu, options);
    r.nu = nu;
    return r;
  }
  if (!is_dominant(s, nu)) {
    r.datum_hash = textio::hex64(textio::fnv1a64(s.canonical_text()));
    r.lambda = nu;
    r.nu = nu;
    r.parameter_provenance = p.provenance;
    r.status = Status::InvalidInput;
    r.failures.push_back("nu is not dominant");
    return r;
  }
  const auto d = rootdata::derive_sets(s);
  r = verify_strong(s, p, sufficient_weight(s, d, nu), options);
  r.nu = nu;
  return r;
}

// ---------------------------------------------------------------------------
// Rendering

std::string VerificationReport::to_json(bool include_timings) const {
  json j;
  j["datum_hash"] = datum_hash;
  j["lambda"] = weight_json(lambda);
  if (nu) j["nu"] = weight_json(*nu);
  j["parameters"] = parameter_provenance;
  j["components"] = components;
  j["status"] = status_name(status);
  j["dimension"] = dimension;
  j["unknowns"] = unknowns;
  j["trivial_vector_found"] = trivial_found;
  j["kernel_dimension"] = kernel_dimension;
  j["normalization_constant"] = c ? json(*c) : json(nullptr);
  j["congruence_verdict"] = verdict;
  j["reduction_verdict"] = reduction_verdict ? json(*reduction_verdict) : json(nullptr);
  j["routes_agree"] = routes_agree;
  if (!note.empty()) j["note"] = note;
  j["failures"] = failures;
  if (!warnings.empty()) j["warnings"] = warnings;
  if (include_timings) {
    json t = json::object();
    for (const auto& [step, sec] : timings) t[step] = sec;
    j["timings"] = t;
    j["from_cache"] = from_cache;
  }
  return j.dump(2) + "\n";
}

std::string VerificationReport::summary_row() const {
  std::ostringstream os;
  os << std::left << std::setw(14) << ("[" + textio::render_weight(lambda) + "]") << std::setw(6) << dimension
     << std::setw(8) << kernel_dimension << std::setw(14) << (c ? *c : "-") << std::setw(8)
     << (verdict ? "true" : "false") << status_name(status);
  return os.str();
}

// ---------------------------------------------------------------------------
// Catalog suite

std::vector<SuiteFamily> default_suite() {
  return {
      {RankOneType::AI1, 1, 3, "AI_1"},   {RankOneType::AIII2, 2, 2, "AIII_2"}, {RankOneType::AII3, 3, 2, "AII_3"},
      {RankOneType::AIV, 2, 2, "AIV_2"},  {RankOneType::BII, 2, 1, "BII_2"},    {RankOneType::CII, 3, 1, "CII_3"},
      {RankOneType::DII, 3, 1, "DII_3"},  {RankOneType::FII4, 4, 1, "FII_4"},
  };
}

SuiteReport rank1_catalog_suite(const std::vector<SuiteFamily>& families, unsigned jobs,
                                const VerifyOptions& options) {
  struct Job {
    std::size_t family;
    long k;
  };
  std::vector<Job> work;
  for (std::size_t f = 0; f < families.size(); ++f)
    for (long k = 1; k <= families[f].k_max; ++k) work.push_back({f, k});

  SuiteReport out;
  out.entries.resize(work.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t w = next++; w < work.size(); w = next++) {
      const auto& fam = families[work[w].family];
      SuiteEntry& e = out.entries[w];
      e.family = fam.key;
      e.k = work[w].k;
      e.key = fam.key + "/k=" + std::to_string(e.k);
      try {
        const auto s = rootdata::rank_one_datum(fam.type, fam.n);
        const auto d = rootdata::derive_sets(s);
        const auto p = iqp::default_parameters(s, d);
        IntVector lambda = iqp::zero_class_generator(s, d);
        for (auto& x : lambda) x *= e.k;
        e.report = verify_strong(s, p, lambda, options);
      } catch (const std::exception& ex) {
        e.report.status = Status::Error;
        e.report.failures.push_back(ex.what());
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, work.size()))));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // AI_1 with varsigma = q must be rejected before any module is built.
  {
    const auto s = rootdata::rank_one_datum(RankOneType::AI1);
    const auto d = rootdata::derive_sets(s);
    auto p = iqp::default_parameters(s, d);
    p.varsigma[0] = qfield::RationalFunction::q_power(1);
    p.provenance = "negative control";
    const auto pr = iqp::validate_parameters(p, s, d);
    out.negative_control_rejected = pr.fails(3);
    std::vector<std::string> parts;
    for (const auto& f : pr.failures) parts.push_back(describe(f));
    std::ostringstream os;
    for (std::size_t k = 0; k < parts.size(); ++k) os << (k ? "; " : "") << parts[k];
    out.negative_control_detail = os.str();
  }

  out.all_pass = out.negative_control_rejected;
  for (const auto& e : out.entries)
    if (e.report.status != Status::Ok || !e.report.verdict || !e.report.routes_agree) out.all_pass = false;
  return out;
}

std::string SuiteReport::to_json(bool include_timings) const {
  json j;
  json entries_json = json::object();
  for (const auto& e : entries) entries_json[e.key] = json::parse(e.report.to_json(include_timings));
  j["entries"] = entries_json;
  j["negative_control"] = {{"case", "AI_1 varsigma = q"},
                           {"rejected", negative_control_rejected},
                           {"failures", negative_control_detail}};
  j["all_pass"] = all_pass;
  return j.dump(2) + "\n";
}

std::string SuiteReport::summary_table() const {
  std::ostringstream os;
  os << std::left << std::setw(14) << "case" << std::setw(14) << "lambda" << std::setw(6) << "dim" << std::setw(8)
     << "kernel" << std::setw(14) << "c" << std::setw(8) << "verdict" << "status\n";
  for (const auto& e : entries) os << std::setw(14) << e.key << e.report.summary_row() << '\n';
  os << "negative control (AI_1, varsigma = q): " << (negative_control_rejected ? "rejected" : "ACCEPTED") << '\n';
  os << (all_pass ? "suite: pass" : "suite: FAIL") << '\n';
  return os.str();
}

}  // namespace qsp::verify
