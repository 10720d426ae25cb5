// qsp: command line front end.
//
// Exit codes:
//   0 success / verdict true
//   1 invalid datum or parameters
//   2 parse or usage error
//   3 verdict false
//   4 no trivial submodule
//   5 dimension cap exceeded
//   6 internal error

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qsp/cache.hpp"
#include "qsp/iqp.hpp"
#include "qsp/repmod.hpp"
#include "qsp/rootdata.hpp"
#include "qsp/textio.hpp"
#include "qsp/verify.hpp"

using namespace qsp;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kUsage = 2, kFalse = 3, kNoTrivial = 4, kCap = 5, kInternal = 6 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// FormatError with the file name in front
struct FileParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Job {
  std::string datum_path;
  std::string params_path;
  bool default_params = false;
  std::string lambda;
  std::string nu;
  std::string order;
  std::size_t cap_dim = 400;
  std::string kappa_shifts;
  std::string mode;
  std::string cache_dir;
  std::string out;
  bool timings = false;
  unsigned jobs = 1;
  std::string cache_action;
};

rootdata::SatakeDatum load_datum(const Job& job) {
  if (job.datum_path.empty()) throw UsageError("--datum is required");
  std::string text;
  try {
    text = textio::read_file(job.datum_path);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  rootdata::SatakeDatum s;
  try {
    s = textio::parse_datum(text);
  } catch (const textio::FormatError& e) {
    throw FileParseError(job.datum_path + ": " + e.what());
  }
  if (job.mode == "strict") s.mode = rootdata::Mode::Strict;
  if (job.mode == "generalized") s.mode = rootdata::Mode::Generalized;
  return s;
}

std::vector<std::size_t> parse_order(const std::string& text, const rootdata::SatakeDatum& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string label;
  while (std::getline(ss, label, ',')) {
    auto i = s.cartan().index_of(label);
    if (!i) throw UsageError("--order: unknown node '" + label + "'");
    out.push_back(*i);
  }
  return out;
}

void apply_shifts(const std::string& text, const rootdata::SatakeDatum& s, iqp::ParameterSet& p) {
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--kappa-shifts expects label=integer pairs");
    auto i = s.cartan().index_of(item.substr(0, eq));
    if (!i) throw UsageError("--kappa-shifts: unknown node '" + item.substr(0, eq) + "'");
    long v = 0;
    try {
      v = std::stol(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("--kappa-shifts: bad integer in '" + item + "'");
    }
    p.shifts[*i] = v;
    p.kappa[*i] = qfield::RationalFunction(qfield::q_integer(v, s.cartan().d[*i]));
  }
}

iqp::ParameterSet load_parameters(const Job& job, const rootdata::SatakeDatum& s, const rootdata::DerivedSets& d) {
  iqp::ParameterSet p;
  if (!job.params_path.empty() && job.default_params) throw UsageError("--params and --default-params exclude each other");
  if (!job.params_path.empty()) {
    std::string text;
    try {
      text = textio::read_file(job.params_path);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
    try {
      p = textio::parse_parameters(text, s);
    } catch (const textio::FormatError& e) {
      throw FileParseError(job.params_path + ": " + e.what());
    }
    p.provenance = job.params_path;
    if (!job.order.empty()) p.order = parse_order(job.order, s);
  } else {
    p = iqp::default_parameters(s, d, job.order.empty() ? std::vector<std::size_t>{} : parse_order(job.order, s));
  }
  if (!job.kappa_shifts.empty()) apply_shifts(job.kappa_shifts, s, p);
  return p;
}

void emit(const Job& job, const std::string& text) {
  if (job.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(job.out, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError("cannot write " + job.out);
  f << text;
}

int exit_for(verify::Status s) {
  switch (s) {
    case verify::Status::Ok: return kOk;
    case verify::Status::VerdictFalse: return kFalse;
    case verify::Status::InvalidInput:
    case verify::Status::InvalidParameters: return kInvalid;
    case verify::Status::NoTrivialSubmodule: return kNoTrivial;
    case verify::Status::CapExceeded: return kCap;
    case verify::Status::Error: return kInternal;
  }
  return kInternal;
}

const char* kAxioms[] = {"shape",
                         "positive-symmetrizer",
                         "diagonal",
                         "off-diagonal-nonpositive",
                         "zero-pattern",
                         "symmetrizable",
                         "perfect-pairing",
                         "pairing-cartan",
                         "Y-regular",
                         "X-regular",
                         "tau-involution",
                         "tau-automorphism",
                         "tau-lattice-involution",
                         "tau-coroots",
                         "tau-roots",
                         "tau-pairing",
                         "tau-preserves-bullet",
                         "bullet-finite-type",
                         "tau-equals-minus-w-bullet",
                         "admissible-integrality"};

int cmd_validate(const Job& job) {
  const auto s = load_datum(job);
  const auto rep = rootdata::validate(s);
  for (auto axiom : kAxioms) {
    std::cout << (rep.mentions(axiom) ? "FAIL " : "ok   ") << axiom << '\n';
  }
  for (const auto& v : rep.violations) std::cout << "  " << v.axiom << ": " << v.witness << '\n';
  if (!rep.ok()) return kInvalid;

  const auto d = rootdata::derive_sets(s);
  const auto comps = rootdata::rank_one_components(s, d);
  for (const auto& [i, info] : comps.components)
    std::cout << "component " << s.cartan().labels[i] << ": " << info.label << '\n';
  std::cout << "locally finite: " << (comps.locally_finite ? "yes" : "no") << '\n';
  if (job.params_path.empty() && !job.default_params) return kOk;

  iqp::ParameterSet p;
  try {
    p = load_parameters(job, s, d);
  } catch (const iqp::UnclassifiedComponent& e) {
    std::cout << "parameters: " << e.what() << '\n';
    return kInvalid;
  }
  const auto pr = iqp::validate_parameters(p, s, d);
  for (int c = 1; c <= 6; ++c)
    std::cout << (pr.fails(c) ? "FAIL " : "ok   ") << "constraint " << c << " (" << verify::constraint_name(c)
              << ")\n";
  for (const auto& f : pr.failures) std::cout << "  " << verify::describe(f) << '\n';
  return pr.ok() ? kOk : kInvalid;
}

rootdata::IntVector require_weight(const std::string& text, const char* flag, const rootdata::SatakeDatum& s) {
  if (text.empty()) throw UsageError(std::string(flag) + " is required");
  return textio::parse_weight(text, s.root.rank_x());
}

cache::RealizationCache make_cache(const Job& job) {
  return cache::RealizationCache(job.cache_dir.empty() ? cache::RealizationCache::default_directory() : job.cache_dir);
}

int check_datum(const rootdata::SatakeDatum& s) {
  const auto rep = rootdata::validate(s);
  for (const auto& v : rep.violations) std::cerr << "datum: " << v.axiom << ": " << v.witness << '\n';
  return rep.ok() ? kOk : kInvalid;
}

int cmd_module(const Job& job) {
  const auto s = load_datum(job);
  if (int rc = check_datum(s)) return rc;
  const auto lambda = require_weight(job.lambda, "--lambda", s);
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.root.coroot_pairing(i, lambda) < 0) {
      std::cerr << "lambda is not dominant\n";
      return kInvalid;
    }
  std::vector<long long> coords;
  for (std::size_t i = 0; i < s.size(); ++i) coords.push_back(s.root.coroot_pairing(i, lambda));
  const auto expected = repmod::weyl_dimension(s.cartan(), coords);
  if (expected > qfield::Rational(static_cast<long>(job.cap_dim))) {
    std::cerr << "dim V(lambda) = " << expected.get_str() << " exceeds the cap " << job.cap_dim << '\n';
    return kCap;
  }
  auto c = make_cache(job);
  auto entry = c.get_or_build(s, lambda);
  for (const auto& w : entry.warnings) std::cerr << "warning: " << w << '\n';
  const auto& m = entry.realization;
  const auto rel = repmod::verify_relations(m);
  std::ostringstream os;
  os << "lambda " << textio::render_weight(lambda) << "\ndim " << m.dim() << "\nweight spaces " << m.blocks.size()
     << "\nrelations " << (rel.ok ? "ok" : "FAIL: " + rel.failure) << "\ncache " << (entry.from_cache ? "hit" : "built")
     << ' ' << entry.key << "\n";
  if (job.out.empty()) {
    std::cout << os.str();
  } else {
    emit(job, textio::render_realization(m, s));
    std::cout << os.str();
  }
  return rel.ok ? kOk : kInternal;
}

int cmd_trivial(const Job& job) {
  const auto s = load_datum(job);
  if (int rc = check_datum(s)) return rc;
  const auto d = rootdata::derive_sets(s);
  const auto p = load_parameters(job, s, d);
  const auto pr = iqp::validate_parameters(p, s, d);
  for (const auto& f : pr.failures) std::cerr << verify::describe(f) << '\n';
  if (!pr.ok()) return kInvalid;
  const auto lambda = require_weight(job.lambda, "--lambda", s);
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.root.coroot_pairing(i, lambda) < 0) {
      std::cerr << "lambda is not dominant\n";
      return kInvalid;
    }
  std::vector<long long> coords;
  for (std::size_t i = 0; i < s.size(); ++i) coords.push_back(s.root.coroot_pairing(i, lambda));
  const auto expected = repmod::weyl_dimension(s.cartan(), coords);
  if (expected > qfield::Rational(static_cast<long>(job.cap_dim))) {
    std::cerr << "dim V(lambda) = " << expected.get_str() << " exceeds the cap " << job.cap_dim << '\n';
    return kCap;
  }
  auto c = make_cache(job);
  auto entry = c.get_or_build(s, lambda);
  for (const auto& w : entry.warnings) std::cerr << "warning: " << w << '\n';
  const auto& m = entry.realization;
  const auto action = iqp::build_coideal_action(m, s, d, p);
  const auto tv = iqp::find_trivial_vector(action, m);
  std::ostringstream os;
  os << "dim " << m.dim() << "\nunknowns " << tv.unknowns << "\nkernel " << tv.kernel_dimension << '\n';
  if (tv.vector) {
    for (const auto& [k, x] : *tv.vector)
      os << "w0[" << k << "] weight " << textio::render_weight(m.weights[k]) << " path " << m.provenance[k] << " = "
         << x.to_string() << '\n';
  }
  emit(job, os.str());
  return tv.vector ? kOk : kNoTrivial;
}

int cmd_verify(const Job& job) {
  const auto s = load_datum(job);
  if (int rc = check_datum(s)) return rc;
  const auto d = rootdata::derive_sets(s);
  const auto p = load_parameters(job, s, d);
  if (job.lambda.empty() == job.nu.empty()) throw UsageError("give exactly one of --lambda and --nu");
  auto c = make_cache(job);
  verify::VerifyOptions options;
  options.cap_dim = job.cap_dim;
  options.cache = &c;
  verify::VerificationReport r =
      job.nu.empty() ? verify::verify_strong(s, p, textio::parse_weight(job.lambda, s.root.rank_x()), options)
                     : verify::verify_sufficient_condition(s, p, textio::parse_weight(job.nu, s.root.rank_x()), options);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  emit(job, r.to_json(job.timings));
  if (!job.out.empty()) std::cout << r.summary_row() << '\n';
  return exit_for(r.status);
}

int cmd_suite(const Job& job) {
  verify::VerifyOptions options;
  options.cap_dim = job.cap_dim;
  const auto rep = verify::rank1_catalog_suite(verify::default_suite(), job.jobs, options);
  emit(job, rep.to_json(job.timings));
  std::cerr << rep.summary_table();
  return rep.all_pass ? kOk : kFalse;
}

int cmd_cache(const Job& job) {
  auto c = make_cache(job);
  if (job.cache_action == "purge") {
    std::cout << "removed " << c.purge() << " entries from " << c.directory() << '\n';
    return kOk;
  }
  const auto s = load_datum(job);
  if (int rc = check_datum(s)) return rc;
  const auto lambda = require_weight(job.lambda, "--lambda", s);
  if (job.cache_action == "build") {
    auto e = c.build(s, lambda);
    std::cout << "key " << e.key << "\ndim " << e.realization.dim() << "\nchecksum " << e.checksum << '\n';
    return kOk;
  }
  const auto r = c.inspect(s, lambda);
  std::cout << "key " << r.key << "\npath " << r.path << "\npresent " << (r.present ? "yes" : "no") << '\n';
  if (r.present)
    std::cout << "intact " << (r.intact ? "yes" : "no") << "\nchecksum " << r.checksum << "\ndim " << r.dim
              << "\nbytes " << r.bytes << '\n';
  return r.present && r.intact ? kOk : kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum symmetric pairs: modules, trivial vectors and congruence at q = infinity"};
  app.require_subcommand(1);
  Job job;

  auto datum_opt = [&](CLI::App* sub) { sub->add_option("--datum", job.datum_path, "Satake datum file")->required(); };
  auto params_opts = [&](CLI::App* sub) {
    sub->add_option("--params", job.params_path, "parameter file");
    sub->add_flag("--default-params", job.default_params, "use the tabulated parameters (default)");
    sub->add_option("--order", job.order, "total order on I_circ, comma separated labels");
    sub->add_option("--kappa-shifts", job.kappa_shifts, "label=s,... sets kappa_i = [s]_i");
  };
  auto common = [&](CLI::App* sub) {
    sub->add_option("--mode", job.mode, "override the datum mode")->check(CLI::IsMember({"strict", "generalized"}));
    sub->add_option("--cap-dim", job.cap_dim, "largest module dimension attempted")->capture_default_str();
    sub->add_option("--cache-dir", job.cache_dir, "realization cache (default $QSP_CACHE_DIR or .qsp-cache)");
    sub->add_option("--out", job.out, "write the result here instead of stdout");
  };

  auto* validate = app.add_subcommand("validate", "check a datum and optionally a parameter file");
  datum_opt(validate);
  params_opts(validate);
  validate->add_option("--mode", job.mode, "override the datum mode")->check(CLI::IsMember({"strict", "generalized"}));

  auto* module = app.add_subcommand("module", "build V(lambda) and check its relations");
  datum_opt(module);
  module->add_option("--lambda", job.lambda, "highest weight, comma separated X coordinates")->required();
  common(module);

  auto* trivial = app.add_subcommand("trivial", "find the trivial vector of V(lambda)");
  datum_opt(trivial);
  params_opts(trivial);
  trivial->add_option("--lambda", job.lambda, "highest weight")->required();
  common(trivial);

  auto* verify_cmd = app.add_subcommand("verify", "run the congruence pipeline");
  datum_opt(verify_cmd);
  params_opts(verify_cmd);
  verify_cmd->add_option("--lambda", job.lambda, "highest weight");
  verify_cmd->add_option("--nu", job.nu, "use lambda = nu + w_bullet tau(nu)");
  verify_cmd->add_flag("--timings", job.timings, "include step timings in the report");
  common(verify_cmd);

  auto* suite = app.add_subcommand("suite", "real rank one catalog suite");
  suite->add_option("--jobs", job.jobs, "worker threads")->capture_default_str();
  suite->add_option("--cap-dim", job.cap_dim, "largest module dimension attempted")->capture_default_str();
  suite->add_option("--out", job.out, "write the JSON report here");
  suite->add_flag("--timings", job.timings, "include timings");

  auto* cache_cmd = app.add_subcommand("cache", "manage the realization cache");
  cache_cmd->add_option("action", job.cache_action)->required()->check(CLI::IsMember({"build", "inspect", "purge"}));
  cache_cmd->add_option("--datum", job.datum_path, "Satake datum file");
  cache_cmd->add_option("--lambda", job.lambda, "highest weight");
  cache_cmd->add_option("--cache-dir", job.cache_dir, "cache directory");
  cache_cmd->add_option("--mode", job.mode, "override the datum mode")->check(CLI::IsMember({"strict", "generalized"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(job);
    if (*module) return cmd_module(job);
    if (*trivial) return cmd_trivial(job);
    if (*verify_cmd) return cmd_verify(job);
    if (*suite) return cmd_suite(job);
    if (*cache_cmd) return cmd_cache(job);
  } catch (const FileParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const textio::FormatError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return kUsage;
  } catch (const iqp::UnclassifiedComponent& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
