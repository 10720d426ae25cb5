// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "oracles.hpp"
#include "qsp/cache.hpp"
#include "qsp/iqp.hpp"
#include "qsp/textio.hpp"
#include "qsp/verify.hpp"

using namespace qsp;
namespace rd = qsp::rootdata;
namespace rm = qsp::repmod;
namespace fs = std::filesystem;
using rd::RankOneType;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void fail(const std::string& why) {
    if (pass) detail << why;
    pass = false;
  }
};

struct Catalog {
  std::string name;
  rd::SatakeDatum s;
};

std::vector<Catalog> relation_data() {
  return {{"AI_1", rd::rank_one_datum(RankOneType::AI1)},       {"AIII_2", rd::rank_one_datum(RankOneType::AIII2, 2)},
          {"AII_3", rd::rank_one_datum(RankOneType::AII3, 3)},   {"AIV_2", rd::rank_one_datum(RankOneType::AIV, 2)},
          {"BII_2", rd::rank_one_datum(RankOneType::BII, 2)},    {"CII_3", rd::rank_one_datum(RankOneType::CII, 3)},
          {"DII_3", rd::rank_one_datum(RankOneType::DII, 3)}};
}

std::vector<Catalog> eight_types() {
  auto v = relation_data();
  v.push_back({"FII_4", rd::rank_one_datum(RankOneType::FII4, 4)});
  return v;
}

rd::IntVector coords_of(const rd::SatakeDatum& s, const rd::IntVector& lam) {
  rd::IntVector c;
  for (std::size_t i = 0; i < s.size(); ++i) c.push_back(s.root.coroot_pairing(i, lam));
  return c;
}

long dimension(const rd::SatakeDatum& s, const rd::IntVector& lam) {
  return oracle::dimension(s.cartan().gcm, s.cartan().d, coords_of(s, lam)).get_num().get_si();
}

// Dominant weights with coordinates in [0, bound], nonzero, sorted by dimension.
std::vector<rd::IntVector> dominant_box(const rd::SatakeDatum& s, long long bound, long cap) {
  std::vector<rd::IntVector> out;
  const std::size_t n = s.size();
  rd::IntVector lam(n, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == n) {
      if (std::any_of(lam.begin(), lam.end(), [](long long x) { return x != 0; }) && dimension(s, lam) <= cap)
        out.push_back(lam);
      return;
    }
    for (long long x = 0; x <= bound; ++x) {
      lam[k] = x;
      rec(k + 1);
    }
    lam[k] = 0;
  };
  rec(0);
  std::stable_sort(out.begin(), out.end(),
                   [&](const auto& a, const auto& b) { return dimension(s, a) < dimension(s, b); });
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  int modules = 0;
  for (const auto& c : relation_data()) {
    auto ws = dominant_box(c.s, 2, 400);
    if (ws.size() < 2) o.fail(c.name + ": fewer than two weights");
    for (std::size_t k = 0; k < std::min<std::size_t>(2, ws.size()); ++k) {
      const auto m = rm::build_irreducible(c.s.root, ws[k]);
      const auto rel = rm::verify_relations(m);
      ++modules;
      if (!rel.ok) o.fail(c.name + " [" + textio::render_weight(ws[k]) + "]: " + rel.failure);
    }
  }
  const double t = seconds_since(t0);
  if (t > 120) o.fail("took longer than 2 minutes");
  o.detail << (o.pass ? "" : "; ") << modules << " modules, " << t << " s";
  return o;
}

Outcome criterion2() {
  Outcome o;
  int modules = 0;
  std::mt19937 rng(2);
  for (const auto& fam : verify::default_suite()) {
    const auto s = rd::rank_one_datum(fam.type, fam.n);
    const auto g = iqp::zero_class_generator(s, rd::derive_sets(s));
    for (long k = 1; k <= fam.k_max; ++k) {
      rd::IntVector lam = g;
      for (auto& x : lam) x *= k;
      const auto m = rm::build_irreducible(s.root, lam);
      ++modules;
      const std::string tag = fam.key + "/k=" + std::to_string(k);
      if (rm::contragredient_form(m, m.highest_vector(), m.highest_vector()) != qfield::RationalFunction(1))
        o.fail(tag + ": (v,v) != 1");
      for (int trial = 0; trial < 3; ++trial) {
        rm::ModuleVector u;
        rm::ModuleVector v;
        for (std::size_t j = 0; j < m.dim(); ++j) {
          if (rng() % 3 == 0) u[j] = qfield::RationalFunction(static_cast<long>(rng() % 5) - 2);
          if (rng() % 3 == 0) v[j] = qfield::RationalFunction::q_power(static_cast<int>(rng() % 5) - 2);
        }
        for (std::size_t i = 0; i < m.rank(); ++i) {
          if (rm::contragredient_form(m, m.e[i].apply(u), v) != rm::contragredient_form(m, u, rm::rho_e(m, i).apply(v)))
            o.fail(tag + ": contragredience fails for E");
          if (rm::contragredient_form(m, m.f[i].apply(u), v) != rm::contragredient_form(m, u, rm::rho_f(m, i).apply(v)))
            o.fail(tag + ": contragredience fails for F");
        }
      }
      const auto L = rm::build_crystal_lattice(m);
      if (static_cast<long>(L.size()) != dimension(s, lam)) o.fail(tag + ": lattice size");
      for (std::size_t i = 0; i < m.rank(); ++i) {
        if (!rm::kashiwara_e(m, i, m.highest_vector()).empty()) o.fail(tag + ": E~ v_lambda != 0");
        for (const auto& b : L.basis)
          if (!rm::in_lattice(m, L, rm::kashiwara_e(m, i, b)) || !rm::in_lattice(m, L, rm::kashiwara_f(m, i, b)))
            o.fail(tag + ": lattice not stable");
      }
    }
  }
  o.detail << (o.pass ? "" : "; ") << modules << " modules";
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto a2 = rd::build_simply_connected(rd::cartan_of_type('A', 2), {0, 1}, {false, false});
  for (const auto& lam : {rd::IntVector{1, 0}, rd::IntVector{1, 1}}) {
    const auto m = rm::build_irreducible(a2.root, lam);
    const auto t1 = rm::braid_matrix(m, 0);
    const auto t2 = rm::braid_matrix(m, 1);
    if (t1 * t2 * t1 != t2 * t1 * t2) o.fail("braid relation fails on [" + textio::render_weight(lam) + "]");
  }
  int words = 0;
  int inverses = 0;
  for (const auto& c : eight_types()) {
    const auto d = rd::derive_sets(c.s);
    const auto m = rm::build_irreducible(c.s.root, iqp::zero_class_generator(c.s, d));
    for (std::size_t i = 0; i < m.rank(); ++i) {
      ++inverses;
      if (rm::braid_matrix(m, i) * rm::braid_inverse_matrix(m, i) != linalg::SparseMatrix::identity(m.dim()))
        o.fail(c.name + ": T_i not invertible");
    }
    if (d.i_bullet.empty()) continue;
    const auto ref = rm::braid_word_matrix(m, d.w_bullet);
    rd::Word reversed(d.w_bullet.rbegin(), d.w_bullet.rend());
    std::vector<std::size_t> nodes(d.i_bullet.rbegin(), d.i_bullet.rend());
    const rd::Word other = rd::longest_element(c.s.cartan(), nodes);
    for (const auto& w : {reversed, other}) {
      ++words;
      if (rm::braid_word_matrix(m, w) != ref) o.fail(c.name + ": T_w depends on the reduced word");
    }
  }
  o.detail << (o.pass ? "" : "; ") << words << " alternative words, " << inverses << " inverses";
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (const auto& c : eight_types()) {
    const auto d = rd::derive_sets(c.s);
    const auto p = iqp::default_parameters(c.s, d);
    const auto rep = iqp::validate_parameters(p, c.s, d);
    if (!rep.ok()) o.fail(c.name + ": " + verify::describe(rep.failures.front()));
  }
  // AIV_n with both orders and n = 3
  const auto aiv3 = rd::rank_one_datum(RankOneType::AIV, 3);
  const auto d3 = rd::derive_sets(aiv3);
  for (const auto& order : {std::vector<std::size_t>{0, 2}, std::vector<std::size_t>{2, 0}})
    if (!iqp::validate_parameters(iqp::default_parameters(aiv3, d3, order), aiv3, d3).ok()) o.fail("AIV_3 order");
  const auto ai1 = rd::rank_one_datum(RankOneType::AI1);
  const auto d = rd::derive_sets(ai1);
  auto p = iqp::default_parameters(ai1, d);
  p.varsigma[0] = qfield::RationalFunction::q_power(1);
  if (!iqp::validate_parameters(p, ai1, d).fails(3)) o.fail("negative control accepted");
  o.detail << (o.pass ? "8 types valid, negative control rejected" : "");
  return o;
}

verify::SuiteReport g_suite;

Outcome criterion5() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  g_suite = verify::rank1_catalog_suite(verify::default_suite(), std::max(1u, std::thread::hardware_concurrency()));
  for (const auto& e : g_suite.entries) {
    const auto& r = e.report;
    if (r.status != verify::Status::Ok || !r.trivial_found || r.kernel_dimension != 1 || !r.verdict)
      o.fail(e.key + ": " + verify::status_name(r.status) + (r.failures.empty() ? "" : " " + r.failures.front()));
  }
  if (!g_suite.all_pass) o.fail("suite reports failure");
  const double t = seconds_since(t0);
  if (t > 600) o.fail("took longer than 10 minutes");
  o.detail << (o.pass ? "" : "; ") << g_suite.entries.size() << " cases all true, " << t << " s";
  return o;
}

Outcome criterion6() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  struct Job {
    const Catalog* type;
    rd::DerivedSets d;
    iqp::ParameterSet p;
    rd::IntVector lam;
  };
  std::vector<Job> jobs;
  const auto types = eight_types();
  for (const auto& c : types) {
    const auto d = rd::derive_sets(c.s);
    const auto p = iqp::default_parameters(c.s, d);
    for (const auto& lam : dominant_box(c.s, 2, 400))
      if (!d.xi_is_zero(lam)) jobs.push_back({&c, d, p, lam});
  }
  // weights are independent, spread them over threads
  std::vector<char> found(jobs.size(), 0);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k; (k = next++) < jobs.size();) {
      const auto& j = jobs[k];
      const auto m = rm::build_irreducible(j.type->s.root, j.lam);
      const auto a = iqp::build_coideal_action(m, j.type->s, j.d, j.p);
      found[k] = iqp::find_trivial_vector(a, m).vector.has_value();
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  for (std::size_t k = 0; k < jobs.size(); ++k)
    if (found[k]) o.fail(jobs[k].type->name + " [" + textio::render_weight(jobs[k].lam) + "] has one");
  o.detail << (o.pass ? "" : "; ") << jobs.size() << " weights with nonzero class, none has a trivial vector, "
           << seconds_since(t0) << " s";
  return o;
}

Outcome criterion7() {
  Outcome o;
  int compared = 0;
  for (const auto& e : g_suite.entries) {
    ++compared;
    if (!e.report.reduction_verdict || *e.report.reduction_verdict != e.report.verdict || !e.report.routes_agree)
      o.fail(e.key + ": routes disagree");
  }
  const auto ai2 = rd::build_simply_connected(rd::cartan_of_type('A', 2), {0, 1}, {false, false});
  const auto p = iqp::default_parameters(ai2, rd::derive_sets(ai2));
  for (const auto& lam : {rd::IntVector{2, 0}, rd::IntVector{2, 2}}) {
    const auto r = verify::verify_strong(ai2, p, lam);
    ++compared;
    if (!r.reduction_verdict || *r.reduction_verdict != r.verdict || !r.verdict)
      o.fail("AI_2 [" + textio::render_weight(lam) + "]: " + verify::status_name(r.status));
    o.detail << "";
  }
  o.detail << (o.pass ? "" : "; ") << compared << " runs agree";
  return o;
}

Outcome criterion8() {
  Outcome o;
  const auto s = rd::rank_one_datum(RankOneType::AI1);
  const auto d = rd::derive_sets(s);
  const auto p = iqp::default_parameters(s, d);
  const auto v4 = rm::build_irreducible(s.root, {4});
  const auto v2 = rm::build_irreducible(s.root, {2});
  const auto a4 = iqp::build_coideal_action(v4, s, d, p);
  const auto a2 = iqp::build_coideal_action(v2, s, d, p);
  const auto pm = iqp::projection_hom(v4, a4, v2, a2);
  if (!pm.exists) {
    o.fail("no projection: " + pm.failure);
    return o;
  }
  // v_λ generates V(λ) over the coideal, so a map fixed on v_λ is unique.
  if (iqp::coideal_closure(a4, v4.highest_vector()).size() != v4.dim()) o.fail("v_lambda is not cyclic");
  for (std::size_t g = 0; g < a4.generators.size(); ++g)
    if (pm.map * a4.generators[g].matrix != a2.generators[g].matrix * pm.map) o.fail("not a module map");
  if (pm.map.apply(v4.highest_vector()) != v2.highest_vector()) o.fail("v_lambda not sent to v_mu");
  const auto w4 = iqp::find_trivial_vector(a4, v4).vector;
  const auto w2 = iqp::find_trivial_vector(a2, v2).vector;
  if (!w4 || !w2) {
    o.fail("missing trivial vector");
    return o;
  }
  const auto img = pm.map.apply(*w4);
  if (img.empty()) {
    o.fail("trivial line sent to zero");
    return o;
  }
  const auto ratio = img.begin()->second / w2->at(img.begin()->first);
  if (img != linalg::scaled(*w2, ratio)) o.fail("trivial line not sent to the trivial line");
  o.detail << (o.pass ? "pi(w0^4) = " + ratio.to_string() + " w0^2" : "");
  return o;
}

Outcome criterion9() {
  Outcome o;
  const auto s = rd::rank_one_datum(RankOneType::AI1);
  const auto d = rd::derive_sets(s);
  const auto p = iqp::default_parameters(s, d);
  const auto src = iqp::vi_module({0}, {0}, {1}, s, d, p);
  const auto tgt = iqp::vi_module({0}, {0}, {0}, s, d, p);
  if (!iqp::is_coideal_invariant(src.action, src.span.vectors())) o.fail("closure not invariant");
  const auto pi = iqp::pi_imath(src, tgt);
  if (!pi.exists) {
    o.fail("no intertwiner: " + pi.failure);
    return o;
  }
  if (*pi.apply(src.generator) != tgt.generator) o.fail("generator not sent to generator");
  const auto ker = pi.kernel();
  if (!iqp::is_coideal_invariant(src.action, ker)) o.fail("kernel not invariant");
  o.detail << (o.pass ? "dim V^i(0,0;w) = " + std::to_string(src.dim()) + ", kernel dim " + std::to_string(ker.size())
                      : "");
  return o;
}

Outcome criterion10() {
  Outcome o;
  const auto again = verify::rank1_catalog_suite(verify::default_suite(), 1);
  if (again.to_json() != g_suite.to_json()) o.fail("suite reports differ between runs");

  const fs::path base = fs::temp_directory_path() / ("qsp-acceptance-" + std::to_string(std::random_device{}()));
  cache::RealizationCache c1((base / "a").string());
  cache::RealizationCache c2((base / "b").string());
  int entries = 0;
  for (const auto& c : eight_types()) {
    const auto lam = iqp::zero_class_generator(c.s, rd::derive_sets(c.s));
    const auto e1 = c1.build(c.s, lam);
    const auto e2 = c2.build(c.s, lam);
    ++entries;
    if (textio::read_file(c1.path_for(e1.key)) != textio::read_file(c2.path_for(e2.key)))
      o.fail(c.name + ": cache entries differ");
    if (!textio::same_realization(c1.get_or_build(c.s, lam).realization, e1.realization))
      o.fail(c.name + ": cached realization differs");
    const auto text = textio::render_datum(c.s);
    if (textio::render_datum(textio::parse_datum(text)) != text) o.fail(c.name + ": datum round trip");
    auto p = iqp::default_parameters(c.s, rd::derive_sets(c.s));
    const auto ptext = textio::render_parameters(p, c.s);
    if (textio::render_parameters(textio::parse_parameters(ptext, c.s), c.s) != ptext)
      o.fail(c.name + ": parameter round trip");
    const auto rtext = textio::render_realization(e1.realization, c.s);
    if (textio::render_realization(textio::parse_realization(rtext, c.s), c.s) != rtext)
      o.fail(c.name + ": realization round trip");
  }
  fs::remove_all(base);
  o.detail << (o.pass ? "" : "; ") << entries << " cache entries byte-identical, reports identical";
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"relation suite", criterion1},
      {"form and lattice properties", criterion2},
      {"braid certification", criterion3},
      {"parameter table", criterion4},
      {"catalog suite verdicts", criterion5},
      {"negative existence", criterion6},
      {"route agreement", criterion7},
      {"projection coherence", criterion8},
      {"V^i machinery", criterion9},
      {"determinism and serialization", criterion10},
  };
  int failed = 0;
  int k = 0;
  for (const auto& [name, run] : criteria) {
    ++k;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failed;
    std::cout << "criterion " << k << " " << (o.pass ? "PASS" : "FAIL") << "  " << name << ": " << o.detail.str()
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
