#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qsp/repmod.hpp"

using namespace qsp::repmod;
using qsp::linalg::SparseVector;
using qsp::qfield::LaurentPolynomial;
using qsp::rootdata::CartanDatum;
using qsp::rootdata::RankOneType;
using qsp::rootdata::SatakeDatum;
namespace rd = qsp::rootdata;

namespace {

SatakeDatum split(char letter, std::size_t n) {
  std::vector<std::size_t> tau(n);
  for (std::size_t i = 0; i < n; ++i) tau[i] = i;
  return rd::build_simply_connected(rd::cartan_of_type(letter, n), tau, std::vector<bool>(n, false));
}

RationalFunction q(int k) { return RationalFunction::q_power(k); }

ModuleVector random_vector(std::mt19937& rng, std::size_t dim) {
  std::uniform_int_distribution<int> c(-3, 3);
  std::uniform_int_distribution<int> e(-2, 2);
  ModuleVector v;
  for (std::size_t k = 0; k < dim; ++k) {
    RationalFunction x = RationalFunction(c(rng)) * q(e(rng));
    if (!x.is_zero()) v[k] = x;
  }
  return v;
}

struct Case {
  char letter;
  std::size_t n;
  rd::IntVector lambda;  // fundamental-weight coordinates
};

const Case kCases[] = {{'A', 1, {1}},       {'A', 1, {4}},    {'A', 2, {1, 0}},    {'A', 2, {1, 1}},
                       {'A', 2, {2, 1}},    {'A', 3, {0, 1, 0}}, {'B', 2, {1, 0}}, {'B', 2, {0, 1}},
                       {'B', 2, {1, 1}},    {'C', 3, {0, 1, 0}}, {'G', 2, {1, 0}}, {'D', 4, {0, 0, 0, 1}}};

}  // namespace

TEST_SUITE("repmod") {
  TEST_CASE("dimension and relations") {
    for (const auto& c : kCases) {
      CAPTURE(c.letter);
      CAPTURE(c.n);
      const auto s = split(c.letter, c.n);
      const auto m = build_irreducible(s.root, c.lambda);
      CHECK(qsp::qfield::Rational(static_cast<long>(m.dim())) ==
            oracle::dimension(s.cartan().gcm, s.cartan().d, c.lambda));
      const auto rel = verify_relations(m);
      CHECK_MESSAGE(rel.ok, rel.failure);
      CHECK(m.weights[0] == c.lambda);
    }
  }

  TEST_CASE("sl2 explicit action") {
    const auto s = split('A', 1);
    for (long n = 0; n <= 6; ++n) {
      const auto m = build_irreducible(s.root, {n});
      REQUIRE(m.dim() == static_cast<std::size_t>(n + 1));
      // v_k = F^(k) v: E v_k = [n-k+1] v_{k-1}
      ModuleVector v = m.highest_vector();
      for (long k = 1; k <= n; ++k) {
        ModuleVector next = act(m, Generator::FDiv(0, k), m.highest_vector());
        const ModuleVector up = act(m, Generator::E(0), next);
        ModuleVector prev = act(m, Generator::FDiv(0, k - 1), m.highest_vector());
        CHECK(up == qsp::linalg::scaled(prev, oracle::q_number(n - k + 1)));
        v = next;
      }
      CHECK(act(m, Generator::F(0), v).empty());
      // T v_λ = (-1)^n q^n F^(n) v_λ
      ModuleVector expect = qsp::linalg::scaled(act(m, Generator::FDiv(0, n), m.highest_vector()),
                                                (n % 2 ? RationalFunction(-1) : RationalFunction(1)) * q(n));
      CHECK(braid(m, 0, m.highest_vector()) == expect);
    }
  }

  TEST_CASE("weights and K action") {
    const auto s = split('B', 2);
    const auto m = build_irreducible(s.root, {1, 1});
    for (std::size_t k = 0; k < m.dim(); ++k) {
      for (std::size_t i = 0; i < 2; ++i) {
        rd::IntVector h = s.root.coroots[i];
        const auto kv = act(m, Generator::K(h), m.basis_vector(k));
        CHECK(kv == qsp::linalg::scaled(m.basis_vector(k), q(static_cast<int>(s.root.pair(h, m.weights[k])))));
      }
    }
  }

  TEST_CASE("contragredient form") {
    std::mt19937 rng(31);
    for (const auto& c : kCases) {
      const auto s = split(c.letter, c.n);
      const auto m = build_irreducible(s.root, c.lambda);
      CHECK(contragredient_form(m, m.highest_vector(), m.highest_vector()) == RationalFunction(1));
      for (int trial = 0; trial < 3; ++trial) {
        const auto u = random_vector(rng, m.dim());
        const auto v = random_vector(rng, m.dim());
        CHECK(contragredient_form(m, u, v) == contragredient_form(m, v, u));
        for (std::size_t i = 0; i < m.rank(); ++i) {
          CHECK(contragredient_form(m, m.e[i].apply(u), v) == contragredient_form(m, u, rho_e(m, i).apply(v)));
          CHECK(contragredient_form(m, m.f[i].apply(u), v) == contragredient_form(m, u, rho_f(m, i).apply(v)));
        }
      }
    }
  }

  TEST_CASE("crystal lattice") {
    for (const auto& c : kCases) {
      CAPTURE(c.letter);
      const auto s = split(c.letter, c.n);
      const auto m = build_irreducible(s.root, c.lambda);
      const auto L = build_crystal_lattice(m);
      CHECK(L.size() == m.dim());
      for (std::size_t i = 0; i < m.rank(); ++i) CHECK(kashiwara_e(m, i, m.highest_vector()).empty());
      for (std::size_t b = 0; b < L.size(); ++b)
        for (std::size_t i = 0; i < m.rank(); ++i) {
          const auto f = kashiwara_f(m, i, L.basis[b]);
          const auto e = kashiwara_e(m, i, L.basis[b]);
          CHECK(in_lattice(m, L, f));
          CHECK(in_lattice(m, L, e));
          if (!congruent_at_infinity(m, L, f, {})) CHECK(congruent_at_infinity(m, L, kashiwara_e(m, i, f), L.basis[b]));
        }
      const auto h = highest_at_infinity(m, L, m.highest_vector());
      CHECK(h.highest);
      CHECK(h.c == qsp::qfield::Rational(1));
      if (m.dim() > 1) CHECK(!highest_at_infinity(m, L, L.basis[1]).highest);
    }
  }

  TEST_CASE("string decomposition reassembles") {
    std::mt19937 rng(8);
    const auto s = split('A', 2);
    const auto m = build_irreducible(s.root, {2, 1});
    for (const auto& blk : m.blocks) {
      ModuleVector v;
      for (auto k : blk.indices) v[k] = RationalFunction(static_cast<long>(rng() % 5) - 2);
      for (std::size_t i = 0; i < 2; ++i) {
        const auto dec = string_decomposition(m, i, v);
        ModuleVector sum;
        for (const auto& [n, u] : dec.parts) {
          CHECK(m.e[i].apply(u).empty());
          qsp::linalg::add_scaled(sum, 1, act(m, Generator::FDiv(i, n), u));
        }
        CHECK(qsp::linalg::is_zero(qsp::linalg::difference(sum, v)));
      }
    }
  }

  TEST_CASE("braid relations and inverses") {
    const auto a2 = split('A', 2);
    for (const auto& lam : {rd::IntVector{1, 0}, rd::IntVector{1, 1}, rd::IntVector{2, 1}}) {
      const auto m = build_irreducible(a2.root, lam);
      const auto t1 = braid_matrix(m, 0);
      const auto t2 = braid_matrix(m, 1);
      CHECK(t1 * t2 * t1 == t2 * t1 * t2);
      CHECK(t1 * braid_inverse_matrix(m, 0) == qsp::linalg::SparseMatrix::identity(m.dim()));
      CHECK(braid_word_matrix(m, {0, 1, 0}) == braid_word_matrix(m, {1, 0, 1}));
    }
    const auto b2 = split('B', 2);
    const auto m = build_irreducible(b2.root, {1, 1});
    const auto t1 = braid_matrix(m, 0);
    const auto t2 = braid_matrix(m, 1);
    CHECK(t1 * t2 * t1 * t2 == t2 * t1 * t2 * t1);
    // T_i E_j T_i^{-1} = E_j when a_ij = 0
    const auto a1a1 = rd::build_simply_connected(rd::direct_sum(rd::cartan_of_type('A', 1), rd::cartan_of_type('A', 1)),
                                                 {0, 1}, {false, false});
    const auto mm = build_irreducible(a1a1.root, {1, 2});
    CHECK(conjugated_raising_matrix(mm, {0}, 1) == mm.e[1]);
    // T_i(E_i) = -F_i K_i
    const auto sl2 = build_irreducible(split('A', 1).root, {3});
    CHECK(conjugated_raising_matrix(sl2, {0}, 0) == (sl2.f[0] * k_node_matrix(sl2, 0, 1)).scaled(-1));
  }

  TEST_CASE("extremal vectors") {
    const auto a2 = split('A', 2);
    const auto m = build_irreducible(a2.root, {1, 1});
    const auto v = extremal_vector(m, {0, 1, 0});
    REQUIRE(m.weight_of(v));
    CHECK(*m.weight_of(v) == rd::IntVector{-1, -1});
    for (std::size_t i = 0; i < 2; ++i) CHECK(m.f[i].apply(v).empty());
  }

  TEST_CASE("tensor products satisfy the relations") {
    const auto a2 = split('A', 2);
    const auto v1 = build_irreducible(a2.root, {1, 0});
    const auto v2 = build_irreducible(a2.root, {0, 1});
    const auto t = tensor(v1, v2);
    CHECK(t.dim() == 9);
    CHECK(verify_relations(t).ok);
    const auto b2 = split('B', 2);
    const auto u = build_irreducible(b2.root, {0, 1});
    CHECK(verify_relations(tensor(u, u)).ok);
  }

  TEST_CASE("errors") {
    const auto a2 = split('A', 2);
    CHECK_THROWS_AS(build_irreducible(a2.root, {-1, 0}), NotDominant);
    CartanDatum aff;
    aff.labels = {"0", "1"};
    aff.gcm = {{2, -2}, {-2, 2}};
    aff.d = {1, 1};
    auto s = rd::build_simply_connected(aff, {0, 1}, {false, false});
    CHECK_THROWS_AS(build_irreducible(s.root, {1, 0}), std::domain_error);
    const auto m = build_irreducible(a2.root, {0, 0});
    CHECK(m.dim() == 1);
    CHECK(m.e[0].nonzeros() == 0);
  }

  TEST_CASE("relations on random dominant weights") {
    std::mt19937 rng(99);
    const char letters[] = {'A', 'B', 'C', 'G'};
    for (int trial = 0; trial < 8; ++trial) {
      const char l = letters[rng() % 4];
      const std::size_t n = l == 'A' ? 2 + rng() % 2 : (l == 'C' ? 3 : 2);
      const auto s = split(l, n);
      rd::IntVector lam(n, 0);
      std::size_t budget = 2;
      for (auto& x : lam) {
        x = rng() % (budget + 1);
        budget -= x;
      }
      CAPTURE(l);
      const auto dim = oracle::dimension(s.cartan().gcm, s.cartan().d, lam);
      if (dim > 80) continue;
      const auto m = build_irreducible(s.root, lam);
      CHECK(qsp::qfield::Rational(static_cast<long>(m.dim())) == dim);
      CHECK(verify_relations(m).ok);
      CHECK(build_crystal_lattice(m).size() == m.dim());
    }
  }
}
