#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "qsp/cache.hpp"
#include "qsp/textio.hpp"

using namespace qsp::textio;
namespace rd = qsp::rootdata;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string& name) { return read_file(std::string(QSP_DATA_DIR) + "/" + name); }

fs::path scratch_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("qsp-test-" + tag + "-" + std::to_string(std::random_device{}()));
  fs::remove_all(p);
  return p;
}

const std::pair<rd::RankOneType, std::size_t> kCatalog[] = {
    {rd::RankOneType::AI1, 1}, {rd::RankOneType::AII3, 3}, {rd::RankOneType::AIII2, 2}, {rd::RankOneType::AIV, 3},
    {rd::RankOneType::BII, 3}, {rd::RankOneType::CII, 3},  {rd::RankOneType::DII, 4},   {rd::RankOneType::FII4, 4}};

}  // namespace

TEST_SUITE("textio") {
  TEST_CASE("datum files") {
    const auto s = parse_datum(data("ai1.datum"));
    CHECK(same_datum(s, rd::rank_one_datum(rd::RankOneType::AI1)));
    const auto aii = parse_datum(data("aii3.datum"));
    CHECK(same_datum(aii, rd::rank_one_datum(rd::RankOneType::AII3, 3)));
    const auto bad = parse_datum(data("broken_symmetrizer.datum"));
    CHECK(rd::validate(bad).mentions("symmetrizable"));
    for (const auto& [t, n] : kCatalog) {
      const auto sd = rd::rank_one_datum(t, n);
      const std::string text = render_datum(sd);
      const auto back = parse_datum(text);
      CHECK(same_datum(back, sd));
      CHECK(render_datum(back) == text);
      CHECK(back.canonical_text() == sd.canonical_text());
    }
  }

  TEST_CASE("datum parse errors carry positions") {
    try {
      parse_datum(data("bad_syntax.datum"));
      FAIL("expected a parse error");
    } catch (const FormatError& e) {
      CHECK(e.line() == 5);
      CHECK(e.column() == 4);
    }
    CHECK_THROWS_AS(parse_datum("[nodes]\n1\n[gcm]\n2\n[d]\n1\n"), FormatError);           // no tau
    CHECK_THROWS_AS(parse_datum("1\n[nodes]\n1\n"), FormatError);                           // text before header
    CHECK_THROWS_AS(parse_datum("[nodes]\n1\n[colour]\nred\n"), FormatError);              // unknown section
    CHECK_THROWS_AS(parse_datum("[nodes]\n1 1\n[gcm]\n2 0\n0 2\n[d]\n1 1\n[tau]\n1 1\n"), FormatError);
    CHECK_THROWS_AS(parse_datum("[nodes]\n1\n[gcm]\n2\n[d]\n1\n[tau]\n2\n"), FormatError);  // unknown label
    CHECK_THROWS_AS(parse_datum("[nodes]\n1\n[gcm]\n2\n[d]\n1\n[tau]\n1\n[pairing]\n1\n"), FormatError);
  }

  TEST_CASE("random datum round trips") {
    std::mt19937 rng(77);
    std::uniform_int_distribution<int> e(-3, 3);
    for (int trial = 0; trial < 40; ++trial) {
      rd::SatakeDatum s;
      const std::size_t n = 1 + rng() % 4;
      for (std::size_t i = 0; i < n; ++i) s.root.cartan.labels.push_back("n" + std::to_string(i * 7 + rng() % 5));
      std::sort(s.root.cartan.labels.begin(), s.root.cartan.labels.end());
      s.root.cartan.labels.erase(std::unique(s.root.cartan.labels.begin(), s.root.cartan.labels.end()),
                                 s.root.cartan.labels.end());
      const std::size_t m = s.root.cartan.labels.size();
      s.root.cartan.gcm.assign(m, rd::IntVector(m));
      for (auto& row : s.root.cartan.gcm)
        for (auto& x : row) x = e(rng);
      for (std::size_t i = 0; i < m; ++i) s.root.cartan.d.push_back(1 + rng() % 3);
      for (std::size_t i = 0; i < m; ++i) s.bullet.push_back(rng() % 2);
      for (std::size_t i = 0; i < m; ++i) s.tau.push_back(rng() % m);
      s.mode = rng() % 2 ? rd::Mode::Strict : rd::Mode::Generalized;
      const std::size_t nx = 1 + rng() % 3;
      s.root.pairing.assign(nx + 1, rd::IntVector(nx));
      for (auto& row : s.root.pairing)
        for (auto& x : row) x = e(rng);
      s.root.coroots.assign(m, rd::IntVector(nx + 1));
      for (auto& row : s.root.coroots)
        for (auto& x : row) x = e(rng);
      s.root.roots.assign(m, rd::IntVector(nx));
      for (auto& row : s.root.roots)
        for (auto& x : row) x = e(rng);
      s.tau_y.assign(nx + 1, rd::IntVector(nx + 1));
      for (auto& row : s.tau_y)
        for (auto& x : row) x = e(rng);
      s.tau_x.assign(nx, rd::IntVector(nx));
      for (auto& row : s.tau_x)
        for (auto& x : row) x = e(rng);
      const auto text = render_datum(s);
      CHECK(same_datum(parse_datum(text), s));
      CHECK(render_datum(parse_datum(text)) == text);
    }
  }

  TEST_CASE("parameter files") {
    const auto s = rd::rank_one_datum(rd::RankOneType::AI1);
    const auto p = parse_parameters(data("ai1_q.params"), s);
    CHECK(p.varsigma.at(0) == qsp::qfield::RationalFunction::q_power(1));
    CHECK(p.kappa.at(0).is_zero());
    const auto f = parse_parameters(data("ai1_fraction.params"), s);
    const bool integral = f.varsigma.at(0).is_laurent() && f.varsigma.at(0).numerator().has_integer_coefficients();
    CHECK(!integral);
    for (const auto& [t, n] : kCatalog) {
      const auto sd = rd::rank_one_datum(t, n);
      auto pd = qsp::iqp::default_parameters(sd, rd::derive_sets(sd));
      pd.provenance.clear();
      const std::string text = render_parameters(pd, sd);
      const auto back = parse_parameters(text, sd);
      CHECK(same_parameters(back, pd));
      CHECK(render_parameters(back, sd) == text);
    }
    qsp::iqp::ParameterSet shifted;
    shifted.varsigma[0] = qsp::qfield::RationalFunction::q_power(-1);
    shifted.kappa[0] = qsp::qfield::RationalFunction::q_power(1) + qsp::qfield::RationalFunction::q_power(-1);
    shifted.shifts[0] = 2;
    shifted.order = {0};
    CHECK(same_parameters(parse_parameters(render_parameters(shifted, s), s), shifted));
    CHECK_THROWS_AS(parse_parameters("[varsigma]\n1 q\n", s), FormatError);
    CHECK_THROWS_AS(parse_parameters("[varsigma]\n7 = q\n", s), FormatError);
    CHECK_THROWS_AS(parse_parameters("[varsigma]\n1 = q^\n", s), FormatError);
    CHECK_THROWS_AS(parse_parameters("[varsigma]\n1 = q\n1 = q\n", s), FormatError);
  }

  TEST_CASE("weights") {
    CHECK(parse_weight("2,0,-1", 3) == rd::IntVector{2, 0, -1});
    CHECK(parse_weight(" 4 ", 1) == rd::IntVector{4});
    CHECK(render_weight({2, 0, -1}) == "2,0,-1");
    CHECK_THROWS_AS(parse_weight("1,2", 3), FormatError);
    CHECK_THROWS_AS(parse_weight("1,,2", 3), FormatError);
    CHECK_THROWS_AS(parse_weight("1,x,2", 3), FormatError);
  }

  TEST_CASE("realization round trip") {
    for (const auto& [t, n] : kCatalog) {
      const auto s = rd::rank_one_datum(t, n);
      const auto lam = qsp::iqp::zero_class_generator(s, rd::derive_sets(s));
      if (t == rd::RankOneType::FII4) continue;
      const auto m = qsp::repmod::build_irreducible(s.root, lam);
      const auto text = render_realization(m, s);
      const auto back = parse_realization(text, s);
      CHECK(same_realization(back, m));
      CHECK(render_realization(back, s) == text);
      CHECK(qsp::repmod::verify_relations(back).ok);
    }
    const auto s = rd::rank_one_datum(rd::RankOneType::AI1);
    const auto m = qsp::repmod::build_irreducible(s.root, {2});
    auto text = render_realization(m, s);
    CHECK_THROWS_AS(parse_realization(text, rd::rank_one_datum(rd::RankOneType::AIII2, 2)), FormatError);
    CHECK_THROWS_AS(parse_realization(text.substr(0, text.size() - 4), s), FormatError);
    CHECK_THROWS_AS(parse_realization(text + "extra\n", s), FormatError);
  }

  TEST_CASE("cache") {
    const auto dir = scratch_dir("cache");
    qsp::cache::RealizationCache c(dir.string());
    const auto s = rd::rank_one_datum(rd::RankOneType::AII3, 3);
    const rd::IntVector lam{0, 1, 0};
    CHECK(!c.inspect(s, lam).present);
    auto e1 = c.get_or_build(s, lam);
    CHECK(!e1.from_cache);
    const auto bytes1 = read_file(c.path_for(e1.key));
    auto e2 = c.get_or_build(s, lam);
    CHECK(e2.from_cache);
    CHECK(same_realization(e1.realization, e2.realization));
    auto i1 = c.inspect(s, lam);
    CHECK(i1.intact);
    CHECK(i1.checksum == e1.checksum);
    CHECK(i1.dim == 6);
    c.build(s, lam);
    CHECK(read_file(c.path_for(e1.key)) == bytes1);
    // keys separate weights and data
    CHECK(c.key(s, lam) != c.key(s, {0, 2, 0}));
    CHECK(c.key(s, lam) != c.key(rd::rank_one_datum(rd::RankOneType::AIV, 3), lam));
    // corruption is detected and repaired
    {
      std::string broken = bytes1;
      broken[broken.size() / 2] = broken[broken.size() / 2] == '1' ? '2' : '1';
      std::ofstream(c.path_for(e1.key), std::ios::binary | std::ios::trunc) << broken;
    }
    CHECK(!c.inspect(s, lam).intact);
    auto e3 = c.get_or_build(s, lam);
    CHECK(!e3.from_cache);
    CHECK(e3.warnings.size() == 1);
    CHECK(read_file(c.path_for(e1.key)) == bytes1);
    CHECK(c.purge() == 1);
    CHECK(!c.inspect(s, lam).present);
    fs::remove_all(dir);
  }

  TEST_CASE("hash helpers") {
    CHECK(fnv1a64("") == 14695981039346656037ULL);
    CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
    CHECK(hex64(0) == "0000000000000000");
  }
}
