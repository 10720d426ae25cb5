#include "qsp/textio.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace qsp::textio {

using rootdata::IntMatrix;
using rootdata::IntVector;
using rootdata::SatakeDatum;

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int k = 15; k >= 0; --k) {
    s[static_cast<std::size_t>(k)] = digits[x & 0xf];
    x >>= 4;
  }
  return s;
}

FormatError::FormatError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

namespace {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

struct Line {
  std::size_t number;
  std::string text;  // comment stripped
  std::vector<Token> tokens;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size()) break;
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    out.push_back({s.substr(start, i - start), start + 1});
  }
  return out;
}

std::vector<Line> split_lines(std::string_view text, bool strip_comments) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (strip_comments) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
    }
    auto tokens = tokenize(line);
    if (!tokens.empty()) out.push_back({number, line, std::move(tokens)});
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

long long to_integer(const Token& t, std::size_t line) {
  long long v = 0;
  const char* b = t.text.data();
  const char* e = b + t.text.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) throw FormatError("expected an integer, found '" + t.text + "'", line, t.column);
  return v;
}

struct Section {
  std::string name;
  std::size_t line;
  std::vector<Line> body;
};

std::vector<Section> sections_of(std::string_view text, const std::set<std::string>& known) {
  std::vector<Section> out;
  std::set<std::string> seen;
  for (auto& l : split_lines(text, true)) {
    const auto& first = l.tokens.front();
    if (first.text.front() == '[') {
      if (first.text.back() != ']' || l.tokens.size() != 1)
        throw FormatError("malformed section header", l.number, first.column);
      std::string name = first.text.substr(1, first.text.size() - 2);
      if (!known.count(name)) throw FormatError("unknown section [" + name + "]", l.number, first.column);
      if (!seen.insert(name).second) throw FormatError("duplicate section [" + name + "]", l.number, first.column);
      out.push_back({name, l.number, {}});
      continue;
    }
    if (out.empty()) throw FormatError("content before the first section header", l.number, first.column);
    out.back().body.push_back(std::move(l));
  }
  return out;
}

const Section* find_section(const std::vector<Section>& secs, const std::string& name) {
  for (const auto& s : secs)
    if (s.name == name) return &s;
  return nullptr;
}

IntMatrix integer_rows(const Section& sec, std::size_t rows, std::size_t cols) {
  if (sec.body.size() != rows)
    throw FormatError("[" + sec.name + "] needs " + std::to_string(rows) + " rows, found " +
                          std::to_string(sec.body.size()),
                      sec.line, 1);
  IntMatrix m;
  for (const auto& l : sec.body) {
    if (l.tokens.size() != cols)
      throw FormatError("expected " + std::to_string(cols) + " entries", l.number, l.tokens.front().column);
    IntVector row;
    for (const auto& t : l.tokens) row.push_back(to_integer(t, l.number));
    m.push_back(row);
  }
  return m;
}

std::vector<Token> flat_tokens(const Section& sec, std::vector<std::size_t>* lines) {
  std::vector<Token> out;
  for (const auto& l : sec.body)
    for (const auto& t : l.tokens) {
      out.push_back(t);
      if (lines) lines->push_back(l.number);
    }
  return out;
}

std::string row_text(const IntVector& row) {
  std::string s;
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (k) s += ' ';
    s += std::to_string(row[k]);
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Datum files

SatakeDatum parse_datum(std::string_view text) {
  static const std::set<std::string> known{"nodes", "gcm",     "d",     "bullet", "tau",  "mode",
                                           "pairing", "coroots", "roots", "tau_y",  "tau_x"};
  const auto secs = sections_of(text, known);
  auto require = [&](const std::string& name) -> const Section& {
    const Section* s = find_section(secs, name);
    if (!s) throw FormatError("missing section [" + name + "]", 1, 1);
    return *s;
  };

  SatakeDatum s;
  auto& c = s.root.cartan;
  for (const auto& t : flat_tokens(require("nodes"), nullptr)) {
    if (std::find(c.labels.begin(), c.labels.end(), t.text) != c.labels.end())
      throw FormatError("duplicate node label '" + t.text + "'", require("nodes").line, t.column);
    c.labels.push_back(t.text);
  }
  const std::size_t n = c.labels.size();
  if (n == 0) throw FormatError("no nodes", require("nodes").line, 1);
  auto index_of = [&](const Token& t, std::size_t line) {
    auto idx = c.index_of(t.text);
    if (!idx) throw FormatError("unknown node label '" + t.text + "'", line, t.column);
    return *idx;
  };

  c.gcm = integer_rows(require("gcm"), n, n);
  {
    const auto d = integer_rows(require("d"), 1, n);
    for (auto x : d[0]) c.d.push_back(static_cast<int>(x));
  }

  s.bullet.assign(n, false);
  if (const Section* b = find_section(secs, "bullet")) {
    std::vector<std::size_t> lines;
    auto toks = flat_tokens(*b, &lines);
    for (std::size_t k = 0; k < toks.size(); ++k) s.bullet[index_of(toks[k], lines[k])] = true;
  }

  {
    const Section& t = require("tau");
    std::vector<std::size_t> lines;
    auto toks = flat_tokens(t, &lines);
    if (toks.size() != n) throw FormatError("[tau] needs one image per node", t.line, 1);
    for (std::size_t k = 0; k < n; ++k) s.tau.push_back(index_of(toks[k], lines[k]));
  }

  s.mode = rootdata::Mode::Strict;
  if (const Section* m = find_section(secs, "mode")) {
    auto toks = flat_tokens(*m, nullptr);
    if (toks.size() != 1) throw FormatError("[mode] takes one word", m->line, 1);
    if (toks[0].text == "strict") {
      s.mode = rootdata::Mode::Strict;
    } else if (toks[0].text == "generalized") {
      s.mode = rootdata::Mode::Generalized;
    } else {
      throw FormatError("mode must be strict or generalized", m->body.front().number, toks[0].column);
    }
  }

  const char* lattice[] = {"pairing", "coroots", "roots", "tau_y", "tau_x"};
  std::size_t present = 0;
  for (auto name : lattice) present += find_section(secs, name) ? 1 : 0;
  if (present != 0 && present != 5)
    throw FormatError("lattice sections [pairing] [coroots] [roots] [tau_y] [tau_x] must appear together", 1, 1);
  if (present == 5) {
    const Section& p = require("pairing");
    if (p.body.empty()) throw FormatError("[pairing] is empty", p.line, 1);
    const std::size_t ny = p.body.size();
    const std::size_t nx = p.body.front().tokens.size();
    s.root.pairing = integer_rows(p, ny, nx);
    s.root.coroots = integer_rows(require("coroots"), n, ny);
    s.root.roots = integer_rows(require("roots"), n, nx);
    s.tau_y = integer_rows(require("tau_y"), ny, ny);
    s.tau_x = integer_rows(require("tau_x"), nx, nx);
  } else {
    // Simply connected: Y = Z^I with basis h_i, X dual, α_j = column j of the GCM.
    s.root.pairing = rootdata::identity_matrix(n);
    s.root.coroots = rootdata::identity_matrix(n);
    s.root.roots.assign(n, IntVector(n, 0));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) s.root.roots[j][i] = c.gcm[i][j];
    s.tau_y.assign(n, IntVector(n, 0));
    s.tau_x.assign(n, IntVector(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      s.tau_y[s.tau[i]][i] = 1;
      s.tau_x[s.tau[i]][i] = 1;
    }
  }
  return s;
}

std::string render_datum(const SatakeDatum& s) {
  std::ostringstream os;
  const auto& c = s.cartan();
  os << "[nodes]\n";
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << c.labels[i];
  os << "\n[gcm]\n";
  for (const auto& row : c.gcm) os << row_text(row) << '\n';
  os << "[d]\n";
  for (std::size_t i = 0; i < c.d.size(); ++i) os << (i ? " " : "") << c.d[i];
  os << "\n[bullet]\n";
  bool first = true;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (s.bullet[i]) {
      os << (first ? "" : " ") << c.labels[i];
      first = false;
    }
  if (!first) os << '\n';
  os << "[tau]\n";
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << c.labels[s.tau[i]];
  os << "\n[mode]\n" << (s.mode == rootdata::Mode::Strict ? "strict" : "generalized") << '\n';
  os << "[pairing]\n";
  for (const auto& row : s.root.pairing) os << row_text(row) << '\n';
  os << "[coroots]\n";
  for (const auto& row : s.root.coroots) os << row_text(row) << '\n';
  os << "[roots]\n";
  for (const auto& row : s.root.roots) os << row_text(row) << '\n';
  os << "[tau_y]\n";
  for (const auto& row : s.tau_y) os << row_text(row) << '\n';
  os << "[tau_x]\n";
  for (const auto& row : s.tau_x) os << row_text(row) << '\n';
  return os.str();
}

bool same_datum(const SatakeDatum& a, const SatakeDatum& b) {
  return a.cartan().labels == b.cartan().labels && a.cartan().gcm == b.cartan().gcm && a.cartan().d == b.cartan().d &&
         a.bullet == b.bullet && a.tau == b.tau && a.mode == b.mode && a.root.pairing == b.root.pairing &&
         a.root.coroots == b.root.coroots && a.root.roots == b.root.roots && a.tau_y == b.tau_y &&
         a.tau_x == b.tau_x;
}

// ---------------------------------------------------------------------------
// Parameter files

iqp::ParameterSet parse_parameters(std::string_view text, const SatakeDatum& s) {
  static const std::set<std::string> known{"varsigma", "kappa", "shifts", "order"};
  const auto secs = sections_of(text, known);
  const auto& c = s.cartan();
  iqp::ParameterSet p;
  auto node = [&](const Token& t, std::size_t line) {
    auto idx = c.index_of(t.text);
    if (!idx) throw FormatError("unknown node label '" + t.text + "'", line, t.column);
    return *idx;
  };
  for (const auto& sec : secs) {
    if (sec.name == "order") {
      std::vector<std::size_t> lines;
      auto toks = flat_tokens(sec, &lines);
      for (std::size_t k = 0; k < toks.size(); ++k) p.order.push_back(node(toks[k], lines[k]));
      continue;
    }
    for (const auto& l : sec.body) {
      auto eq = l.text.find('=');
      if (eq == std::string::npos || l.tokens.size() < 3 || l.tokens[1].text != "=")
        throw FormatError("expected 'label = value'", l.number, l.tokens.front().column);
      const std::size_t i = node(l.tokens[0], l.number);
      const std::string value = l.text.substr(eq + 1);
      if (sec.name == "shifts") {
        if (l.tokens.size() != 3) throw FormatError("shift must be one integer", l.number, l.tokens[2].column);
        if (!p.shifts.emplace(i, to_integer(l.tokens[2], l.number)).second)
          throw FormatError("duplicate entry", l.number, l.tokens[0].column);
        continue;
      }
      qfield::RationalFunction f;
      try {
        f = qfield::parse_rational_function(value);
      } catch (const std::exception& e) {
        throw FormatError(e.what(), l.number, l.tokens[2].column);
      }
      auto& target = sec.name == "varsigma" ? p.varsigma : p.kappa;
      if (!target.emplace(i, f).second) throw FormatError("duplicate entry", l.number, l.tokens[0].column);
    }
  }
  return p;
}

std::string render_parameters(const iqp::ParameterSet& p, const SatakeDatum& s) {
  const auto& labels = s.cartan().labels;
  std::ostringstream os;
  os << "[varsigma]\n";
  for (const auto& [i, x] : p.varsigma) os << labels[i] << " = " << x.to_string() << '\n';
  os << "[kappa]\n";
  for (const auto& [i, x] : p.kappa) os << labels[i] << " = " << x.to_string() << '\n';
  if (!p.shifts.empty()) {
    os << "[shifts]\n";
    for (const auto& [i, x] : p.shifts) os << labels[i] << " = " << x << '\n';
  }
  if (!p.order.empty()) {
    os << "[order]\n";
    for (std::size_t k = 0; k < p.order.size(); ++k) os << (k ? " " : "") << labels[p.order[k]];
    os << '\n';
  }
  return os.str();
}

bool same_parameters(const iqp::ParameterSet& a, const iqp::ParameterSet& b) {
  return a.varsigma == b.varsigma && a.kappa == b.kappa && a.shifts == b.shifts && a.order == b.order;
}

IntVector parse_weight(std::string_view text, std::size_t rank) {
  IntVector out;
  std::size_t pos = 0;
  std::string s(text);
  while (true) {
    std::size_t end = s.find(',', pos);
    std::string part = s.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    auto toks = tokenize(part);
    if (toks.size() != 1) throw FormatError("malformed weight '" + s + "'", 1, pos + 1);
    out.push_back(to_integer(toks[0], 1));
    if (end == std::string::npos) break;
    pos = end + 1;
  }
  if (out.size() != rank)
    throw FormatError("weight needs " + std::to_string(rank) + " coordinates, found " + std::to_string(out.size()), 1,
                      1);
  return out;
}

std::string render_weight(const IntVector& w) {
  std::string s;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(w[k]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Realizations

std::string render_realization(const repmod::Realization& m, const SatakeDatum& s) {
  std::ostringstream os;
  os << kRealizationFormat << '\n';
  os << "datum " << hex64(fnv1a64(s.canonical_text())) << '\n';
  os << "lambda";
  for (auto x : m.highest_weight) os << ' ' << x;
  os << "\nrank " << m.rank() << "\ndim " << m.dim() << '\n';
  for (std::size_t k = 0; k < m.dim(); ++k) os << "weight " << k << ' ' << row_text(m.weights[k]) << '\n';
  for (std::size_t k = 0; k < m.dim(); ++k) os << "provenance " << k << ' ' << m.provenance[k] << '\n';
  for (std::size_t b = 0; b < m.gram.size(); ++b)
    for (std::size_t i = 0; i < m.gram[b].rows(); ++i)
      for (std::size_t j = 0; j < m.gram[b].cols(); ++j)
        if (!m.gram[b](i, j).is_zero()) os << "gram " << b << ' ' << i << ' ' << j << ' ' << m.gram[b](i, j).to_string() << '\n';
  auto dump = [&](const char* tag, const std::vector<linalg::SparseMatrix>& mats) {
    for (std::size_t i = 0; i < mats.size(); ++i)
      for (std::size_t col = 0; col < mats[i].cols(); ++col)
        for (const auto& [row, x] : mats[i].column(col))
          os << tag << ' ' << i << ' ' << row << ' ' << col << ' ' << x.to_string() << '\n';
  };
  dump("E", m.e);
  dump("F", m.f);
  os << "end\n";
  return os.str();
}

repmod::Realization parse_realization(std::string_view text, const SatakeDatum& s) {
  const auto lines = split_lines(text, false);
  std::size_t at = 0;
  auto next = [&]() -> const Line& {
    if (at >= lines.size()) throw FormatError("unexpected end of realization", lines.empty() ? 1 : lines.back().number, 1);
    return lines[at++];
  };
  auto expect_key = [&](const Line& l, const std::string& key) {
    if (l.tokens.front().text != key) throw FormatError("expected '" + key + "'", l.number, l.tokens.front().column);
  };
  auto count = [](const Token& t, std::size_t line) {
    long long v = to_integer(t, line);
    if (v < 0) throw FormatError("expected a nonnegative integer", line, t.column);
    return static_cast<std::size_t>(v);
  };

  {
    const Line& l = next();
    if (l.text != kRealizationFormat) throw FormatError("not a serialized realization", l.number, 1);
  }
  {
    const Line& l = next();
    expect_key(l, "datum");
    if (l.tokens.size() != 2 || l.tokens[1].text != hex64(fnv1a64(s.canonical_text())))
      throw FormatError("realization belongs to a different datum", l.number, l.tokens.back().column);
  }
  repmod::Realization m;
  m.datum = s.root;
  {
    const Line& l = next();
    expect_key(l, "lambda");
    for (std::size_t k = 1; k < l.tokens.size(); ++k) m.highest_weight.push_back(to_integer(l.tokens[k], l.number));
  }
  std::size_t rank = 0;
  std::size_t dim = 0;
  {
    const Line& l = next();
    expect_key(l, "rank");
    rank = count(l.tokens.at(1), l.number);
    if (rank != s.size()) throw FormatError("rank does not match the datum", l.number, l.tokens[1].column);
  }
  {
    const Line& l = next();
    expect_key(l, "dim");
    dim = count(l.tokens.at(1), l.number);
  }
  m.weights.resize(dim);
  m.provenance.resize(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const Line& l = next();
    expect_key(l, "weight");
    if (l.tokens.size() != 2 + s.root.rank_x() || count(l.tokens[1], l.number) != k)
      throw FormatError("malformed weight line", l.number, 1);
    for (std::size_t a = 2; a < l.tokens.size(); ++a) m.weights[k].push_back(to_integer(l.tokens[a], l.number));
  }
  for (std::size_t k = 0; k < dim; ++k) {
    const Line& l = next();
    expect_key(l, "provenance");
    if (l.tokens.size() < 3 || count(l.tokens[1], l.number) != k)
      throw FormatError("malformed provenance line", l.number, 1);
    m.provenance[k] = l.text.substr(l.tokens[2].column - 1);
  }
  repmod::rebuild_blocks(m);
  if (!m.highest_weight.empty()) {
    for (const auto& blk : m.blocks) m.gram.emplace_back(blk.indices.size(), blk.indices.size());
  }
  m.e.assign(rank, linalg::SparseMatrix(dim, dim));
  m.f.assign(rank, linalg::SparseMatrix(dim, dim));
  auto value_of = [](const Line& l, std::size_t token) {
    try {
      return qfield::parse_rational_function(l.text.substr(l.tokens[token].column - 1));
    } catch (const std::exception& e) {
      throw FormatError(e.what(), l.number, l.tokens[token].column);
    }
  };
  while (true) {
    const Line& l = next();
    const std::string& key = l.tokens.front().text;
    if (key == "end") break;
    if (l.tokens.size() < 5) throw FormatError("malformed entry", l.number, 1);
    const std::size_t a = count(l.tokens[1], l.number);
    const std::size_t i = count(l.tokens[2], l.number);
    const std::size_t j = count(l.tokens[3], l.number);
    if (key == "gram") {
      if (a >= m.gram.size() || i >= m.gram[a].rows() || j >= m.gram[a].cols())
        throw FormatError("gram entry out of range", l.number, l.tokens[1].column);
      m.gram[a](i, j) = value_of(l, 4);
    } else if (key == "E" || key == "F") {
      if (a >= rank || i >= dim || j >= dim) throw FormatError("matrix entry out of range", l.number, l.tokens[1].column);
      (key == "E" ? m.e : m.f)[a].add(i, j, value_of(l, 4));
    } else {
      throw FormatError("unknown entry '" + key + "'", l.number, l.tokens.front().column);
    }
  }
  if (at != lines.size()) throw FormatError("trailing content after 'end'", lines[at].number, 1);
  return m;
}

bool same_realization(const repmod::Realization& a, const repmod::Realization& b) {
  return a.highest_weight == b.highest_weight && a.weights == b.weights && a.provenance == b.provenance &&
         a.e == b.e && a.f == b.f && a.gram == b.gram && a.datum.roots == b.datum.roots &&
         a.datum.coroots == b.datum.coroots && a.datum.pairing == b.datum.pairing &&
         a.datum.cartan.gcm == b.datum.cartan.gcm;
}

}  // namespace qsp::textio
