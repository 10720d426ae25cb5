#pragma once

// Text formats: Satake datum files, parameter files and serialized
// realizations. All renderers are deterministic and parse(render(x)) == x.
//
// Datum file:
//
//   # comment
//   [nodes]     labels, whitespace separated
//   [gcm]       one row per node
//   [d]         symmetrizers
//   [bullet]    labels of I_• (may be empty)
//   [tau]       image of each node, in node order
//   [mode]      strict | generalized
//
// Optional lattice sections, all five or none (default: simply connected):
//   [pairing] rank_y rows of rank_x integers, [coroots] and [roots] one row
//   per node, [tau_y] and [tau_x] square integer matrices.
//
// Parameter file: [varsigma] and [kappa] with lines "label = value",
// optional [shifts] "label = integer" and [order] a list of labels.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qsp/iqp.hpp"
#include "qsp/repmod.hpp"
#include "qsp/rootdata.hpp"

namespace qsp::textio {

std::uint64_t fnv1a64(std::string_view text);
std::string hex64(std::uint64_t x);

class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

rootdata::SatakeDatum parse_datum(std::string_view text);
std::string render_datum(const rootdata::SatakeDatum& s);
bool same_datum(const rootdata::SatakeDatum& a, const rootdata::SatakeDatum& b);

iqp::ParameterSet parse_parameters(std::string_view text, const rootdata::SatakeDatum& s);
std::string render_parameters(const iqp::ParameterSet& p, const rootdata::SatakeDatum& s);
bool same_parameters(const iqp::ParameterSet& a, const iqp::ParameterSet& b);

// Weights written as "2,0,-1"; used for --lambda and --nu.
rootdata::IntVector parse_weight(std::string_view text, std::size_t rank);
std::string render_weight(const rootdata::IntVector& w);

inline constexpr const char* kRealizationFormat = "qsp-realization 1";

std::string render_realization(const repmod::Realization& m, const rootdata::SatakeDatum& s);
// Throws FormatError on malformed input or when the datum hash does not match.
repmod::Realization parse_realization(std::string_view text, const rootdata::SatakeDatum& s);
bool same_realization(const repmod::Realization& a, const repmod::Realization& b);

std::string read_file(const std::string& path);

}  // namespace qsp::textio
