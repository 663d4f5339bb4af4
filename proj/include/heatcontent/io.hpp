#pragma once

// CSV and JSON serialisation of samples, fits, epsilon tables and beta
// triples. Numbers are written with 17 significant digits so that parsing the
// text gives back the same doubles.

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "heatcontent/asymptotics.hpp"
#include "heatcontent/errors.hpp"
#include "heatcontent/heat_content.hpp"
#include "heatcontent/invariants.hpp"

namespace heatcontent::io {

using Json = nlohmann::ordered_json;
using Metadata = std::vector<std::pair<std::string, std::string>>;

// Malformed CSV input.
class FormatError : public Error {
 public:
  using Error::Error;
};

// %.16e
std::string format_double(double v);

// Exact inverse of format_double (and of any decimal double); FormatError on
// trailing garbage or an empty field.
double parse_double(const std::string& field);

// Layout:
//   # key=value      (zero or more metadata lines)
//   t,value,err
//   <t>,<value>,<err> (one row per sample)
void write_samples_csv(std::ostream& out, std::span<const QSample> samples, const Metadata& metadata = {});

struct SampleTable {
  Metadata metadata;
  std::vector<QSample> samples;

  // Value of the first metadata entry with this key, or `fallback`.
  std::string meta(const std::string& key, const std::string& fallback = "") const;
};

SampleTable read_samples_csv(std::istream& in);

Json to_json(std::span<const QSample> samples);
Json to_json(const FitResult& fit);
Json to_json(const EpsilonTable& tab);
Json to_json(const EpsilonSolve& solve);
Json to_json(const BetaTriple& beta);
Json to_json(const Comparison& cmp);

}  // namespace heatcontent::io
