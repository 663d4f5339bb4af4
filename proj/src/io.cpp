#include "heatcontent/io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>

namespace heatcontent::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

const char* origin_name(BasisTerm::Origin o) {
  switch (o) {
    case BasisTerm::Origin::Boundary: return "boundary";
    case BasisTerm::Origin::Interior: return "interior";
    case BasisTerm::Origin::Log: return "log";
    case BasisTerm::Origin::Manual: return "manual";
  }
  return "manual";
}

Json alpha_json(const AlphaPair& ap) { return Json{{"alpha1", ap.alpha1}, {"alpha2", ap.alpha2}}; }

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

double parse_double(const std::string& field) {
  const std::string f = trim(field);
  if (f.empty()) throw FormatError("empty numeric field");
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc() || ptr != f.data() + f.size()) throw FormatError("not a number: '" + f + "'");
  return v;
}

void write_samples_csv(std::ostream& out, std::span<const QSample> samples, const Metadata& metadata) {
  for (const auto& [k, v] : metadata) out << "# " << k << '=' << v << '\n';
  out << "t,value,err\n";
  for (const auto& s : samples) out << format_double(s.t) << ',' << format_double(s.value) << ',' << format_double(s.err) << '\n';
}

std::string SampleTable::meta(const std::string& key, const std::string& fallback) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return v;
  return fallback;
}

SampleTable read_samples_csv(std::istream& in) {
  SampleTable tab;
  std::string line;
  bool header = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string l = trim(line);
    if (l.empty()) continue;
    if (l[0] == '#') {
      const std::string body = trim(l.substr(1));
      const auto eq = body.find('=');
      if (eq != std::string::npos) tab.metadata.emplace_back(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
      continue;
    }
    const auto fields = split(l, ',');
    if (!header) {
      if (fields.size() < 2 || fields[0] != "t" || fields[1] != "value" || (fields.size() == 3 && fields[2] != "err") ||
          fields.size() > 3)
        throw FormatError("line " + std::to_string(lineno) + ": expected header 't,value,err'");
      header = true;
      continue;
    }
    if (fields.size() != 2 && fields.size() != 3)
      throw FormatError("line " + std::to_string(lineno) + ": expected 2 or 3 fields");
    try {
      QSample s;
      s.t = parse_double(fields[0]);
      s.value = parse_double(fields[1]);
      if (fields.size() == 3) s.err = parse_double(fields[2]);
      tab.samples.push_back(s);
    } catch (const FormatError& e) {
      throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!header) throw FormatError("missing header 't,value,err'");
  return tab;
}

Json to_json(std::span<const QSample> samples) {
  Json arr = Json::array();
  for (const auto& s : samples) arr.push_back({{"t", s.t}, {"value", s.value}, {"err", s.err}});
  return arr;
}

Json to_json(const FitResult& fit) {
  Json terms = Json::array();
  for (std::size_t i = 0; i < fit.terms.size(); ++i) {
    const auto& b = fit.terms[i];
    terms.push_back({{"label", b.label()},
                     {"exponent", b.exponent},
                     {"log", b.log},
                     {"origin", origin_name(b.origin)},
                     {"index", b.index},
                     {"coefficient", fit.coefficients[i]},
                     {"std_error", fit.std_errors[i]}});
  }
  return Json{{"terms", terms},
              {"residual_norm", fit.residual_norm},
              {"relative_residual", fit.relative_residual},
              {"condition_estimate", fit.condition_estimate},
              {"ill_conditioned", fit.ill_conditioned},
              {"samples", fit.samples}};
}

Json to_json(const EpsilonTable& tab) {
  Json eps = Json::array();
  for (double e : tab.eps) eps.push_back(e);
  return Json{{"alpha", alpha_json(tab.ap)}, {"eps", eps}};
}

Json to_json(const EpsilonSolve& solve) {
  Json rel = Json::array();
  for (const auto& r : solve.residuals) rel.push_back({{"name", r.name}, {"residual", r.residual}});
  return Json{{"table", to_json(solve.table)},
              {"residuals", rel},
              {"max_residual", solve.max_residual},
              {"rank", solve.rank},
              {"unknowns", solve.unknowns},
              {"rank_deficient", solve.rank_deficient},
              {"residual_flagged", solve.residual_flagged}};
}

Json to_json(const BetaTriple& beta) {
  Json rows = Json::array();
  for (int j = 0; j < 3; ++j) rows.push_back({{"j", j}, {"exponent", beta.exponent(j)}, {"value", beta[j]}});
  return Json{{"s", beta.s}, {"beta", rows}};
}

Json to_json(const Comparison& cmp) {
  Json rows = Json::array();
  for (const auto& r : cmp.rows)
    rows.push_back({{"name", r.predicted.name},
                    {"exponent", r.predicted.exponent},
                    {"log", r.predicted.log},
                    {"predicted", r.predicted.value},
                    {"fitted", r.fitted},
                    {"std_error", r.std_error},
                    {"error", r.rel_error},
                    {"error_kind", r.predicted.absolute || r.predicted.value == 0.0 ? "absolute" : "relative"},
                    {"tolerance", r.predicted.tolerance},
                    {"pass", r.pass}});
  return Json{{"rows", rows}, {"pass", cmp.pass}};
}

}  // namespace heatcontent::io
