#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "heatcontent/asymptotics.hpp"
#include "heatcontent/errors.hpp"
#include "heatcontent/heat_content.hpp"
#include "heatcontent/invariants.hpp"
#include "heatcontent/io.hpp"
#include "heatcontent/special_fns.hpp"
#include "heatcontent/verify.hpp"

namespace heatcontent::cli {

namespace {

constexpr const char* kFooter = R"(CSV output (ball-q, interval-q; input of fit):
  '# key=value' metadata lines (command, alpha1, alpha2, radius, ...), then
  the header 't,value,err' and one row per time:
    t      time
    value  heat content Q(t)
    err    quadrature error estimate for value
  Numbers are written as %.16e and parse back to the same doubles.
JSON output (fit, predict, verify-epsilon, and --format json) uses the same
numbers. Options may be given in a --config file of key=value lines; options
of a subcommand are keyed '<subcommand>.<option>', e.g. ball-q.radius=2.
Environment: HC_THREADS caps the worker count when --threads is not given
(0 or unset = all cores).
Exit status: 0 success, 1 verification or numerical failure, 2 usage error.)";

struct RunConfig {
  std::optional<double> a1, a2;
  double radius = 1.0;
  double eps_in = 0.1, eps_out = 0.15;
  double tmin = 1e-4, tmax = 1e-2;
  int pts = 20;
  double tol = 0.0, rel_tol = kDefaultRelTol;
  std::string output;
  std::string format = "csv";
  std::string input;
  std::string tmpl = "auto";
  int J = 2, N = 2;
  std::string geometry = "ball";
  std::string suite = "all";
  int threads = -1;
};

// Shortest text that parses back to v.
std::string shortest(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

AlphaPair require_alpha(const RunConfig& cfg) {
  if (!cfg.a1 || !cfg.a2) throw DomainError("--a1 and --a2 are required");
  const AlphaPair ap{*cfg.a1, *cfg.a2};
  require_admissible(ap);
  return ap;
}

void require_grid(const RunConfig& cfg) {
  if (!(cfg.tmin > 0.0 && cfg.tmax > cfg.tmin) || cfg.pts < 2)
    throw DomainError("need 0 < tmin < tmax and pts >= 2");
}

void write_json(std::ostream& out, const io::Json& j) { out << j.dump(2) << '\n'; }

void emit_samples(std::ostream& out, const RunConfig& cfg, const std::vector<QSample>& samples,
                  const io::Metadata& meta) {
  if (cfg.format == "json") {
    io::Json j = io::Json::object();
    for (const auto& [k, v] : meta) j["metadata"][k] = v;
    j["samples"] = io::to_json(samples);
    write_json(out, j);
  } else {
    io::write_samples_csv(out, samples, meta);
  }
}

int cmd_c_coef(const RunConfig& cfg, std::ostream& out) {
  const double c = c_coef(require_alpha(cfg));
  if (cfg.format == "json")
    write_json(out, io::Json{{"c", c}});
  else
    out << io::format_double(c) << '\n';
  return kExitOk;
}

int cmd_ball_q(const RunConfig& cfg, std::ostream& out) {
  const AlphaPair ap = require_alpha(cfg);
  require_grid(cfg);
  if (!(cfg.radius > 0.0)) throw DomainError("--radius must be positive");
  QSpec spec;
  spec.kind = QSpec::Kind::Ball;
  spec.alpha = ap;
  spec.a = cfg.radius;
  spec.tol = cfg.tol;
  spec.rel_tol = cfg.rel_tol;
  const auto samples = q_grid(spec, log_grid(cfg.tmin, cfg.tmax, cfg.pts), cfg.threads);
  emit_samples(out, cfg, samples,
               {{"command", "ball-q"},
                {"alpha1", shortest(ap.alpha1)},
                {"alpha2", shortest(ap.alpha2)},
                {"radius", shortest(cfg.radius)},
                {"rel_tol", shortest(cfg.rel_tol)}});
  return kExitOk;
}

int cmd_interval_q(const RunConfig& cfg, std::ostream& out) {
  const AlphaPair ap = require_alpha(cfg);
  require_grid(cfg);
  QSpec spec;
  spec.kind = QSpec::Kind::Interval;
  spec.alpha = ap;
  spec.a = cfg.radius;
  spec.chi1 = spec.chi2 = bump_cutoff(cfg.eps_in, cfg.eps_out);
  spec.tol = cfg.tol;
  spec.rel_tol = cfg.rel_tol;
  // Validates the cutoffs against the interval before fanning out.
  evaluate(spec, cfg.tmax);
  const auto samples = q_grid(spec, log_grid(cfg.tmin, cfg.tmax, cfg.pts), cfg.threads);
  emit_samples(out, cfg, samples,
               {{"command", "interval-q"},
                {"alpha1", shortest(ap.alpha1)},
                {"alpha2", shortest(ap.alpha2)},
                {"radius", shortest(cfg.radius)},
                {"eps_in", shortest(cfg.eps_in)},
                {"eps_out", shortest(cfg.eps_out)},
                {"rel_tol", shortest(cfg.rel_tol)}});
  return kExitOk;
}

std::optional<double> meta_number(const io::SampleTable& tab, const std::string& key) {
  const auto v = tab.meta(key);
  if (v.empty()) return std::nullopt;
  return io::parse_double(v);
}

double meta_required(const io::SampleTable& tab, const std::string& key) {
  const auto v = meta_number(tab, key);
  if (!v) throw io::FormatError("input metadata lacks '" + key + "'");
  return *v;
}

// Predictions whose column is present in the fit.
std::vector<Prediction> available(const FitResult& fit, std::vector<Prediction> pred) {
  std::vector<Prediction> keep;
  for (auto& p : pred) {
    try {
      fit.column(p.exponent, p.log);
      keep.push_back(std::move(p));
    } catch (const DomainError&) {
    }
  }
  return keep;
}

int cmd_fit(const RunConfig& cfg, std::ostream& out) {
  io::SampleTable tab;
  if (cfg.input == "-") {
    tab = io::read_samples_csv(std::cin);
  } else {
    std::ifstream in(cfg.input);
    if (!in) throw DomainError("cannot open input '" + cfg.input + "'");
    tab = io::read_samples_csv(in);
  }
  const std::string source = tab.meta("command");
  io::Json j = io::Json::object();
  j["input"] = cfg.input;
  j["template"] = cfg.tmpl;
  if (cfg.tmpl == "log") {
    const auto tmpl = build_log_template(cfg.N);
    const auto fit = fit_series(tab.samples, tmpl);
    j["N"] = cfg.N;
    j["fit"] = io::to_json(fit);
    if (source == "interval-q") {
      const double a1 = meta_required(tab, "alpha1");
      const double radius = meta_required(tab, "radius");
      const auto chi = bump_cutoff(meta_required(tab, "eps_in"), meta_required(tab, "eps_out"));
      const double ci = chi_integral(chi, chi, radius);
      j["comparison"] = io::to_json(compare(fit, log_case_predictions(a1, chi.eps_in, ci, 1e-3, 5e-3)));
      j["comparison_dq_over_q"] =
          io::to_json(compare(fit, log_case_predictions(a1, chi.eps_in, ci, 1e-3, 5e-3, QMeasure::Angular)));
    }
    write_json(out, j);
    return kExitOk;
  }
  AlphaPair ap;
  if (cfg.a1 && cfg.a2) {
    ap = {*cfg.a1, *cfg.a2};
  } else {
    const auto m1 = meta_number(tab, "alpha1"), m2 = meta_number(tab, "alpha2");
    if (!m1 || !m2) throw DomainError("template auto needs --a1/--a2 or alpha metadata in the input");
    ap = {*m1, *m2};
  }
  const auto tmpl = build_template(ap, cfg.J, cfg.N);
  const auto fit = fit_series(tab.samples, tmpl);
  j["alpha"] = {{"alpha1", ap.alpha1}, {"alpha2", ap.alpha2}};
  j["J"] = cfg.J;
  j["N"] = cfg.N;
  j["fit"] = io::to_json(fit);
  if (source == "ball-q") {
    const double radius = meta_number(tab, "radius").value_or(1.0);
    j["comparison"] = io::to_json(compare(fit, available(fit, ball_predictions(ap, radius, {1e-3, 1e-2, 5e-2}, 1e-2))));
  }
  write_json(out, j);
  return kExitOk;
}

int cmd_predict(const RunConfig& cfg, std::ostream& out) {
  const AlphaPair ap = require_alpha(cfg);
  const auto tab = epsilon_table(ap);
  io::Json j = io::Json::object();
  j["geometry"] = cfg.geometry;
  j["alpha"] = {{"alpha1", ap.alpha1}, {"alpha2", ap.alpha2}};
  if (cfg.geometry == "ball") {
    if (!(cfg.radius > 0.0)) throw DomainError("--radius must be positive");
    j["radius"] = cfg.radius;
    j["epsilon"] = io::to_json(tab);
    j["beta"] = io::to_json(beta_boundary(ball_geometry(cfg.radius), tab));
    const auto b = ball_b_coeffs(ap);
    j["ball_constants"] = {{"b0", b.b0 * std::pow(cfg.radius, b.radius_power(0))},
                           {"b2", b.b2 * std::pow(cfg.radius, b.radius_power(2))}};
  } else if (cfg.geometry == "interval") {
    j["epsilon"] = io::to_json(tab);
    j["beta"] = io::to_json(beta_boundary(interval_geometry(), tab));
  } else {
    throw DomainError("unknown geometry '" + cfg.geometry + "'");
  }
  write_json(out, j);
  return kExitOk;
}

int cmd_verify_epsilon(const RunConfig& cfg, std::ostream& out) {
  const AlphaPair ap = require_alpha(cfg);
  const auto tab = epsilon_table(ap);
  const auto sol = solve_epsilon(ap);
  double table_residual = 0.0;
  for (const auto& r : epsilon_relations(tab)) table_residual = std::max(table_residual, std::abs(r.residual));
  double deviation = 0.0;
  for (int k = 0; k < 15; ++k)
    deviation = std::max(deviation, std::abs(sol.table[k] - tab[k]) / std::max(1.0, std::abs(tab[k])));
  const bool pass = table_residual <= 1e-12 && deviation <= 1e-10 && !sol.rank_deficient;
  io::Json j = io::Json::object();
  j["table"] = io::to_json(tab);
  j["relations"] = io::Json::array();
  for (const auto& r : epsilon_relations(tab)) j["relations"].push_back({{"name", r.name}, {"residual", r.residual}});
  j["max_relation_residual"] = table_residual;
  j["solve"] = io::to_json(sol);
  j["solve_max_deviation"] = deviation;
  j["pass"] = pass;
  write_json(out, j);
  return pass ? kExitOk : kExitFailure;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const auto suite = verify::parse_suite(cfg.suite);
  std::vector<verify::CriterionResult> results;
  for (int id : verify::suite_criteria(suite)) results.push_back(verify::run_criterion(id, cfg.threads));
  out << verify::format_report(results);
  for (const auto& r : results)
    if (!r.pass) return kExitFailure;
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heat content with singular initial temperature and specific heat", args.empty() ? "heatcontent-cli" : args[0]};
  app.footer(kFooter);
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Read option defaults from a key=value file");
  RunConfig cfg;
  app.add_option("--threads", cfg.threads, "Worker threads for t-grids (0 = all cores; default HC_THREADS)");
  app.add_option("-o,--output", cfg.output, "Write output to this file instead of stdout");

  auto alpha = [&](CLI::App* sub, bool required) {
    auto* o1 = sub->add_option("--a1", cfg.a1, "Singularity exponent alpha1 of the initial temperature");
    auto* o2 = sub->add_option("--a2", cfg.a2, "Singularity exponent alpha2 of the specific heat");
    if (required) o1->required(), o2->required();
  };
  auto grid = [&](CLI::App* sub) {
    sub->add_option("--tmin", cfg.tmin, "Smallest time")->capture_default_str();
    sub->add_option("--tmax", cfg.tmax, "Largest time")->capture_default_str();
    sub->add_option("--pts", cfg.pts, "Number of log-spaced times")->capture_default_str();
    sub->add_option("--tol", cfg.tol, "Absolute tolerance per value (0 = relative only)")->capture_default_str();
    sub->add_option("--rel-tol", cfg.rel_tol, "Relative tolerance per value")->capture_default_str();
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  };

  auto* c = app.add_subcommand("c-coef", "Boundary coefficient c(alpha1, alpha2), printed as %.16e");
  alpha(c, true);
  c->add_option("--format", cfg.format, "text (value only) or json")->check(CLI::IsMember({"csv", "text", "json"}));

  auto* ball = app.add_subcommand("ball-q", "Sample Q(t) on the ball of radius a with psi_i = (a - r)^-alpha_i");
  alpha(ball, true);
  ball->add_option("--radius", cfg.radius, "Ball radius a")->capture_default_str();
  grid(ball);

  auto* inter = app.add_subcommand("interval-q", "Sample Q(t) on [0, a] with psi_i = chi(delta) delta^-alpha_i");
  alpha(inter, true);
  inter->add_option("--radius", cfg.radius, "Interval length a")->capture_default_str();
  inter->add_option("--eps-in", cfg.eps_in, "Cutoff equals 1 up to this distance")->capture_default_str();
  inter->add_option("--eps-out", cfg.eps_out, "Cutoff vanishes from this distance")->capture_default_str();
  grid(inter);

  auto* fit = app.add_subcommand("fit", "Fit the expansion template to a sample CSV; JSON result");
  fit->add_option("--input", cfg.input, "Sample CSV ('-' for stdin)")->required();
  fit->add_option("--template", cfg.tmpl, "auto (powers from alpha) or log (s = 1)")
      ->check(CLI::IsMember({"auto", "log"}))
      ->capture_default_str();
  fit->add_option("--J", cfg.J, "Boundary terms j = 0..J")->capture_default_str();
  fit->add_option("--N", cfg.N, "Interior terms n = 0..N (log template: half-powers up to N)")->capture_default_str();
  alpha(fit, false);

  auto* pred = app.add_subcommand("predict", "Predicted beta triple and epsilon table; JSON result");
  pred->add_option("--geometry", cfg.geometry, "ball or interval")
      ->check(CLI::IsMember({"ball", "interval"}))
      ->capture_default_str();
  pred->add_option("--radius", cfg.radius, "Ball radius")->capture_default_str();
  alpha(pred, true);

  auto* veps = app.add_subcommand("verify-epsilon", "Check the epsilon-table relations and re-solve the table");
  alpha(veps, true);

  auto* ver = app.add_subcommand("verify", "Run the acceptance checks; exit 1 on any failure");
  ver->add_option("--suite", cfg.suite, "all, kernels, coeffs, ball or logcase")
      ->check(CLI::IsMember({"all", "kernels", "coeffs", "ball", "logcase"}))
      ->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("heatcontent-cli");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == static_cast<int>(CLI::ExitCodes::Success) ? kExitOk : kExitUsage;
  }

  std::unique_ptr<std::ofstream> file;
  if (!cfg.output.empty()) {
    file = std::make_unique<std::ofstream>(cfg.output);
    if (!*file) {
      err << "error: cannot write '" << cfg.output << "'\n";
      return kExitUsage;
    }
  }
  std::ostream& dest = file ? *file : out;

  try {
    if (*c) return cmd_c_coef(cfg, dest);
    if (*ball) return cmd_ball_q(cfg, dest);
    if (*inter) return cmd_interval_q(cfg, dest);
    if (*fit) return cmd_fit(cfg, dest);
    if (*pred) return cmd_predict(cfg, dest);
    if (*veps) return cmd_verify_epsilon(cfg, dest);
    if (*ver) return cmd_verify(cfg, dest);
  } catch (const io::FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const GridError& e) {
    err << "error: " << e.what() << '\n';
    for (const auto& [i, msg] : e.failures()) err << "  t[" << i << "]: " << msg << '\n';
    return kExitFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace heatcontent::cli
