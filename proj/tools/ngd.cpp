#include "ngd/constructions.hpp"
#include "ngd/dsl.hpp"
#include "ngd/io.hpp"
#include "ngd/suites.hpp"
#include "ngd/transport.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <fstream>
#include <iterator>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::json;

enum Exit { pass = 0, failure = 1, usage = 2 };

struct Options {
  ngd::SuiteConfig suite;
  std::vector<double> eps_grid;
  std::optional<double> tol;
  bool json = false;
  std::string suite_name = "all";
  std::string config_path;
  std::string out_prefix;
  std::string input;
  std::string expr;
  std::string action;
  std::vector<std::string> bindings;
  std::optional<double> domain_bound;
};

void add_model_flags(CLI::App* app, Options& o) {
  app->add_option("--model", o.suite.model, "euclidean or heisenberg")
      ->check(CLI::IsMember({"euclidean", "heisenberg"}))
      ->capture_default_str();
  app->add_option("--dim", o.suite.dim, "Euclidean dimension")->check(CLI::NonNegativeNumber)->capture_default_str();
}

void add_sampler_flags(CLI::App* app, Options& o) {
  app->add_option("--seed", o.suite.seed, "sampler seed")->capture_default_str();
  app->add_option("--radius", o.suite.radius, "gauge-ball radius of the samples")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--samples", o.suite.samples, "number of samples")->check(CLI::PositiveNumber)->capture_default_str();
}

void add_limit_flags(CLI::App* app, Options& o) {
  app->add_option("--eps-grid", o.eps_grid, "comma separated scales for eps -> 0 limits")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  app->add_option("--tol", o.tol, "pass tolerance for limits")->check(CLI::PositiveNumber);
}

void finish_suite_config(Options& o) {
  if (!o.eps_grid.empty()) o.suite.eps_grid = o.eps_grid;
  if (o.tol) o.suite.tol = o.tol;
}

std::string fixed2(const std::optional<double>& x) {
  if (!x) return "n/a";
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(2);
  out << *x;
  return out.str();
}

void caret(std::ostream& err, const std::string& src, const ngd::dsl::Span& s) {
  std::istringstream lines(src);
  std::string line;
  for (int i = 0; i < s.line && std::getline(lines, line); ++i) {
  }
  err << "  " << line << "\n  " << std::string(static_cast<std::size_t>(std::max(0, s.column - 1)), ' ')
      << std::string(static_cast<std::size_t>(std::max(1, s.length)), '^') << "\n";
}

int emit_reports(const std::vector<ngd::ValidationReport>& reports, bool as_json) {
  bool ok = true, structural = false;
  json j = json::array();
  for (const auto& r : reports) {
    ok = ok && r.passed();
    structural = structural || r.structural();
    if (as_json)
      j.push_back(r.to_json());
    else
      std::cout << r.summary() << "\n";
  }
  if (as_json) std::cout << j.dump(2) << "\n";
  return structural ? usage : ok ? pass : failure;
}

// ---------------------------------------------------------------------------

int run_validate(const Options& o) {
  const json j = ngd::io::read_json_file(o.input);
  std::vector<ngd::ValidationReport> reports;
  if (j.contains("arrows")) {
    const auto in = ngd::io::groupoid_from_json(j);
    reports.push_back(ngd::validate_groupoid(in.groupoid));
    if (in.norm && reports.back().passed()) {
      reports.push_back(ngd::check_norm(in.groupoid, *in.norm));
      ngd::ValidationReport sep("separability");
      sep.check(ngd::check_separability(in.groupoid, *in.norm), "norm is separable", o.input);
      reports.push_back(std::move(sep));
    }
  } else if (j.contains("elements")) {
    const auto action = ngd::io::group_action_from_json(j);
    reports.push_back(ngd::check_group_action(action));
    if (j.contains("space") && reports.back().passed()) {
      const auto base = ngd::io::metric_space_from_json(j["space"], "/space");
      reports.push_back(ngd::check_metric(base));
      const auto A = ngd::action_groupoid(action, base);
      reports.push_back(ngd::validate_groupoid(A.normed.groupoid));
      reports.push_back(ngd::check_norm(A.normed.groupoid, A.normed.norm));
    }
  } else if (j.contains("points")) {
    const auto X = ngd::io::metric_space_from_json(j);
    reports.push_back(ngd::check_metric(X));
    if (reports.back().passed()) {
      const auto P = ngd::pair_groupoid(X);
      reports.push_back(ngd::check_norm(P.groupoid, P.norm));
      ngd::ValidationReport sep("pair groupoid separability");
      sep.check(ngd::check_separability(P.groupoid, P.norm), "norm is separable", o.input);
      reports.push_back(std::move(sep));
      const auto D = ngd::double_groupoid(P.groupoid, P.norm);
      reports.push_back(ngd::check_dif_isometry(P.groupoid, P.norm, D));
      const auto f = ngd::fiber_distances(P.groupoid, P.norm);
      reports.push_back(ngd::check_right_invariance(P.groupoid, f));
      ngd::ValidationReport round("fiber distance round trip");
      round.check(ngd::norm_from_fiber_distances(P.groupoid, f) == P.norm, "norm recovered from fiber distances",
                  o.input);
      reports.push_back(std::move(round));
    }
  } else {
    throw ngd::io::SchemaError("/", "expected a groupoid (arrows), a metric space (points) or a group action (elements)");
  }
  return emit_reports(reports, o.json);
}

int run_eval(const Options& o) {
  ngd::dsl::EvalContext ctx;
  ctx.model = o.suite.model;
  ctx.dim = o.suite.dim;
  ctx.eps_grid = o.eps_grid;
  if (o.tol) ctx.tol = *o.tol;
  ctx.domain_bound = o.domain_bound;
  std::string current;
  try {
    for (const auto& b : o.bindings) {
      const auto eq = b.find('=');
      if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--bind", "expected name=term, got " + b);
      current = b.substr(eq + 1);
      ctx.bindings[b.substr(0, eq)] = ngd::dsl::eval(current, ctx).value;
    }
    current = o.expr;
    if (!o.input.empty()) {
      std::ifstream in(o.input);
      current.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
      while (!current.empty() && std::isspace(static_cast<unsigned char>(current.back()))) current.pop_back();
    } else if (current.empty()) {
      throw CLI::ValidationError("term", "give a term or --file");
    }
    const auto term = ngd::dsl::parse(current);
    const auto r = ngd::dsl::eval(term, ctx);
    bool ok = true;
    for (const auto& e : r.limits) ok = ok && e.pass;
    if (o.json) {
      json j;
      j["term"] = ngd::dsl::print(term);
      j["value"] = ngd::dsl::format_value(r.value, 17);
      j["limits"] = json::array();
      for (const auto& e : r.limits) j["limits"].push_back(e.to_json());
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << ngd::dsl::format_value(r.value) << "\n";
      for (const auto& e : r.limits) {
        if (!e.pass) {
          std::cerr << e.summary();
          continue;
        }
        std::cerr << "PASS " << e.axiom << ": " << (e.exact ? "exact" : "order " + fixed2(e.order)) << ", residual "
                  << e.residual.back() << " at eps " << e.eps.back() << "\n";
      }
    }
    return ok ? pass : failure;
  } catch (const ngd::dsl::ParseError& e) {
    std::cerr << "parse error at " << e.what() << "\n";
    caret(std::cerr, current, e.span());
    return usage;
  } catch (const ngd::dsl::EvalError& e) {
    std::cerr << (e.domain() ? "domain error at " : "evaluation error at ") << e.what() << "\n";
    caret(std::cerr, current, e.span());
    return e.domain() ? failure : usage;
  }
}

int run_suites(const std::vector<std::string>& names, const Options& o) {
  std::vector<ngd::SuiteResult> results;
  for (const auto& n : names)
    for (auto& r : ngd::run_suite(n, o.suite)) results.push_back(std::move(r));
  bool ok = true;
  json j;
  j["config"] = {{"model", o.suite.model}, {"dim", o.suite.dim},         {"seed", o.suite.seed},
                 {"radius", o.suite.radius}, {"samples", o.suite.samples}};
  if (o.suite.eps_grid) j["config"]["eps_grid"] = *o.suite.eps_grid;
  if (o.suite.tol) j["config"]["tol"] = *o.suite.tol;
  j["suites"] = json::array();
  std::string text;
  for (const auto& r : results) {
    ok = ok && r.passed();
    j["suites"].push_back(r.to_json());
    text += r.summary();
  }
  j["pass"] = ok;
  text += std::string("== overall: ") + (ok ? "PASS" : "FAIL") + " (" + std::to_string(results.size()) + " suites)\n";
  if (!o.out_prefix.empty()) {
    std::ofstream(o.out_prefix + ".json") << j.dump(2) << "\n";
    std::ofstream(o.out_prefix + ".txt") << text;
  }
  if (o.json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
  return ok ? pass : failure;
}

std::vector<std::string> split_suites(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int run_report(Options o, bool suite_given) {
  std::vector<std::string> names;
  if (!o.config_path.empty()) {
    std::vector<std::string> listed;
    o.suite = ngd::io::suite_config_from_json(ngd::io::read_json_file(o.config_path), o.suite, &listed);
    names = listed;
  }
  if (suite_given || o.config_path.empty()) names = split_suites(o.suite_name);
  finish_suite_config(o);
  return run_suites(names, o);
}

int run_transport(const Options& o) {
  const auto in = ngd::io::transport_from_json(ngd::io::read_json_file(o.input));
  auto need = [&](const auto& v, const char* key) -> const auto& {
    if (!v) throw ngd::io::SchemaError(std::string("/") + key, "required by '" + o.action + "'");
    return *v;
  };
  json j;
  std::ostringstream text;
  int code = pass;
  if (o.action == "compose") {
    const auto c = ngd::compose_plans(need(in.gamma, "gamma"), need(in.gamma2, "gamma2"));
    j["plan"] = ngd::io::to_json(c);
    text << "gamma2 o gamma = " << ngd::to_string(c) << "\n";
  } else if (o.action == "inverse") {
    const auto c = ngd::inverse_plan(need(in.gamma, "gamma"));
    j["plan"] = ngd::io::to_json(c);
    text << "gamma^-1 = " << ngd::to_string(c) << "\n";
  } else if (o.action == "norm") {
    const auto& g = need(in.gamma, "gamma");
    const auto d = ngd::norm_d(in.space, g);
    j["norm"] = ngd::to_string(d);
    text << "d(gamma) = " << ngd::to_string(d) << "\n";
    if (in.u) {
      const auto rho = ngd::seminorm_rho(in.space, *in.u, g);
      j["rho_u"] = ngd::to_string(rho);
      text << "rho_u(gamma) = " << ngd::to_string(rho) << "\n";
    }
  } else if (o.action == "kantorovich") {
    const auto k = ngd::kantorovich(in.space, need(in.mu, "mu"), need(in.nu, "nu"));
    j["plan"] = ngd::io::to_json(k.plan);
    j["potential"] = json::array();
    for (const auto& u : k.potential) j["potential"].push_back(ngd::to_string(u));
    j["primal"] = ngd::to_string(k.primal);
    j["dual"] = ngd::to_string(k.dual);
    j["gap"] = ngd::to_string(k.gap());
    text << "optimal plan " << ngd::to_string(k.plan) << "\n"
         << "potential (";
    for (std::size_t i = 0; i < k.potential.size(); ++i) text << (i ? ", " : "") << ngd::to_string(k.potential[i]);
    text << ")\nprimal " << ngd::to_string(k.primal) << "  dual " << ngd::to_string(k.dual) << "  gap "
         << ngd::to_string(k.gap()) << "\n";
    if (k.gap() != 0) code = failure;
  } else {  // classify
    const auto& g = need(in.gamma, "gamma");
    const bool diagonal = g == ngd::diagonal_plan(g.mu());
    const auto w = ngd::is_invtrans(g);
    j["mu"] = ngd::io::to_json(g.mu());
    j["nu"] = ngd::io::to_json(g.nu());
    j["diagonal"] = diagonal;
    j["invtrans"] = w.has_value();
    j["norm"] = ngd::to_string(ngd::norm_d(in.space, g));
    text << "marginals " << ngd::to_string(g.mu()) << " -> " << ngd::to_string(g.nu()) << "\n"
         << "diagonal: " << (diagonal ? "yes" : "no") << "\n"
         << "induced by an invertible map: " << (w ? "yes" : "no") << "\n";
    if (w) {
      j["f"] = w->f;
      j["g"] = w->g;
      text << "f = (";
      for (std::size_t i = 0; i < w->f.size(); ++i) text << (i ? ", " : "") << in.space.points[w->f[i]];
      text << ")\n";
    }
  }
  if (o.json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text.str();
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checks for normed groupoids with dilations, their emergent algebra and transport plans"};
  app.require_subcommand(1);
  Options o;

  auto* validate = app.add_subcommand("validate", "check a finite groupoid, metric space or group action (JSON)");
  validate->add_option("file", o.input, "input JSON")->required()->check(CLI::ExistingFile);
  validate->add_flag("--json", o.json, "machine-readable output");

  auto* eval = app.add_subcommand("eval", "evaluate a term");
  auto* term_opt = eval->add_option("term", o.expr, "e.g. \"Delta(0.1, (3,0), (1,0))\"");
  eval->add_option("--file", o.input, "read the term from a file")->check(CLI::ExistingFile)->excludes(term_opt);
  add_model_flags(eval, o);
  add_limit_flags(eval, o);
  eval->add_option("--bind", o.bindings, "name=term, evaluated in order")->take_all();
  eval->add_option("--domain-bound", o.domain_bound, "dom(eps) = {d(g) <= bound/eps}")->check(CLI::PositiveNumber);
  eval->add_flag("--json", o.json, "machine-readable output");

  auto* limits = app.add_subcommand("limits", "run the eps -> 0 limit axioms on a model");
  add_model_flags(limits, o);
  add_sampler_flags(limits, o);
  add_limit_flags(limits, o);
  limits->add_flag("--json", o.json, "machine-readable output");

  auto* transport = app.add_subcommand("transport", "operations on transport plans (JSON)");
  transport->add_option("action", o.action, "compose | inverse | norm | kantorovich | classify")
      ->required()
      ->check(CLI::IsMember({"compose", "inverse", "norm", "kantorovich", "classify"}));
  transport->add_option("file", o.input, "input JSON")->required()->check(CLI::ExistingFile);
  transport->add_flag("--json", o.json, "machine-readable output");

  auto* report = app.add_subcommand("report", "run named verification suites");
  auto* suite_opt = report->add_option("--suite", o.suite_name,
                                       "comma separated: axioms, irq, limits, transport, planted or all")
                        ->capture_default_str();
  report->add_option("--config", o.config_path, "JSON config with model, sampler, grid and suite list; its keys replace the flags")
      ->check(CLI::ExistingFile);
  report->add_option("--out", o.out_prefix, "write <prefix>.json and <prefix>.txt");
  add_model_flags(report, o);
  add_sampler_flags(report, o);
  add_limit_flags(report, o);
  report->add_flag("--json", o.json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : usage;
  }

  try {
    if (*validate) return run_validate(o);
    if (*eval) return run_eval(o);
    if (*limits) {
      finish_suite_config(o);
      return run_suites({"limits"}, o);
    }
    if (*transport) return run_transport(o);
    return run_report(o, suite_opt->count() > 0);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const ngd::StructuralError& e) {
    std::cerr << "structural error: " << e.what() << "\n";
    return usage;
  } catch (const ngd::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  }
}
