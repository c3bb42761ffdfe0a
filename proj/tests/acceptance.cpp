// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "ngd/constructions.hpp"
#include "ngd/dilation.hpp"
#include "ngd/emergent.hpp"
#include "ngd/limits.hpp"
#include "ngd/transport.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>

using namespace ngd;

namespace {

struct Outcome {
  bool ok = true;
  std::vector<std::string> detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail.push_back(what);
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0) {
    std::ostringstream b;
    b << "runtime " << secs << " s exceeds " << budget_s << " s";
    out.require(secs < budget_s, b.str());
  }
  if (!out.ok) ++failures;
  std::printf("[%s] %d %s (%.2f s)\n", out.ok ? "PASS" : "FAIL", id, title.c_str(), secs);
  for (const auto& d : out.detail) std::printf("       %s\n", d.c_str());
  std::fflush(stdout);
}

std::string fmt(double x) {
  std::ostringstream o;
  o << x;
  return o.str();
}

// ---------------------------------------------------------------------------

void finite_axioms(Outcome& out) {
  std::mt19937_64 rng(20240601);
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(k % 7);  // 2..8 points
    const auto X = random_metric_space(rng, n);
    const std::string tag = "space " + std::to_string(k) + " (" + std::to_string(n) + " points): ";
    out.require(check_metric(X).passed(), tag + "not a metric");
    const auto P = pair_groupoid(X);
    out.require(validate_groupoid(P.groupoid).passed(), tag + "pair groupoid laws");
    const auto norm = check_norm(P.groupoid, P.norm);
    out.require(norm.passed(), tag + norm.summary());
    out.require(check_separability(P.groupoid, P.norm), tag + "pair groupoid norm not separable");
    const auto D = double_groupoid(P.groupoid, P.norm);
    out.require(validate_groupoid(D.normed.groupoid).passed(), tag + "double groupoid laws");
    const auto dn = check_norm(D.normed.groupoid, D.normed.norm);
    out.require(dn.passed(), tag + dn.summary());
    const auto iso = check_dif_isometry(P.groupoid, P.norm, D);
    out.require(iso.passed(), tag + iso.summary());
    const auto f = fiber_distances(P.groupoid, P.norm);
    out.require(check_right_invariance(P.groupoid, f).passed(), tag + "fiber distances not right invariant");
    out.require(norm_from_fiber_distances(P.groupoid, f) == P.norm, tag + "norm not recovered from fiber distances");
  }
}

void euclidean_closed_forms(Outcome& out) {
  const auto md = make_euclidean<double>(1);
  const PairArrow<double> g{vec<double>({3}), vec<double>({0})}, h{vec<double>({1}), vec<double>({0})};
  const auto D = approx_difference(md, 0.1, g, h);
  out.require(std::abs(D.target(0) - 2.1) <= 1e-12 && std::abs(D.source(0)) <= 1e-12,
              "Delta_0.1((3,0),(1,0)) = " + format_arrow(D));

  const auto m = make_euclidean<Quad>(1);
  using A = PairArrow<Quad>;
  const A gq{vec<Quad>({3}), vec<Quad>({0})}, hq{vec<Quad>({1}), vec<Quad>({0})}, two{vec<Quad>({2}), vec<Quad>({0})};
  const std::vector<int> one{0};
  auto order_one = [&](const std::string& name, std::function<A(double, const int&)> fam, const A& limit) {
    auto est = uniform_limit<int, A>(name, fam, [&](const int&) { return limit; }, one, dyadic_grid(),
                                     [](const A& a, const A& b) { return coordinate_residual(a, b); }, 1e-5,
                                     residual_floor<Quad>());
    out.require(est.pass, est.summary());
    out.require(est.order && std::abs(*est.order - 1.0) <= 0.05,
                name + " order " + (est.order ? fmt(*est.order) : std::string("n/a")));
  };
  order_one("Sigma_eps((3,0),(1,0)) -> (4,0)", [&](double e, const int&) { return approx_sum(m, Quad(e), gq, hq); },
            A{vec<Quad>({4}), vec<Quad>({0})});
  order_one("inv_eps((2,0)) -> (-2,0)", [&](double e, const int&) { return approx_inverse(m, Quad(e), two); },
            A{vec<Quad>({-2}), vec<Quad>({0})});
}

void heisenberg_limits(Outcome& out) {
  using M = HeisenbergModel<Quad>;
  const M m = make_heisenberg<Quad>();
  using A = PairArrow<Quad>;
  const Vec<Quad> e = Vec<Quad>::Zero(3);
  const A unit{e, e};
  const A u{vec<Quad>({1, 0, 0}), e}, v{vec<Quad>({0, 1, 0}), e};
  using std::abs;

  // Delta^e_eps(u, v) = (eps - 1, 1, (eps - 1)/2) at every scale.
  double worst = 0;
  for (double eps : dyadic_grid()) {
    const Quad q(eps);
    const A d = approx_difference3(m, q, unit, u, v);
    const Vec<Quad> want = vec<Quad>({q - 1, Quad(1), (q - 1) / 2});
    worst = std::max(worst, coordinate_residual(d, A{want, e}));
  }
  out.require(worst <= 1e-30, "Delta^e_eps((1,0,0),(0,1,0)) off the closed form by " + fmt(worst));

  const auto samples = sample_fiber_triples(m, BoundedSampler{4.0, 1000, 7});
  const auto grid = dyadic_grid();

  // Sigma^e_eps(a, b) -> a b: the extrapolated limit against the group product.
  std::function<A(double, const FiberSample<M>&)> sum = [&](double eps, const auto& s) {
    return approx_sum3(m, Quad(eps), unit, A{s.u.target, e}, A{s.v.target, e});
  };
  auto product = [&](const FiberSample<M>& s) { return A{m.group().mul(s.u.target, s.v.target), e}; };
  const auto lim = extrapolated<Quad, FiberSample<M>, A>(sum, grid);
  double gap = 0;
  for (const auto& s : samples) gap = std::max(gap, coordinate_residual(lim(s), product(s)));
  out.require(gap <= 1e-12, "lim Sigma^e differs from the group product by " + fmt(gap));
  auto sest = uniform_limit<FiberSample<M>, A>(
      "Sigma^e_eps -> product", sum, product, samples, grid,
      [](const A& a, const A& b) { return coordinate_residual(a, b); }, 1e-4, residual_floor<Quad>());
  out.require(sest.pass && sest.order && std::abs(*sest.order - 1.0) <= 0.05, sest.summary());

  // d_bar is the Cygan gauge: the rescaled norm is constant in eps, up to
  // float128 rounding amplified by 1/eps.
  double dgap = 0;
  for (const auto& s : samples)
    for (double eps : grid)
      dgap = std::max(dgap, static_cast<double>(abs(Quad(rescaled_norm(m, eps, s.u) - m.norm(s.u)))));
  out.require(dgap <= residual_floor<Quad>(), "(1/eps) d(delta_eps g) differs from d(g) by " + fmt(dgap));
  const auto strong = check_A3mod_A4(m, samples, {4e-4, 2e-4, 1e-4}, 1e-10);
  out.require(strong.a3mod.exact, "A3mod limit not exact: " + strong.a3mod.summary());

  // Cone and the d~_0 = d_bar(Delta) identity at eps = 1e-4.
  const auto cone = cone_check(m, samples, {0.25, 0.5, 2.0}, {4e-4, 2e-4, 1e-4}, 1e-10);
  out.require(cone.passed(), cone.summary());
  out.require(strong.report.passed(), strong.report.summary());
  out.require(strong.identity.pass && strong.identity.residual.back() < 1e-10, strong.identity.summary());
}

void identity_suites(Outcome& out) {
  const std::vector<double> scales{0.2, 0.5, 0.75, 1.5, 3.0};
  auto run = [&](const auto& m) {
    const auto fibers = sample_fiber_triples(m, BoundedSampler{4.0, 1000, 11});
    const auto Q = dilatation_gamma_irq(m, m.group().identity());
    const auto r = check_identity_suite(Q, fiber_points(fibers), scales, point_carrier<double>(1e-10),
                                        "identity suite on " + m.name());
    out.require(r.passed(), r.summary());
    out.require(r.checks() == 1000 * (5 * 7 + 25), m.name() + ": " + std::to_string(r.checks()) + " checks");
  };
  run(make_euclidean<double>(2));
  run(make_heisenberg<double>());

  const auto p1 = check_irq(left_projection_irq(), std::vector<long>{0, 1, 2}, integer_carrier(), "left projection");
  out.require(!p1.passed() && !p1.witnesses().empty(), "left projection irq not rejected");
  auto e = make_euclidean<double>(1);
  auto Q = dilatation_gamma_irq(e, Vec<double>::Zero(1));
  Q.inverse = [](const double& a) { return a; };
  const auto bad = check_identity_suite(Q, fiber_points(sample_fiber_triples(e, BoundedSampler{4.0, 50, 3})),
                                        scales, point_carrier<double>(1e-10), "planted bullet");
  out.require(!bad.passed() && !bad.witnesses().empty(), "planted bullet not rejected");
}

void transport(Outcome& out) {
  const auto X = line_metric({Rational(0), Rational(1)});
  const Measure mu{{Rational(1, 2), Rational(1, 2)}}, nu{{Rational(1, 4), Rational(3, 4)}};
  const auto k = kantorovich(X, mu, nu);
  out.require(k.primal == Rational(1, 4) && k.dual == Rational(1, 4) && k.gap() == 0,
              "two-point example: primal " + to_string(k.primal) + ", dual " + to_string(k.dual));

  std::mt19937_64 rng(99);
  std::size_t vertices = 0;
  for (int i = 0; i < 20; ++i) {
    const auto Y = random_metric_space(rng, 2 + static_cast<std::size_t>(i % 4));
    const auto verts = lip1_vertices(Y);
    vertices += verts.size();
    const auto g = random_plan_from(rng, random_measure(rng, Y.size(), i % 2 == 0), i % 3 != 0);
    const auto d = norm_d(Y, g);
    for (const auto& u : verts)
      out.require(seminorm_rho(Y, u, g) <= d, "rho_u exceeds d on " + to_string(g));
  }
  out.require(vertices > 0, "no Lipschitz polytope vertices");

  for (int i = 0; i < 100; ++i) {
    const auto n = 2 + static_cast<std::size_t>(i % 4);  // 2..5 points
    const auto g1 = random_plan_from(rng, random_measure(rng, n), true);
    const auto g2 = random_plan_from(rng, g1.nu(), true);
    const auto g3 = random_plan_from(rng, g2.nu(), true);
    const auto left = compose_plans(compose_plans(g1, g2), g3);
    const auto right = compose_plans(g1, compose_plans(g2, g3));
    out.require(left == right, "composition not associative on triple " + std::to_string(i));
  }
}

void negative_fixture(Outcome& out) {
  const auto m = make_heisenberg_euclidean_norm<Quad>();
  const auto a3 = check_A3(m, sample_fiber_triples(m, BoundedSampler{2.0, 200, 5}));
  const std::string clause = "zero limit distance only on the diagonal";
  out.require(a3.report.has_violation(clause), "nondegeneracy clause not violated");
  bool witness = false;
  for (const auto& w : a3.report.witnesses())
    if (w.clause == clause && w.witness.find("limit 0") != std::string::npos) witness = true;
  out.require(witness, "no witness pair with limit 0");
  const auto good = make_heisenberg<Quad>();
  const auto ok = check_A3(good, sample_fiber_triples(good, BoundedSampler{2.0, 200, 5}));
  out.require(!ok.report.has_violation(clause), "Cygan gauge wrongly flagged");
}

void translation(Outcome& out) {
  auto run = [&](const auto& m) {
    using M = std::decay_t<decltype(m)>;
    const auto fibers = sample_fiber_triples(m, BoundedSampler{4.0, 1000, 13});
    const auto x = fibers.front().x;
    std::vector<std::array<typename M::Point, 4>> pts;
    for (const auto& f : fibers) pts.push_back({x, f.u.target, f.v.target, f.w.target});
    for (double eps : {0.5, 0.1}) {
      const auto r = check_translation_groupoid(TranslationGroupoid<M>(m, x, eps), pts, 1e-12);
      out.require(r.checks() > 0 && !r.has_violation("arrows are isometries") &&
                      !r.has_violation("composition closure") && r.passed(),
                  r.summary());
    }
  };
  run(make_euclidean<double>(2));
  run(make_heisenberg<double>());
}

int run_cli(const std::string& args, std::string& output) {
  const std::string log = "acceptance_cli.log";
  const std::string cmd = std::string(NGD_CLI) + " " + args + " > " + log + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  output.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void cli(Outcome& out) {
  std::string text;
  const std::string fixtures = NGD_FIXTURES;
  for (const char* model : {"euclidean", "heisenberg"}) {
    const int code = run_cli(std::string("report --suite all --model ") + model, text);
    out.require(code == 0, std::string("report --suite all --model ") + model + " exited " + std::to_string(code));
  }
  const int planted = run_cli("report --suite planted", text);
  out.require(planted == 1 && text.find("zero limit distance only on the diagonal") != std::string::npos,
              "planted suite exited " + std::to_string(planted));
  const std::regex positioned(R"(parse error at \d+:\d+: )");
  for (const char* f : {"parse_error_eof", "parse_error_missing_comma", "parse_error_unknown_op", "parse_error_arity"}) {
    const int code = run_cli("eval --file " + fixtures + "/" + f + ".ngd", text);
    out.require(code == 2 && std::regex_search(text, positioned), std::string(f) + " exited " + std::to_string(code));
  }
}

}  // namespace

int main() {
  criterion(1, "finite axiom suites on 50 random metric spaces, exact", 5, finite_axioms);
  criterion(2, "Euclidean closed forms and order-one limits", 0, euclidean_closed_forms);
  criterion(3, "Heisenberg limits, cone and d~_0 = d_bar(Delta) at eps = 1e-4", 10, heisenberg_limits);
  criterion(4, "identity suite (a)-(g), (k) on both models; planted irqs rejected", 0, identity_suites);
  criterion(5, "transport duality, d >= rho_u and associativity", 5, transport);
  criterion(6, "Euclidean norm on Heisenberg fails A3 nondegeneracy with a witness", 0, negative_fixture);
  criterion(7, "translation groupoid isometries and closure", 0, translation);
  criterion(8, "command line exit codes", 0, cli);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
