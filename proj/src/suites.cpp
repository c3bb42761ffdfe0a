#include "ngd/suites.hpp"

#include "ngd/constructions.hpp"
#include "ngd/limits.hpp"
#include "ngd/transport.hpp"

#include <sstream>

namespace ngd {

bool SuiteResult::passed() const {
  for (const auto& r : reports)
    if (!r.passed()) return false;
  for (const auto& e : estimates)
    if (!e.pass) return false;
  return true;
}

nlohmann::json SuiteResult::to_json() const {
  nlohmann::json j;
  j["suite"] = name;
  j["pass"] = passed();
  j["reports"] = nlohmann::json::array();
  for (const auto& r : reports) j["reports"].push_back(r.to_json());
  j["limits"] = nlohmann::json::array();
  for (const auto& e : estimates) j["limits"].push_back(e.to_json());
  return j;
}

std::string SuiteResult::summary() const {
  std::ostringstream out;
  out << "== suite " << name << ": " << (passed() ? "PASS" : "FAIL") << "\n";
  for (const auto& r : reports) out << r.summary() << "\n";
  for (const auto& e : estimates) out << e.summary();
  return out.str();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"axioms", "irq", "limits", "transport", "planted"};
  return names;
}

namespace {

BoundedSampler sampler(const SuiteConfig& c) { return {c.radius, c.samples, c.seed}; }

std::vector<double> limit_grid(const SuiteConfig& c) { return c.eps_grid ? *c.eps_grid : dyadic_grid(); }

// Order-one limits carry an error near r^2 eps; at radius 4 and eps = 2^-20
// that is about 1.1e-5.
double limit_tol(const SuiteConfig& c) { return c.tol ? *c.tol : 1e-4; }

// Finite metric spaces: pair groupoid norm, separability, double groupoid and
// the fiber distance round trip, all in exact arithmetic.
void finite_axioms(SuiteResult& out, const SuiteConfig& c) {
  std::mt19937_64 rng(c.seed);
  ValidationReport r("pair groupoids of random finite metric spaces");
  for (int k = 0; k < 10; ++k) {
    const auto X = random_metric_space(rng, 2 + static_cast<std::size_t>(k % 5));
    const auto P = pair_groupoid(X);
    r.merge(check_metric(X), "metric");
    r.merge(validate_groupoid(P.groupoid), "groupoid");
    r.merge(check_norm(P.groupoid, P.norm), "norm");
    r.check(check_separability(P.groupoid, P.norm), "pair groupoid norm is separable", std::to_string(k));
    const auto D = double_groupoid(P.groupoid, P.norm);
    r.merge(check_dif_isometry(P.groupoid, P.norm, D), "double groupoid");
    const auto f = fiber_distances(P.groupoid, P.norm);
    r.merge(check_right_invariance(P.groupoid, f), "fiber distances");
    r.check(norm_from_fiber_distances(P.groupoid, f) == P.norm, "norm recovered from fiber distances",
            std::to_string(k));
  }
  out.reports.push_back(std::move(r));
}

template <typename Model>
void model_axioms(SuiteResult& out, const Model& m, const SuiteConfig& c) {
  const auto s = sampler(c);
  const auto arrows = sample_arrows(m, s);
  const auto fibers = sample_fiber_triples(m, s);
  out.reports.push_back(check_A0(m, s));
  out.reports.push_back(check_A1(m, arrows));
  out.reports.push_back(check_homogeneity(m, arrows));
  out.reports.push_back(check_A2(m, arrows));
  out.reports.push_back(check_double_dilation(m, fibers));
  std::vector<FiberSample<Model>> few(fibers.begin(), fibers.begin() + std::min<std::ptrdiff_t>(200, fibers.size()));
  out.reports.push_back(check_deformation(deform(m, typename Model::Scalar(0.5)), few));
  out.reports.push_back(check_emergent_compatibility(m, fibers));
}

template <typename Model>
void model_irq(SuiteResult& out, const Model& m, const SuiteConfig& c) {
  const auto s = sampler(c);
  const auto fibers = sample_fiber_triples(m, s);
  const auto base = m.group().identity();
  const auto Q = dilatation_gamma_irq(m, base);
  const auto carrier = point_carrier<typename Model::Scalar>(1e-10);
  const std::vector<typename Model::Scalar> scales{0.2, 0.5, 0.75, 1.5, 3.0};
  std::vector<typename Model::Point> pts;
  for (const auto& f : fibers) pts.push_back(f.u.target);
  out.reports.push_back(check_gamma_irq(Q, pts, scales, carrier, "dilatation irqs on " + m.name()));
  out.reports.push_back(check_identity_suite(Q, fiber_points(fibers), scales, carrier,
                                             "identity suite on " + m.name()));
  std::vector<typename Model::Point> few(pts.begin(), pts.begin() + std::min<std::ptrdiff_t>(100, pts.size()));
  out.reports.push_back(check_iterates(Q, typename Model::Scalar(0.5), {0, 1, 2, 3, -1, -2}, few, carrier));
}

void finite_irq(SuiteResult& out) {
  const auto Q = cyclic_gamma_irq(5, 2);
  std::vector<std::array<long, 4>> all;
  for (long x = 0; x < 5; ++x)
    for (long u = 0; u < 5; ++u)
      for (long v = 0; v < 5; ++v)
        for (long w = 0; w < 5; ++w) all.push_back({x, u, v, w});
  out.reports.push_back(check_identity_suite(Q, all, {-2L, -1L, 1L, 2L, 3L}, integer_carrier(), "identity suite on Z/5"));
}

template <typename QuadModel, typename DoubleModel>
void model_limits(SuiteResult& out, const QuadModel& mq, const DoubleModel& md, const SuiteConfig& c) {
  const auto s = sampler(c);
  const auto grid = limit_grid(c);
  const double tol = limit_tol(c);
  const auto fq = sample_fiber_triples(mq, s);
  auto a3 = check_A3(mq, fq, grid, tol);
  out.estimates.push_back(a3.estimate);
  out.reports.push_back(a3.report);
  for (auto& e : check_A4weak(mq, fq, {0.25, 0.5, 2.0}, grid, tol)) out.estimates.push_back(std::move(e));
  auto strong = check_A3mod_A4(mq, fq, grid, tol);
  out.estimates.push_back(strong.a3mod);
  out.estimates.push_back(strong.a4);
  out.estimates.push_back(strong.dif_to_delta);
  out.estimates.push_back(strong.identity);
  out.reports.push_back(strong.report);
  auto fiber = fiber_dilatation_structure(mq, fq, grid, {0.5, 0.25, 2.0}, tol);
  out.estimates.push_back(fiber.estimate);
  out.reports.push_back(fiber.report);
  out.reports.push_back(cone_check(mq, fq, {0.25, 0.5, 2.0}, grid, 1e-10));
  out.estimates.push_back(gh_estimate(mq, mq.group().identity(), 1.0, s, grid, tol));

  const auto fd = sample_fiber_triples(md, s);
  const auto x = fd.front().x;
  for (double eps : {0.5, 0.1}) {
    TranslationGroupoid<DoubleModel> T(md, x, eps);
    std::vector<std::array<typename DoubleModel::Point, 4>> pts;
    for (const auto& f : fd) pts.push_back({x, f.u.target, f.v.target, f.w.target});
    out.reports.push_back(check_translation_groupoid(T, pts, 1e-12));
  }
}

void transport_suite(SuiteResult& out, const SuiteConfig& c) {
  ValidationReport r("Kantorovich duality");
  const auto X2 = line_metric({Rational(0), Rational(1)});
  const auto k = kantorovich(X2, Measure{{Rational(1, 2), Rational(1, 2)}}, Measure{{Rational(1, 4), Rational(3, 4)}});
  r.check(k.primal == Rational(1, 4) && k.dual == Rational(1, 4), "two-point example has value 1/4",
          to_string(k.primal) + " / " + to_string(k.dual));
  std::mt19937_64 rng(c.seed);
  for (int i = 0; i < 10; ++i) {
    const auto X = random_metric_space(rng, 2 + static_cast<std::size_t>(i % 4));
    const auto mu = random_measure(rng, X.size(), i % 2 == 0);
    const auto nu = random_measure(rng, X.size());
    const auto res = kantorovich(X, mu, nu);
    r.check(res.gap() == 0, "duality gap is zero", to_string(mu) + " -> " + to_string(nu));
    r.check(seminorm_rho(X, res.potential, res.plan) == res.primal, "optimal potential attains d(gamma*)",
            to_string(res.plan));
  }
  out.reports.push_back(std::move(r));

  for (int i = 0; i < 3; ++i) {
    const auto X = random_metric_space(rng, 3 + static_cast<std::size_t>(i));
    std::vector<Coupling> plans;
    for (int j = 0; j < 6; ++j) {
      auto g = random_plan_from(rng, random_measure(rng, X.size(), j % 2 == 0), j % 3 != 0);
      plans.push_back(g);
      plans.push_back(inverse_plan(g));
      plans.push_back(diagonal_plan(g.nu()));
      plans.push_back(random_plan_from(rng, g.nu()));
    }
    out.reports.push_back(check_trans_norms(X, plans));
    out.reports.push_back(check_category_with_inverses(trans_category(X, plans, false)));
  }
}

void planted_suite(SuiteResult& out, const SuiteConfig& c) {
  out.reports.push_back(check_irq(left_projection_irq(), std::vector<long>{0, 1, 2}, integer_carrier(),
                                  "planted: left projection irq"));
  auto e = make_euclidean<double>(1);
  auto Q = dilatation_gamma_irq(e, Vec<double>::Zero(1));
  Q.inverse = [](const double& a) { return a; };
  out.reports.push_back(check_identity_suite(Q, fiber_points(sample_fiber_triples(e, BoundedSampler{4.0, 50, c.seed})),
                                             {0.5, 0.25}, point_carrier<double>(1e-10),
                                             "planted: scale inverse replaced by the identity"));
  auto h = make_heisenberg_euclidean_norm<Quad>();
  auto a3 = check_A3(h, sample_fiber_triples(h, BoundedSampler{2.0, 50, c.seed}));
  a3.report.note("planted: Heisenberg dilations measured with the Euclidean norm");
  out.reports.push_back(a3.report);
  out.reports.push_back(check_A0(make_euclidean<double>(1, DomainSpec{1.0, true}), BoundedSampler{4.0, 200, c.seed}));
}

}  // namespace

std::vector<SuiteResult> run_suite(const std::string& name, const SuiteConfig& config) {
  if (name == "all") {
    std::vector<SuiteResult> out;
    for (const auto& n : suite_names())
      if (n != "planted")
        for (auto& r : run_suite(n, config)) out.push_back(std::move(r));
    return out;
  }
  if (config.model != "euclidean" && config.model != "heisenberg")
    throw PreconditionError("unknown model '" + config.model + "' (expected euclidean or heisenberg)");
  if (config.dim < 0) throw PreconditionError("dimension must be nonnegative");
  if (config.samples == 0) throw PreconditionError("samples must be positive");
  const bool heis = config.model == "heisenberg";
  SuiteResult out;
  out.name = name + " (" + (heis ? std::string("heisenberg") : "euclidean dim " + std::to_string(config.dim)) + ")";
  if (name == "axioms") {
    finite_axioms(out, config);
    if (heis)
      model_axioms(out, make_heisenberg<double>(), config);
    else
      model_axioms(out, make_euclidean<double>(config.dim), config);
  } else if (name == "irq") {
    finite_irq(out);
    if (heis)
      model_irq(out, make_heisenberg<double>(), config);
    else
      model_irq(out, make_euclidean<double>(config.dim), config);
  } else if (name == "limits") {
    if (heis)
      model_limits(out, make_heisenberg<Quad>(), make_heisenberg<double>(), config);
    else
      model_limits(out, make_euclidean<Quad>(config.dim), make_euclidean<double>(config.dim), config);
  } else if (name == "transport") {
    out.name = name;
    transport_suite(out, config);
  } else if (name == "planted") {
    out.name = name;
    planted_suite(out, config);
  } else {
    throw PreconditionError("unknown suite '" + name + "' (expected axioms, irq, limits, transport, planted or all)");
  }
  return {std::move(out)};
}

}  // namespace ngd
