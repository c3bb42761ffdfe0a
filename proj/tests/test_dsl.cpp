#include "ngd/dsl.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace ngd;
using namespace ngd::dsl;

namespace {

EvalContext euclid(int dim = 1) {
  EvalContext c;
  c.dim = dim;
  return c;
}

EvalContext heis() {
  EvalContext c;
  c.model = "heisenberg";
  return c;
}

double coord(const Value& v, int i) { return static_cast<double>(v.arrow.target(i)); }

}  // namespace

TEST(DslParse, ApplicationWithThreeChildren) {
  const Term t = parse("Delta(0.1, (3,0), (1,0))");
  EXPECT_EQ(t.kind, Term::Kind::app);
  EXPECT_EQ(t.text, "Delta");
  ASSERT_EQ(t.children.size(), 3u);
  EXPECT_EQ(t.children[1].kind, Term::Kind::tuple);
  EXPECT_EQ(t.children[1].span.column, 12);
}

TEST(DslParse, LimitNode) {
  const Term t = parse("lim(eps->0, Delta(eps, g, h))");
  EXPECT_EQ(t.kind, Term::Kind::lim);
  EXPECT_EQ(t.text, "eps");
  ASSERT_EQ(t.children.size(), 1u);
  EXPECT_EQ(t.children[0].children[0].kind, Term::Kind::ident);
}

TEST(DslParse, PrintIsIdempotent) {
  for (const char* src : {"Delta(0.1,(3,0),(1,0))", "lim( eps -> 0 ,Sigma(eps,u,v))",
                          "let(g, (1,-2.5e-1), d(delta(0.5,g)))", "inv(0.5, (1,0), (2,0))",
                          "circ(1,\n x, y)", "-.5"}) {
    const std::string once = print(parse(src));
    EXPECT_EQ(print(parse(once)), once) << src;
  }
  EXPECT_EQ(print(parse("Delta(0.1,(3,0),(1,0))")), "Delta(0.1, (3, 0), (1, 0))");
}

TEST(DslParse, ErrorAtEndOfInput) {
  try {
    parse("Delta(0.1, (3,0)");
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.span().line, 1);
    EXPECT_EQ(e.span().column, 17);
    EXPECT_EQ(e.expected(), (std::vector<std::string>{"','", "')'"}));
    EXPECT_NE(std::string(e.what()).find("end of input"), std::string::npos);
  }
}

TEST(DslParse, ErrorsCarryLineAndColumn) {
  try {
    parse("Delta(0.1,\n  (3,0) (1,0))");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.span().line, 2);
    EXPECT_EQ(e.span().column, 9);
  }
  try {
    parse("Foo(1)");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(e.message().find("unknown operation 'Foo'"), std::string::npos);
    EXPECT_EQ(e.span().column, 1);
  }
  try {
    parse("Delta(1, 2)");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(e.message().find("takes 3 or 4 arguments, got 2"), std::string::npos);
  }
  EXPECT_THROW(parse("lim(eps->1, x)"), ParseError);
  EXPECT_THROW(parse("let((1,2), 3, 4)"), ParseError);
  EXPECT_THROW(parse("1 2"), ParseError);
  EXPECT_THROW(parse("d"), ParseError);
  EXPECT_THROW(parse("(1; 2)"), ParseError);
}

TEST(DslEval, EuclideanApproximateDifference) {
  const auto r = eval("Delta(0.1,(3,0),(1,0))", euclid());
  ASSERT_EQ(r.value.kind, Value::Kind::arrow);
  EXPECT_NEAR(static_cast<double>(r.value.arrow.target(0)), 2.1, 1e-12);
  EXPECT_NEAR(static_cast<double>(r.value.arrow.source(0)), 0.0, 1e-12);
  EXPECT_EQ(format_value(r.value), "(2.1, 0)");
}

TEST(DslEval, PointsInPointsOut) {
  const auto r = eval("Delta(0.1,(3,0),(1,0))", euclid(2));
  ASSERT_EQ(r.value.kind, Value::Kind::point);
  EXPECT_EQ(format_value(r.value), "(2.1, 0)");
}

TEST(DslEval, UnitScaleCircIsRightProjection) {
  auto c = euclid(2);
  c.bindings["x"] = Value::of_point(vec<Quad>({1, 2}), Vec<Quad>::Zero(2));
  c.bindings["y"] = Value::of_point(vec<Quad>({-3, 5}), Vec<Quad>::Zero(2));
  EXPECT_EQ(format_value(eval("circ(1, x, y)", c).value), "(-3, 5)");
  auto h = heis();
  h.bindings["x"] = Value::of_point(vec<Quad>({1, 2, 3}), Vec<Quad>::Zero(3));
  h.bindings["y"] = Value::of_point(vec<Quad>({0.5, -1, 2}), Vec<Quad>::Zero(3));
  EXPECT_EQ(format_value(eval("circ(1, x, y)", h).value), "(0.5, -1, 2)");
}

TEST(DslEval, HeisenbergSumTendsToGroupProduct) {
  auto c = heis();
  c.bindings["u"] = Value::of_point(vec<Quad>({1, 0, 0}), Vec<Quad>::Zero(3));
  c.bindings["v"] = Value::of_point(vec<Quad>({0, 1, 0}), Vec<Quad>::Zero(3));
  const auto r = eval("lim(eps->0, Sigma(eps, (0,0,0), u, v))", c);
  EXPECT_EQ(format_value(r.value), "(1, 1, 0.5)");
  ASSERT_EQ(r.limits.size(), 1u);
  EXPECT_TRUE(r.limits[0].pass) << r.limits[0].summary();
  // The groupoid form composes in the other order.
  EXPECT_EQ(format_value(eval("lim(eps->0, Sigma(eps, u, v))", c).value), "(1, 1, -0.5)");
}

TEST(DslEval, HeisenbergDifferenceIsExactAtEveryScale) {
  auto c = heis();
  for (double e : {0.5, 0.1, 1e-4}) {
    c.bindings["e"] = Value::scalar(Quad(e));
    const auto v = eval("Delta(e, (0,0,0), (1,0,0), (0,1,0))", c).value;
    EXPECT_NEAR(coord(v, 0), e - 1, 1e-15);
    EXPECT_NEAR(coord(v, 1), 1, 1e-15);
    EXPECT_NEAR(coord(v, 2), (e - 1) / 2, 1e-15);
  }
  const auto r = eval("lim(eps->0, Delta(eps, (0,0,0), (1,0,0), (0,1,0)))", c);
  EXPECT_EQ(format_value(r.value), "(-1, 1, -0.5)");
  // Linear in eps, so the quadratic extrapolation lands on the limit itself.
  EXPECT_LT(static_cast<double>(abs(r.value.arrow.target(2) + Quad(0.5))), 1e-30);
  ASSERT_TRUE(r.limits[0].order.has_value());
  EXPECT_NEAR(*r.limits[0].order, 1.0, 0.05);
}

TEST(DslEval, ShortFormsUseTheSourceUnit) {
  auto c = heis();
  c.bindings["e"] = Value::scalar(Quad(0.25));
  for (const char* pair : {"Delta", "Sigma"}) {
    const std::string a = std::string(pair) + "(e, (1,2,3), (-1,0.5,2))";
    const std::string b = std::string(pair) + "(e, (0,0,0), (-1,0.5,2), (1,2,3))";
    EXPECT_EQ(format_value(eval(a, c).value, 30), format_value(eval(b, c).value, 30)) << pair;
  }
  EXPECT_EQ(format_value(eval("inv(e, (1,2,3))", c).value, 30),
            format_value(eval("inv(e, (0,0,0), (1,2,3))", c).value, 30));
  // Arrows based away from the identity keep their source.
  const auto v = eval("Delta(e, (1,2,3,1,1,1), (0,1,0,1,1,1))", c).value;
  ASSERT_EQ(v.kind, Value::Kind::arrow);
  EXPECT_EQ(format_value(Value::of_point(v.arrow.source, v.arrow.source)), "(1, 1, 1)");
}

TEST(DslEval, EuclideanLimitsHaveOrderOne) {
  auto c = euclid();
  const auto s = eval("lim(eps->0, Sigma(eps, (3,0), (1,0)))", c);
  EXPECT_EQ(format_value(s.value), "(4, 0)");
  const auto i = eval("lim(eps->0, inv(eps, (2,0)))", c);
  EXPECT_EQ(format_value(i.value), "(-2, 0)");
  ASSERT_EQ(i.limits.size(), 1u);
  ASSERT_TRUE(i.limits[0].order.has_value());
  EXPECT_NEAR(*i.limits[0].order, 1.0, 0.05);
}

TEST(DslEval, LetAndDistances) {
  auto c = heis();
  EXPECT_EQ(format_value(eval("let(g, (0,0,1), d(g))", c).value), "2");
  EXPECT_EQ(format_value(eval("d((0,0,1), (0,0,0))", c).value), "2");
  EXPECT_EQ(format_value(eval("let(g, (0,0,1), d(delta(0.5, g)))", c).value), "1");
  EXPECT_EQ(format_value(eval("d((3,0), (1,0))", euclid()).value), "2");
  EXPECT_EQ(format_value(eval("lim(eps->0, d(delta(eps, (2,0))))", euclid()).value), "0");
}

TEST(DslEval, TypeErrorsArePositioned) {
  try {
    eval("Delta(0.1, 3, (1,0))", euclid());
    FAIL();
  } catch (const EvalError& e) {
    EXPECT_EQ(e.span().column, 12);
    EXPECT_FALSE(e.domain());
  }
  EXPECT_THROW(eval("delta(0, (1,0))", euclid()), EvalError);
  EXPECT_THROW(eval("delta(0.5, (1,0,0))", euclid()), EvalError);
  EXPECT_THROW(eval("delta(0.5, g)", euclid()), EvalError);
  EXPECT_THROW(eval("Delta(0.5, (1,0), (1,2))", euclid()), EvalError);
}

TEST(DslEval, DomainExitsCarryTheSpan) {
  auto c = euclid();
  c.domain_bound = 1.0;
  try {
    eval("Delta(0.5, (1,0), delta(0.25, (9,0)))", c);
    FAIL();
  } catch (const EvalError& e) {
    EXPECT_TRUE(e.domain());
    EXPECT_EQ(e.span().column, 19);
  }
  const auto r = eval("lim(eps->0, delta(eps, (9,0)))", c);
  EXPECT_EQ(format_value(r.value), "(0, 0)");
  ASSERT_EQ(r.limits.size(), 1u);
  EXPECT_TRUE(r.limits[0].partial.empty());
  EXPECT_EQ(r.limits[0].trace.size(), 3u);  // 1/2, 1/4, 1/8 lie outside dom
  EXPECT_TRUE(r.limits[0].pass);
  try {
    eval("lim(eps->0, delta(eps, (1e9,0)))", c);
    FAIL();
  } catch (const EvalError& e) {
    EXPECT_TRUE(e.domain());
    EXPECT_EQ(e.span().column, 1);
  }
}

TEST(DslEval, DeterministicAndModelChecked) {
  auto c = heis();
  const auto a = eval("lim(eps->0, Sigma(eps, (1,2,3), (0,1,0)))", c);
  const auto b = eval("lim(eps->0, Sigma(eps, (1,2,3), (0,1,0)))", c);
  EXPECT_EQ(format_value(a.value, 30), format_value(b.value, 30));
  c.model = "sphere";
  EXPECT_THROW(eval("1", c), PreconditionError);
}

TEST(DslOps, EveryNameMapsToOneLibraryOperation) {
  std::set<std::string> names, library;
  for (const auto& op : operations()) {
    EXPECT_TRUE(names.insert(op.name).second);
    EXPECT_TRUE(library.insert(op.library_op).second) << op.library_op;
  }
  EXPECT_EQ(library.size(), names.size());
  EXPECT_EQ(names, (std::set<std::string>{"delta", "dilat", "Delta", "Sigma", "inv", "circ", "d", "lim", "let"}));

  // Each (name, arity) parses and evaluates.
  const std::vector<std::string> calls{
      "delta(0.5, (1,0))",        "dilat(0.5, (1,0), (2,0))",         "circ(0.5, (1,0), (2,0))",
      "Delta(0.5, (1,0), (2,0))", "Delta(0.5, (0,0), (1,0), (2,0))",  "Sigma(0.5, (1,0), (2,0))",
      "Sigma(0.5, (0,0), (1,0), (2,0))", "inv(0.5, (1,0))",          "inv(0.5, (0,0), (1,0))",
      "d((1,0))",                 "d((1,0), (2,0))",                  "lim(e->0, delta(e, (1,0)))",
      "let(x, 1, x)"};
  std::set<std::pair<std::string, std::size_t>> seen;
  for (const auto& s : calls) {
    const Term t = parse(s);
    seen.insert({t.text == "e" ? "lim" : t.text, t.kind == Term::Kind::lim ? 1 : t.children.size()});
    EXPECT_NO_THROW(eval(t, euclid())) << s;
  }
  std::size_t pairs = 0;
  for (const auto& op : operations()) pairs += op.arities.size();
  EXPECT_EQ(seen.size(), pairs);
}
