#include <cmath>
#include <random>

#include "fixture.hpp"
#include "oracles.hpp"
#include "posyn/expr.hpp"
#include "test_util.hpp"

using namespace posyn;
using namespace posyn::expr;

namespace {

struct Bound {
  Project project = fixture::aircraft();
  NodeLayout self = layoutOf(project, fixture::kBoeing);
  NodeLayout target;
  EvalContext ctx;

  Bound() {
    target.width = 40;
    ctx.model = &project.model;
    ctx.element = fixture::kBoeing;
    ctx.self = &self;
    ctx.targetElement = fixture::kHangar;
    ctx.target = &target;
  }

  Value eval(std::string_view text) { return evaluate(*parse(text), ctx); }
};

template <typename T>
const T& as(const Expr& e) {
  return std::get<T>(e.node);
}

bool numbersAgree(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b)); }

}  // namespace

TEST(Parse, TargetWidthTimesTwo) {
  ExprPtr e = parse("this.target.width * 2");
  const auto& mul = as<Binary>(*e);
  EXPECT_EQ(mul.op, BinaryOp::Mul);
  const auto& width = as<Member>(*mul.lhs);
  EXPECT_EQ(width.name, "width");
  const auto& target = as<Member>(*width.object);
  EXPECT_EQ(target.name, "target");
  EXPECT_EQ(as<Identifier>(*target.object).name, "this");
  EXPECT_EQ(as<NumberLit>(*mul.rhs).value, 2.0);
}

TEST(Parse, SeatsCallChain) {
  ExprPtr e = parse("2 * this.model.getChildren('seats').getValue()");
  const auto& mul = as<Binary>(*e);
  const auto& getValue = as<Call>(*mul.rhs);
  EXPECT_EQ(getValue.name, "getValue");
  EXPECT_TRUE(getValue.args.empty());
  const auto& getChildren = as<Call>(*getValue.receiver);
  EXPECT_EQ(getChildren.name, "getChildren");
  ASSERT_EQ(getChildren.args.size(), 1u);
  EXPECT_EQ(as<StringLit>(*getChildren.args[0]).value, "seats");
  EXPECT_EQ(as<Member>(*getChildren.receiver).name, "model");
}

TEST(Parse, DoubledEqualsIsASyntaxErrorAtTheSecondEquals) {
  try {
    parse("width = = 3");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.position(), 8u);
    EXPECT_FALSE(e.expected().empty());
  }
}

TEST(Parse, BothQuoteStyles) {
  EXPECT_TRUE(structurallyEqual(*parse("getChildren('seats')"), *parse("getChildren(\"seats\")")));
}

TEST(Parse, Precedence) {
  Bound b;
  EXPECT_EQ(b.eval("2+3*4"), Value(14.0));
  EXPECT_EQ(b.eval("-2*3"), Value(-6.0));
  EXPECT_EQ(b.eval("10-4-3"), Value(3.0));
  EXPECT_EQ(b.eval("not 1 < 2 or true and false"), Value(false));
  EXPECT_EQ(b.eval("1 + 1 = 2 and 3 > 2"), Value(true));
  EXPECT_THROW(parse("1 < 2 < 3"), SyntaxError);
}

TEST(Parse, MalformedInputs) {
  for (const char* text : {"", "(", "1 +", "this.", "f(1,", "'open", "1 2", "a..b", "@"}) {
    EXPECT_THROW(parse(text), SyntaxError) << text;
  }
}

TEST(Evaluate, SeatsFormula) {
  Bound b;
  EXPECT_EQ(b.eval("2 * this.model.getChildren('seats').getValue()"), Value(300.0));
}

TEST(Evaluate, TargetWidth) {
  Bound b;
  EXPECT_EQ(b.eval("this.target.width * 2"), Value(80.0));
}

TEST(Evaluate, VertexSizeAliasesPosition) {
  Bound b;
  EXPECT_EQ(b.eval("this.vertexSize.x"), Value(b.self.x));
  EXPECT_EQ(b.eval("this.vertexSize.y"), Value(b.self.y));
}

TEST(Evaluate, Errors) {
  Bound b;
  EXPECT_POSYN_ERROR(b.eval("1/0"), ErrorCode::DivideByZero);
  EXPECT_POSYN_ERROR(b.eval("sqrt(-1)"), ErrorCode::NumericDomain);
  EXPECT_POSYN_ERROR(b.eval("log2(0)"), ErrorCode::NumericDomain);
  EXPECT_POSYN_ERROR(b.eval("1 < 'a'"), ErrorCode::TypeError);
  EXPECT_POSYN_ERROR(b.eval("1 = true"), ErrorCode::TypeError);
  EXPECT_POSYN_ERROR(b.eval("speed + 1"), ErrorCode::NameResolution);
  EXPECT_POSYN_ERROR(b.eval("this.depth"), ErrorCode::NameResolution);
  EXPECT_POSYN_ERROR(b.eval("this.model.getChildren('wings').getValue()"), ErrorCode::NameResolution);
  EXPECT_POSYN_ERROR(b.eval("this.lastOutput"), ErrorCode::NameResolution);
  EXPECT_POSYN_ERROR(b.eval("this.model.getChildren('seats').setValue(3)"), ErrorCode::IllegalSetValue);
  EXPECT_POSYN_ERROR(b.eval("pow(10, 400)"), ErrorCode::NumericDomain);
}

TEST(Evaluate, LastOutputAndStrings) {
  Bound b;
  b.ctx.lastOutput = Value(7.0);
  EXPECT_EQ(b.eval("this.lastOutput > 5"), Value(true));
  EXPECT_EQ(b.eval("'ab' + \"c\" = 'abc'"), Value(true));
  EXPECT_EQ(b.eval("this.model.getChildren('seats').getValue() != 150"), Value(false));
}

TEST(Execute, SetValueWritesThroughTheModel) {
  Bound b;
  ExprPtr e = parse("this.model.getChildren('seats').setValue(round(301 / 2))");
  Model copy = b.project.model;
  Execution dry = execute(*e, b.ctx, nullptr);
  EXPECT_EQ(dry.output, Value(151.0));
  EXPECT_FALSE(dry.delta);
  EXPECT_EQ(b.project.model, copy);
  Execution run = execute(*e, b.ctx, &b.project.model);
  ASSERT_TRUE(run.delta);
  EXPECT_EQ(run.delta->newValue, SlotValue(std::int64_t{151}));
}

TEST(Execute, ReadSetsAreRecorded) {
  Bound b;
  std::set<SlotKey> reads;
  b.ctx.reads = &reads;
  b.eval("2 * this.model.getChildren('seats').getValue() + this.model.getChildren('length').getValue()");
  EXPECT_EQ(reads, (std::set<SlotKey>{{"o2", "seats"}, {"o2", "length"}}));
}

TEST(Analysis, SetValueAndSelfReads) {
  EXPECT_TRUE(isTopLevelSetValue(*parse("this.model.getChildren('seats').setValue(1)")));
  EXPECT_FALSE(isTopLevelSetValue(*parse("1 + this.model.getChildren('seats').setValue(1)")));
  EXPECT_TRUE(containsSetValue(*parse("1 + this.model.getChildren('seats').setValue(1)")));
  EXPECT_TRUE(readsOwnProperty(*parse("this.vertexSize.x + 1"), LayoutProperty::X));
  EXPECT_TRUE(readsOwnProperty(*parse("this.x"), LayoutProperty::VertexX));
  EXPECT_FALSE(readsOwnProperty(*parse("this.target.x"), LayoutProperty::X));
  EXPECT_FALSE(readsOwnProperty(*parse("this.width"), LayoutProperty::Height));
}

TEST(Complete, Examples) {
  Project p = fixture::aircraft();
  CompletionContext ctx{p.metamodel.get(), "Airplane", "Hangar"};
  EXPECT_EQ(complete("this.mo", ctx), (std::vector<std::string>{"model"}));
  EXPECT_EQ(complete("this.model.getChildren('", ctx),
            (std::vector<std::string>{"maxAltitude", "height", "length", "seats"}));
  EXPECT_EQ(complete("this.model.getChildren('se", ctx), (std::vector<std::string>{"seats"}));
  EXPECT_EQ(complete("", ctx), (std::vector<std::string>{"this", "true", "false", "round", "floor", "ceil", "abs",
                                                         "min", "max", "log2", "pow", "sqrt"}));
  EXPECT_EQ(complete("this.", ctx), (std::vector<std::string>{"x", "y", "width", "height", "rotation", "vertexSize",
                                                              "model", "target", "lastOutput"}));
  EXPECT_EQ(complete("this.model.", ctx), (std::vector<std::string>{"getChildren", "getValue"}));
  EXPECT_EQ(complete("this.model.getChildren(", ctx),
            (std::vector<std::string>{"'maxAltitude'", "'height'", "'length'", "'seats'"}));
  EXPECT_EQ(complete("this.model.getChildren('seats').", ctx), (std::vector<std::string>{"getValue", "setValue"}));
  EXPECT_EQ(complete("this.vertexSize.", ctx), (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(complete("this.target.model.getChildren('", ctx), (std::vector<std::string>{"name", "airplanes"}));
  EXPECT_EQ(complete("2 * ", ctx).front(), "this");
  EXPECT_EQ(complete("ro", ctx), (std::vector<std::string>{"round"}));
  EXPECT_TRUE(complete("this.@", ctx).empty());
  EXPECT_TRUE(complete("42", ctx).empty());
}

// Reference evaluator agreement -------------------------------------------------

TEST(ExprProperty, AgreesWithReferenceEvaluator) {
  std::mt19937_64 rng(20240611);
  Project p = fixture::aircraft();
  std::uniform_real_distribution<double> coord(-50, 50);
  int errors = 0;
  for (int i = 0; i < 10000; ++i) {
    oracle::RPtr tree = oracle::randomExpr(rng, 5);
    ASSERT_LE(oracle::depth(*tree), 5);
    const std::string text = oracle::printMinimal(*tree);
    NodeLayout self = layoutOf(p, fixture::kBoeing);
    self.x = std::round(coord(rng));
    self.y = coord(rng);
    self.width = std::abs(coord(rng)) + 1;
    EvalContext ctx;
    ctx.model = &p.model;
    ctx.element = fixture::kBoeing;
    ctx.self = &self;

    oracle::ROutcome expected = oracle::referenceEval(*tree, {self, 150.0});
    ExprPtr ast = parse(text);
    ASSERT_TRUE(structurallyEqual(*parse(print(*ast)), *ast)) << text;
    try {
      Value got = evaluate(*ast, ctx);
      ASSERT_TRUE(expected.value) << text << " evaluated to " << describe(got) << ", reference raised "
                                  << toString(*expected.error);
      if (const auto* d = std::get_if<double>(&*expected.value)) {
        ASSERT_TRUE(std::holds_alternative<double>(got)) << text;
        ASSERT_TRUE(numbersAgree(std::get<double>(got), *d)) << text << ": " << std::get<double>(got) << " vs " << *d;
      } else if (const auto* b = std::get_if<bool>(&*expected.value)) {
        ASSERT_EQ(got, Value(*b)) << text;
      } else {
        ASSERT_EQ(got, Value(std::get<std::string>(*expected.value))) << text;
      }
    } catch (const Error& e) {
      ++errors;
      ASSERT_TRUE(expected.error) << text << " raised " << e.what();
      ASSERT_EQ(toString(e.code()), toString(*expected.error)) << text << ": " << e.what();
    }
  }
  EXPECT_GT(errors, 100);
  EXPECT_LT(errors, 9000);
}

TEST(ExprProperty, SetValueFreeEvaluationIsSideEffectFree) {
  std::mt19937_64 rng(99);
  Project p = fixture::aircraft();
  const Model before = p.model;
  NodeLayout self = layoutOf(p, fixture::kBoeing);
  const NodeLayout selfBefore = self;
  EvalContext ctx;
  ctx.model = &p.model;
  ctx.element = fixture::kBoeing;
  ctx.self = &self;
  for (int i = 0; i < 2000; ++i) {
    auto tree = oracle::randomExpr(rng, 4);
    try {
      execute(*parse(oracle::printMinimal(*tree)), ctx, &p.model);
    } catch (const Error&) {
    }
  }
  EXPECT_EQ(p.model, before);
  EXPECT_EQ(self, selfBefore);
}

TEST(ExprProperty, DeterministicEvaluation) {
  std::mt19937_64 rng(5);
  Bound b;
  for (int i = 0; i < 500; ++i) {
    auto ast = parse(oracle::printMinimal(*oracle::randomExpr(rng, 5)));
    std::optional<Value> first;
    std::string firstError;
    for (int k = 0; k < 2; ++k) {
      try {
        Value v = evaluate(*ast, b.ctx);
        if (k == 0) first = v; else EXPECT_EQ(v, *first);
      } catch (const Error& e) {
        if (k == 0) firstError = e.what(); else EXPECT_EQ(e.what(), firstError);
      }
    }
  }
}
