#include <doctest.h>

#include "program_fuzz.hpp"
#include "sgvqa/errors.hpp"
#include "sgvqa/program.hpp"
#include "sgvqa/sampler.hpp"

using namespace sgvqa;

namespace {

const Vocabulary& vocab() {
  static const Vocabulary v = Vocabulary::builtin();
  return v;
}

Json rec(const std::string& f, std::vector<int> inputs = {},
         std::vector<std::string> values = {}) {
  Json r;
  r["function"] = f;
  r["inputs"] = inputs;
  r["value_inputs"] = values;
  return r;
}

}  // namespace

TEST_CASE("a query program parses with an attribute sink") {
  Json records = Json::array(
      {rec("scene"), rec("filter_shape", {0}, {"truck"}), rec("unique", {1}),
       rec("query_color", {2})});
  const Program p = parse_program(records, vocab());
  CHECK(p.size() == 4);
  const auto types = typecheck(p, vocab());
  CHECK(types.sink == 3);
  CHECK(types.sink_type() == ValueType::AttrColor);
}

TEST_CASE("a minimal counting program parses with an integer sink") {
  const Program p = parse_program(Json::array({rec("scene"), rec("count", {0})}), vocab());
  CHECK(p.size() == 2);
  CHECK(typecheck(p, vocab()).sink_type() == ValueType::Integer);
}

TEST_CASE("forward references are parse errors") {
  Json records = Json::array({rec("scene"), rec("unique", {0}), rec("relate", {5}, {"left"}),
                              rec("count", {2})});
  CHECK_THROWS_WITH_AS(parse_program(records, vocab()),
                       doctest::Contains("not an earlier operation"), Error);
}

TEST_CASE("unknown functions are parse errors naming the op") {
  Json records = Json::array({rec("scene"), rec("select_shape", {0}, {"truck"})});
  CHECK_THROWS_WITH_AS(parse_program(records, vocab()), doctest::Contains("op 1"), Error);
}

TEST_CASE("query on a set without unique is a type error") {
  Json records = Json::array({rec("scene"), rec("query_color", {0})});
  CHECK_THROWS_AS(parse_program(records, vocab()), Error);
}

TEST_CASE("part_to_object rejects an object input") {
  Json records = Json::array(
      {rec("scene"), rec("unique", {0}), rec("part_to_object", {1}), rec("count", {2})});
  CHECK_THROWS_AS(parse_program(records, vocab()), Error);
}

TEST_CASE("integer comparisons over two counts typecheck") {
  Json records = Json::array({rec("scene"), rec("count", {0}), rec("scene"),
                              rec("filter_color", {2}, {"red"}), rec("count", {3}),
                              rec("equal_integer", {1, 4})});
  const Program p = parse_program(records, vocab());
  CHECK(typecheck(p, vocab()).sink_type() == ValueType::Boolean);
}

TEST_CASE("multi-sink programs are rejected") {
  Json records = Json::array({rec("scene"), rec("count", {0}), rec("scene"), rec("exist", {2})});
  CHECK_THROWS_WITH_AS(parse_program(records, vocab()), doctest::Contains("more than one sink"),
                       Error);
}

TEST_CASE("unknown literals are rejected with the axis named") {
  Json records =
      Json::array({rec("scene"), rec("filter_color", {0}, {"vermilion"}), rec("count", {1})});
  CHECK_THROWS_WITH_AS(parse_program(records, vocab()), doctest::Contains("unknown color"), Error);
  Json records2 =
      Json::array({rec("scene"), rec("unique", {0}), rec("relate", {1}, {"above"})});
  CHECK_THROWS_AS(parse_program(records2, vocab()), Error);
}

TEST_CASE("arity violations are caught") {
  CHECK_THROWS_AS(parse_program(Json::array({rec("scene"), rec("unique", {0}, {"x"})}), vocab()),
                  Error);
  CHECK_THROWS_AS(parse_program(Json::array({rec("scene"), rec("filter_color", {0})}), vocab()),
                  Error);
}

TEST_CASE("parse and serialize are mutual inverses") {
  Rng rng(99);
  for (int i = 0; i < 500; ++i) {
    const Program p = fuzz::random_program(vocab(), rng, true);
    const Json j = serialize_program(p);
    const Program back = parse_program(j, vocab());
    CHECK(back == p);
    CHECK(serialize_program(back) == j);
  }
}

TEST_CASE("fuzzed programs typecheck and their sinks are answer-typed") {
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    const Program p = fuzz::random_program(vocab(), rng, i % 2 == 0);
    const auto types = typecheck(p, vocab());
    const ValueType st = types.sink_type();
    CHECK((st == ValueType::Integer || st == ValueType::Boolean || is_attribute_type(st)));
  }
}
