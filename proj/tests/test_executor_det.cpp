#include <doctest.h>

#include "naive_reference.hpp"
#include "program_fuzz.hpp"
#include "sgvqa/errors.hpp"
#include "sgvqa/executor_det.hpp"
#include "sgvqa/sampler.hpp"

using namespace sgvqa;

namespace {

const Vocabulary& vocab() {
  static const Vocabulary v = Vocabulary::builtin();
  return v;
}

Program chain(std::initializer_list<Operation> ops) {
  Program p;
  p.ops = ops;
  return p;
}

// Hand-built three-object scene: a red school bus, a blue sedan, a red jet.
Scene fixture_scene() {
  Scene s;
  auto add = [&](const std::string& shape, const std::string& color, const std::string& size,
                 const std::string& material, double x, double y) {
    ObjectInstance o;
    o.id = static_cast<int>(s.objects.size());
    o.shape = shape;
    o.category = vocab().category_of(shape);
    o.color = color;
    o.size = size;
    o.material = material;
    o.x = x;
    o.y = y;
    o.radius = vocab().radius_of_size(size);
    for (const auto& name : vocab().parts_of(shape)) {
      PartInstance p;
      p.name = name;
      p.color = color;
      p.material = material;
      o.parts.push_back(p);
    }
    s.objects.push_back(o);
  };
  add("school bus", "red", "large", "metal", 0.0, 0.0);
  add("sedan", "blue", "small", "rubber", 3.0, 2.0);
  add("jet", "red", "large", "metal", -3.0, -2.0);
  s.relationships = derive_relations(s.objects);
  return s;
}

}  // namespace

TEST_CASE("query color of the only bus") {
  const Scene s = fixture_scene();
  const Program p = chain({{"scene", {}, {}},
                           {"filter_shape", {0}, {"school bus"}},
                           {"unique", {1}, {}},
                           {"query_color", {2}, {}}});
  CHECK(execute(p, s, vocab()) == Answer::of_attribute("red"));
}

TEST_CASE("category filter counts member shapes only") {
  const Scene s = fixture_scene();  // sedan is the only car; jet is an airplane
  const Program p = chain({{"scene", {}, {}},
                           {"filter_category", {0}, {"car"}},
                           {"count", {1}, {}}});
  CHECK(execute(p, s, vocab()) == Answer::of_integer(1));
  const Program p2 = chain({{"scene", {}, {}},
                            {"filter_color", {0}, {"red"}},
                            {"count", {1}, {}}});
  CHECK(execute(p2, s, vocab()) == Answer::of_integer(2));
}

TEST_CASE("unique over two red objects raises NonUnique") {
  const Scene s = fixture_scene();
  const Program p = chain({{"scene", {}, {}},
                           {"filter_color", {0}, {"red"}},
                           {"unique", {1}, {}},
                           {"query_shape", {2}, {}}});
  try {
    execute(p, s, vocab());
    FAIL("expected NonUnique");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonUnique);
  }
}

TEST_CASE("query_texture on an untextured scene raises MissingTexture") {
  const Scene s = fixture_scene();
  const Program p = chain({{"scene", {}, {}},
                           {"filter_shape", {0}, {"sedan"}},
                           {"unique", {1}, {}},
                           {"query_texture", {2}, {}}});
  try {
    execute(p, s, vocab());
    FAIL("expected MissingTexture");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingTexture);
  }
}

TEST_CASE("relate reads the stored adjacency") {
  const Scene s = fixture_scene();
  const Program p = chain({{"scene", {}, {}},
                           {"filter_shape", {0}, {"school bus"}},
                           {"unique", {1}, {}},
                           {"relate", {2}, {"right"}},
                           {"count", {3}, {}}});
  CHECK(execute(p, s, vocab()) == Answer::of_integer(1));  // only the sedan is right of the bus
}

TEST_CASE("same_color excludes the anchor") {
  const Scene s = fixture_scene();
  const Program p = chain({{"scene", {}, {}},
                           {"filter_shape", {0}, {"jet"}},
                           {"unique", {1}, {}},
                           {"same_color", {2}, {}},
                           {"count", {3}, {}}});
  CHECK(execute(p, s, vocab()) == Answer::of_integer(1));  // the bus, not the jet itself
}

TEST_CASE("part ops walk the object-part hierarchy both ways") {
  Scene s = fixture_scene();
  // Color one wheel of the sedan green.
  for (auto& part : s.objects[1].parts)
    if (part.name == "front wheel") part.color = "green";
  const Program query_part = chain({{"scene", {}, {}},
                                    {"filter_shape", {0}, {"sedan"}},
                                    {"unique", {1}, {}},
                                    {"object_to_part", {2}, {}},
                                    {"filter_part_name", {3}, {"front wheel"}},
                                    {"unique", {4}, {}},
                                    {"query_color", {5}, {}}});
  CHECK(execute(query_part, s, vocab()) == Answer::of_attribute("green"));

  const Program find_owner = chain({{"scene", {}, {}},
                                    {"object_to_part", {0}, {}},
                                    {"filter_color", {1}, {"green"}},
                                    {"part_to_object", {2}, {}},
                                    {"unique", {3}, {}},
                                    {"query_shape", {4}, {}}});
  CHECK(execute(find_owner, s, vocab()) == Answer::of_attribute("sedan"));
}

TEST_CASE("executor agrees with the naive reference on fuzzed pairs") {
  GenConfig cfg = default_gen_config(vocab());
  cfg.visual = VisualVariant::Hard;  // textures present, so texture ops are legal
  cfg.seed = 31;
  Rng rng(17);
  int executed = 0, errors = 0;
  for (int i = 0; i < 10000; ++i) {
    const Scene scene = sample_scene_with_retries(cfg, vocab(), i % 200);
    const Program prog = fuzz::random_program(vocab(), rng, true);
    naive::Outcome expect = naive::run(prog, scene, vocab());
    try {
      const Answer got = execute(prog, scene, vocab());
      REQUIRE(expect.answer.has_value());
      if (!(got == *expect.answer)) {
        CAPTURE(serialize_program(prog).dump());
        REQUIRE(got == *expect.answer);
      }
      ++executed;
    } catch (const Error& e) {
      // Only the two declared runtime errors may escape.
      REQUIRE((e.kind() == ErrorKind::NonUnique || e.kind() == ErrorKind::MissingTexture));
      CHECK(e.kind() == ErrorKind::NonUnique);  // texture ops are valid on hard scenes
      CHECK(!expect.answer.has_value());
      CHECK(expect.error == "non_unique");
      ++errors;
    }
  }
  CHECK(executed > 0);
  CHECK(errors > 0);  // fuzz hits NonUnique, and nothing else
}

TEST_CASE("execution is pure: same inputs, same outputs") {
  GenConfig cfg = default_gen_config(vocab());
  cfg.seed = 5;
  const Scene scene = sample_scene_with_retries(cfg, vocab(), 3);
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const Program prog = fuzz::random_program(vocab(), rng, false);
    try {
      const Answer a = execute(prog, scene, vocab());
      const Answer b = execute(prog, scene, vocab());
      CHECK(a == b);
    } catch (const Error&) {
    }
  }
}
