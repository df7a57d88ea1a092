#include <doctest.h>

#include <cmath>

#include "sgvqa/perception.hpp"
#include "sgvqa/sampler.hpp"
#include "sgvqa/scene_io.hpp"

using namespace sgvqa;

namespace {

const Vocabulary& vocab() {
  static const Vocabulary v = Vocabulary::builtin();
  return v;
}

Scene sample(VisualVariant visual, int sid, std::uint64_t seed = 0) {
  GenConfig cfg = default_gen_config(vocab());
  cfg.visual = visual;
  cfg.seed = seed;
  return sample_scene_with_retries(cfg, vocab(), sid);
}

}  // namespace

TEST_CASE("zero noise gives the exact one-hot encoding") {
  const Scene s = sample(VisualVariant::Hard, 0);
  NoiseConfig noise;
  const PerceivedScene p = perceive(s, noise, vocab());
  const PerceivedScene expected = one_hot_perceived(s, vocab());
  CHECK(perceived_to_json(p) == perceived_to_json(expected));
}

TEST_CASE("zero-noise perceive then harden is the identity on attributes and relations") {
  for (int sid = 0; sid < 20; ++sid) {
    const Scene s = sample(VisualVariant::Mid, sid, 3);
    const Scene back = harden(perceive(s, NoiseConfig{}, vocab()), vocab());
    REQUIRE(back.objects.size() == s.objects.size());
    for (std::size_t i = 0; i < s.objects.size(); ++i) {
      CHECK(back.objects[i].shape == s.objects[i].shape);
      CHECK(back.objects[i].size == s.objects[i].size);
      CHECK(back.objects[i].color == s.objects[i].color);
      CHECK(back.objects[i].material == s.objects[i].material);
      for (std::size_t pi = 0; pi < s.objects[i].parts.size(); ++pi) {
        CHECK(back.objects[i].parts[pi].color == s.objects[i].parts[pi].color);
        CHECK(back.objects[i].parts[pi].material == s.objects[i].parts[pi].material);
      }
    }
    CHECK(back.relationships == s.relationships);
  }
}

TEST_CASE("smoothing formula: epsilon 0.1 over 8 colors") {
  // With confusion disabled the table is the pure smoothing mixture:
  // truth gets 0.9 + 0.1/8 = 0.9125, every other color 0.0125.
  const Scene s = sample(VisualVariant::Easy, 1);
  NoiseConfig noise;
  noise.epsilon = 0.1;
  noise.confusion_scale = 0.0;
  const PerceivedScene p = perceive(s, noise, vocab());
  for (std::size_t i = 0; i < s.objects.size(); ++i) {
    const int truth = vocab().index_of(Axis::Color, s.objects[i].color);
    for (int c = 0; c < 8; ++c) {
      const double expect = c == truth ? 0.9125 : 0.0125;
      CHECK(p.detections[i].probs.color[c] == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("all tables sum to one under noise") {
  const Scene s = sample(VisualVariant::Hard, 2);
  NoiseConfig noise;
  noise.epsilon = 0.37;
  noise.confusion_scale = 0.5;
  noise.position_sigma = 0.2;
  noise.seed = 9;
  const PerceivedScene p = perceive(s, noise, vocab());
  p.validate(vocab());  // includes the sum-to-one check
  for (const auto& d : p.detections) {
    double sum = 0.0;
    for (double x : d.probs.shape) sum += x;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("miss rate one drops every detection") {
  const Scene s = sample(VisualVariant::Easy, 3);
  NoiseConfig noise;
  noise.miss_rate = 1.0;
  CHECK(perceive(s, noise, vocab()).detections.empty());
}

TEST_CASE("spurious detections carry uniform tables and no parts") {
  const Scene s = sample(VisualVariant::Easy, 4);
  NoiseConfig noise;
  noise.spurious_rate = 3.0;
  noise.seed = 1;
  const PerceivedScene p = perceive(s, noise, vocab());
  REQUIRE(p.detections.size() >= s.objects.size());
  for (std::size_t i = s.objects.size(); i < p.detections.size(); ++i) {
    CHECK(!p.detections[i].gt_object.has_value());
    CHECK(p.detections[i].parts.empty());
    for (double x : p.detections[i].probs.shape)
      CHECK(x == doctest::Approx(1.0 / 21).epsilon(1e-12));
  }
}

TEST_CASE("perceive is reproducible per seed") {
  const Scene s = sample(VisualVariant::Mid, 5);
  NoiseConfig noise;
  noise.epsilon = 0.3;
  noise.position_sigma = 0.4;
  noise.miss_rate = 0.2;
  noise.spurious_rate = 1.0;
  noise.seed = 123;
  const auto a = perceived_to_json(perceive(s, noise, vocab()));
  const auto b = perceived_to_json(perceive(s, noise, vocab()));
  CHECK(a == b);
  noise.seed = 124;
  CHECK(perceived_to_json(perceive(s, noise, vocab())) != a);
}

TEST_CASE("noise decisions nest when sweeping epsilon under one seed") {
  // A table confidently wrong at epsilon e stays wrong for every larger
  // epsilon; this is what makes accuracy sweeps monotone.
  const Scene s = sample(VisualVariant::Easy, 6);
  NoiseConfig lo, hi;
  lo.epsilon = 0.2;
  hi.epsilon = 0.4;
  lo.seed = hi.seed = 5;
  const PerceivedScene plo = perceive(s, lo, vocab());
  const PerceivedScene phi = perceive(s, hi, vocab());
  auto argmax = [](const std::vector<double>& t) {
    return std::max_element(t.begin(), t.end()) - t.begin();
  };
  for (std::size_t i = 0; i < plo.detections.size(); ++i) {
    const int truth = vocab().index_of(Axis::Color, s.objects[i].color);
    if (argmax(plo.detections[i].probs.color) != truth)
      CHECK(argmax(phi.detections[i].probs.color) != truth);
  }
}

TEST_CASE("harden takes the argmax and breaks ties toward the lowest index") {
  PerceivedScene p;
  p.scene_id = 0;
  Detection d;
  d.x = 0.0;
  d.y = 0.0;
  d.probs.shape = std::vector<double>(21, 0.0);
  d.probs.shape[4] = 0.6;
  d.probs.shape[5] = 0.4;
  d.probs.color = {0.4, 0.35, 0.25, 0, 0, 0, 0, 0};
  d.probs.material = {0.5, 0.5};  // tie: rubber (index 0) wins
  d.probs.size = {0.2, 0.8};
  p.detections.push_back(d);
  const Scene s = harden(p, vocab());
  CHECK(s.objects[0].shape == vocab().shapes()[4]);
  CHECK(s.objects[0].color == "gray");
  CHECK(s.objects[0].material == "rubber");
  CHECK(s.objects[0].size == "small");
}

TEST_CASE("perceived scene json round-trips") {
  const Scene s = sample(VisualVariant::Hard, 8);
  NoiseConfig noise;
  noise.epsilon = 0.25;
  noise.seed = 3;
  const PerceivedScene p = perceive(s, noise, vocab());
  const Json j = perceived_to_json(p);
  const PerceivedScene back = perceived_from_json(j, vocab());
  CHECK(perceived_to_json(back) == j);
}
