#pragma once

#include "sgvqa/perceived.hpp"
#include "sgvqa/rng.hpp"

namespace sgvqa {

/// Simulated scene-parser noise applied to ground truth:
///   - per attribute table, the detector's peak label is the truth except
///     with probability epsilon * confusion_scale, when it lands on a
///     uniformly chosen wrong label (a confidently wrong detection);
///   - the table places 1 - epsilon on the peak plus an epsilon/K uniform
///     floor, so confusion_scale = 0 gives pure truth-centered smoothing;
///   - detection centers get Gaussian jitter;
///   - objects are dropped with miss_rate; spurious detections (uniform
///     tables, uniform position, no parts) are added at a Poisson rate.
struct NoiseConfig {
  double epsilon = 0.0;          // smoothing mass in [0, 1)
  double confusion_scale = 0.5;  // peak misplacement probability = scale * epsilon
  double position_sigma = 0.0;   // center jitter, scene units
  double miss_rate = 0.0;
  double spurious_rate = 0.0;    // expected spurious detections per scene
  double plane_half = 5.0;       // spurious position range
  std::uint64_t seed = 0;

  void validate() const;
};

/// Applies the noise model. Deterministic given (scene, noise config):
/// every random decision draws from a stream keyed by (seed, scene id,
/// object, axis), so e.g. sweeping epsilon with a fixed seed perturbs the
/// same tables in a nested fashion.
PerceivedScene perceive(const Scene& scene, const NoiseConfig& noise,
                        const Vocabulary& vocab);

/// Collapses a perceived scene to a crisp one by per-table argmax (ties
/// break to the lowest canonical index); relations are re-derived from the
/// detected centers. This is the deterministic baseline's input.
Scene harden(const PerceivedScene& pscene, const Vocabulary& vocab);

}  // namespace sgvqa
