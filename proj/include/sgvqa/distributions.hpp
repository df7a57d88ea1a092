#pragma once

#include <string>
#include <vector>

#include "sgvqa/rng.hpp"
#include "sgvqa/vocabulary.hpp"

namespace sgvqa {

/// Marginal sampling distribution over one attribute axis, in canonical
/// vocabulary order.
struct ConceptDistribution {
  Axis axis = Axis::Shape;
  std::vector<double> weights;

  void validate() const;
};

/// Distribution variants. bal/slt/long shape the sampling distribution;
/// head/tail/oppo are test-only splits derived from the long variant.
enum class DistVariant { Bal, Slt, Long, Head, Tail, Oppo };

const char* dist_variant_name(DistVariant v);
DistVariant dist_variant_from_name(const std::string& name);

/// Conditional color-given-shape table: rows_[i][j] = P(color j | shape i).
struct CoDistributionMatrix {
  std::vector<std::vector<double>> rows;

  void validate() const;
};

enum class CoVariant { Co0, Co1, Co2 };
const char* co_variant_name(CoVariant v);
CoVariant co_variant_from_name(const std::string& name);

/// weights[i] proportional to a^-i, normalized. a = 1 gives the flat
/// distribution; larger a gives a heavier head.
ConceptDistribution power_law_distribution(double a, int concept_count,
                                           Axis axis = Axis::Shape);

/// Builds the named variant over `axis` for `vocab`. head/tail split the
/// long distribution's support at ceil(K * cut_fraction).
ConceptDistribution variant_distribution(DistVariant kind, Axis axis,
                                         const Vocabulary& vocab,
                                         double cut_fraction = 0.5);

/// Shape-color co-occurrence control. co-0 is flat; co-1 peaks one color
/// per within-category shape position; co-2 peaks one color per category.
/// `peak` is the probability mass on the assigned color.
CoDistributionMatrix co_matrix(CoVariant mode, const Vocabulary& vocab,
                               double peak = 0.8);

/// Inverse-CDF draw; identical seeds give identical sequences.
int sample_concept(const ConceptDistribution& dist, Rng& rng);

/// Draw from one row of a co-distribution matrix.
int sample_row(const std::vector<double>& weights, Rng& rng);

}  // namespace sgvqa
