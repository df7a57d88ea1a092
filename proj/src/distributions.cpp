#include "sgvqa/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sgvqa/errors.hpp"

namespace sgvqa {

void ConceptDistribution::validate() const {
  if (weights.empty())
    throw Error(ErrorKind::InvalidParameter, "empty distribution");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw Error(ErrorKind::InvalidParameter, "negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error(ErrorKind::InvalidParameter, "weights do not sum to 1");
}

const char* dist_variant_name(DistVariant v) {
  switch (v) {
    case DistVariant::Bal: return "bal";
    case DistVariant::Slt: return "slt";
    case DistVariant::Long: return "long";
    case DistVariant::Head: return "head";
    case DistVariant::Tail: return "tail";
    case DistVariant::Oppo: return "oppo";
  }
  return "?";
}

DistVariant dist_variant_from_name(const std::string& name) {
  if (name == "bal") return DistVariant::Bal;
  if (name == "slt") return DistVariant::Slt;
  if (name == "long") return DistVariant::Long;
  if (name == "head") return DistVariant::Head;
  if (name == "tail") return DistVariant::Tail;
  if (name == "oppo") return DistVariant::Oppo;
  throw Error(ErrorKind::InvalidParameter, "unknown distribution variant " + name);
}

void CoDistributionMatrix::validate() const {
  if (rows.size() != 21)
    throw Error(ErrorKind::InvalidParameter, "co-distribution matrix must have 21 rows");
  for (const auto& row : rows) {
    if (row.size() != 8)
      throw Error(ErrorKind::InvalidParameter, "co-distribution rows must have 8 entries");
    double sum = 0.0;
    for (double p : row) {
      if (p < 0.0 || p > 1.0)
        throw Error(ErrorKind::InvalidParameter, "matrix entry outside [0,1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw Error(ErrorKind::InvalidParameter, "matrix row does not sum to 1");
  }
}

const char* co_variant_name(CoVariant v) {
  switch (v) {
    case CoVariant::Co0: return "co-0";
    case CoVariant::Co1: return "co-1";
    case CoVariant::Co2: return "co-2";
  }
  return "?";
}

CoVariant co_variant_from_name(const std::string& name) {
  if (name == "co-0") return CoVariant::Co0;
  if (name == "co-1") return CoVariant::Co1;
  if (name == "co-2") return CoVariant::Co2;
  throw Error(ErrorKind::InvalidParameter, "unknown compositionality variant " + name);
}

ConceptDistribution power_law_distribution(double a, int concept_count, Axis axis) {
  if (a <= 0.0)
    throw Error(ErrorKind::InvalidParameter, "power-law parameter must be positive");
  if (concept_count < 1)
    throw Error(ErrorKind::InvalidParameter, "concept count must be at least 1");
  ConceptDistribution dist;
  dist.axis = axis;
  dist.weights.resize(concept_count);
  double sum = 0.0;
  for (int i = 0; i < concept_count; ++i) {
    dist.weights[i] = std::pow(a, -static_cast<double>(i));
    sum += dist.weights[i];
  }
  for (double& w : dist.weights) w /= sum;
  return dist;
}

namespace {

void renormalize(std::vector<double>& weights) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= sum;
}

}  // namespace

ConceptDistribution variant_distribution(DistVariant kind, Axis axis,
                                         const Vocabulary& vocab, double cut_fraction) {
  const int k = vocab.axis_size(axis);
  if (axis != Axis::Shape && axis != Axis::Color && axis != Axis::Material)
    throw Error(ErrorKind::InvalidParameter,
                "distribution control applies to shape, color, material");
  if (cut_fraction <= 0.0 || cut_fraction >= 1.0)
    throw Error(ErrorKind::InvalidParameter, "cut fraction must be in (0,1)");

  switch (kind) {
    case DistVariant::Bal:
      return power_law_distribution(1.0, k, axis);
    case DistVariant::Slt:
      return power_law_distribution(1.3, k, axis);
    case DistVariant::Long:
      return power_law_distribution(2.0, k, axis);
    case DistVariant::Oppo: {
      ConceptDistribution d = power_law_distribution(2.0, k, axis);
      std::reverse(d.weights.begin(), d.weights.end());
      return d;
    }
    case DistVariant::Head: {
      ConceptDistribution d = power_law_distribution(2.0, k, axis);
      const int cut = static_cast<int>(std::ceil(k * cut_fraction));
      for (int i = cut; i < k; ++i) d.weights[i] = 0.0;
      renormalize(d.weights);
      return d;
    }
    case DistVariant::Tail: {
      ConceptDistribution d = power_law_distribution(2.0, k, axis);
      const int cut = static_cast<int>(std::ceil(k * cut_fraction));
      for (int i = 0; i < cut; ++i) d.weights[i] = 0.0;
      if (std::accumulate(d.weights.begin(), d.weights.end(), 0.0) <= 0.0)
        throw Error(ErrorKind::InvalidParameter, "tail split has empty support");
      renormalize(d.weights);
      return d;
    }
  }
  throw Error(ErrorKind::InvalidParameter, "unknown distribution variant");
}

CoDistributionMatrix co_matrix(CoVariant mode, const Vocabulary& vocab, double peak) {
  const int n_shapes = static_cast<int>(vocab.shapes().size());
  const int n_colors = static_cast<int>(vocab.colors().size());
  CoDistributionMatrix m;
  m.rows.assign(n_shapes, std::vector<double>(n_colors, 1.0 / n_colors));
  if (mode == CoVariant::Co0) return m;

  if (peak <= 1.0 / n_colors || peak > 1.0)
    throw Error(ErrorKind::InvalidParameter, "peak must be in (1/8, 1]");
  const double rest = (1.0 - peak) / (n_colors - 1);

  // Position of each shape within its category, in canonical order.
  std::vector<int> within_category(n_shapes);
  std::vector<int> category_counter(vocab.categories().size(), 0);
  for (int i = 0; i < n_shapes; ++i) {
    const int cat = vocab.category_index_of_shape(i);
    within_category[i] = category_counter[cat]++;
  }

  for (int i = 0; i < n_shapes; ++i) {
    const int assigned = (mode == CoVariant::Co1)
                             ? within_category[i] % n_colors
                             : vocab.category_index_of_shape(i) % n_colors;
    for (int j = 0; j < n_colors; ++j) m.rows[i][j] = (j == assigned) ? peak : rest;
  }
  m.validate();
  return m;
}

int sample_row(const std::vector<double>& weights, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return static_cast<int>(i);
  }
  // Guard against accumulated rounding: return the last positive-weight index.
  for (std::size_t i = weights.size(); i-- > 0;)
    if (weights[i] > 0.0) return static_cast<int>(i);
  return static_cast<int>(weights.size()) - 1;
}

int sample_concept(const ConceptDistribution& dist, Rng& rng) {
  return sample_row(dist.weights, rng);
}

}  // namespace sgvqa
