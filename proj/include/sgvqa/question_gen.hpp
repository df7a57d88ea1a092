#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sgvqa/executor_det.hpp"
#include "sgvqa/rng.hpp"
#include "sgvqa/scene.hpp"
#include "sgvqa/templates.hpp"

namespace sgvqa {

/// Question redundancy variants: rd- strips every removable filter and
/// relate clause, rd keeps random over-specification, rd+ saturates every
/// referent with its full attribute set plus a relate clause.
enum class Redundancy { Minus, Default, Plus };
const char* redundancy_name(Redundancy r);
Redundancy redundancy_from_name(const std::string& name);

struct QuestionRecord {
  int scene_id = 0;
  std::string text;
  Program program;
  Answer answer;
  std::string template_id;
  Family family = Family::Query;
  Redundancy redundancy = Redundancy::Default;
};

struct RedundantSlot {
  int op_index = -1;
  bool is_relate = false;

  bool operator==(const RedundantSlot&) const = default;
};

/// A filter value or relate clause is redundant iff deleting it leaves
/// every surviving unique selection a singleton with the same referent.
/// Only elements whose forward paths all terminate in a unique are
/// candidates: filters feeding count/exist carry meaning, not reference.
std::vector<RedundantSlot> redundancy_audit(const Program& program, const Scene& scene,
                                            const Vocabulary& vocab);

/// Deletes redundant slots until the audit is empty. Idempotent; preserves
/// the executed answer.
Program strip_redundancy(const Program& program, const Scene& scene, const Vocabulary& vocab);

/// Gives every referent its referent's full attribute set (minus the axis
/// the question asks about) and, for scene-rooted object referents, one
/// relate clause anchored at another uniquely identifiable object when one
/// exists. Answer-preserving.
Program saturate_redundancy(const Program& program, const Scene& scene, const Vocabulary& vocab,
                            Rng& rng);

/// The axes a saturated chain must carry for this referent, given the
/// query axes its unique feeds. Exposed so tests and the acceptance suite
/// check completeness against the same rule.
std::vector<std::string> required_saturation_values(const Program& program, int unique_op,
                                                    const Scene& scene, const Vocabulary& vocab);

/// Deterministic surface realization: matches the program against the
/// template skeleton and substitutes the description slots.
std::string realize_text(const Program& program, const Template& tmpl, const Vocabulary& vocab);

/// Instantiates one template on a scene under the redundancy policy.
/// Returns nullopt when the scene cannot ground the template (no-fit).
std::optional<QuestionRecord> instantiate(const Template& tmpl, const Scene& scene,
                                          Redundancy redundancy, const Vocabulary& vocab,
                                          Rng& rng);

struct QuestionCounts {
  int object_based = 10;
  int part_based = 10;
};

/// Family-balanced question generation with retry-on-no-fit and duplicate
/// suppression. Throws TemplateExhausted when a scene cannot fill the
/// requested counts.
std::vector<QuestionRecord> generate_for_scene(const Scene& scene,
                                               const std::vector<Template>& templates,
                                               QuestionCounts counts, Redundancy redundancy,
                                               const Vocabulary& vocab, Rng& rng);

Json question_to_json(const QuestionRecord& q, int question_index);
Json questions_file_json(const std::vector<QuestionRecord>& questions,
                         const Json& info_extra = Json::object());
std::vector<QuestionRecord> questions_from_file(const std::string& path,
                                                const Vocabulary& vocab);

}  // namespace sgvqa
