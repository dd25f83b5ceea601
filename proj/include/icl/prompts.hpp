#pragma once

#include <string>
#include <vector>

#include "icl/corpus.hpp"

namespace icl {

enum class TaskTag {
    CdRelation,
    CeRelation,
    EfRelation,
    SinglePattern,
    DualPattern1,
    DualPattern2,
    FailedRepeating,
    FailedFixedLocation,
    TripleRepeat,
    CountryCapital,
    CountryIoc,
};

std::string task_tag_name(TaskTag t);

struct Prompt {
    std::vector<int> tokens;
    int expected = -1;
    TaskTag tag = TaskTag::CdRelation;
    int n_examples = 0;  // number of in-context examples
};

/// Build one ICL prompt for a scenario. Relationship prompts use l+1 distinct
/// indices; pattern prompts draw every leading pair from S2 so they never
/// collide with training data.
Prompt build_icl_prompt(const ScenarioSpec& spec, const Vocabulary& vocab,
                        const PairPartition* part, int n_examples, TaskTag tag, Rng& rng);

Prompt build_icl_prompt(const ScenarioSpec& spec, const Vocabulary& vocab,
                        const PairPartition* part, int n_examples, TaskTag tag,
                        std::uint64_t seed);

/// Prompt = first three tokens of a held-out test sequence, expected = fourth.
Prompt build_triple_repeat_prompt(const Corpus& test_corpus, Rng& rng);

}  // namespace icl
