#pragma once

#include <string>
#include <utility>
#include <vector>

#include "icl/scenario.hpp"
#include "icl/vocab.hpp"

namespace icl {

/// Ordered pairs (a, b), a != b, over {0..|V|-1}, split so both sides cover
/// every token in first position. Training data draws from S1, prompts from S2.
struct PairPartition {
    int vocab_size = 0;
    std::vector<std::pair<int, int>> s1, s2;
    std::vector<std::vector<int>> partners1, partners2;  // partners1[a] = {b : (a,b) in S1}

    bool in_s1(int a, int b) const;
};

PairPartition partition_pairs(int vocab_size, std::uint64_t seed);

struct Corpus {
    std::vector<std::vector<int>> sentences;
    ScenarioSpec spec;
    Vocabulary vocab;

    int n_sentences() const { return static_cast<int>(sentences.size()); }
};

Corpus gen_single_relationship(const ScenarioSpec& spec, int n_sentences);
Corpus gen_dual_connected(const ScenarioSpec& spec, int n_sentences);
Corpus gen_dual_disconnected(const ScenarioSpec& spec, int n_sentences);
Corpus gen_single_pattern(const ScenarioSpec& spec, const PairPartition& part, int n_sentences);
Corpus gen_dual_pattern(const ScenarioSpec& spec, const PairPartition& part, int n_sentences);
std::pair<Corpus, Corpus> gen_triple_repeat(const ScenarioSpec& spec, int n_sentences,
                                            SplitMode split);
Corpus gen_failed_repeating(const ScenarioSpec& spec, const PairPartition& part,
                            int n_sentences);
Corpus gen_failed_fixed_location(const ScenarioSpec& spec, int n_sentences);

/// Structural checks for every scenario (pattern positions, pair counts,
/// noise placement, S1 membership where a partition applies). Throws on the
/// first violation.
void validate_corpus(const Corpus& corpus, const PairPartition* part = nullptr);

// Text format: header line `# scenario=<kind> seed=<seed> ...`, then one
// sentence per line as space-separated token names.
void save_corpus(const Corpus& corpus, const std::string& path);
Corpus load_corpus(const std::string& path);

// Lines `S1 a b` / `S2 a b` (1-based token indices).
void save_partition(const PairPartition& part, const std::string& path);
PairPartition load_partition(const std::string& path);

}  // namespace icl
