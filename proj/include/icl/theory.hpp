#pragma once

#include <span>
#include <string>
#include <vector>

#include "icl/cbow.hpp"
#include "icl/corpus.hpp"

namespace icl::theory {

/// Prompt-length threshold of the relationship tasks. `bound` evaluates the
/// stated closed form; `exact_bound` is recomputed from the exact
/// least-squares optimum (class scores are linear in the example count, so
/// the crossover is sharp). The two disagree for the finite-L single-pair
/// case; see the exact_* fields for the minimizer-faithful numbers.
struct ThresholdReport {
    std::string scenario;
    int K = 0, L = 0, S = 0;
    double bound = 0.0;        // stated closed form
    double limit_bound = 0.0;  // L -> infinity: K(S-1)^2/(S-2)^2
    int max_ell = 0;           // largest l >= 1 with 2l+1 < bound (0 if none)
    std::vector<bool> success;  // stated-bound per-l flags, l = 1..success.size()
    double exact_bound = 0.0;  // 2l+1 crossover of the exact optimum's argmax
    int exact_max_ell = 0;
};

ThresholdReport thm1_threshold(int K, int L, int S);

/// Two pairs per sentence, L -> infinity variant.
ThresholdReport thm1_two_pair_threshold(int K, int S);

/// Argmax of the exact closed-form similarity on a relationship prompt with
/// `ell` examples, computed from score classes (works at symbolic L).
/// two_pair selects the two-pairs-per-sentence data model.
bool thm1_matrix_predicts(int K, double L, int S, int ell, bool two_pair = false);

/// d_i^T d_j - e_i^T d_j (i != j) under the task-selection model; positive
/// means the prompted relation wins.
double thm2_margin(int K, int L, int S);

/// Closed-form inverse classes of (S-2)B + C for the single-relationship
/// model, via the general q expressions; reassembles to the identity.
struct InverseBlocks {
    double delta = 0.0;
    double q1 = 0, q2 = 0, q3 = 0, q4 = 0, q5 = 0, q6 = 0;
    double reassembly_error = 0.0;  // || q-blocks * ((S-2)B + C) - I ||_max
};

InverseBlocks single_rel_inverse_blocks(int K, int L, int S);

/// Numeric inverse classes for the task-selection model plus the residuals of
/// its four defining linear equations.
struct DualInverseBlocks {
    double q[11] = {};  // q[1]..q[10]
    double structure_error = 0.0;  // max spread within an entry class
    double equation_error = 0.0;   // worst residual of the four equations
};

DualInverseBlocks dual_connected_inverse_blocks(int K, int L, int S);

struct ConstructionParams {
    double a = 0.0;
    double b = 0.0;  // defaults to a^2 when negative
    int vocab_size = 20;
};

struct ConstructionLoss {
    double loss = 0.0;
    double alpha1 = 0.0, alpha2 = 0.0, alpha3 = 0.0;
};

/// Cross-entropy of predicting the first token again under the explicit
/// position-aware attention construction (log-sum-exp stabilized).
ConstructionLoss construction_loss(const ConstructionParams& params);

// ---- optimal-rule oracles ---------------------------------------------------
// Explicit decision rules attaining the minimum possible loss; distributions
// are over the full scenario vocabulary.

std::vector<double> oracle_one_noisy(std::span<const int> prompt, const Vocabulary& vocab,
                                     const PairPartition& part);

std::vector<double> oracle_block_noisy(std::span<const int> prompt, const Vocabulary& vocab,
                                       const PairPartition& part);

/// Per-position rule for the repeating-blocks corpus; `prefix` may stop at any
/// position. The ICL prompt surface below restricts to the abb-prompt shape.
std::vector<double> repeating_rule(std::span<const int> prefix, const Vocabulary& vocab,
                                   const PairPartition& part);

std::vector<double> oracle_failed_repeating(std::span<const int> prompt, int n_blocks,
                                            const Vocabulary& vocab, const PairPartition& part);

/// Per-position rule for the fixed-location corpus.
std::vector<double> fixed_location_rule(std::span<const int> prefix, int half_gap,
                                        const Vocabulary& vocab);

std::vector<double> oracle_failed_fixed_location(std::span<const int> prompt, int half_gap,
                                                 const Vocabulary& vocab);

// ---- brute force -------------------------------------------------------------
// Exhaustive micro-instance machinery: every legal sentence with its
// probability; the CE-minimizing prediction for a prefix is the exact
// conditional of the next token.

struct WeightedSentences {
    std::vector<std::vector<int>> sentences;
    std::vector<double> probs;
};

WeightedSentences enumerate_single_pattern(const Vocabulary& vocab, const PairPartition& part,
                                           NoiseMode noise);
WeightedSentences enumerate_failed_repeating(const Vocabulary& vocab, const PairPartition& part,
                                             int n_blocks);
WeightedSentences enumerate_fixed_location(const Vocabulary& vocab, int half_gap);

/// Exact next-token conditional given a prefix (empty result if the prefix has
/// zero probability).
std::vector<double> exact_conditional(const WeightedSentences& data,
                                      std::span<const int> prefix, int vocab_size);

double total_variation(std::span<const double> p, std::span<const double> q);

}  // namespace icl::theory
