#pragma once

#include <vector>

#include "icl/blockmat.hpp"
#include "icl/corpus.hpp"
#include "icl/matrix.hpp"

namespace icl {

enum class CoocScale { Unscaled, Scaled };  // Scaled carries the S(S-1) factor
enum class CoocSource { Analytic, Empirical };

/// Pair-probability matrix B and center marginals C (diagonal), under one
/// declared scale convention.
struct CooccurrenceModel {
    Matrix<double> B;
    std::vector<double> C;
    int S = 0;
    CoocScale scale = CoocScale::Scaled;
    CoocSource source = CoocSource::Analytic;
};

/// The closed-form probability classes of the analytic models, pre-multiplied
/// by S(S-1).
struct PairProbabilities {
    double p1 = 0, p2 = 0, p3 = 0, p4 = 0;
    int K = 0, L = 0, S = 0;
};

/// Supported exactly for: SingleRel with mix (0,1,0) or (0,0,1), and
/// DualConnected with mix (0,0,1) (the Theorem 2 setting).
PairProbabilities pair_probabilities(const ScenarioSpec& spec);

/// B[i][j] = (count of ordered (center=i, context=j) occurrences) / n_sentences.
CooccurrenceModel empirical_cooccurrence(const Corpus& corpus);

CooccurrenceModel analytic_cooccurrence(const ScenarioSpec& spec);

/// Group layout of the analytic block structure: [c, d, r] or [c, d, e, r].
struct StructuredCooccurrence {
    StructuredMatrix B;
    std::vector<double> C;  // per-group diagonal value
    int S = 0;
};

/// Same model at symbolic group sizes, usable for huge L.
StructuredCooccurrence analytic_cooccurrence_structured(const ScenarioSpec& spec);

/// Switch between the scaled and unscaled conventions.
CooccurrenceModel rescaled(const CooccurrenceModel& model, CoocScale target);

}  // namespace icl
