#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "icl/error.hpp"
#include "icl/rng.hpp"

namespace icl {

enum class ScenarioKind {
    SingleRel,
    DualConnected,
    DualDisconnected,
    SinglePattern,
    DualPattern,
    FailedRepeating,
    FailedFixedLocation,
    CountryTemplate,
    CountryFixedTemplate,
    TripleRepeat,
};

enum class FillerBalance { Balanced, Imbalanced, Extreme };
enum class NoiseMode { None, One, Block };
enum class SplitMode { Both, Either };

std::string scenario_name(ScenarioKind k);
ScenarioKind scenario_from_name(const std::string& name);
std::string balance_name(FillerBalance b);
FillerBalance balance_from_name(const std::string& name);
std::string noise_name(NoiseMode n);
NoiseMode noise_from_name(const std::string& name);

/// Pair-count mixture (p0, p1, p2): probability of a sentence holding exactly
/// k relation pairs.
struct Mixture {
    double p0 = 0.0, p1 = 1.0, p2 = 0.0;

    void validate() const {
        require(p0 >= 0 && p1 >= 0 && p2 >= 0, "mixture: probabilities must be nonnegative");
        require(std::abs(p0 + p1 + p2 - 1.0) < 1e-9, "mixture must sum to 1");
    }
    int sample(Rng& rng) const {
        const double u = rng.uniform();
        if (u < p0) return 0;
        if (u < p0 + p1) return 1;
        return 2;
    }
    std::string to_string() const;
};

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::SingleRel;
    int S = 8;            // sentence length for relationship scenarios
    int K = 10;           // relation pair count
    int L = 20;           // filler count
    Mixture mix;
    bool corrupted = false;
    FillerBalance balance = FillerBalance::Balanced;
    bool contaminated = false;
    double contamination_rate = 0.1;  // q_contam
    double imbalance_weight = 3.0;    // w
    NoiseMode noise = NoiseMode::None;
    int vocab_size = 20;   // |V| for pattern / triple-repeat / fixed-location scenarios
    int n_noise = 20;      // |N|
    int n_blocks = 3;      // N of the repeating-block scenario
    int half_gap = 2;      // k of the fixed-location scenario (2k middle words)
    int n_pairs = 10;      // I of the fixed-location scenario
    std::uint64_t seed = 0;

    /// Nominal emitted sentence length for fixed-length scenarios.
    int sentence_length() const;
};

}  // namespace icl
