#include "icl/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "icl/country.hpp"

namespace icl {

// ---- scenario names -------------------------------------------------------

std::string scenario_name(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::SingleRel: return "single-rel";
        case ScenarioKind::DualConnected: return "dual-connected";
        case ScenarioKind::DualDisconnected: return "dual-disconnected";
        case ScenarioKind::SinglePattern: return "single-pattern";
        case ScenarioKind::DualPattern: return "dual-pattern";
        case ScenarioKind::FailedRepeating: return "failed-repeating";
        case ScenarioKind::FailedFixedLocation: return "failed-fixed-location";
        case ScenarioKind::CountryTemplate: return "country-two-rel";
        case ScenarioKind::CountryFixedTemplate: return "country-fixed";
        case ScenarioKind::TripleRepeat: return "triple-repeat";
    }
    return "?";
}

ScenarioKind scenario_from_name(const std::string& name) {
    for (ScenarioKind k :
         {ScenarioKind::SingleRel, ScenarioKind::DualConnected, ScenarioKind::DualDisconnected,
          ScenarioKind::SinglePattern, ScenarioKind::DualPattern, ScenarioKind::FailedRepeating,
          ScenarioKind::FailedFixedLocation, ScenarioKind::CountryTemplate,
          ScenarioKind::CountryFixedTemplate, ScenarioKind::TripleRepeat})
        if (scenario_name(k) == name) return k;
    throw InvalidArgument("unknown scenario: " + name);
}

std::string balance_name(FillerBalance b) {
    switch (b) {
        case FillerBalance::Balanced: return "balanced";
        case FillerBalance::Imbalanced: return "imbalanced";
        case FillerBalance::Extreme: return "extreme";
    }
    return "?";
}

FillerBalance balance_from_name(const std::string& name) {
    for (FillerBalance b :
         {FillerBalance::Balanced, FillerBalance::Imbalanced, FillerBalance::Extreme})
        if (balance_name(b) == name) return b;
    throw InvalidArgument("unknown balance variant: " + name);
}

std::string noise_name(NoiseMode n) {
    switch (n) {
        case NoiseMode::None: return "none";
        case NoiseMode::One: return "one";
        case NoiseMode::Block: return "block";
    }
    return "?";
}

NoiseMode noise_from_name(const std::string& name) {
    for (NoiseMode n : {NoiseMode::None, NoiseMode::One, NoiseMode::Block})
        if (noise_name(n) == name) return n;
    throw InvalidArgument("unknown noise mode: " + name);
}

std::string Mixture::to_string() const {
    std::ostringstream os;
    os << p0 << "," << p1 << "," << p2;
    return os.str();
}

int ScenarioSpec::sentence_length() const {
    switch (kind) {
        case ScenarioKind::SingleRel:
        case ScenarioKind::DualConnected:
        case ScenarioKind::DualDisconnected:
            return S;
        case ScenarioKind::SinglePattern:
            return 6 + (noise == NoiseMode::None ? 0 : noise == NoiseMode::One ? 1 : 3);
        case ScenarioKind::DualPattern:
            return 8 + (noise == NoiseMode::Block ? 4 : 0);
        case ScenarioKind::FailedRepeating:
            return 3 * n_blocks;
        case ScenarioKind::FailedFixedLocation:
            return 2 * half_gap + 2;
        case ScenarioKind::TripleRepeat:
            return 4;
        default:
            return -1;  // country corpora are per-category length
    }
}

// ---- pair partition -------------------------------------------------------

bool PairPartition::in_s1(int a, int b) const {
    const auto& p = partners1[static_cast<std::size_t>(a)];
    return std::find(p.begin(), p.end(), b) != p.end();
}

PairPartition partition_pairs(int vocab_size, std::uint64_t seed) {
    require(vocab_size >= 2, "partition_pairs: vocab_size must be at least 2");
    Rng rng(Rng::derive(seed, 0x9a17));
    PairPartition part;
    part.vocab_size = vocab_size;
    part.partners1.resize(static_cast<std::size_t>(vocab_size));
    part.partners2.resize(static_cast<std::size_t>(vocab_size));
    for (int a = 0; a < vocab_size; ++a) {
        std::vector<int> bs;
        bs.reserve(static_cast<std::size_t>(vocab_size) - 1);
        for (int b = 0; b < vocab_size; ++b)
            if (b != a) bs.push_back(b);
        rng.shuffle(bs);
        // Both sides keep at least one pair per first token (possible once
        // vocab_size >= 3; at exactly 2 each token owns a single pair).
        const int n = static_cast<int>(bs.size());
        const int cut = n == 1 ? (a % 2 == 0 ? 1 : 0) : rng.uniform_int(1, n - 1);
        for (int i = 0; i < n; ++i) {
            const int b = bs[static_cast<std::size_t>(i)];
            if (i < cut) {
                part.s1.emplace_back(a, b);
                part.partners1[static_cast<std::size_t>(a)].push_back(b);
            } else {
                part.s2.emplace_back(a, b);
                part.partners2[static_cast<std::size_t>(a)].push_back(b);
            }
        }
    }
    return part;
}

// ---- generator helpers ----------------------------------------------------

namespace {

// Filler availability groups for the dual-relation variants. Thirds of the
// filler range lean toward (or are reserved for) one sentence type.
std::vector<double> filler_weights(const ScenarioSpec& spec, bool first_type) {
    const int L = spec.L;
    std::vector<double> w(static_cast<std::size_t>(L), 1.0);
    if (spec.balance == FillerBalance::Balanced) return w;
    require(L % 3 == 0, "imbalanced/extreme variants require L divisible by 3");
    const int third = L / 3;
    for (int j = 0; j < L; ++j) {
        const int group = j / third;  // 0: first-type leaning, 1: second-type leaning, 2: shared
        double& wj = w[static_cast<std::size_t>(j)];
        if (spec.balance == FillerBalance::Imbalanced) {
            if (group == 0) wj = first_type ? spec.imbalance_weight : 1.0;
            if (group == 1) wj = first_type ? 1.0 : spec.imbalance_weight;
        } else {  // Extreme
            if (group == 0) wj = first_type ? 1.0 : 0.0;
            if (group == 1) wj = first_type ? 0.0 : 1.0;
        }
    }
    return w;
}

struct RelTokens {
    std::vector<int> tokens;
    // positions filled after shuffling
};

// One relationship sentence: k pairs of (first_role, second_role) plus
// distinct fillers, uniformly shuffled.
std::vector<int> make_relation_sentence(const ScenarioSpec& spec, const Vocabulary& vocab,
                                        Role first_role, Role second_role, bool first_type,
                                        Rng& rng) {
    const int k = spec.mix.sample(rng);
    require(2 * k <= spec.S, "sentence length too small for pair count");
    const int n_fillers = spec.S - 2 * k;

    std::vector<int> tokens;
    tokens.reserve(static_cast<std::size_t>(spec.S));
    const std::vector<int> pair_idx = rng.sample_distinct(spec.K, k);
    for (int idx : pair_idx) {
        tokens.push_back(vocab.id(first_role, idx));
        tokens.push_back(vocab.id(second_role, idx));
    }

    std::vector<double> weights = filler_weights(spec, first_type);
    int available = 0;
    for (double w : weights)
        if (w > 0) ++available;
    require(n_fillers <= available, "not enough eligible fillers for sentence");
    for (int j : rng.weighted_sample_distinct(weights, n_fillers))
        tokens.push_back(vocab.id(Role::Filler, j));

    rng.shuffle(tokens);
    return tokens;
}

// 25% chance the second member of a pair is replaced by a fresh filler, 25%
// the first member; the substitute takes the replaced token's slot.
void corrupt_pairs(const ScenarioSpec& spec, const Vocabulary& vocab, Role first_role,
                   Role second_role, std::vector<int>& sentence, Rng& rng) {
    std::unordered_set<int> present(sentence.begin(), sentence.end());
    // Collect pair indices present with both members.
    for (int idx = 0; idx < spec.K; ++idx) {
        const int cid = vocab.id(first_role, idx);
        const int did = vocab.id(second_role, idx);
        if (!present.count(cid) || !present.count(did)) continue;
        const double u = rng.uniform();
        if (u < 0.5) continue;            // keep intact
        const int victim = u < 0.75 ? did : cid;  // drop d -> (c, r); drop c -> (d, r)
        int fresh = -1;
        do {
            fresh = vocab.id(Role::Filler, rng.uniform_int(0, spec.L - 1));
        } while (present.count(fresh));
        for (int& t : sentence)
            if (t == victim) t = fresh;
        present.erase(victim);
        present.insert(fresh);
    }
}

std::vector<int> pick_pair(const PairPartition& part, Rng& rng) {
    const auto& pr = part.s1[rng.index(part.s1.size())];
    return {pr.first, pr.second};
}

}  // namespace

// ---- generators -----------------------------------------------------------

Corpus gen_single_relationship(const ScenarioSpec& spec, int n_sentences) {
    require(spec.kind == ScenarioKind::SingleRel, "gen_single_relationship: wrong kind");
    require(n_sentences >= 1, "n_sentences must be positive");
    spec.mix.validate();
    require(spec.S >= 3, "single-relationship sentences need S >= 3");
    require(spec.K >= (spec.mix.p2 > 0 ? 2 : 1), "K too small for mixture");
    const int max_fillers = spec.S - 2 * (spec.mix.p0 > 0 ? 0 : spec.mix.p1 > 0 ? 1 : 2);
    require(max_fillers <= spec.L, "not enough fillers: need L >= S - 2*k_min");

    Corpus corpus;
    corpus.spec = spec;
    corpus.vocab = Vocabulary::relationship(spec.K, spec.L);
    Rng rng(spec.seed);
    corpus.sentences.reserve(static_cast<std::size_t>(n_sentences));
    for (int s = 0; s < n_sentences; ++s) {
        std::vector<int> sentence =
            make_relation_sentence(spec, corpus.vocab, Role::C, Role::D, true, rng);
        if (spec.corrupted) corrupt_pairs(spec, corpus.vocab, Role::C, Role::D, sentence, rng);
        corpus.sentences.push_back(std::move(sentence));
    }
    return corpus;
}

namespace {

Corpus gen_dual(const ScenarioSpec& spec, int n_sentences, bool disconnected) {
    require(n_sentences >= 1, "n_sentences must be positive");
    spec.mix.validate();
    require(spec.S >= 3, "dual-relationship sentences need S >= 3");
    require(spec.K >= (spec.mix.p2 > 0 ? 2 : 1), "K too small for mixture");

    Corpus corpus;
    corpus.spec = spec;
    corpus.vocab = Vocabulary::relationship(spec.K, spec.L, true, disconnected);
    Rng rng(spec.seed);
    corpus.sentences.reserve(static_cast<std::size_t>(n_sentences));
    const Role first_a = Role::C;
    const Role second_a = Role::D;
    const Role first_b = disconnected ? Role::E : Role::C;
    const Role second_b = disconnected ? Role::F : Role::E;
    const int n_opposite = disconnected ? 2 * spec.K : 0;

    for (int s = 0; s < n_sentences; ++s) {
        const bool type_a = rng.bernoulli(0.5);
        std::vector<int> sentence = make_relation_sentence(
            spec, corpus.vocab, type_a ? first_a : first_b, type_a ? second_a : second_b,
            type_a, rng);
        if (spec.contaminated && spec.contamination_rate > 0.0) {
            // Each filler slot independently swapped for a token of the
            // opposite relationship's vocabulary.
            for (int& t : sentence) {
                if (corpus.vocab.role(t) != Role::Filler) continue;
                if (!rng.bernoulli(spec.contamination_rate)) continue;
                const int pick = rng.uniform_int(0, n_opposite - 1);
                const Role role = pick < spec.K ? (type_a ? Role::E : Role::C)
                                                : (type_a ? Role::F : Role::D);
                t = corpus.vocab.id(role, pick % spec.K);
            }
        }
        corpus.sentences.push_back(std::move(sentence));
    }
    return corpus;
}

}  // namespace

Corpus gen_dual_connected(const ScenarioSpec& spec, int n_sentences) {
    require(spec.kind == ScenarioKind::DualConnected, "gen_dual_connected: wrong kind");
    return gen_dual(spec, n_sentences, false);
}

Corpus gen_dual_disconnected(const ScenarioSpec& spec, int n_sentences) {
    require(spec.kind == ScenarioKind::DualDisconnected, "gen_dual_disconnected: wrong kind");
    return gen_dual(spec, n_sentences, true);
}

Corpus gen_single_pattern(const ScenarioSpec& spec, const PairPartition& part,
                          int n_sentences) {
    require(spec.kind == ScenarioKind::SinglePattern, "gen_single_pattern: wrong kind");
    require(n_sentences >= 1, "n_sentences must be positive");
    require(part.vocab_size == spec.vocab_size, "partition does not cover the vocabulary");
    require(spec.noise == NoiseMode::None || spec.n_noise >= 1, "noisy variant needs noise tokens");

    Corpus corpus;
    corpus.spec = spec;
    corpus.vocab = Vocabulary::pattern(spec.vocab_size, spec.n_noise);
    Rng rng(spec.seed);
    const auto& vids = corpus.vocab.ids(Role::Generic);
    const auto& nids = corpus.vocab.ids(Role::Noise);

    for (int s = 0; s < n_sentences; ++s) {
        const auto ab = pick_pair(part, rng);
        const auto cd = pick_pair(part, rng);
        std::vector<int> sent = {vids[ab[0]], vids[ab[1]], vids[ab[0]],
                                 vids[cd[0]], vids[cd[1]], vids[cd[0]]};
        if (spec.noise == NoiseMode::One) {
            // anywhere except the last position
            const int pos = rng.uniform_int(0, 5);
            sent.insert(sent.begin() + pos, nids[rng.index(nids.size())]);
        } else if (spec.noise == NoiseMode::Block) {
            const int offset = 3 * rng.uniform_int(0, 2);
            std::vector<int> block = {nids[rng.index(nids.size())], nids[rng.index(nids.size())],
                                      nids[rng.index(nids.size())]};
            sent.insert(sent.begin() + offset, block.begin(), block.end());
        }
        corpus.sentences.push_back(std::move(sent));
    }
    return corpus;
}

Corpus gen_dual_pattern(const ScenarioSpec& spec, const PairPartition& part, int n_sentences) {
    require(spec.kind == ScenarioKind::DualPattern, "gen_dual_pattern: wrong kind");
    require(n_sentences >= 1, "n_sentences must be positive");
    require(part.vocab_size == spec.vocab_size, "partition does not cover the vocabulary");
    require(spec.vocab_size >= 3, "dual-pattern needs at least three generic tokens");

    Corpus corpus;
    corpus.spec = spec;
    corpus.vocab = Vocabulary::pattern(spec.vocab_size, spec.n_noise);
    Rng rng(spec.seed);
    const auto& vids = corpus.vocab.ids(Role::Generic);
    const auto& nids = corpus.vocab.ids(Role::Noise);

    auto triple = [&](std::vector<int>& out) {
        const auto ab = pick_pair(part, rng);
        int c;
        do {
            c = rng.uniform_int(0, spec.vocab_size - 1);
        } while (c == ab[0] || c == ab[1]);
        out = {ab[0], ab[1], c};
    };

    for (int s = 0; s < n_sentences; ++s) {
        std::vector<int> t1, t2;
        triple(t1);
        triple(t2);
        const int pattern = rng.uniform_int(1, 2);  // repeat first vs repeat second
        std::vector<int> sent = {vids[t1[0]], vids[t1[1]], vids[t1[2]],
                                 vids[pattern == 1 ? t1[0] : t1[1]],
                                 vids[t2[0]], vids[t2[1]], vids[t2[2]],
                                 vids[pattern == 1 ? t2[0] : t2[1]]};
        if (spec.noise == NoiseMode::Block) {
            const int offset = 4 * rng.uniform_int(0, 2);
            std::vector<int> block;
            for (int i = 0; i < 4; ++i) block.push_back(nids[rng.index(nids.size())]);
            sent.insert(sent.begin() + offset, block.begin(), block.end());
        }
        corpus.sentences.push_back(std::move(sent));
    }
    return corpus;
}

std::pair<Corpus, Corpus> gen_triple_repeat(const ScenarioSpec& spec, int n_sentences,
                                            SplitMode split) {
    require(spec.kind == ScenarioKind::TripleRepeat, "gen_triple_repeat: wrong kind");
    require(n_sentences >= 1, "n_sentences must be positive");
    const int V = spec.vocab_size;
    require(V >= 3, "triple-repeat needs at least three tokens");
    require(split == SplitMode::Both || V >= 4, "Either split needs |V| >= 4");

    Rng rng(spec.seed);
    // Pools of admissible (x1, x2, x3) triples per first token, disjoint
    // between train and test.
    std::vector<std::vector<std::pair<int, int>>> train_pool(static_cast<std::size_t>(V));
    std::vector<std::vector<std::pair<int, int>>> test_pool(static_cast<std::size_t>(V));
    std::vector<int> train_firsts, test_firsts;
    for (int a = 0; a < V; ++a) {
        std::vector<std::pair<int, int>> rest;
        for (int b = 0; b < V; ++b) {
            if (b == a) continue;
            for (int c = 0; c < V; ++c)
                if (c != a && c != b) rest.emplace_back(b, c);
        }
        rng.shuffle(rest);
        if (split == SplitMode::Both) {
            const std::size_t half = rest.size() / 2;
            train_pool[static_cast<std::size_t>(a)].assign(rest.begin(), rest.begin() + half);
            test_pool[static_cast<std::size_t>(a)].assign(rest.begin() + half, rest.end());
            train_firsts.push_back(a);
            test_firsts.push_back(a);
        } else {
            if (a < V / 2) {
                train_pool[static_cast<std::size_t>(a)] = std::move(rest);
                train_firsts.push_back(a);
            } else {
                test_pool[static_cast<std::size_t>(a)] = std::move(rest);
                test_firsts.push_back(a);
            }
        }
    }

    auto sample_corpus = [&](const std::vector<int>& firsts,
                             const std::vector<std::vector<std::pair<int, int>>>& pool,
                             int n) {
        Corpus corpus;
        corpus.spec = spec;
        corpus.vocab = Vocabulary::pattern(V, 0);
        const auto& vids = corpus.vocab.ids(Role::Generic);
        corpus.sentences.reserve(static_cast<std::size_t>(n));
        for (int s = 0; s < n; ++s) {
            // first token round-robin keeps coverage structural
            const int a = firsts[static_cast<std::size_t>(s) % firsts.size()];
            const auto& options = pool[static_cast<std::size_t>(a)];
            const auto bc = options[rng.index(options.size())];
            corpus.sentences.push_back(
                {vids[a], vids[bc.first], vids[bc.second], vids[a]});
        }
        return corpus;
    };

    Corpus train = sample_corpus(train_firsts, train_pool, n_sentences);
    Corpus test = sample_corpus(test_firsts, test_pool, n_sentences);
    return {std::move(train), std::move(test)};
}

Corpus gen_failed_repeating(const ScenarioSpec& spec, const PairPartition& part,
                            int n_sentences) {
    require(spec.kind == ScenarioKind::FailedRepeating, "gen_failed_repeating: wrong kind");
    require(n_sentences >= 1, "n_sentences must be positive");
    require(spec.n_blocks >= 1, "need at least one block");
    require(part.vocab_size == spec.vocab_size, "partition does not cover the vocabulary");

    Corpus corpus;
    corpus.spec = spec;
    corpus.vocab = Vocabulary::pattern(spec.vocab_size, 0);
    Rng rng(spec.seed);
    const auto& vids = corpus.vocab.ids(Role::Generic);
    for (int s = 0; s < n_sentences; ++s) {
        std::vector<int> sent;
        sent.reserve(static_cast<std::size_t>(3 * spec.n_blocks));
        for (int blk = 0; blk < spec.n_blocks; ++blk) {
            const auto ab = pick_pair(part, rng);
            sent.push_back(vids[ab[0]]);
            sent.push_back(vids[ab[1]]);
            sent.push_back(vids[ab[0]]);
        }
        corpus.sentences.push_back(std::move(sent));
    }
    return corpus;
}

Corpus gen_failed_fixed_location(const ScenarioSpec& spec, int n_sentences) {
    require(spec.kind == ScenarioKind::FailedFixedLocation,
            "gen_failed_fixed_location: wrong kind");
    require(n_sentences >= 1, "n_sentences must be positive");
    require(spec.half_gap >= 1, "k must be at least 1");
    require(spec.n_pairs >= 1, "need at least one (a, b) pair");

    Corpus corpus;
    corpus.spec = spec;
    corpus.vocab = Vocabulary::fixed_location(spec.n_pairs, spec.vocab_size);
    Rng rng(spec.seed);
    for (int s = 0; s < n_sentences; ++s) {
        const int i = rng.uniform_int(0, spec.n_pairs - 1);
        std::vector<int> sent;
        sent.reserve(static_cast<std::size_t>(2 * spec.half_gap + 2));
        sent.push_back(corpus.vocab.id(Role::C, i));
        for (int j = 0; j < 2 * spec.half_gap; ++j)
            sent.push_back(corpus.vocab.id(Role::Generic, rng.uniform_int(0, spec.vocab_size - 1)));
        sent.push_back(corpus.vocab.id(Role::D, i));
        corpus.sentences.push_back(std::move(sent));
    }
    return corpus;
}

// ---- validation -----------------------------------------------------------

namespace {

void check(bool ok, const std::string& msg) {
    if (!ok) throw InvalidArgument("corpus validation failed: " + msg);
}

void validate_relation(const Corpus& corpus, Role first, Role second, Role alt_first,
                       Role alt_second, bool dual) {
    const ScenarioSpec& spec = corpus.spec;
    for (const auto& sent : corpus.sentences) {
        check(static_cast<int>(sent.size()) == spec.S, "sentence length != S");
        int pairs_a = 0, pairs_b = 0;
        std::set<int> fillers;
        std::set<int> seen(sent.begin(), sent.end());
        for (int idx = 0; idx < spec.K; ++idx) {
            if (seen.count(corpus.vocab.id(first, idx)) &&
                seen.count(corpus.vocab.id(second, idx)))
                ++pairs_a;
            if (dual && seen.count(corpus.vocab.id(alt_first, idx)) &&
                seen.count(corpus.vocab.id(alt_second, idx)))
                ++pairs_b;
        }
        for (int t : sent)
            if (corpus.vocab.role(t) == Role::Filler) check(fillers.insert(t).second, "repeated filler");
        if (!spec.corrupted && !spec.contaminated) {
            const int pairs = pairs_a + pairs_b;
            check(pairs <= 2, "more than two pairs");
            if (dual) check(pairs_a == 0 || pairs_b == 0, "both sentence types present");
            check(spec.mix.p0 > 0 || pairs >= 1, "zero pairs under p0 = 0");
            check(spec.mix.p1 > 0 || pairs != 1, "one pair under p1 = 0");
            check(spec.mix.p2 > 0 || pairs != 2, "two pairs under p2 = 0");
        }
    }
}

void validate_single_pattern(const Corpus& corpus, const PairPartition* part) {
    const ScenarioSpec& spec = corpus.spec;
    for (const auto& sent : corpus.sentences) {
        check(static_cast<int>(sent.size()) == spec.sentence_length(), "bad sentence length");
        // strip noise, remembering placement
        std::vector<int> core;
        std::vector<int> noise_pos;
        for (std::size_t p = 0; p < sent.size(); ++p) {
            if (corpus.vocab.role(sent[p]) == Role::Noise)
                noise_pos.push_back(static_cast<int>(p));
            else
                core.push_back(corpus.vocab.role_index(sent[p]));
        }
        check(core.size() == 6, "pattern core must have six tokens");
        check(core[0] == core[2] && core[3] == core[5], "aba/cdc repeats broken");
        check(core[0] != core[1] && core[3] != core[4], "pattern pair members equal");
        if (part) {
            check(part->in_s1(core[0], core[1]), "training pair outside S1");
            check(part->in_s1(core[3], core[4]), "training pair outside S1");
        }
        if (spec.noise == NoiseMode::None) check(noise_pos.empty(), "noise in clean corpus");
        if (spec.noise == NoiseMode::One) {
            check(noise_pos.size() == 1, "one-noisy needs exactly one noise token");
            check(noise_pos[0] != 6, "noise token may not take the last position");
        }
        if (spec.noise == NoiseMode::Block) {
            check(noise_pos.size() == 3, "block-noisy needs three noise tokens");
            check(noise_pos[0] + 1 == noise_pos[1] && noise_pos[1] + 1 == noise_pos[2],
                  "noise block must be contiguous");
            check(noise_pos[0] == 0 || noise_pos[0] == 3 || noise_pos[0] == 6,
                  "noise block must sit on a block boundary");
        }
    }
}

void validate_dual_pattern(const Corpus& corpus, const PairPartition* part) {
    const ScenarioSpec& spec = corpus.spec;
    for (const auto& sent : corpus.sentences) {
        check(static_cast<int>(sent.size()) == spec.sentence_length(), "bad sentence length");
        std::vector<int> core;
        std::vector<int> noise_pos;
        for (std::size_t p = 0; p < sent.size(); ++p) {
            if (corpus.vocab.role(sent[p]) == Role::Noise)
                noise_pos.push_back(static_cast<int>(p));
            else
                core.push_back(corpus.vocab.role_index(sent[p]));
        }
        check(core.size() == 8, "dual-pattern core must have eight tokens");
        const bool p1 = core[3] == core[0] && core[7] == core[4];
        const bool p2 = core[3] == core[1] && core[7] == core[5];
        check(p1 || p2, "neither repeat pattern holds");
        check(core[0] != core[1] && core[1] != core[2] && core[0] != core[2],
              "first triple not distinct");
        check(core[4] != core[5] && core[5] != core[6] && core[4] != core[6],
              "second triple not distinct");
        if (part) {
            check(part->in_s1(core[0], core[1]), "training pair outside S1");
            check(part->in_s1(core[4], core[5]), "training pair outside S1");
        }
        if (spec.noise == NoiseMode::Block) {
            check(noise_pos.size() == 4, "block-noisy needs four noise tokens");
            for (int i = 1; i < 4; ++i) check(noise_pos[i] == noise_pos[0] + i, "block not contiguous");
            check(noise_pos[0] % 4 == 0, "noise block must sit on a block boundary");
        } else {
            check(noise_pos.empty(), "noise in clean corpus");
        }
    }
}

}  // namespace

void validate_corpus(const Corpus& corpus, const PairPartition* part) {
    const ScenarioSpec& spec = corpus.spec;
    for (const auto& sent : corpus.sentences)
        for (int t : sent)
            check(t >= 0 && t < corpus.vocab.size(), "token id out of range");

    switch (spec.kind) {
        case ScenarioKind::SingleRel:
            validate_relation(corpus, Role::C, Role::D, Role::C, Role::D, false);
            break;
        case ScenarioKind::DualConnected:
            validate_relation(corpus, Role::C, Role::D, Role::C, Role::E, true);
            break;
        case ScenarioKind::DualDisconnected:
            validate_relation(corpus, Role::C, Role::D, Role::E, Role::F, true);
            if (!spec.contaminated) {
                for (const auto& sent : corpus.sentences) {
                    bool has_d = false, has_f = false;
                    for (int t : sent) {
                        has_d |= corpus.vocab.role(t) == Role::D;
                        has_f |= corpus.vocab.role(t) == Role::F;
                    }
                    check(!(has_d && has_f), "clean dual-disconnected sentence mixes d and f");
                }
            }
            break;
        case ScenarioKind::SinglePattern:
            validate_single_pattern(corpus, part);
            break;
        case ScenarioKind::DualPattern:
            validate_dual_pattern(corpus, part);
            break;
        case ScenarioKind::FailedRepeating:
            for (const auto& sent : corpus.sentences) {
                check(static_cast<int>(sent.size()) == 3 * spec.n_blocks, "bad sentence length");
                for (int b = 0; b < spec.n_blocks; ++b) {
                    check(sent[3 * b] == sent[3 * b + 2], "aba block repeat broken");
                    check(sent[3 * b] != sent[3 * b + 1], "aba block members equal");
                    if (part)
                        check(part->in_s1(corpus.vocab.role_index(sent[3 * b]),
                                          corpus.vocab.role_index(sent[3 * b + 1])),
                              "training pair outside S1");
                }
            }
            break;
        case ScenarioKind::FailedFixedLocation:
            for (const auto& sent : corpus.sentences) {
                check(static_cast<int>(sent.size()) == 2 * spec.half_gap + 2,
                      "bad sentence length");
                check(corpus.vocab.role(sent.front()) == Role::C, "sentence must start with a_i");
                check(corpus.vocab.role(sent.back()) == Role::D, "sentence must end with b_i");
                check(corpus.vocab.role_index(sent.front()) ==
                          corpus.vocab.role_index(sent.back()),
                      "pair indices mismatch");
                for (std::size_t p = 1; p + 1 < sent.size(); ++p)
                    check(corpus.vocab.role(sent[p]) == Role::Generic, "middle must be generic");
            }
            break;
        case ScenarioKind::TripleRepeat:
            for (const auto& sent : corpus.sentences) {
                check(sent.size() == 4, "triple-repeat sentences have four tokens");
                check(sent[3] == sent[0], "fourth token must equal the first");
                check(sent[0] != sent[1] && sent[1] != sent[2] && sent[0] != sent[2],
                      "first three tokens must be distinct");
            }
            break;
        case ScenarioKind::CountryTemplate:
        case ScenarioKind::CountryFixedTemplate:
            validate_country_corpus(corpus);
            break;
    }
}

// ---- text I/O ---------------------------------------------------------------

void save_corpus(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    const ScenarioSpec& spec = corpus.spec;
    out << "# scenario=" << scenario_name(spec.kind) << " seed=" << spec.seed;
    out << " S=" << spec.S << " K=" << spec.K << " L=" << spec.L;
    out << " mix=" << spec.mix.to_string();
    out << " corrupted=" << (spec.corrupted ? 1 : 0);
    out << " balance=" << balance_name(spec.balance);
    out << " contaminated=" << (spec.contaminated ? 1 : 0);
    out << " q_contam=" << spec.contamination_rate;
    out << " noise=" << noise_name(spec.noise);
    out << " V=" << spec.vocab_size << " N=" << spec.n_noise;
    out << " blocks=" << spec.n_blocks << " k=" << spec.half_gap << " I=" << spec.n_pairs;
    out << "\n";
    for (const auto& sent : corpus.sentences) {
        for (std::size_t i = 0; i < sent.size(); ++i) {
            if (i) out << ' ';
            out << corpus.vocab.name(sent[i]);
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

Corpus load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::string header;
    std::getline(in, header);
    require(header.rfind("# ", 0) == 0, "corpus file missing header line");

    ScenarioSpec spec;
    std::istringstream hs(header.substr(2));
    std::string kv;
    while (hs >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        if (key == "scenario") spec.kind = scenario_from_name(val);
        else if (key == "seed") spec.seed = std::stoull(val);
        else if (key == "S") spec.S = std::stoi(val);
        else if (key == "K") spec.K = std::stoi(val);
        else if (key == "L") spec.L = std::stoi(val);
        else if (key == "mix") {
            std::istringstream ms(val);
            char comma;
            ms >> spec.mix.p0 >> comma >> spec.mix.p1 >> comma >> spec.mix.p2;
        } else if (key == "corrupted") spec.corrupted = val == "1";
        else if (key == "balance") spec.balance = balance_from_name(val);
        else if (key == "contaminated") spec.contaminated = val == "1";
        else if (key == "q_contam") spec.contamination_rate = std::stod(val);
        else if (key == "noise") spec.noise = noise_from_name(val);
        else if (key == "V") spec.vocab_size = std::stoi(val);
        else if (key == "N") spec.n_noise = std::stoi(val);
        else if (key == "blocks") spec.n_blocks = std::stoi(val);
        else if (key == "k") spec.half_gap = std::stoi(val);
        else if (key == "I") spec.n_pairs = std::stoi(val);
    }

    std::vector<std::vector<std::string>> raw;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string tok;
        while (ls >> tok) toks.push_back(tok);
        raw.push_back(std::move(toks));
    }

    Corpus corpus;
    corpus.spec = spec;
    switch (spec.kind) {
        case ScenarioKind::SingleRel:
            corpus.vocab = Vocabulary::relationship(spec.K, spec.L);
            break;
        case ScenarioKind::DualConnected:
            corpus.vocab = Vocabulary::relationship(spec.K, spec.L, true);
            break;
        case ScenarioKind::DualDisconnected:
            corpus.vocab = Vocabulary::relationship(spec.K, spec.L, true, true);
            break;
        case ScenarioKind::SinglePattern:
        case ScenarioKind::DualPattern:
            corpus.vocab = Vocabulary::pattern(spec.vocab_size, spec.n_noise);
            break;
        case ScenarioKind::FailedRepeating:
        case ScenarioKind::TripleRepeat:
            corpus.vocab = Vocabulary::pattern(spec.vocab_size, 0);
            break;
        case ScenarioKind::FailedFixedLocation:
            corpus.vocab = Vocabulary::fixed_location(spec.n_pairs, spec.vocab_size);
            break;
        case ScenarioKind::CountryTemplate:
        case ScenarioKind::CountryFixedTemplate: {
            std::set<std::string> distinct;
            for (const auto& sent : raw) distinct.insert(sent.begin(), sent.end());
            corpus.vocab = country_vocabulary_from_tokens(
                std::vector<std::string>(distinct.begin(), distinct.end()));
            break;
        }
    }

    corpus.sentences.reserve(raw.size());
    for (const auto& toks : raw) {
        std::vector<int> sent;
        sent.reserve(toks.size());
        for (const auto& tok : toks) {
            const int id = corpus.vocab.find(tok);
            require(id >= 0, "unknown token in corpus file: " + tok);
            sent.push_back(id);
        }
        corpus.sentences.push_back(std::move(sent));
    }
    return corpus;
}

void save_partition(const PairPartition& part, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "# vocab_size=" << part.vocab_size << "\n";
    for (const auto& [a, b] : part.s1) out << "S1 " << a + 1 << ' ' << b + 1 << '\n';
    for (const auto& [a, b] : part.s2) out << "S2 " << a + 1 << ' ' << b + 1 << '\n';
    if (!out) throw IoError("write failed: " + path);
}

PairPartition load_partition(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    PairPartition part;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find("vocab_size=");
            if (eq != std::string::npos)
                part.vocab_size = std::stoi(line.substr(eq + 11));
            continue;
        }
        std::istringstream ls(line);
        std::string side;
        int a, b;
        ls >> side >> a >> b;
        --a;
        --b;
        if (side == "S1")
            part.s1.emplace_back(a, b);
        else if (side == "S2")
            part.s2.emplace_back(a, b);
        else
            throw IoError("bad partition line: " + line);
    }
    part.partners1.assign(static_cast<std::size_t>(part.vocab_size), {});
    part.partners2.assign(static_cast<std::size_t>(part.vocab_size), {});
    for (const auto& [a, b] : part.s1) part.partners1[static_cast<std::size_t>(a)].push_back(b);
    for (const auto& [a, b] : part.s2) part.partners2[static_cast<std::size_t>(a)].push_back(b);
    return part;
}

}  // namespace icl
