#include "icl/prompts.hpp"

namespace icl {

std::string task_tag_name(TaskTag t) {
    switch (t) {
        case TaskTag::CdRelation: return "cd";
        case TaskTag::CeRelation: return "ce";
        case TaskTag::EfRelation: return "ef";
        case TaskTag::SinglePattern: return "single-pattern";
        case TaskTag::DualPattern1: return "pattern-1";
        case TaskTag::DualPattern2: return "pattern-2";
        case TaskTag::FailedRepeating: return "failed-repeating";
        case TaskTag::FailedFixedLocation: return "failed-fixed-location";
        case TaskTag::TripleRepeat: return "triple-repeat";
        case TaskTag::CountryCapital: return "country-capital";
        case TaskTag::CountryIoc: return "country-ioc";
    }
    return "?";
}

namespace {

std::pair<int, int> s2_pair(const PairPartition& part, Rng& rng) {
    return part.s2[rng.index(part.s2.size())];
}

Prompt relation_prompt(const Vocabulary& vocab, Role first, Role second, int ell, TaskTag tag,
                       Rng& rng) {
    const int K = vocab.count(first);
    require(vocab.count(second) == K, "relation roles must have matching counts");
    require(ell + 1 <= K, "not enough distinct indices for prompt");
    const std::vector<int> idx = rng.sample_distinct(K, ell + 1);
    Prompt p;
    p.tag = tag;
    p.n_examples = ell;
    for (int j = 0; j < ell; ++j) {
        p.tokens.push_back(vocab.id(first, idx[static_cast<std::size_t>(j)]));
        p.tokens.push_back(vocab.id(second, idx[static_cast<std::size_t>(j)]));
    }
    p.tokens.push_back(vocab.id(first, idx[static_cast<std::size_t>(ell)]));
    p.expected = vocab.id(second, idx[static_cast<std::size_t>(ell)]);
    return p;
}

}  // namespace

Prompt build_icl_prompt(const ScenarioSpec& spec, const Vocabulary& vocab,
                        const PairPartition* part, int ell, TaskTag tag, Rng& rng) {
    require(ell >= 1, "prompts need at least one in-context example");
    const auto need_part = [&]() -> const PairPartition& {
        require(part != nullptr, "this prompt family needs a pair partition");
        return *part;
    };

    switch (tag) {
        case TaskTag::CdRelation:
            return relation_prompt(vocab, Role::C, Role::D, ell, tag, rng);
        case TaskTag::CeRelation:
            return relation_prompt(vocab, Role::C, Role::E, ell, tag, rng);
        case TaskTag::EfRelation:
            return relation_prompt(vocab, Role::E, Role::F, ell, tag, rng);
        case TaskTag::CountryCapital:
            return relation_prompt(vocab, Role::C, Role::D, ell, tag, rng);
        case TaskTag::CountryIoc:
            return relation_prompt(vocab, Role::C, Role::E, ell, tag, rng);

        case TaskTag::SinglePattern: {
            const PairPartition& pp = need_part();
            const auto& vids = vocab.ids(Role::Generic);
            Prompt p;
            p.tag = tag;
            p.n_examples = 1;
            const auto ab = s2_pair(pp, rng);
            const auto cd = s2_pair(pp, rng);
            if (spec.noise == NoiseMode::Block) {
                const auto ef = s2_pair(pp, rng);
                p.tokens = {vids[ab.first], vids[ab.second], vids[ab.first],
                            vids[cd.first], vids[cd.second], vids[cd.first],
                            vids[ef.first], vids[ef.second]};
                p.expected = vids[ef.first];
                p.n_examples = 2;
            } else {
                p.tokens = {vids[ab.first], vids[ab.second], vids[ab.first],
                            vids[cd.first], vids[cd.second]};
                p.expected = vids[cd.first];
            }
            return p;
        }

        case TaskTag::DualPattern1:
        case TaskTag::DualPattern2: {
            const PairPartition& pp = need_part();
            const auto& vids = vocab.ids(Role::Generic);
            const bool repeat_first = tag == TaskTag::DualPattern1;
            auto triple = [&](int& a, int& b, int& c) {
                const auto ab = s2_pair(pp, rng);
                a = ab.first;
                b = ab.second;
                do {
                    c = rng.uniform_int(0, spec.vocab_size - 1);
                } while (c == a || c == b);
            };
            int a, b, c, d, e, f;
            triple(a, b, c);
            triple(d, e, f);
            Prompt p;
            p.tag = tag;
            if (spec.noise == NoiseMode::Block) {
                int g, h, i;
                triple(g, h, i);
                p.tokens = {vids[a], vids[b], vids[c], vids[repeat_first ? a : b],
                            vids[d], vids[e], vids[f], vids[repeat_first ? d : e],
                            vids[g], vids[h], vids[i]};
                p.expected = vids[repeat_first ? g : h];
                p.n_examples = 2;
            } else {
                p.tokens = {vids[a], vids[b], vids[c], vids[repeat_first ? a : b],
                            vids[d], vids[e], vids[f]};
                p.expected = vids[repeat_first ? d : e];
                p.n_examples = 1;
            }
            return p;
        }

        case TaskTag::FailedRepeating: {
            const PairPartition& pp = need_part();
            require(ell <= spec.n_blocks, "prompt blocks exceed training block count");
            const auto& vids = vocab.ids(Role::Generic);
            Prompt p;
            p.tag = tag;
            p.n_examples = ell - 1;
            for (int blk = 0; blk + 1 < ell; ++blk) {
                const auto xy = s2_pair(pp, rng);
                p.tokens.push_back(vids[xy.first]);
                p.tokens.push_back(vids[xy.second]);
                p.tokens.push_back(vids[xy.second]);  // abb: the pattern the model never saw
            }
            const auto xy = s2_pair(pp, rng);
            p.tokens.push_back(vids[xy.first]);
            p.tokens.push_back(vids[xy.second]);
            p.expected = vids[xy.second];
            return p;
        }

        case TaskTag::FailedFixedLocation: {
            require(ell <= vocab.count(Role::C), "not enough (a, b) pairs for prompt");
            const std::vector<int> idx = rng.sample_distinct(vocab.count(Role::C), ell);
            Prompt p;
            p.tag = tag;
            p.n_examples = ell - 1;
            for (int j = 0; j + 1 < ell; ++j) {
                p.tokens.push_back(vocab.id(Role::C, idx[static_cast<std::size_t>(j)]));
                p.tokens.push_back(vocab.id(Role::D, idx[static_cast<std::size_t>(j)]));
            }
            p.tokens.push_back(vocab.id(Role::C, idx[static_cast<std::size_t>(ell - 1)]));
            p.expected = vocab.id(Role::D, idx[static_cast<std::size_t>(ell - 1)]);
            return p;
        }

        case TaskTag::TripleRepeat:
            throw InvalidArgument("triple-repeat prompts come from the held-out test corpus");
    }
    throw InvalidArgument("unhandled task tag");
}

Prompt build_icl_prompt(const ScenarioSpec& spec, const Vocabulary& vocab,
                        const PairPartition* part, int n_examples, TaskTag tag,
                        std::uint64_t seed) {
    Rng rng(Rng::derive(seed, 0x9b0));
    return build_icl_prompt(spec, vocab, part, n_examples, tag, rng);
}

Prompt build_triple_repeat_prompt(const Corpus& test_corpus, Rng& rng) {
    require(!test_corpus.sentences.empty(), "empty test corpus");
    const auto& sent = test_corpus.sentences[rng.index(test_corpus.sentences.size())];
    Prompt p;
    p.tag = TaskTag::TripleRepeat;
    p.n_examples = 1;
    p.tokens = {sent[0], sent[1], sent[2]};
    p.expected = sent[3];
    return p;
}

}  // namespace icl
