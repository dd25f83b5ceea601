#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "icl/theory.hpp"

using namespace icl;
using namespace icl::theory;

TEST_CASE("threshold report at S=8, K=10, L=20") {
    const ThresholdReport rep = thm1_threshold(10, 20, 8);
    CHECK(rep.bound == doctest::Approx(68600.0 / 7908.0));  // ~8.675
    CHECK(rep.max_ell == 3);
    CHECK(rep.limit_bound == doctest::Approx(10 * 49.0 / 36.0));  // ~13.61
    CHECK(rep.success[0]);
    CHECK(rep.success[2]);
    CHECK(!rep.success[3]);
    // the exact optimum admits strictly shorter prompts here
    CHECK(rep.exact_bound == doctest::Approx(9800.0 / 1500.0));  // 6.533
    CHECK(rep.exact_max_ell == 2);
    CHECK_THROWS_AS(thm1_threshold(2, 20, 8), InvalidArgument);
}

TEST_CASE("threshold/matrix consistency on a grid (exact bound)") {
    for (int S : {3, 4, 5, 8}) {
        for (int K : {S, S + 3, 12}) {
            for (int L : {S, S + 5, 30}) {
                const ThresholdReport rep = thm1_threshold(K, L, S);
                for (int ell = 1; ell <= rep.exact_max_ell + 2 && ell + 1 <= K; ++ell) {
                    const bool predicted = 2 * ell + 1 < rep.exact_bound;
                    INFO("S=", S, " K=", K, " L=", L, " ell=", ell);
                    CHECK(thm1_matrix_predicts(K, L, S, ell) == predicted);
                }
            }
        }
    }
}

TEST_CASE("large-L threshold: success through l=6, failure at l=7 for K=10, S=8") {
    for (int ell = 1; ell <= 7; ++ell)
        CHECK(thm1_matrix_predicts(10, 1e6, 8, ell) == (ell <= 6));
    const ThresholdReport rep = thm1_threshold(10, 1000000, 8);
    CHECK(rep.bound == doctest::Approx(13.611).epsilon(1e-3));
    CHECK(rep.exact_bound == doctest::Approx(13.611).epsilon(1e-3));
    CHECK(rep.exact_max_ell == 6);
}

TEST_CASE("two-pair threshold exceeds the one-pair limit") {
    const ThresholdReport rep = thm1_two_pair_threshold(10, 8);
    CHECK(rep.bound == doctest::Approx(3920.0 / 182.0));  // ~21.54
    CHECK(rep.max_ell == 10);
    CHECK(rep.bound > rep.limit_bound);
    CHECK_THROWS_AS(thm1_two_pair_threshold(2, 8), InvalidArgument);
}

TEST_CASE("task-selection margin is positive on the grid") {
    for (int K : {2, 5, 10})
        for (int L : {2, 5, 10})
            for (int S : {5, 8}) {
                INFO("K=", K, " L=", L, " S=", S);
                CHECK(thm2_margin(K, L, S) > 0.0);
            }
    CHECK_THROWS_AS(thm2_margin(1, 5, 8), InvalidArgument);
    CHECK_THROWS_AS(thm2_margin(5, 5, 4), InvalidArgument);
}

TEST_CASE("margin matches the dense-path difference and is scale-invariant") {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::DualConnected;
    spec.K = 5;
    spec.L = 6;
    spec.S = 8;
    spec.mix = {0, 0, 1};
    const SimilarityMatrix scaled = closed_form_similarity(analytic_cooccurrence(spec));
    const SimilarityMatrix unscaled = closed_form_similarity(
        rescaled(analytic_cooccurrence(spec), CoocScale::Unscaled));
    const int K = spec.K;
    const double dense_margin = scaled.A(K, K + 1) - scaled.A(2 * K, K + 1);
    CHECK(thm2_margin(5, 6, 8) == doctest::Approx(dense_margin).epsilon(1e-9));
    const double unscaled_margin = unscaled.A(K, K + 1) - unscaled.A(2 * K, K + 1);
    CHECK(dense_margin == doctest::Approx(unscaled_margin).epsilon(1e-9));
    CHECK((dense_margin > 0) == (unscaled_margin > 0));
}

TEST_CASE("single-relationship inverse blocks reassemble to the identity") {
    for (auto [K, L, S] : {std::tuple{10, 20, 8}, {3, 3, 3}, {12, 30, 5}}) {
        const InverseBlocks ib = single_rel_inverse_blocks(K, L, S);
        INFO("K=", K, " L=", L, " S=", S);
        CHECK(ib.reassembly_error < 1e-9);
        CHECK(ib.q5 > ib.q3);  // sign condition behind the first argmax check
    }
}

TEST_CASE("dual-connected inverse blocks satisfy the four defining equations") {
    const DualInverseBlocks db = dual_connected_inverse_blocks(5, 6, 8);
    CHECK(db.structure_error < 1e-9);
    CHECK(db.equation_error < 1e-9);
    // the margin reduction: (K-2) q6 + q5 > (K-2) q8 + q7
    CHECK(3 * db.q[6] + db.q[5] > 3 * db.q[8] + db.q[7]);
    CHECK(db.q[8] > db.q[6]);
}

TEST_CASE("construction loss: uniform at a=0, tiny at a=8, monotone in between") {
    const ConstructionLoss at0 = construction_loss({0.0, 0.0, 20});
    CHECK(at0.loss == doctest::Approx(std::log(20.0)));

    const ConstructionLoss at8 = construction_loss({8.0, 64.0, 20});
    CHECK(at8.loss < 0.01);
    CHECK(at8.alpha1 == doctest::Approx(1.0).epsilon(1e-9));

    double prev = 1e9;
    for (double a : {2.0, 4.0, 8.0}) {
        const ConstructionLoss cl = construction_loss({a, a * a, 20});
        CHECK(cl.loss < prev);
        prev = cl.loss;
    }
    CHECK_THROWS_AS(construction_loss({1.0, 1.0, 3}), InvalidArgument);
}

TEST_CASE("one-noisy oracle: clean prompts point to noise, noisy prompts to partners") {
    const Vocabulary vocab = Vocabulary::pattern(4, 2);
    const PairPartition part = partition_pairs(4, 3);
    const auto& v = vocab.ids(Role::Generic);
    const auto& n = vocab.ids(Role::Noise);

    const auto ab = part.s2[0];
    const auto cd = part.s2[1 % part.s2.size()];
    const std::vector<int> clean = {v[ab.first], v[ab.second], v[ab.first], v[cd.first],
                                    v[cd.second]};
    const std::vector<double> dist = oracle_one_noisy(clean, vocab, part);
    CHECK(dist[static_cast<std::size_t>(n[0])] == doctest::Approx(0.5));
    CHECK(dist[static_cast<std::size_t>(n[1])] == doctest::Approx(0.5));
    CHECK(dist[static_cast<std::size_t>(v[cd.first])] == 0.0);  // the pattern answer gets zero

    // noise at position 1: conditional of the partner of the last plain token
    const auto s1pair = part.s1[0];
    const std::vector<int> noisy = {n[0], v[s1pair.first], v[s1pair.second], v[s1pair.first],
                                    v[part.s1[1].first]};
    const std::vector<double> nd = oracle_one_noisy(noisy, vocab, part);
    const auto& partners = part.partners1[static_cast<std::size_t>(part.s1[1].first)];
    for (int b : partners)
        CHECK(nd[static_cast<std::size_t>(v[b])] ==
              doctest::Approx(1.0 / static_cast<double>(partners.size())));

    CHECK_THROWS_AS(oracle_one_noisy(std::vector<int>{0, 1, 2}, vocab, part), InvalidArgument);
}

TEST_CASE("block-noisy oracle copies the seventh token") {
    const Vocabulary vocab = Vocabulary::pattern(4, 2);
    const PairPartition part = partition_pairs(4, 3);
    const auto& v = vocab.ids(Role::Generic);
    const auto& n = vocab.ids(Role::Noise);
    const std::vector<int> prompt = {v[0], v[1], v[0], v[1], v[2], v[1], v[2], v[3]};
    const std::vector<double> dist = oracle_block_noisy(prompt, vocab, part);
    CHECK(dist[static_cast<std::size_t>(v[2])] == 1.0);

    std::vector<int> noisy7 = prompt;
    noisy7[6] = n[1];
    const std::vector<double> nd = oracle_block_noisy(noisy7, vocab, part);
    CHECK(nd[static_cast<std::size_t>(n[0])] == doctest::Approx(0.5));
}

TEST_CASE("failed-repeating oracle repeats the block's first token") {
    const Vocabulary vocab = Vocabulary::pattern(4, 0);
    const PairPartition part = partition_pairs(4, 9);
    const auto& v = vocab.ids(Role::Generic);
    const auto ab = part.s2[0];
    const auto cd = part.s2[1 % part.s2.size()];
    // l = 2 prompt: a b b c d -> c with probability one (never d)
    const std::vector<int> prompt = {v[ab.first], v[ab.second], v[ab.second], v[cd.first],
                                     v[cd.second]};
    const std::vector<double> dist = oracle_failed_repeating(prompt, 2, vocab, part);
    CHECK(dist[static_cast<std::size_t>(v[cd.first])] == 1.0);
    CHECK(dist[static_cast<std::size_t>(v[cd.second])] == 0.0);

    // l = 1 prompt: a b -> a
    const std::vector<int> p1 = {v[ab.first], v[ab.second]};
    CHECK(oracle_failed_repeating(p1, 2, vocab, part)[static_cast<std::size_t>(v[ab.first])] ==
          1.0);
    CHECK_THROWS_AS(oracle_failed_repeating(std::vector<int>{v[0]}, 2, vocab, part),
                    InvalidArgument);
}

TEST_CASE("fixed-location oracle: uniform below the gap, first pair at the end") {
    const Vocabulary vocab = Vocabulary::fixed_location(3, 3);
    const int k = 2;
    // l = 3 = k+1: predicts b_{i1}, never b_{i3}
    const std::vector<int> prompt = {vocab.id(Role::C, 0), vocab.id(Role::D, 0),
                                     vocab.id(Role::C, 1), vocab.id(Role::D, 1),
                                     vocab.id(Role::C, 2)};
    const std::vector<double> dist = oracle_failed_fixed_location(prompt, k, vocab);
    CHECK(dist[static_cast<std::size_t>(vocab.id(Role::D, 0))] == 1.0);
    CHECK(dist[static_cast<std::size_t>(vocab.id(Role::D, 2))] == 0.0);

    // l = 2 <= k: uniform over the generic words
    const std::vector<int> p2 = {vocab.id(Role::C, 0), vocab.id(Role::D, 0),
                                 vocab.id(Role::C, 1)};
    const std::vector<double> d2 = oracle_failed_fixed_location(p2, k, vocab);
    for (int j = 0; j < 3; ++j)
        CHECK(d2[static_cast<std::size_t>(vocab.id(Role::Generic, j))] ==
              doctest::Approx(1.0 / 3));

    // l beyond k+1 is outside the rule
    const std::vector<int> p4 = {vocab.id(Role::C, 0), vocab.id(Role::D, 0),
                                 vocab.id(Role::C, 1), vocab.id(Role::D, 1),
                                 vocab.id(Role::C, 2), vocab.id(Role::D, 2),
                                 vocab.id(Role::C, 0)};
    CHECK_THROWS_AS(oracle_failed_fixed_location(p4, 1, vocab), InvalidArgument);
}

TEST_CASE("oracles equal exhaustive CE minimization on micro-instances") {
    // one-noisy and block-noisy: |V| = 4, |N| = 2
    const Vocabulary vocab = Vocabulary::pattern(4, 2);
    const PairPartition part = partition_pairs(4, 3);

    {
        const WeightedSentences data = enumerate_single_pattern(vocab, part, NoiseMode::One);
        int checked = 0;
        std::set<std::vector<int>> seen;
        for (const auto& sent : data.sentences) {
            const std::vector<int> prefix(sent.begin(), sent.begin() + 5);
            if (!seen.insert(prefix).second) continue;
            const std::vector<double> exact = exact_conditional(data, prefix, vocab.size());
            REQUIRE(!exact.empty());
            const std::vector<double> rule = oracle_one_noisy(prefix, vocab, part);
            CHECK(total_variation(exact, rule) < 1e-9);
            ++checked;
        }
        CHECK(checked > 50);
    }
    {
        const WeightedSentences data = enumerate_single_pattern(vocab, part, NoiseMode::Block);
        int checked = 0;
        std::set<std::vector<int>> seen;
        for (const auto& sent : data.sentences) {
            const std::vector<int> prefix(sent.begin(), sent.begin() + 8);
            if (!seen.insert(prefix).second) continue;
            const std::vector<double> exact = exact_conditional(data, prefix, vocab.size());
            const std::vector<double> rule = oracle_block_noisy(prefix, vocab, part);
            CHECK(total_variation(exact, rule) < 1e-9);
            ++checked;
        }
        CHECK(checked > 50);
    }
    {
        const Vocabulary pv = Vocabulary::pattern(4, 0);
        const WeightedSentences data = enumerate_failed_repeating(pv, part, 2);
        std::set<std::vector<int>> seen;
        for (const auto& sent : data.sentences) {
            for (std::size_t len = 0; len < sent.size(); ++len) {
                const std::vector<int> prefix(sent.begin(), sent.begin() + static_cast<long>(len));
                if (!seen.insert(prefix).second) continue;
                const std::vector<double> exact = exact_conditional(data, prefix, pv.size());
                const std::vector<double> rule = repeating_rule(prefix, pv, part);
                INFO("prefix length ", len);
                CHECK(total_variation(exact, rule) < 1e-9);
            }
        }
    }
    {
        const Vocabulary fv = Vocabulary::fixed_location(3, 3);
        const int k = 1;
        const WeightedSentences data = enumerate_fixed_location(fv, k);
        std::set<std::vector<int>> seen;
        for (const auto& sent : data.sentences) {
            for (std::size_t len = 0; len < sent.size(); ++len) {
                const std::vector<int> prefix(sent.begin(), sent.begin() + static_cast<long>(len));
                if (!seen.insert(prefix).second) continue;
                const std::vector<double> exact = exact_conditional(data, prefix, fv.size());
                const std::vector<double> rule = fixed_location_rule(prefix, k, fv);
                CHECK(total_variation(exact, rule) < 1e-9);
            }
        }
    }
}
