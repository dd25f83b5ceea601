#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "icl/cbow.hpp"
#include "icl/kernels.hpp"
#include "icl/linalg.hpp"

using namespace icl;

namespace {

ScenarioSpec single_rel(int S, int K, int L, Mixture mix, std::uint64_t seed = 1) {
    ScenarioSpec s;
    s.kind = ScenarioKind::SingleRel;
    s.S = S;
    s.K = K;
    s.L = L;
    s.mix = mix;
    s.seed = seed;
    return s;
}

// Printed closed-form inverse entries for the one-pair model (p1 = 0 case).
struct AppendixAValues {
    double q1, q3, q4, q5;
    double delta;
};

AppendixAValues appendix_a_q(double K, double L, double S) {
    AppendixAValues v{};
    v.delta = (S - 1) * (S - 1) * (S - 2) / (K * L);
    const double denom = v.delta * K * L * (2 * S - 3);
    v.q1 = std::pow(S - 2, 4) / denom;
    // sign of the (S-2)^4 term fixed so that the reassembled inverse times
    // (S-2)B + C is the identity (also matches the general q3 expression)
    v.q3 = (-K * std::pow(S - 2, 2) * std::pow(S - 1, 2) + std::pow(S - 2, 4)) / denom;
    v.q4 = -(2 * S - 3) * std::pow(S - 2, 2) / denom;
    v.q5 = (K * (S - 2) * std::pow(S - 1, 3) + std::pow(S - 2, 4)) / denom;
    return v;
}

}  // namespace

TEST_CASE("closed-form solve: residual below 1e-9 and inverse matches Appendix A") {
    const ScenarioSpec spec = single_rel(8, 10, 20, {0, 1, 0});
    const CooccurrenceModel model = analytic_cooccurrence(spec);
    const SimilarityMatrix sim = closed_form_similarity(model);
    CHECK(sim.residual_inf < 1e-9);

    // invert (S-2)B + C numerically and compare block classes with the
    // printed q formulas
    const int K = 10, L = 20, S = 8;
    Matrix<double> M = model.B;
    for (std::size_t i = 0; i < M.size(); ++i) M.data()[i] *= S - 2;
    for (int i = 0; i < M.rows(); ++i) M(i, i) += model.C[static_cast<std::size_t>(i)];
    const Matrix<double> inv = linalg::inverse(M);

    const AppendixAValues q = appendix_a_q(K, L, S);
    CHECK(inv(0, 1) == doctest::Approx(q.q1).epsilon(1e-9));        // c-c off-diagonal
    CHECK(inv(0, K) == doctest::Approx(q.q3).epsilon(1e-9));        // c-d diagonal
    CHECK(inv(0, 2 * K) == doctest::Approx(q.q4).epsilon(1e-9));    // c-r block
    CHECK(inv(0, 0) == doctest::Approx(q.q5).epsilon(1e-9));        // c-c diagonal
    // sign conditions used by the threshold argument
    CHECK(q.q5 > q.q3);
    CHECK(inv(0, 1) > inv(0, K));   // q1 > q3
    CHECK(inv(0, 0) >= inv(0, 1));  // q5 >= q1

    // A entry classes match the printed similarity lists (p1 = 0)
    const PairProbabilities p = pair_probabilities(spec);
    const double a_cc_diag = p.p3 * q.q3 + L * p.p4 * q.q4;
    const double a_cd_diag = p.p3 * q.q5 + L * p.p4 * q.q4;
    const double a_cd_off = p.p3 * q.q1 + L * p.p4 * q.q4;  // p1 terms vanish
    CHECK(sim.A(0, 0) == doctest::Approx(a_cc_diag).epsilon(1e-9));
    CHECK(sim.A(0, K) == doctest::Approx(a_cd_diag).epsilon(1e-9));
    CHECK(sim.A(0, K + 1) == doctest::Approx(a_cd_off).epsilon(1e-9));
}

TEST_CASE("degenerate input: zero B with identity C gives A = B") {
    CooccurrenceModel m;
    m.S = 8;
    m.B = Matrix<double>(5, 5, 0.0);
    m.C.assign(5, 1.0);
    const SimilarityMatrix sim = closed_form_similarity(m);
    CHECK(max_abs(sim.A) == 0.0);
    CHECK(sim.residual_inf == 0.0);
}

TEST_CASE("singular system reports a condition estimate") {
    CooccurrenceModel m;
    m.S = 8;
    m.B = Matrix<double>(4, 4, 0.0);
    m.C.assign(4, 0.0);  // (S-2)B + C is the zero matrix
    CHECK_THROWS_AS(closed_form_similarity(m), SingularMatrix);
}

TEST_CASE("empirical similarity converges to the analytic one at n = 200k") {
    const ScenarioSpec spec = single_rel(8, 10, 20, {0, 1, 0}, 4242);
    const SimilarityMatrix analytic = closed_form_similarity(analytic_cooccurrence(spec));
    const Corpus corpus = gen_single_relationship(spec, 200000);
    const SimilarityMatrix empirical = closed_form_similarity(empirical_cooccurrence(corpus));
    CHECK(linf_distance(analytic.A, empirical.A) < 1e-2);
}

TEST_CASE("structured closed form equals the dense closed form") {
    const ScenarioSpec spec = single_rel(8, 10, 20, {0, 1, 0});
    const StructuredMatrix As = closed_form_similarity_structured(
        analytic_cooccurrence_structured(spec));
    const SimilarityMatrix Ad = closed_form_similarity(analytic_cooccurrence(spec));
    const Matrix<double> dense = As.dense({10, 10, 20});
    CHECK(linf_distance(dense, Ad.A) < 1e-11);
}

TEST_CASE("similarity is invariant to the S(S-1) scale convention") {
    const ScenarioSpec spec = single_rel(8, 10, 20, {0, 1, 0});
    const CooccurrenceModel scaled = analytic_cooccurrence(spec);
    const CooccurrenceModel unscaled = rescaled(scaled, CoocScale::Unscaled);
    const SimilarityMatrix a = closed_form_similarity(scaled);
    const SimilarityMatrix b = closed_form_similarity(unscaled);
    CHECK(linf_distance(a.A, b.A) < 1e-9);
}

TEST_CASE("prompt scores ignore prompt order") {
    const ScenarioSpec spec = single_rel(8, 10, 20, {0, 1, 0});
    const SimilarityMatrix sim = closed_form_similarity(analytic_cooccurrence(spec));
    const Vocabulary vocab = Vocabulary::relationship(10, 20);
    Rng rng(5);
    Prompt p = build_icl_prompt(spec, vocab, nullptr, 3, TaskTag::CdRelation, rng);
    const std::vector<double> base = score_prompt(sim, p);
    Prompt shuffled = p;
    rng.shuffle(shuffled.tokens);
    const std::vector<double> perm = score_prompt(sim, shuffled);
    for (std::size_t k = 0; k < base.size(); ++k) CHECK(base[k] == perm[k]);
}

TEST_CASE("argmax boundary of the exact least-squares optimum at S=8, K=10, L=20") {
    // The exact optimum admits 2l+1 < KL(S-1)^2/((S-2)(L(S-2)+K(2S-3))) = 6.53,
    // i.e. success for l <= 2 (cross-checked against a Monte-Carlo normal-
    // equation fit; below the bound the pair token wins, above it a filler).
    const ScenarioSpec spec = single_rel(8, 10, 20, {0, 1, 0});
    const SimilarityMatrix sim = closed_form_similarity(analytic_cooccurrence(spec));
    const Vocabulary vocab = Vocabulary::relationship(10, 20);
    for (int ell = 1; ell <= 4; ++ell) {
        int hits = 0;
        for (int rep = 0; rep < 20; ++rep) {
            const Prompt p = build_icl_prompt(spec, vocab, nullptr, ell, TaskTag::CdRelation,
                                              Rng::derive(100, static_cast<std::uint64_t>(
                                                                   ell * 100 + rep)));
            const Prediction pred = predict_next(sim, p);
            hits += pred.token == p.expected;
        }
        if (2 * ell + 1 < 6.5333)
            CHECK(hits == 20);
        else
            CHECK(hits == 0);
    }
}

TEST_CASE("tie-break picks the lowest id and raises the flag") {
    const Prediction p = predict_next(std::vector<double>{0.25, 1.0, 1.0, 0.5});
    CHECK(p.token == 1);
    CHECK(p.tie);
    const Prediction q = predict_next(std::vector<double>{0.25, 2.0, 1.0});
    CHECK(q.token == 1);
    CHECK(!q.tie);
}

TEST_CASE("CE gradient matches central finite differences") {
    const int V = 6, d = 4;
    Rng rng(9100);
    EmbeddingTable<double> emb;
    emb.d_E = d;
    emb.U = Matrix<double>(V, d);
    emb.V = Matrix<double>(V, d);
    for (std::size_t i = 0; i < emb.U.size(); ++i) emb.U.data()[i] = rng.uniform() - 0.5;
    for (std::size_t i = 0; i < emb.V.size(); ++i) emb.V.data()[i] = rng.uniform() - 0.5;

    std::vector<std::vector<int>> sents;
    for (int s = 0; s < 5; ++s) {
        std::vector<int> sent;
        for (int j = 0; j < 4; ++j) sent.push_back(rng.uniform_int(0, V - 1));
        sents.push_back(sent);
    }

    const CbowGrad<double> g = cbow_loss_and_grad(emb, sents, true);
    const double h = 1e-4;
    double worst = 0.0;
    auto check_tensor = [&](Matrix<double>& W, const Matrix<double>& dW) {
        for (std::size_t i = 0; i < W.size(); ++i) {
            const double save = W.data()[i];
            W.data()[i] = save + h;
            const double up = cbow_loss_and_grad(emb, sents, false).loss;
            W.data()[i] = save - h;
            const double dn = cbow_loss_and_grad(emb, sents, false).loss;
            W.data()[i] = save;
            const double fd = (up - dn) / (2 * h);
            const double denom = std::max({1e-8, std::abs(fd), std::abs(dW.data()[i])});
            worst = std::max(worst, std::abs(fd - dW.data()[i]) / denom);
        }
    };
    check_tensor(emb.U, g.dU);
    check_tensor(emb.V, g.dV);
    CHECK(worst < 1e-3);
}

TEST_CASE("squared-loss factorized training recovers the closed-form map") {
    // Independent oracle for Lemma 1: gradient-train U, V on the exact tiny
    // distribution under the squared loss and compare U V^T/(S-1) with the
    // closed-form A.
    const int K = 3, L = 3, S = 3, V = 9, d = 12;
    const ScenarioSpec spec = single_rel(S, K, L, {0, 1, 0});
    const SimilarityMatrix target = closed_form_similarity(analytic_cooccurrence(spec));

    // exact corpus: every (pair, filler) multiset once; positions irrelevant
    std::vector<std::vector<int>> sents;
    for (int p = 0; p < K; ++p)
        for (int f = 0; f < L; ++f) sents.push_back({p, K + p, 2 * K + f});

    Rng rng(77);
    Matrix<double> U(V, d), Vm(V, d);
    for (std::size_t i = 0; i < U.size(); ++i) U.data()[i] = (rng.uniform() - 0.5) * 0.2;
    for (std::size_t i = 0; i < Vm.size(); ++i) Vm.data()[i] = (rng.uniform() - 0.5) * 0.2;

    Matrix<double> mU(V, d), vU(V, d), mV(V, d), vV(V, d);
    const double lr = 0.02, b1 = 0.9, b2 = 0.999, eps = 1e-8;
    for (int it = 1; it <= 4000; ++it) {
        // A = U V^T / (S-1); squared loss over all positions of all sentences
        Matrix<double> A(V, V);
        kern::gemm(kern::Trans::no, kern::Trans::yes, V, V, d, 1.0 / (S - 1), U.data(), d,
                   Vm.data(), d, 0.0, A.data(), V);
        Matrix<double> dA(V, V, 0.0);
        for (const auto& sent : sents) {
            for (std::size_t i = 0; i < sent.size(); ++i) {
                std::vector<double> bag(V, 0.0);
                for (std::size_t j = 0; j < sent.size(); ++j)
                    if (j != i) bag[static_cast<std::size_t>(sent[j])] += 1.0;
                std::vector<double> resid(V, 0.0);
                for (int r = 0; r < V; ++r) {
                    double acc = 0.0;
                    for (int cxt = 0; cxt < V; ++cxt) acc += A(r, cxt) * bag[static_cast<std::size_t>(cxt)];
                    resid[static_cast<std::size_t>(r)] = acc;
                }
                resid[static_cast<std::size_t>(sent[i])] -= 1.0;
                for (int r = 0; r < V; ++r)
                    for (int cxt = 0; cxt < V; ++cxt)
                        dA(r, cxt) += 2.0 * resid[static_cast<std::size_t>(r)] *
                                      bag[static_cast<std::size_t>(cxt)];
            }
        }
        // dU = dA V / (S-1), dV = dA^T U / (S-1)
        Matrix<double> dU(V, d), dV(V, d);
        kern::gemm(kern::Trans::no, kern::Trans::no, V, d, V, 1.0 / (S - 1), dA.data(), V,
                   Vm.data(), d, 0.0, dU.data(), d);
        kern::gemm(kern::Trans::yes, kern::Trans::no, V, d, V, 1.0 / (S - 1), dA.data(), V,
                   U.data(), d, 0.0, dV.data(), d);
        const double bc1 = 1.0 - std::pow(b1, it), bc2 = 1.0 - std::pow(b2, it);
        kern::adam_update(static_cast<int>(U.size()), U.data(), mU.data(), vU.data(), dU.data(),
                          lr, b1, b2, eps, bc1, bc2);
        kern::adam_update(static_cast<int>(Vm.size()), Vm.data(), mV.data(), vV.data(),
                          dV.data(), lr, b1, b2, eps, bc1, bc2);
    }

    Matrix<double> probe(V, V);
    kern::gemm(kern::Trans::no, kern::Trans::yes, V, V, d, 1.0 / (S - 1), U.data(), d, Vm.data(),
               d, 0.0, probe.data(), V);
    CHECK(linf_distance(probe, target.A) < 5e-2);
}

TEST_CASE("trained CBOW solves the (1/2, 0, 1/2) single-relationship cell") {
    ScenarioSpec spec = single_rel(8, 10, 20, {0.5, 0, 0.5}, 2024);
    const Corpus corpus = gen_single_relationship(spec, 20000);
    TrainConfig cfg;
    cfg.d_E = 10;
    cfg.seed = 7;
    auto [emb, report] = train_cbow_ce<float>(corpus, cfg);
    CHECK(report.stopped_epoch >= 1);
    CHECK(std::isfinite(report.best_val_loss));

    // scores softmax-normalize per context
    Rng rng(31);
    const Prompt probe = build_icl_prompt(spec, corpus.vocab, nullptr, 3, TaskTag::CdRelation, rng);
    std::vector<double> scores = score_prompt(emb, probe);
    double z = 0.0, mx = *std::max_element(scores.begin(), scores.end());
    for (double s : scores) z += std::exp(s - mx);
    double total = 0.0;
    for (double s : scores) total += std::exp(s - mx) / z;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));

    int hits = 0;
    const int n_prompts = 200;
    for (int rep = 0; rep < n_prompts; ++rep) {
        const Prompt p = build_icl_prompt(spec, corpus.vocab, nullptr, 3, TaskTag::CdRelation, rng);
        hits += predict_next(emb, p).token == p.expected;
    }
    CHECK(static_cast<double>(hits) / n_prompts >= 0.95);  // paper reports accuracy 1
}

TEST_CASE("training is deterministic given the seed") {
    ScenarioSpec spec = single_rel(8, 5, 10, {0, 1, 0}, 6);
    const Corpus corpus = gen_single_relationship(spec, 600);
    TrainConfig cfg;
    cfg.d_E = 6;
    cfg.max_epochs = 5;
    cfg.seed = 99;
    auto [a, ra] = train_cbow_ce<float>(corpus, cfg);
    auto [b, rb] = train_cbow_ce<float>(corpus, cfg);
    CHECK(linf_distance(a.U, b.U) == 0.0);
    CHECK(linf_distance(a.V, b.V) == 0.0);
    CHECK(ra.train_losses == rb.train_losses);
}
