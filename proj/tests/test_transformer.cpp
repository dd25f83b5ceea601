#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "icl/transformer.hpp"

using namespace icl;
using namespace icl::tfm;

namespace {

TransformerConfig tiny_config(int layers, PosMode pos, int vocab, int d = 4,
                              std::uint64_t seed = 11) {
    TransformerConfig cfg;
    cfg.n_layers = layers;
    cfg.n_heads = 2;
    cfg.d_model = d;
    cfg.pos = pos;
    cfg.max_seq_len = 8;
    cfg.vocab_size = vocab;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("sinusoidal positions: exact values and unit pairs") {
    const Matrix<double> pe = sinusoidal_positions(6, 10);
    for (int i = 0; 2 * i < 10; ++i) {
        CHECK(pe(0, 2 * i) == 0.0);
        CHECK(pe(0, 2 * i + 1) == 1.0);
    }
    CHECK(pe(1, 0) == doctest::Approx(0.841470984808));
    CHECK(pe(1, 1) == doctest::Approx(0.540302305868));
    for (int t = 0; t < 6; ++t)
        for (int i = 0; 2 * i < 10; ++i)
            CHECK(pe(t, 2 * i) * pe(t, 2 * i) + pe(t, 2 * i + 1) * pe(t, 2 * i + 1) ==
                  doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(sinusoidal_positions(6, 5), InvalidArgument);
}

TEST_CASE("forward logits softmax-normalize and reject overlong input") {
    const Transformer<double> model(tiny_config(2, PosMode::Learned, 7));
    const std::vector<std::vector<int>> batch = {{0, 1, 2, 3}, {3, 2, 1, 0}};
    const Matrix<double> logits = model.forward(batch);
    CHECK(logits.rows() == 8);
    CHECK(logits.cols() == 7);
    for (int r = 0; r < logits.rows(); ++r) {
        double z = 0, mx = logits(r, 0);
        for (int c = 1; c < 7; ++c) mx = std::max(mx, logits(r, c));
        for (int c = 0; c < 7; ++c) z += std::exp(logits(r, c) - mx);
        double total = 0;
        for (int c = 0; c < 7; ++c) total += std::exp(logits(r, c) - mx) / z;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
    }
    const std::vector<std::vector<int>> overlong = {{0, 1, 2, 3, 4, 5, 0, 1, 2}};
    CHECK_THROWS_AS(model.forward(overlong), InvalidArgument);
}

TEST_CASE("causality: perturbing a later token never changes earlier logits") {
    for (PosMode pos : {PosMode::Learned, PosMode::Sinusoidal, PosMode::None}) {
        const Transformer<double> model(tiny_config(3, pos, 9, 6));
        const std::vector<int> base = {1, 4, 7, 2, 5};
        std::vector<int> bumped = base;
        bumped[3] = 8;  // position 3 changed; positions 0..2 must be untouched
        const Matrix<double> a = model.logits_for(base);
        const Matrix<double> b = model.logits_for(bumped);
        for (int t = 0; t < 3; ++t)
            for (int c = 0; c < 9; ++c) CHECK(a(t, c) == b(t, c));
    }
}

TEST_CASE("one layer without positions is blind to swapping the first two tokens") {
    const Transformer<double> model(tiny_config(1, PosMode::None, 12, 8));
    const std::vector<int> abc = {3, 7, 5};
    const std::vector<int> bac = {7, 3, 5};
    const Matrix<double> la = model.logits_for(abc);
    const Matrix<double> lb = model.logits_for(bac);
    for (int c = 0; c < 12; ++c) CHECK(la(2, c) == lb(2, c));  // exact equality
}

TEST_CASE("two layers without positions generically break the swap symmetry") {
    const Transformer<double> model(tiny_config(2, PosMode::None, 12, 8));
    const std::vector<int> abc = {3, 7, 5};
    const std::vector<int> bac = {7, 3, 5};
    const Matrix<double> la = model.logits_for(abc);
    const Matrix<double> lb = model.logits_for(bac);
    double diff = 0;
    for (int c = 0; c < 12; ++c) diff = std::max(diff, std::abs(la(2, c) - lb(2, c)));
    CHECK(diff > 1e-9);
}

TEST_CASE("learned and sinusoidal positions break the swap symmetry even with one layer") {
    for (PosMode pos : {PosMode::Learned, PosMode::Sinusoidal}) {
        const Transformer<double> model(tiny_config(1, pos, 12, 8));
        const Matrix<double> la = model.logits_for(std::vector<int>{3, 7, 5});
        const Matrix<double> lb = model.logits_for(std::vector<int>{7, 3, 5});
        double diff = 0;
        for (int c = 0; c < 12; ++c) diff = std::max(diff, std::abs(la(2, c) - lb(2, c)));
        CHECK(diff > 1e-9);
    }
}

TEST_CASE("analytic gradients match central finite differences on every tensor") {
    // micro model: 2-token vocabulary, 1 layer, d_E = 4
    TransformerConfig cfg = tiny_config(1, PosMode::Learned, 2, 4, 31);
    Transformer<double> model(cfg);
    const std::vector<std::vector<int>> batch = {{0, 1, 1, 0}, {1, 0, 0, 1}, {0, 0, 1, 1}};

    Tensors<double> grads;
    for (std::size_t i = 0; i < model.params().values.size(); ++i)
        grads.add(model.params().names[i], model.params().values[i].rows(),
                  model.params().values[i].cols());
    for (auto& g : grads.values) g.fill(0.0);
    model.loss_and_grad(batch, &grads);

    const double h = 1e-4;
    double worst = 0.0;
    std::string worst_name;
    for (std::size_t ti = 0; ti < model.params().values.size(); ++ti) {
        Matrix<double>& W = model.params().values[ti];
        for (std::size_t i = 0; i < W.size(); ++i) {
            const double save = W.data()[i];
            W.data()[i] = save + h;
            const double up = model.loss_and_grad(batch, nullptr);
            W.data()[i] = save - h;
            const double dn = model.loss_and_grad(batch, nullptr);
            W.data()[i] = save;
            const double fd = (up - dn) / (2 * h);
            const double g = grads.values[ti].data()[i];
            const double denom = std::max({1e-8, std::abs(fd), std::abs(g)});
            const double rel = std::abs(fd - g) / denom;
            if (rel > worst) {
                worst = rel;
                worst_name = model.params().names[ti];
            }
        }
    }
    INFO("worst tensor: ", worst_name);
    CHECK(worst < 1e-3);
}

TEST_CASE("gradient check with sinusoidal positions and two layers") {
    TransformerConfig cfg = tiny_config(2, PosMode::Sinusoidal, 3, 4, 77);
    Transformer<double> model(cfg);
    const std::vector<std::vector<int>> batch = {{0, 1, 2, 1}, {2, 0, 1, 0}};
    Tensors<double> grads;
    for (std::size_t i = 0; i < model.params().values.size(); ++i)
        grads.add(model.params().names[i], model.params().values[i].rows(),
                  model.params().values[i].cols());
    for (auto& g : grads.values) g.fill(0.0);
    model.loss_and_grad(batch, &grads);
    const double h = 1e-4;
    double worst = 0.0;
    for (std::size_t ti = 0; ti < model.params().values.size(); ++ti) {
        Matrix<double>& W = model.params().values[ti];
        for (std::size_t i = 0; i < W.size(); ++i) {
            const double save = W.data()[i];
            W.data()[i] = save + h;
            const double up = model.loss_and_grad(batch, nullptr);
            W.data()[i] = save - h;
            const double dn = model.loss_and_grad(batch, nullptr);
            W.data()[i] = save;
            const double fd = (up - dn) / (2 * h);
            const double g = grads.values[ti].data()[i];
            worst = std::max(worst, std::abs(fd - g) / std::max({1e-8, std::abs(fd), std::abs(g)}));
        }
    }
    CHECK(worst < 1e-3);
}

TEST_CASE("untrained model with a zeroed head flags a tie") {
    TransformerConfig cfg = tiny_config(1, PosMode::Learned, 6, 4);
    Transformer<double> model(cfg);
    for (std::size_t i = 0; i < model.params().values.size(); ++i) {
        if (model.params().names[i].rfind("head.", 0) == 0)
            model.params().values[i].fill(0.0);
    }
    const Prediction p = model.predict(std::vector<int>{0, 1, 2});
    CHECK(p.tie);
    CHECK(p.token == 0);
}

TEST_CASE("training is deterministic and its early losses decrease") {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::TripleRepeat;
    spec.vocab_size = 20;
    spec.seed = 5;
    auto [train, test] = gen_triple_repeat(spec, 2000, SplitMode::Both);

    TransformerConfig cfg;
    cfg.n_layers = 1;
    cfg.d_model = 10;
    cfg.pos = PosMode::Learned;
    cfg.max_seq_len = 8;
    cfg.vocab_size = train.vocab.size();
    cfg.seed = 3;
    TrainConfig tc;
    tc.max_epochs = 3;
    tc.seed = 17;

    Transformer<float> a(cfg);
    const TrainReport ra = train_transformer(a, train, tc);
    CHECK(ra.train_losses.size() == 3);
    CHECK(ra.train_losses[1] < ra.train_losses[0]);
    CHECK(ra.train_losses[2] < ra.train_losses[1]);

    Transformer<float> b(cfg);
    const TrainReport rb = train_transformer(b, train, tc);
    CHECK(ra.train_losses == rb.train_losses);
    CHECK(linf_distance(a.params().values[0], b.params().values[0]) == 0.0);
}

TEST_CASE("one-layer learned-positions model masters the repeat task (Both split)") {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::TripleRepeat;
    spec.vocab_size = 20;
    spec.seed = 41;
    auto [train, test] = gen_triple_repeat(spec, 10000, SplitMode::Both);

    TransformerConfig cfg;
    cfg.n_layers = 1;
    cfg.d_model = 10;
    cfg.pos = PosMode::Learned;
    cfg.max_seq_len = 8;
    cfg.vocab_size = train.vocab.size();
    cfg.seed = 2;
    TrainConfig tc;
    tc.max_epochs = 500;
    tc.seed = 23;

    Transformer<float> model(cfg);
    const TrainReport report = train_transformer(model, train, tc);
    CHECK(report.stopped_epoch < 500);

    Rng rng(77);
    int hits = 0;
    const int n = 300;
    for (int i = 0; i < n; ++i) {
        const Prompt p = build_triple_repeat_prompt(test, rng);
        hits += model.predict(p.tokens).token == p.expected;
    }
    CHECK(static_cast<double>(hits) / n >= 0.95);  // reported accuracy is 1
}
