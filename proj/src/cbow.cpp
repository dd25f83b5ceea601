#include "icl/cbow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "icl/kernels.hpp"
#include "icl/linalg.hpp"

namespace icl {

SimilarityMatrix closed_form_similarity(const CooccurrenceModel& model) {
    const int V = model.B.rows();
    require(V == model.B.cols() && static_cast<int>(model.C.size()) == V,
            "closed_form_similarity: malformed model");
    Matrix<double> M = model.B;
    const double s2 = static_cast<double>(model.S - 2);
    for (std::size_t i = 0; i < M.size(); ++i) M.data()[i] *= s2;
    for (int i = 0; i < V; ++i) M(i, i) += model.C[static_cast<std::size_t>(i)];

    SimilarityMatrix sim;
    sim.A = linalg::solve_right(model.B, M);

    Matrix<double> residual = linalg::matmul(sim.A, M);
    for (std::size_t i = 0; i < residual.size(); ++i) residual.data()[i] -= model.B.data()[i];
    sim.residual_inf = max_abs(residual);
    return sim;
}

StructuredMatrix closed_form_similarity_structured(const StructuredCooccurrence& model) {
    const StructuredMatrix M =
        model.B.scaled(static_cast<double>(model.S - 2)).plus_group_diagonal(model.C);
    return model.B.mul(M.inverse());
}

// ---- gradient-trained CBOW --------------------------------------------------

template <class Real>
CbowGrad<Real> cbow_loss_and_grad(const EmbeddingTable<Real>& emb,
                                  const std::vector<std::vector<int>>& sentences,
                                  bool want_grad) {
    const int V = emb.U.rows();
    const int d = emb.d_E;
    std::size_t n_positions = 0;
    for (const auto& sent : sentences) n_positions += sent.size();
    require(n_positions > 0, "cbow_loss_and_grad: no positions");

    const int bt = static_cast<int>(n_positions);
    Matrix<Real> H(bt, d);
    std::vector<int> targets(n_positions);
    std::vector<Real> ssum(static_cast<std::size_t>(d));

    int row = 0;
    for (const auto& sent : sentences) {
        const Real inv = Real(1) / static_cast<Real>(sent.size() - 1);
        std::fill(ssum.begin(), ssum.end(), Real(0));
        for (int tok : sent) kern::axpy(d, Real(1), emb.V.row(tok), ssum.data());
        for (int tok : sent) {
            Real* h = H.row(row);
            const Real* vt = emb.V.row(tok);
            for (int c = 0; c < d; ++c) h[c] = (ssum[static_cast<std::size_t>(c)] - vt[c]) * inv;
            targets[static_cast<std::size_t>(row)] = tok;
            ++row;
        }
    }

    // logits = H U^T, then softmax rows
    Matrix<Real> P(bt, V);
    kern::gemm(kern::Trans::no, kern::Trans::yes, bt, V, d, Real(1), H.data(), d, emb.U.data(),
               d, Real(0), P.data(), V);
    kern::softmax_rows(P.data(), bt, V, V);

    CbowGrad<Real> out;
    double loss = 0.0;
    for (int r = 0; r < bt; ++r)
        loss -= std::log(std::max(static_cast<double>(P(r, targets[static_cast<std::size_t>(r)])),
                                  1e-300));
    out.loss = loss / bt;
    if (!want_grad) return out;

    // dlogits = (p - onehot)/bt, reusing P in place
    const Real invbt = Real(1) / static_cast<Real>(bt);
    for (int r = 0; r < bt; ++r) {
        Real* p = P.row(r);
        for (int j = 0; j < V; ++j) p[j] *= invbt;
        p[targets[static_cast<std::size_t>(r)]] -= invbt;
    }

    out.dU = Matrix<Real>(V, d);
    kern::gemm(kern::Trans::yes, kern::Trans::no, V, d, bt, Real(1), P.data(), V, H.data(), d,
               Real(0), out.dU.data(), d);

    // dH = dlogits U
    Matrix<Real> dH(bt, d);
    kern::gemm(kern::Trans::no, kern::Trans::no, bt, d, V, Real(1), P.data(), V, emb.U.data(),
               d, Real(0), dH.data(), d);

    // scatter into dV: v_j sees every position of its sentence except its own
    out.dV = Matrix<Real>(V, d);
    std::vector<Real> total(static_cast<std::size_t>(d));
    row = 0;
    for (const auto& sent : sentences) {
        const Real inv = Real(1) / static_cast<Real>(sent.size() - 1);
        std::fill(total.begin(), total.end(), Real(0));
        for (std::size_t j = 0; j < sent.size(); ++j)
            kern::axpy(d, Real(1), dH.row(row + static_cast<int>(j)), total.data());
        for (std::size_t j = 0; j < sent.size(); ++j) {
            Real* dv = out.dV.row(sent[j]);
            const Real* dh = dH.row(row + static_cast<int>(j));
            for (int c = 0; c < d; ++c) dv[c] += (total[static_cast<std::size_t>(c)] - dh[c]) * inv;
        }
        row += static_cast<int>(sent.size());
    }
    return out;
}

namespace {

template <class Real>
double forward_loss(const EmbeddingTable<Real>& emb,
                    const std::vector<std::vector<int>>& sentences) {
    return cbow_loss_and_grad(emb, sentences, false).loss;
}

// Batches grouped by sentence length so every matrix in a batch is rectangular.
std::vector<std::vector<std::size_t>> length_buckets(const std::vector<std::vector<int>>& sents,
                                                     const std::vector<std::size_t>& subset) {
    std::map<std::size_t, std::vector<std::size_t>> by_len;
    for (std::size_t idx : subset) by_len[sents[idx].size()].push_back(idx);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [len, v] : by_len) out.push_back(std::move(v));
    return out;
}

}  // namespace

template <class Real>
std::pair<EmbeddingTable<Real>, TrainReport> train_cbow_ce(const Corpus& corpus,
                                                           const TrainConfig& config,
                                                           const EpochCallback& on_epoch) {
    require(config.d_E >= 1, "train_cbow_ce: d_E must be positive");
    require(!corpus.sentences.empty(), "train_cbow_ce: empty corpus");
    for (const auto& sent : corpus.sentences)
        require(sent.size() >= 2, "train_cbow_ce: sentences need at least two tokens");

    const int V = corpus.vocab.size();
    const int d = config.d_E;
    Rng rng(Rng::derive(config.seed, 0xcb01));

    EmbeddingTable<Real> emb;
    emb.d_E = d;
    emb.U = Matrix<Real>(V, d);
    emb.V = Matrix<Real>(V, d);
    const double init = 0.5 / d;
    for (std::size_t i = 0; i < emb.U.size(); ++i)
        emb.U.data()[i] = static_cast<Real>((rng.uniform() * 2 - 1) * init);
    for (std::size_t i = 0; i < emb.V.size(); ++i)
        emb.V.data()[i] = static_cast<Real>((rng.uniform() * 2 - 1) * init);

    // random validation split
    std::vector<std::size_t> order(corpus.sentences.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    const std::size_t n_val =
        static_cast<std::size_t>(config.val_fraction * static_cast<double>(order.size()));
    std::vector<std::size_t> val_idx(order.begin(), order.begin() + static_cast<long>(n_val));
    std::vector<std::size_t> train_idx(order.begin() + static_cast<long>(n_val), order.end());
    require(!train_idx.empty(), "train_cbow_ce: empty training split");

    std::vector<std::vector<int>> val_sents;
    val_sents.reserve(val_idx.size());
    for (std::size_t i : val_idx) val_sents.push_back(corpus.sentences[i]);

    Matrix<Real> mU(V, d), vU(V, d), mV(V, d), vV(V, d);
    TrainReport report;
    double best = std::numeric_limits<double>::infinity();
    int bad_epochs = 0;
    long step = 0;

    for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
        auto buckets = length_buckets(corpus.sentences, train_idx);
        std::vector<std::vector<std::size_t>> batches;
        for (auto& bucket : buckets) {
            rng.shuffle(bucket);
            for (std::size_t off = 0; off < bucket.size();
                 off += static_cast<std::size_t>(config.batch_size)) {
                const std::size_t end =
                    std::min(bucket.size(), off + static_cast<std::size_t>(config.batch_size));
                batches.emplace_back(bucket.begin() + static_cast<long>(off),
                                     bucket.begin() + static_cast<long>(end));
            }
        }
        rng.shuffle(batches);

        double epoch_loss = 0.0;
        std::size_t epoch_positions = 0;
        std::vector<std::vector<int>> batch_sents;
        for (const auto& batch : batches) {
            batch_sents.clear();
            std::size_t positions = 0;
            for (std::size_t i : batch) {
                batch_sents.push_back(corpus.sentences[i]);
                positions += corpus.sentences[i].size();
            }
            const CbowGrad<Real> g = cbow_loss_and_grad(emb, batch_sents, true);
            if (!std::isfinite(g.loss)) throw TrainingFailure("CBOW loss diverged");
            epoch_loss += g.loss * static_cast<double>(positions);
            epoch_positions += positions;

            ++step;
            const Real bc1 = Real(1) - static_cast<Real>(std::pow(config.beta1, step));
            const Real bc2 = Real(1) - static_cast<Real>(std::pow(config.beta2, step));
            kern::adam_update(static_cast<int>(emb.U.size()), emb.U.data(), mU.data(), vU.data(),
                              g.dU.data(), static_cast<Real>(config.lr),
                              static_cast<Real>(config.beta1), static_cast<Real>(config.beta2),
                              static_cast<Real>(config.adam_eps), bc1, bc2);
            kern::adam_update(static_cast<int>(emb.V.size()), emb.V.data(), mV.data(), vV.data(),
                              g.dV.data(), static_cast<Real>(config.lr),
                              static_cast<Real>(config.beta1), static_cast<Real>(config.beta2),
                              static_cast<Real>(config.adam_eps), bc1, bc2);
        }

        const double train_loss = epoch_loss / static_cast<double>(epoch_positions);
        const double val_loss = val_sents.empty() ? train_loss : forward_loss(emb, val_sents);
        if (!std::isfinite(val_loss)) throw TrainingFailure("CBOW validation loss diverged");
        report.train_losses.push_back(train_loss);
        report.val_losses.push_back(val_loss);
        report.stopped_epoch = epoch;
        if (on_epoch) on_epoch(epoch, train_loss, val_loss);

        if (val_loss < best - config.min_delta) {
            best = val_loss;
            bad_epochs = 0;
        } else if (++bad_epochs >= config.patience) {
            break;
        }
    }
    report.best_val_loss = best;
    require(emb.U.all_finite() && emb.V.all_finite(), "non-finite embeddings after training");
    return {std::move(emb), std::move(report)};
}

// ---- scoring ----------------------------------------------------------------

namespace {

// Token multiplicities in id order, so scores are bitwise identical for any
// permutation of the prompt.
std::vector<int> prompt_bag(const Prompt& prompt, int vocab_size) {
    std::vector<int> counts(static_cast<std::size_t>(vocab_size), 0);
    for (int tok : prompt.tokens) {
        require(tok >= 0 && tok < vocab_size, "score_prompt: token id out of range");
        ++counts[static_cast<std::size_t>(tok)];
    }
    return counts;
}

}  // namespace

std::vector<double> score_prompt(const SimilarityMatrix& sim, const Prompt& prompt) {
    const int V = sim.A.rows();
    const std::vector<int> counts = prompt_bag(prompt, V);
    std::vector<double> scores(static_cast<std::size_t>(V), 0.0);
    for (int tok = 0; tok < V; ++tok) {
        const int c = counts[static_cast<std::size_t>(tok)];
        if (c == 0) continue;
        for (int k = 0; k < V; ++k)
            scores[static_cast<std::size_t>(k)] += static_cast<double>(c) * sim.A(k, tok);
    }
    return scores;
}

template <class Real>
std::vector<double> score_prompt(const EmbeddingTable<Real>& emb, const Prompt& prompt) {
    const int V = emb.U.rows();
    const int d = emb.d_E;
    const std::vector<int> counts = prompt_bag(prompt, V);
    std::vector<double> bag(static_cast<std::size_t>(d), 0.0);
    for (int tok = 0; tok < V; ++tok) {
        const int c = counts[static_cast<std::size_t>(tok)];
        if (c == 0) continue;
        const Real* v = emb.V.row(tok);
        for (int col = 0; col < d; ++col)
            bag[static_cast<std::size_t>(col)] += static_cast<double>(c) * static_cast<double>(v[col]);
    }
    const double inv = 1.0 / static_cast<double>(prompt.tokens.size());
    std::vector<double> scores(static_cast<std::size_t>(V), 0.0);
    for (int k = 0; k < V; ++k) {
        const Real* u = emb.U.row(k);
        double s = 0.0;
        for (int col = 0; col < d; ++col)
            s += static_cast<double>(u[col]) * bag[static_cast<std::size_t>(col)];
        scores[static_cast<std::size_t>(k)] = s * inv;
    }
    return scores;
}

Prediction predict_next(const std::vector<double>& scores) {
    require(!scores.empty(), "predict_next: empty score vector");
    Prediction pred;
    pred.token = 0;
    for (int k = 1; k < static_cast<int>(scores.size()); ++k) {
        if (scores[static_cast<std::size_t>(k)] > scores[static_cast<std::size_t>(pred.token)]) {
            pred.token = k;
            pred.tie = false;
        } else if (scores[static_cast<std::size_t>(k)] ==
                   scores[static_cast<std::size_t>(pred.token)]) {
            pred.tie = true;
        }
    }
    return pred;
}

Prediction predict_next(const SimilarityMatrix& sim, const Prompt& prompt) {
    return predict_next(score_prompt(sim, prompt));
}

template <class Real>
Prediction predict_next(const EmbeddingTable<Real>& emb, const Prompt& prompt) {
    return predict_next(score_prompt(emb, prompt));
}

template struct CbowGrad<float>;
template struct CbowGrad<double>;
template CbowGrad<float> cbow_loss_and_grad<float>(const EmbeddingTable<float>&,
                                                   const std::vector<std::vector<int>>&, bool);
template CbowGrad<double> cbow_loss_and_grad<double>(const EmbeddingTable<double>&,
                                                     const std::vector<std::vector<int>>&, bool);
template std::pair<EmbeddingTable<float>, TrainReport> train_cbow_ce<float>(
    const Corpus&, const TrainConfig&, const EpochCallback&);
template std::pair<EmbeddingTable<double>, TrainReport> train_cbow_ce<double>(
    const Corpus&, const TrainConfig&, const EpochCallback&);
template std::vector<double> score_prompt<float>(const EmbeddingTable<float>&, const Prompt&);
template std::vector<double> score_prompt<double>(const EmbeddingTable<double>&, const Prompt&);
template Prediction predict_next<float>(const EmbeddingTable<float>&, const Prompt&);
template Prediction predict_next<double>(const EmbeddingTable<double>&, const Prompt&);

}  // namespace icl
