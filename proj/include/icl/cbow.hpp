#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "icl/cooccur.hpp"
#include "icl/prompts.hpp"

namespace icl {

/// Least-squares similarity map A solving A((S-2)B + C) = B.
struct SimilarityMatrix {
    Matrix<double> A;
    double residual_inf = 0.0;  // ||A((S-2)B + C) - B||_inf after the solve
};

SimilarityMatrix closed_form_similarity(const CooccurrenceModel& model);

/// Same solve within the structured family (usable at symbolic group sizes).
StructuredMatrix closed_form_similarity_structured(const StructuredCooccurrence& model);

/// Center/context embedding tables of the gradient-trained CBOW.
template <class Real>
struct EmbeddingTable {
    Matrix<Real> U, V;  // |V| x d_E
    int d_E = 0;
};

struct TrainConfig {
    int d_E = 10;
    double lr = 1e-3;
    double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
    int batch_size = 64;
    int max_epochs = 200;
    int patience = 5;
    double min_delta = 1e-4;
    double val_fraction = 0.5;
    std::uint64_t seed = 0;
};

struct TrainReport {
    std::vector<double> train_losses, val_losses;
    int stopped_epoch = 0;
    double best_val_loss = 0.0;
};

using EpochCallback = std::function<void(int epoch, double train_loss, double val_loss)>;

/// Cross-entropy CBOW: p(x_i = k | x_{-i}) ~ exp(u_k . sum_{j != i} v_j / (I-1)).
/// Adam, 50% validation split, early stopping on validation loss.
template <class Real>
std::pair<EmbeddingTable<Real>, TrainReport> train_cbow_ce(
    const Corpus& corpus, const TrainConfig& config, const EpochCallback& on_epoch = {});

/// Mean per-position CE loss and gradients over the given sentences
/// (also the oracle surface for finite-difference checks).
template <class Real>
struct CbowGrad {
    double loss = 0.0;
    Matrix<Real> dU, dV;
};

template <class Real>
CbowGrad<Real> cbow_loss_and_grad(const EmbeddingTable<Real>& emb,
                                  const std::vector<std::vector<int>>& sentences,
                                  bool want_grad = true);

std::vector<double> score_prompt(const SimilarityMatrix& sim, const Prompt& prompt);

template <class Real>
std::vector<double> score_prompt(const EmbeddingTable<Real>& emb, const Prompt& prompt);

struct Prediction {
    int token = -1;
    bool tie = false;
};

/// Argmax over the full vocabulary; exact ties resolve to the lowest id and
/// are flagged.
Prediction predict_next(const std::vector<double>& scores);

Prediction predict_next(const SimilarityMatrix& sim, const Prompt& prompt);

template <class Real>
Prediction predict_next(const EmbeddingTable<Real>& emb, const Prompt& prompt);

}  // namespace icl
