#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "icl/cbow.hpp"
#include "icl/corpus.hpp"
#include "icl/matrix.hpp"

namespace icl::tfm {

enum class PosMode { Learned, Sinusoidal, None };

std::string pos_mode_name(PosMode p);
PosMode pos_mode_from_name(const std::string& name);

struct TransformerConfig {
    int n_layers = 1;
    int n_heads = 2;
    int d_model = 10;
    PosMode pos = PosMode::Learned;
    int max_seq_len = 16;
    int vocab_size = 0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// PE[t, 2i] = sin(t / 10000^(2i/d)), PE[t, 2i+1] = cos(t / 10000^(2i/d)).
Matrix<double> sinusoidal_positions(int max_seq_len, int d_model);

/// Named parameter tensors; one flat registry drives Adam, finite-difference
/// checks and checkpoints.
template <class Real>
struct Tensors {
    std::vector<std::string> names;
    std::vector<Matrix<Real>> values;

    int add(const std::string& name, int rows, int cols) {
        names.push_back(name);
        values.emplace_back(rows, cols);
        return static_cast<int>(values.size()) - 1;
    }
    Matrix<Real>& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
    const Matrix<Real>& operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
    std::size_t total_size() const {
        std::size_t n = 0;
        for (const auto& v : values) n += v.size();
        return n;
    }
};

template <class Real>
struct TfmImpl;

/// Minimal pre-norm decoder: causal two-head attention + GELU feed-forward
/// (width 4d), residual connections, final layer norm, untied output head.
/// Gradients are hand-written reverse mode.
template <class Real>
class Transformer {
public:
    explicit Transformer(const TransformerConfig& config);

    const TransformerConfig& config() const { return config_; }
    Tensors<Real>& params() { return params_; }
    const Tensors<Real>& params() const { return params_; }

    /// Next-token logits for every position; rows = positions (B*T x V).
    Matrix<Real> forward(const std::vector<std::vector<int>>& batch) const;

    /// Mean next-token CE over all predicting positions, with parameter
    /// gradients accumulated into `grads` (same layout as params()).
    double loss_and_grad(const std::vector<std::vector<int>>& batch,
                         Tensors<Real>* grads) const;

    Matrix<Real> logits_for(std::span<const int> prompt) const;
    Prediction predict(std::span<const int> prompt) const;

private:
    template <class R>
    friend struct TfmImpl;

    TransformerConfig config_;
    Tensors<Real> params_;
    Matrix<Real> sin_table_;

    struct Index;
    std::unique_ptr<Index> idx_;

public:
    ~Transformer();
    Transformer(Transformer&&) noexcept;
    Transformer& operator=(Transformer&&) noexcept;
    Transformer(const Transformer&) = delete;
};

/// Adam training with a 50% validation split and patience-based early
/// stopping; deterministic given (config, corpus, seed).
template <class Real>
TrainReport train_transformer(Transformer<Real>& model, const Corpus& corpus,
                              const TrainConfig& config, const EpochCallback& on_epoch = {});

}  // namespace icl::tfm
