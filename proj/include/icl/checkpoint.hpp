#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "icl/cbow.hpp"
#include "icl/transformer.hpp"

namespace icl {

/// Text manifest (key=value lines plus a tensor directory) with an adjacent
/// <path>.bin holding row-major little-endian float64 arrays.
struct Checkpoint {
    std::map<std::string, std::string> meta;
    std::vector<std::pair<std::string, Matrix<double>>> tensors;

    const Matrix<double>* find(const std::string& name) const;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& manifest_path);
Checkpoint load_checkpoint(const std::string& manifest_path);

Checkpoint checkpoint_from_similarity(const SimilarityMatrix& sim, const CooccurrenceModel& model,
                                      std::uint64_t seed);
template <class Real>
Checkpoint checkpoint_from_embeddings(const EmbeddingTable<Real>& emb, int vocab, int S,
                                      std::uint64_t seed);
template <class Real>
Checkpoint checkpoint_from_transformer(const tfm::Transformer<Real>& model);

}  // namespace icl
