#include "icl/checkpoint.hpp"

#include <fstream>
#include <sstream>

namespace icl {

const Matrix<double>* Checkpoint::find(const std::string& name) const {
    for (const auto& [n, t] : tensors)
        if (n == name) return &t;
    return nullptr;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& manifest_path) {
    std::ofstream manifest(manifest_path);
    if (!manifest) throw IoError("cannot open for writing: " + manifest_path);
    const std::string bin_path = manifest_path + ".bin";
    std::ofstream bin(bin_path, std::ios::binary);
    if (!bin) throw IoError("cannot open for writing: " + bin_path);

    for (const auto& [k, v] : ckpt.meta) manifest << k << '=' << v << '\n';
    std::size_t offset = 0;
    for (const auto& [name, tensor] : ckpt.tensors) {
        manifest << "tensor " << name << ' ' << tensor.rows() << ' ' << tensor.cols() << ' '
                 << offset << '\n';
        bin.write(reinterpret_cast<const char*>(tensor.data()),
                  static_cast<std::streamsize>(tensor.size() * sizeof(double)));
        offset += tensor.size() * sizeof(double);
    }
    if (!manifest || !bin) throw IoError("checkpoint write failed: " + manifest_path);
}

Checkpoint load_checkpoint(const std::string& manifest_path) {
    std::ifstream manifest(manifest_path);
    if (!manifest) throw IoError("cannot open: " + manifest_path);
    std::ifstream bin(manifest_path + ".bin", std::ios::binary);
    if (!bin) throw IoError("cannot open: " + manifest_path + ".bin");

    Checkpoint ckpt;
    std::string line;
    while (std::getline(manifest, line)) {
        if (line.empty()) continue;
        if (line.rfind("tensor ", 0) == 0) {
            std::istringstream ls(line.substr(7));
            std::string name;
            int rows, cols;
            std::size_t offset;
            ls >> name >> rows >> cols >> offset;
            Matrix<double> tensor(rows, cols);
            bin.seekg(static_cast<std::streamoff>(offset));
            bin.read(reinterpret_cast<char*>(tensor.data()),
                     static_cast<std::streamsize>(tensor.size() * sizeof(double)));
            if (!bin) throw IoError("truncated checkpoint binary: " + manifest_path);
            ckpt.tensors.emplace_back(name, std::move(tensor));
        } else {
            const auto eq = line.find('=');
            if (eq != std::string::npos) ckpt.meta[line.substr(0, eq)] = line.substr(eq + 1);
        }
    }
    return ckpt;
}

Checkpoint checkpoint_from_similarity(const SimilarityMatrix& sim, const CooccurrenceModel& model,
                                      std::uint64_t seed) {
    Checkpoint ckpt;
    ckpt.meta["kind"] = "cbow-closed-form";
    ckpt.meta["vocab"] = std::to_string(sim.A.rows());
    ckpt.meta["S"] = std::to_string(model.S);
    ckpt.meta["seed"] = std::to_string(seed);
    ckpt.meta["scale"] = model.scale == CoocScale::Scaled ? "scaled" : "unscaled";
    ckpt.tensors.emplace_back("A", sim.A);
    return ckpt;
}

template <class Real>
Checkpoint checkpoint_from_embeddings(const EmbeddingTable<Real>& emb, int vocab, int S,
                                      std::uint64_t seed) {
    Checkpoint ckpt;
    ckpt.meta["kind"] = "cbow-ce";
    ckpt.meta["vocab"] = std::to_string(vocab);
    ckpt.meta["d_E"] = std::to_string(emb.d_E);
    ckpt.meta["S"] = std::to_string(S);
    ckpt.meta["seed"] = std::to_string(seed);
    ckpt.tensors.emplace_back("U", emb.U.template cast<double>());
    ckpt.tensors.emplace_back("V", emb.V.template cast<double>());
    return ckpt;
}

template <class Real>
Checkpoint checkpoint_from_transformer(const tfm::Transformer<Real>& model) {
    Checkpoint ckpt;
    const auto& cfg = model.config();
    ckpt.meta["kind"] = "transformer";
    ckpt.meta["vocab"] = std::to_string(cfg.vocab_size);
    ckpt.meta["d_E"] = std::to_string(cfg.d_model);
    ckpt.meta["layers"] = std::to_string(cfg.n_layers);
    ckpt.meta["heads"] = std::to_string(cfg.n_heads);
    ckpt.meta["pos"] = tfm::pos_mode_name(cfg.pos);
    ckpt.meta["max_seq_len"] = std::to_string(cfg.max_seq_len);
    ckpt.meta["seed"] = std::to_string(cfg.seed);
    for (std::size_t i = 0; i < model.params().values.size(); ++i)
        ckpt.tensors.emplace_back(model.params().names[i],
                                  model.params().values[i].template cast<double>());
    return ckpt;
}

template Checkpoint checkpoint_from_embeddings<float>(const EmbeddingTable<float>&, int, int,
                                                      std::uint64_t);
template Checkpoint checkpoint_from_embeddings<double>(const EmbeddingTable<double>&, int, int,
                                                       std::uint64_t);
template Checkpoint checkpoint_from_transformer<float>(const tfm::Transformer<float>&);
template Checkpoint checkpoint_from_transformer<double>(const tfm::Transformer<double>&);

}  // namespace icl
