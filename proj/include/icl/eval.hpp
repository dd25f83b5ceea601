#pragma once

#include <optional>
#include <string>
#include <vector>

#include "icl/prompts.hpp"
#include "icl/transformer.hpp"

namespace icl::eval {

enum class ModelKind { CbowClosedForm, CbowCe, Transformer, Oracle };

std::string model_kind_name(ModelKind k);
ModelKind model_kind_from_name(const std::string& name);

/// One experiment cell: scenario + model + evaluation protocol.
struct ExperimentPlan {
    std::string name;
    ScenarioSpec scenario;
    SplitMode split = SplitMode::Both;  // triple-repeat only
    ModelKind model = ModelKind::CbowCe;

    int d_E = 10;
    int n_layers = 1;
    int n_heads = 2;
    tfm::PosMode pos = tfm::PosMode::Learned;

    int n_sentences = 0;   // 0 = model-kind default (20000 cbow / 10000 transformer)
    int max_epochs = 0;    // 0 = model-kind default (200 cbow / 500 transformer)
    int batch_size = 64;
    double lr = 1e-3;
    int patience = 5;
    double min_delta = 1e-4;

    int n_repetitions = 10;
    int n_prompts = 500;
    int ell = 3;
    std::vector<TaskTag> tags;  // defaults to the scenario's natural tags

    std::uint64_t base_seed = 1;

    int resolved_sentences() const;
    int resolved_epochs() const;
    std::vector<TaskTag> resolved_tags() const;
    std::string config_digest() const;
};

struct IclResult {
    std::string name;
    std::vector<TaskTag> tags;
    std::vector<std::vector<double>> per_rep;  // [tag][rep]
    std::vector<double> mean;                  // per tag
    std::vector<std::uint64_t> seeds;          // per rep corpus seeds
};

/// Per repetition: generate the corpus, fit/solve the model, score a prompt
/// battery per task tag. Deterministic given the plan; repetitions may run in
/// parallel.
IclResult run_experiment(const ExperimentPlan& plan, int jobs = 1);

struct TrajectoryPoint {
    int epoch = 0;
    std::vector<double> accuracy;  // per tag
    double train_loss = 0.0, val_loss = 0.0;
};

/// ICL accuracy probes during transformer training (single repetition).
std::vector<TrajectoryPoint> accuracy_trajectory(const ExperimentPlan& plan, int probe_every);

}  // namespace icl::eval
