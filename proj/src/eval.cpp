#include "icl/eval.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <mutex>
#include <thread>

#include "icl/country.hpp"
#include "icl/theory.hpp"

namespace icl::eval {

std::string model_kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::CbowClosedForm: return "cbow-closed-form";
        case ModelKind::CbowCe: return "cbow-ce";
        case ModelKind::Transformer: return "transformer";
        case ModelKind::Oracle: return "oracle";
    }
    return "?";
}

ModelKind model_kind_from_name(const std::string& name) {
    for (ModelKind k : {ModelKind::CbowClosedForm, ModelKind::CbowCe, ModelKind::Transformer,
                        ModelKind::Oracle})
        if (model_kind_name(k) == name) return k;
    throw InvalidArgument("unknown model kind: " + name);
}

int ExperimentPlan::resolved_sentences() const {
    if (n_sentences > 0) return n_sentences;
    return model == ModelKind::Transformer || model == ModelKind::Oracle ? 10000 : 20000;
}

int ExperimentPlan::resolved_epochs() const {
    if (max_epochs > 0) return max_epochs;
    return model == ModelKind::Transformer ? 500 : 200;
}

std::vector<TaskTag> ExperimentPlan::resolved_tags() const {
    if (!tags.empty()) return tags;
    switch (scenario.kind) {
        case ScenarioKind::SingleRel: return {TaskTag::CdRelation};
        case ScenarioKind::DualConnected: return {TaskTag::CdRelation, TaskTag::CeRelation};
        case ScenarioKind::DualDisconnected: return {TaskTag::CdRelation, TaskTag::EfRelation};
        case ScenarioKind::SinglePattern: return {TaskTag::SinglePattern};
        case ScenarioKind::DualPattern: return {TaskTag::DualPattern1, TaskTag::DualPattern2};
        case ScenarioKind::FailedRepeating: return {TaskTag::FailedRepeating};
        case ScenarioKind::FailedFixedLocation: return {TaskTag::FailedFixedLocation};
        case ScenarioKind::TripleRepeat: return {TaskTag::TripleRepeat};
        case ScenarioKind::CountryTemplate:
            return {TaskTag::CountryCapital, TaskTag::CountryIoc};
        case ScenarioKind::CountryFixedTemplate: return {TaskTag::CountryCapital};
    }
    return {};
}

std::string ExperimentPlan::config_digest() const {
    std::ostringstream os;
    os << scenario_name(scenario.kind) << "|" << model_kind_name(model) << "|d" << d_E << "|L"
       << n_layers << "|" << tfm::pos_mode_name(pos) << "|n" << resolved_sentences() << "|reps"
       << n_repetitions << "|ell" << ell << "|seed" << base_seed << "|mix"
       << scenario.mix.to_string() << "|" << balance_name(scenario.balance) << "|"
       << noise_name(scenario.noise) << (scenario.corrupted ? "|corrupted" : "")
       << (scenario.contaminated ? "|contaminated" : "");
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : os.str()) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
    std::ostringstream hex;
    hex << std::hex << h;
    return hex.str();
}

namespace {

struct RepData {
    Corpus corpus;
    std::optional<Corpus> test_corpus;
    std::optional<PairPartition> partition;
};

RepData make_corpus(const ExperimentPlan& plan, std::uint64_t corpus_seed,
                    std::uint64_t partition_seed) {
    RepData data;
    ScenarioSpec spec = plan.scenario;
    spec.seed = corpus_seed;
    const int n = plan.resolved_sentences();
    switch (spec.kind) {
        case ScenarioKind::SingleRel:
            data.corpus = gen_single_relationship(spec, n);
            break;
        case ScenarioKind::DualConnected:
            data.corpus = gen_dual_connected(spec, n);
            break;
        case ScenarioKind::DualDisconnected:
            data.corpus = gen_dual_disconnected(spec, n);
            break;
        case ScenarioKind::SinglePattern:
            data.partition = partition_pairs(spec.vocab_size, partition_seed);
            data.corpus = gen_single_pattern(spec, *data.partition, n);
            break;
        case ScenarioKind::DualPattern:
            data.partition = partition_pairs(spec.vocab_size, partition_seed);
            data.corpus = gen_dual_pattern(spec, *data.partition, n);
            break;
        case ScenarioKind::FailedRepeating:
            data.partition = partition_pairs(spec.vocab_size, partition_seed);
            data.corpus = gen_failed_repeating(spec, *data.partition, n);
            break;
        case ScenarioKind::FailedFixedLocation:
            data.corpus = gen_failed_fixed_location(spec, n);
            break;
        case ScenarioKind::TripleRepeat: {
            auto [train, test] = gen_triple_repeat(spec, n, plan.split);
            data.corpus = std::move(train);
            data.test_corpus = std::move(test);
            break;
        }
        case ScenarioKind::CountryTemplate:
        case ScenarioKind::CountryFixedTemplate:
            data.corpus = gen_country_corpus(spec.kind, corpus_seed);
            break;
    }
    return data;
}

int prompt_length(const ExperimentPlan& plan, TaskTag tag) {
    switch (tag) {
        case TaskTag::CdRelation:
        case TaskTag::CeRelation:
        case TaskTag::EfRelation:
        case TaskTag::CountryCapital:
        case TaskTag::CountryIoc:
            return 2 * plan.ell + 1;
        case TaskTag::SinglePattern:
            return plan.scenario.noise == NoiseMode::Block ? 8 : 5;
        case TaskTag::DualPattern1:
        case TaskTag::DualPattern2:
            return plan.scenario.noise == NoiseMode::Block ? 11 : 7;
        case TaskTag::FailedRepeating:
            return 3 * (plan.ell - 1) + 2;
        case TaskTag::FailedFixedLocation:
            return 2 * plan.ell - 1;
        case TaskTag::TripleRepeat:
            return 3;
    }
    return 0;
}

/// One fitted model per repetition, scored against prompt batteries.
struct FittedModel {
    std::optional<SimilarityMatrix> similarity;
    std::optional<EmbeddingTable<float>> embeddings;
    std::optional<tfm::Transformer<float>> transformer;

    Prediction predict(const Prompt& prompt, const ExperimentPlan& plan, const RepData& data,
                       const Vocabulary& vocab) const {
        if (similarity) return predict_next(*similarity, prompt);
        if (embeddings) return predict_next(*embeddings, prompt);
        if (transformer) return transformer->predict(prompt.tokens);
        // oracle rules
        switch (prompt.tag) {
            case TaskTag::SinglePattern:
                if (plan.scenario.noise == NoiseMode::Block)
                    return predict_next(theory::oracle_block_noisy(prompt.tokens, vocab,
                                                                   *data.partition));
                return predict_next(
                    theory::oracle_one_noisy(prompt.tokens, vocab, *data.partition));
            case TaskTag::FailedRepeating:
                return predict_next(theory::oracle_failed_repeating(
                    prompt.tokens, plan.scenario.n_blocks, vocab, *data.partition));
            case TaskTag::FailedFixedLocation:
                return predict_next(theory::oracle_failed_fixed_location(
                    prompt.tokens, plan.scenario.half_gap, vocab));
            default:
                throw UnsupportedScenario("no oracle rule for this task tag");
        }
    }
};

FittedModel fit_model(const ExperimentPlan& plan, const RepData& data,
                      std::uint64_t train_seed, const EpochCallback& on_epoch,
                      TrainReport* report_out) {
    FittedModel fitted;
    switch (plan.model) {
        case ModelKind::CbowClosedForm:
            fitted.similarity = closed_form_similarity(empirical_cooccurrence(data.corpus));
            break;
        case ModelKind::CbowCe: {
            TrainConfig tc;
            tc.d_E = plan.d_E;
            tc.batch_size = plan.batch_size;
            tc.lr = plan.lr;
            tc.max_epochs = plan.resolved_epochs();
            tc.patience = plan.patience;
            tc.min_delta = plan.min_delta;
            tc.seed = train_seed;
            auto [emb, report] = train_cbow_ce<float>(data.corpus, tc, on_epoch);
            fitted.embeddings = std::move(emb);
            if (report_out) *report_out = report;
            break;
        }
        case ModelKind::Transformer: {
            int max_len = 2;
            for (const auto& s : data.corpus.sentences)
                max_len = std::max(max_len, static_cast<int>(s.size()));
            for (TaskTag tag : plan.resolved_tags())
                max_len = std::max(max_len, prompt_length(plan, tag));
            tfm::TransformerConfig cfg;
            cfg.n_layers = plan.n_layers;
            cfg.n_heads = plan.n_heads;
            cfg.d_model = plan.d_E;
            cfg.pos = plan.pos;
            cfg.max_seq_len = max_len;
            cfg.vocab_size = data.corpus.vocab.size();
            cfg.seed = Rng::derive(train_seed, 0x1417);
            fitted.transformer.emplace(cfg);
            TrainConfig tc;
            tc.batch_size = plan.batch_size;
            tc.lr = plan.lr;
            tc.max_epochs = plan.resolved_epochs();
            tc.patience = plan.patience;
            tc.min_delta = plan.min_delta;
            tc.seed = train_seed;
            const TrainReport report =
                train_transformer(*fitted.transformer, data.corpus, tc, on_epoch);
            if (report_out) *report_out = report;
            break;
        }
        case ModelKind::Oracle:
            break;
    }
    return fitted;
}

std::vector<double> score_battery(const ExperimentPlan& plan, const RepData& data,
                                  const FittedModel& fitted, std::uint64_t prompt_seed) {
    const Vocabulary& vocab = data.corpus.vocab;
    const std::vector<TaskTag> tags = plan.resolved_tags();
    std::vector<double> acc;
    for (std::size_t tix = 0; tix < tags.size(); ++tix) {
        Rng rng(Rng::derive(prompt_seed, 0xbb00 + tix));
        int hits = 0;
        for (int p = 0; p < plan.n_prompts; ++p) {
            Prompt prompt;
            if (tags[tix] == TaskTag::TripleRepeat)
                prompt = build_triple_repeat_prompt(*data.test_corpus, rng);
            else
                prompt = build_icl_prompt(plan.scenario, vocab,
                                          data.partition ? &*data.partition : nullptr, plan.ell,
                                          tags[tix], rng);
            hits += fitted.predict(prompt, plan, data, vocab).token == prompt.expected;
        }
        acc.push_back(static_cast<double>(hits) / plan.n_prompts);
    }
    return acc;
}

}  // namespace

IclResult run_experiment(const ExperimentPlan& plan, int jobs) {
    require(plan.n_repetitions >= 1, "run_experiment: need at least one repetition");
    require(plan.n_prompts >= 1, "run_experiment: need at least one prompt");
    const std::vector<TaskTag> tags = plan.resolved_tags();

    IclResult result;
    result.name = plan.name;
    result.tags = tags;
    result.per_rep.assign(tags.size(), std::vector<double>(
                                           static_cast<std::size_t>(plan.n_repetitions), 0.0));
    result.seeds.assign(static_cast<std::size_t>(plan.n_repetitions), 0);

    std::atomic<int> next_rep{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&]() {
        while (true) {
            const int rep = next_rep.fetch_add(1);
            if (rep >= plan.n_repetitions) return;
            try {
                const std::uint64_t rep_seed =
                    Rng::derive(plan.base_seed, 0xe0 + static_cast<std::uint64_t>(rep));
                const std::uint64_t corpus_seed = Rng::derive(rep_seed, 1);
                const std::uint64_t partition_seed = Rng::derive(rep_seed, 2);
                const std::uint64_t train_seed = Rng::derive(rep_seed, 3);
                const std::uint64_t prompt_seed = Rng::derive(rep_seed, 4);
                const RepData data = make_corpus(plan, corpus_seed, partition_seed);
                const FittedModel fitted = fit_model(plan, data, train_seed, {}, nullptr);
                const std::vector<double> acc = score_battery(plan, data, fitted, prompt_seed);
                for (std::size_t t = 0; t < tags.size(); ++t)
                    result.per_rep[t][static_cast<std::size_t>(rep)] = acc[t];
                result.seeds[static_cast<std::size_t>(rep)] = corpus_seed;
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    const int n_workers = std::max(1, std::min(jobs, plan.n_repetitions));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);

    for (const auto& reps : result.per_rep) {
        double sum = 0.0;
        for (double a : reps) sum += a;
        result.mean.push_back(sum / static_cast<double>(reps.size()));
    }
    return result;
}

std::vector<TrajectoryPoint> accuracy_trajectory(const ExperimentPlan& plan, int probe_every) {
    require(plan.model == ModelKind::Transformer,
            "accuracy_trajectory: transformer experiments only");
    require(probe_every >= 1, "accuracy_trajectory: probe interval must be positive");

    const std::uint64_t rep_seed = Rng::derive(plan.base_seed, 0xe0);
    const RepData data = make_corpus(plan, Rng::derive(rep_seed, 1), Rng::derive(rep_seed, 2));
    const std::uint64_t prompt_seed = Rng::derive(rep_seed, 4);

    std::vector<TrajectoryPoint> series;
    // the callback sees the model through this slot once fit_model built it
    const tfm::Transformer<float>* live_model = nullptr;
    FittedModel probe_holder;
    auto probe = [&](int epoch, double train_loss, double val_loss) {
        if (epoch % probe_every != 0) return;
        require(live_model != nullptr, "trajectory probe before model exists");
        TrajectoryPoint pt;
        pt.epoch = epoch;
        pt.train_loss = train_loss;
        pt.val_loss = val_loss;
        pt.accuracy = score_battery(plan, data, probe_holder, prompt_seed);
        series.push_back(std::move(pt));
    };

    // fit_model wires the callback into the trainer; expose the model pointer
    // by constructing the transformer here instead.
    int max_len = 2;
    for (const auto& s : data.corpus.sentences)
        max_len = std::max(max_len, static_cast<int>(s.size()));
    for (TaskTag tag : plan.resolved_tags())
        max_len = std::max(max_len, prompt_length(plan, tag));
    tfm::TransformerConfig cfg;
    cfg.n_layers = plan.n_layers;
    cfg.n_heads = plan.n_heads;
    cfg.d_model = plan.d_E;
    cfg.pos = plan.pos;
    cfg.max_seq_len = max_len;
    cfg.vocab_size = data.corpus.vocab.size();
    cfg.seed = Rng::derive(Rng::derive(rep_seed, 3), 0x1417);
    probe_holder.transformer.emplace(cfg);
    live_model = &*probe_holder.transformer;

    TrainConfig tc;
    tc.batch_size = plan.batch_size;
    tc.lr = plan.lr;
    tc.max_epochs = plan.resolved_epochs();
    tc.patience = plan.patience;
    tc.min_delta = plan.min_delta;
    tc.seed = Rng::derive(rep_seed, 3);
    const TrainReport report = train_transformer(*probe_holder.transformer, data.corpus, tc, probe);

    // always include the final state
    if (series.empty() || series.back().epoch != report.stopped_epoch) {
        TrajectoryPoint pt;
        pt.epoch = report.stopped_epoch;
        pt.train_loss = report.train_losses.back();
        pt.val_loss = report.val_losses.back();
        pt.accuracy = score_battery(plan, data, probe_holder, prompt_seed);
        series.push_back(std::move(pt));
    }
    return series;
}

}  // namespace icl::eval
