#include "icl/cooccur.hpp"

namespace icl {

PairProbabilities pair_probabilities(const ScenarioSpec& spec) {
    PairProbabilities p;
    p.K = spec.K;
    p.L = spec.L;
    p.S = spec.S;
    const double K = spec.K, L = spec.L, S = spec.S;
    const bool one_pair = spec.mix.p1 == 1.0;
    const bool two_pair = spec.mix.p2 == 1.0;

    if (spec.kind == ScenarioKind::SingleRel && one_pair) {
        require(spec.S >= 3 && spec.L >= 2, "single-pair model needs S >= 3, L >= 2");
        p.p1 = 0.0;
        p.p2 = (S - 2) * (S - 3) / (L * (L - 1));
        p.p3 = 1.0 / K;
        p.p4 = (S - 2) / (K * L);
        return p;
    }
    if (spec.kind == ScenarioKind::SingleRel && two_pair) {
        require(spec.S >= 4 && spec.K >= 2 && spec.L >= 2, "two-pair model needs S >= 4, K >= 2");
        p.p1 = 2.0 / (K * (K - 1));
        p.p2 = (S - 4) * (S - 5) / (L * (L - 1));
        p.p3 = 2.0 / K;
        p.p4 = 2.0 * (S - 4) / (K * L);
        return p;
    }
    if (spec.kind == ScenarioKind::DualConnected && two_pair) {
        require(spec.S >= 5 && spec.K >= 2 && spec.L >= 2,
                "task-selection model needs S >= 5, K >= 2, L >= 2");
        p.p1 = 1.0 / (K * (K - 1));
        p.p2 = (S - 4) * (S - 5) / (L * (L - 1));
        p.p3 = 1.0 / K;
        p.p4 = (S - 4) / (K * L);
        return p;
    }
    throw UnsupportedScenario("no closed-form co-occurrence for scenario " +
                              scenario_name(spec.kind) + " mix " + spec.mix.to_string());
}

CooccurrenceModel empirical_cooccurrence(const Corpus& corpus) {
    require(!corpus.sentences.empty(), "empirical_cooccurrence: empty corpus");
    const std::size_t S = corpus.sentences.front().size();
    require(S >= 3, "empirical_cooccurrence: sentences must have length >= 3");
    for (const auto& sent : corpus.sentences)
        require(sent.size() == S, "empirical_cooccurrence: ragged corpus");

    const int V = corpus.vocab.size();
    CooccurrenceModel model;
    model.S = static_cast<int>(S);
    model.scale = CoocScale::Scaled;
    model.source = CoocSource::Empirical;
    model.B = Matrix<double>(V, V, 0.0);
    const double inv_n = 1.0 / static_cast<double>(corpus.sentences.size());
    for (const auto& sent : corpus.sentences) {
        for (std::size_t i = 0; i < S; ++i) {
            double* row = model.B.row(sent[i]);
            for (std::size_t j = 0; j < S; ++j)
                if (j != i) row[sent[j]] += inv_n;
        }
    }
    model.C.assign(static_cast<std::size_t>(V), 0.0);
    for (int i = 0; i < V; ++i) {
        double sum = 0.0;
        const double* row = model.B.row(i);
        for (int j = 0; j < V; ++j) sum += row[j];
        model.C[static_cast<std::size_t>(i)] = sum;
    }
    return model;
}

StructuredCooccurrence analytic_cooccurrence_structured(const ScenarioSpec& spec) {
    const PairProbabilities p = pair_probabilities(spec);
    const double K = spec.K, L = spec.L;
    StructuredCooccurrence out;
    out.S = spec.S;
    if (spec.kind == ScenarioKind::SingleRel) {
        // groups [c, d, r]
        StructuredMatrix B({K, K, L});
        B.block(0, 0) = {0.0, p.p1};
        B.block(0, 1) = {p.p3, p.p1};
        B.block(0, 2) = {p.p4, p.p4};
        B.block(1, 0) = {p.p3, p.p1};
        B.block(1, 1) = {0.0, p.p1};
        B.block(1, 2) = {p.p4, p.p4};
        B.block(2, 0) = {p.p4, p.p4};
        B.block(2, 1) = {p.p4, p.p4};
        B.block(2, 2) = {0.0, p.p2};
        out.C = B.row_sums();
        out.B = std::move(B);
        return out;
    }
    // DualConnected: groups [c, d, e, r]
    StructuredMatrix B({K, K, K, L});
    B.block(0, 0) = {0.0, 2 * p.p1};
    B.block(0, 1) = {p.p3, p.p1};
    B.block(0, 2) = {p.p3, p.p1};
    B.block(0, 3) = {2 * p.p4, 2 * p.p4};
    B.block(1, 0) = {p.p3, p.p1};
    B.block(1, 1) = {0.0, p.p1};
    B.block(1, 2) = {0.0, 0.0};
    B.block(1, 3) = {p.p4, p.p4};
    B.block(2, 0) = {p.p3, p.p1};
    B.block(2, 1) = {0.0, 0.0};
    B.block(2, 2) = {0.0, p.p1};
    B.block(2, 3) = {p.p4, p.p4};
    B.block(3, 0) = {2 * p.p4, 2 * p.p4};
    B.block(3, 1) = {p.p4, p.p4};
    B.block(3, 2) = {p.p4, p.p4};
    B.block(3, 3) = {0.0, p.p2};
    out.C = B.row_sums();
    out.B = std::move(B);
    return out;
}

CooccurrenceModel analytic_cooccurrence(const ScenarioSpec& spec) {
    const StructuredCooccurrence sc = analytic_cooccurrence_structured(spec);
    std::vector<int> sizes;
    if (spec.kind == ScenarioKind::SingleRel)
        sizes = {spec.K, spec.K, spec.L};
    else
        sizes = {spec.K, spec.K, spec.K, spec.L};

    CooccurrenceModel model;
    model.S = spec.S;
    model.scale = CoocScale::Scaled;
    model.source = CoocSource::Analytic;
    model.B = sc.B.dense(sizes);
    model.C.reserve(static_cast<std::size_t>(model.B.rows()));
    for (std::size_t g = 0; g < sizes.size(); ++g)
        for (int i = 0; i < sizes[g]; ++i) model.C.push_back(sc.C[g]);
    return model;
}

CooccurrenceModel rescaled(const CooccurrenceModel& model, CoocScale target) {
    if (model.scale == target) return model;
    const double factor = static_cast<double>(model.S) * (model.S - 1);
    const double s = target == CoocScale::Unscaled ? 1.0 / factor : factor;
    CooccurrenceModel out = model;
    out.scale = target;
    for (std::size_t i = 0; i < out.B.size(); ++i) out.B.data()[i] *= s;
    for (double& c : out.C) c *= s;
    return out;
}

}  // namespace icl
