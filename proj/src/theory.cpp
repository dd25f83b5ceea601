#include "icl/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "icl/linalg.hpp"

namespace icl::theory {

namespace {

double lse(std::span<const double> xs) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double x : xs) mx = std::max(mx, x);
    double sum = 0.0;
    for (double x : xs) sum += std::exp(x - mx);
    return mx + std::log(sum);
}

int max_ell_below(double bound) {
    // largest l >= 1 with 2l + 1 < bound
    const int ell = static_cast<int>(std::floor((bound - 1.0) / 2.0));
    if (2 * ell + 1 >= bound) return std::max(0, ell - 1);
    return std::max(0, ell);
}

// Entry classes of the similarity map for relationship scenarios, taken from
// the structured closed-form solve.
struct RelationClasses {
    double cc_diag, cc_off, cd_diag, cd_off, rc, rd;
};

// The filler group size is symbolic (double), so L = 10^6 and beyond never
// densify anything.
RelationClasses relation_classes_symbolic(double K, double L, double S, bool two_pair) {
    PairProbabilities p;
    if (!two_pair) {
        p.p1 = 0.0;
        p.p2 = (S - 2) * (S - 3) / (L * (L - 1));
        p.p3 = 1.0 / K;
        p.p4 = (S - 2) / (K * L);
    } else {
        p.p1 = 2.0 / (K * (K - 1));
        p.p2 = (S - 4) * (S - 5) / (L * (L - 1));
        p.p3 = 2.0 / K;
        p.p4 = 2.0 * (S - 4) / (K * L);
    }
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
    StructuredCooccurrence sc;
    sc.S = static_cast<int>(S);
    sc.C = B.row_sums();
    sc.B = std::move(B);
    const StructuredMatrix A = closed_form_similarity_structured(sc);
    return RelationClasses{A.block(0, 0).diag, A.block(0, 0).off, A.block(0, 1).diag,
                           A.block(0, 1).off, A.block(2, 0).off, A.block(2, 1).off};
}

// Candidate total-similarity scores for the prompt c1 d1 ... cl dl c(l+1),
// linear in l.
struct ClassScores {
    double target;                 // d_(l+1)
    std::vector<double> others;    // in-prompt c/d, query c, unseen c/d, filler
};

ClassScores class_scores(const RelationClasses& r, double ell) {
    ClassScores s;
    s.target = r.cd_diag + ell * r.cd_off + ell * r.cc_off;
    s.others = {
        r.cc_diag + ell * r.cc_off + r.cd_diag + (ell - 1) * r.cd_off,  // in-prompt c
        r.cd_diag + ell * r.cd_off + r.cc_diag + (ell - 1) * r.cc_off,  // in-prompt d
        r.cc_diag + ell * r.cc_off + ell * r.cd_off,                    // the query c
        (ell + 1) * r.cc_off + ell * r.cd_off,                          // unseen c
        (ell + 1) * r.cd_off + ell * r.cc_off,                          // unseen d
        (ell + 1) * r.rc + ell * r.rd,                                  // any filler
    };
    return s;
}

bool predicts_target(const RelationClasses& r, int ell) {
    const ClassScores s = class_scores(r, ell);
    for (double o : s.others)
        if (o >= s.target) return false;
    return true;
}

// Scores are linear in l: the exact admissible range is the first crossing of
// target - other, reported in 2l+1 units.
double exact_bound_from_classes(const RelationClasses& r) {
    double bound = std::numeric_limits<double>::infinity();
    const ClassScores at0 = class_scores(r, 0.0);
    const ClassScores at1 = class_scores(r, 1.0);
    for (std::size_t i = 0; i < at0.others.size(); ++i) {
        const double f0 = at0.target - at0.others[i];
        const double f1 = at1.target - at1.others[i];
        const double slope = f1 - f0;
        if (slope < 0.0) {
            const double ell_star = -f0 / slope;  // f(ell_star) = 0
            bound = std::min(bound, 2.0 * ell_star + 1.0);
        }
    }
    return bound;
}

}  // namespace

ThresholdReport thm1_threshold(int K, int L, int S) {
    require(S >= 3 && K >= S && L >= S, "thm1_threshold requires K, L >= S >= 3");
    const double Kd = K, Ld = L, Sd = S;
    ThresholdReport rep;
    rep.scenario = "single-relationship";
    rep.K = K;
    rep.L = L;
    rep.S = S;
    const double den = (Kd + Ld) * (Sd - 2) * (Sd - 2) * (Sd - 1) +
                       Kd * (Sd - 2) * (Sd - 1) * (Sd - 1) - 2.0 * std::pow(Sd - 2, 4);
    require(den > 0, "thm1_threshold: nonpositive denominator");
    rep.bound = Kd * Ld * std::pow(Sd - 1, 3) / den;
    rep.limit_bound = Kd * (Sd - 1) * (Sd - 1) / ((Sd - 2) * (Sd - 2));
    rep.max_ell = max_ell_below(rep.bound);
    const RelationClasses classes = relation_classes_symbolic(Kd, Ld, Sd, false);
    rep.exact_bound = exact_bound_from_classes(classes);
    rep.exact_max_ell = max_ell_below(rep.exact_bound);
    const int ell_hi = std::max(rep.max_ell, rep.exact_max_ell) + 2;
    for (int ell = 1; ell <= ell_hi; ++ell) rep.success.push_back(2 * ell + 1 < rep.bound);
    return rep;
}

ThresholdReport thm1_two_pair_threshold(int K, int S) {
    require(K >= 3 && S >= 5, "thm1_two_pair_threshold requires K >= 3, S >= 5");
    const double Kd = K, Sd = S;
    const double den = (Kd - 2) * (Sd - 2) * (Sd - 4) - Kd;
    require(den > 0, "thm1_two_pair_threshold: nonpositive denominator");
    ThresholdReport rep;
    rep.scenario = "single-relationship-two-pair";
    rep.K = K;
    rep.S = S;
    rep.bound = Kd * (Kd - 2) * (Sd - 1) * (Sd - 1) / den;
    rep.limit_bound = Kd * (Sd - 1) * (Sd - 1) / ((Sd - 2) * (Sd - 2));
    require(rep.bound > rep.limit_bound,
            "two-pair bound must exceed the one-pair large-L bound");
    rep.max_ell = max_ell_below(rep.bound);
    const RelationClasses classes = relation_classes_symbolic(Kd, 1e6, Sd, true);
    rep.exact_bound = exact_bound_from_classes(classes);
    rep.exact_max_ell = max_ell_below(rep.exact_bound);
    const int ell_hi = std::max(rep.max_ell, rep.exact_max_ell) + 2;
    for (int ell = 1; ell <= ell_hi; ++ell) rep.success.push_back(2 * ell + 1 < rep.bound);
    return rep;
}

bool thm1_matrix_predicts(int K, double L, int S, int ell, bool two_pair) {
    require(ell >= 1, "thm1_matrix_predicts: ell >= 1");
    return predicts_target(relation_classes_symbolic(K, L, S, two_pair), ell);
}

double thm2_margin(int K, int L, int S) {
    require(K >= 2 && L >= 2 && S >= 5, "thm2_margin requires K, L >= 2 and S >= 5");
    ScenarioSpec spec;
    spec.kind = ScenarioKind::DualConnected;
    spec.K = K;
    spec.L = L;
    spec.S = S;
    spec.mix = {0, 0, 1};
    const StructuredMatrix A =
        closed_form_similarity_structured(analytic_cooccurrence_structured(spec));
    // groups [c, d, e, r]: margin = (d,d) off-diagonal minus (e,d) off-diagonal
    return A.block(1, 1).off - A.block(2, 1).off;
}

InverseBlocks single_rel_inverse_blocks(int K, int L, int S) {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::SingleRel;
    spec.K = K;
    spec.L = L;
    spec.S = S;
    spec.mix = {0, 1, 0};
    const PairProbabilities p = pair_probabilities(spec);
    const double Kd = K, Ld = L, Sd = S;
    const double a = (Sd - 2) * p.p1;
    const double b = (Sd - 2) * p.p2;
    const double c = (Sd - 2) * p.p3;
    const double d = (Sd - 2) * p.p4;
    const double e = 2 * (Kd - 1) * p.p1 + p.p3 + Ld * p.p4;
    const double f = (Ld - 1) * p.p2 + 2 * Kd * p.p4;

    InverseBlocks ib;
    ib.delta = 2 * a * (Kd - 1) * (b * (Ld - 1) + f) + b * (Ld - 1) * (c + e) + c * f -
               2 * d * d * Kd * Ld + e * f;
    const double delta = ib.delta;
    ib.q1 = -((-a * b * Ld + a * b - a * f + d * d * Ld) / ((2 * a - c - e) * delta));
    ib.q2 = (2 * a * b * (Kd - 1) + b * (c + e) - 2 * d * d * Kd) / ((b - f) * delta);
    ib.q3 = -((-2 * a * a * b * (Kd - 1) * (Ld - 1) - 2 * a * a * f * (Kd - 1) +
               2 * a * b * c * (Kd - 2) * (Ld - 1) + 2 * a * c * f * (Kd - 2) +
               2 * (a - c) * d * d * Kd * Ld + b * c * (c + e) * (Ld - 1) + c * f * (c + e) +
               d * d * Ld * (c - e)) /
              ((c - e) * (2 * a - c - e) * delta));
    ib.q4 = -d / delta;
    ib.q5 = -((-2 * a * a * b * (Kd - 1) * (Ld - 1) - 2 * a * a * f * (Kd - 1) +
               2 * a * b * e * (Kd - 2) * (Ld - 1) + 2 * a * e * f * (Kd - 2) +
               2 * (a - e) * d * d * Kd * Ld + b * e * (c + e) * (Ld - 1) + e * f * (c + e) +
               d * d * Ld * (e - c)) /
              ((e - c) * (2 * a - c - e) * delta));
    ib.q6 = -((2 * a * (Kd - 1) * (b * (Ld - 2) + f) + b * (Ld - 2) * (c + e) + c * f -
               2 * d * d * Kd * Ld + 2 * d * d * Kd + e * f) /
              ((b - f) * delta));

    // reassemble and multiply against the dense (S-2)B + C
    StructuredMatrix inv({static_cast<double>(K), static_cast<double>(K),
                          static_cast<double>(L)});
    inv.block(0, 0) = {ib.q5, ib.q1};
    inv.block(0, 1) = {ib.q3, ib.q1};
    inv.block(0, 2) = {ib.q4, ib.q4};
    inv.block(1, 0) = {ib.q3, ib.q1};
    inv.block(1, 1) = {ib.q5, ib.q1};
    inv.block(1, 2) = {ib.q4, ib.q4};
    inv.block(2, 0) = {ib.q4, ib.q4};
    inv.block(2, 1) = {ib.q4, ib.q4};
    inv.block(2, 2) = {ib.q6, ib.q2};

    const StructuredCooccurrence sc = analytic_cooccurrence_structured(spec);
    const StructuredMatrix M = sc.B.scaled(Sd - 2).plus_group_diagonal(sc.C);
    const StructuredMatrix prod = inv.mul(M);
    const StructuredMatrix ident = StructuredMatrix::identity(
        {static_cast<double>(K), static_cast<double>(K), static_cast<double>(L)});
    ib.reassembly_error = prod.max_abs_difference(ident);
    return ib;
}

DualInverseBlocks dual_connected_inverse_blocks(int K, int L, int S) {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::DualConnected;
    spec.K = K;
    spec.L = L;
    spec.S = S;
    spec.mix = {0, 0, 1};
    const CooccurrenceModel model = analytic_cooccurrence(spec);
    Matrix<double> M = model.B;
    for (std::size_t i = 0; i < M.size(); ++i) M.data()[i] *= S - 2;
    for (int i = 0; i < M.rows(); ++i) M(i, i) += model.C[static_cast<std::size_t>(i)];
    const Matrix<double> inv = linalg::inverse(M);

    DualInverseBlocks out;
    const int c0 = 0, d0 = K, e0 = 2 * K, r0 = 3 * K;
    // extract representative entries and the spread within each class
    struct ClassSpec {
        int q;
        int row, col;
    };
    // q1: (c,c) off; q2: (c,c) diag; q3: (c,d) diag; q4: (c,r);
    // q5: (d,d) diag; q6: (d,d) off; q7: (d,e) diag; q8: (d,e) off;
    // q9: (r,r) diag; q10: (r,r) off
    const ClassSpec specs[] = {
        {1, c0, c0 + 1}, {2, c0, c0}, {3, c0, d0}, {4, c0, r0}, {5, d0, d0},
        {6, d0, d0 + 1}, {7, d0, e0}, {8, d0, e0 + 1}, {9, r0, r0}, {10, r0, r0 + 1},
    };
    for (const auto& cs : specs) out.q[cs.q] = inv(cs.row, cs.col);

    // class-structure spread over a few probes per class
    auto spread = [&](double ref, int r, int c) {
        out.structure_error = std::max(out.structure_error, std::abs(inv(r, c) - ref));
    };
    spread(out.q[1], c0 + 1, c0);
    spread(out.q[1], c0, d0 + 1);
    spread(out.q[1], c0 + 1, e0);
    spread(out.q[2], c0 + 1, c0 + 1);
    spread(out.q[3], c0 + 1, d0 + 1);
    spread(out.q[3], e0, c0);  // (e,c) diag mirrors (c,d) diag
    spread(out.q[4], r0 + 1, c0);
    spread(out.q[4], d0, r0 + 1);
    spread(out.q[5], e0, e0);
    spread(out.q[6], e0, e0 + 1);
    spread(out.q[7], e0, d0);
    spread(out.q[8], e0 + 1, d0);
    spread(out.q[9], r0 + 1, r0 + 1);
    spread(out.q[10], r0 + 1, r0);

    // the four defining equations of the proof
    const PairProbabilities p = pair_probabilities(spec);
    const double Kd = K, Ld = L, Sd = S;
    const double a = (Sd - 2) * p.p1;
    const double c = (Sd - 2) * p.p3;
    const double d = (Sd - 2) * p.p4;
    const double e = 2 * (Kd - 1) * p.p1 + p.p3 + Ld * p.p4;
    const double* q = out.q;
    const double eq1 =
        a * (Kd - 1) * q[1] + c * q[3] + d * Ld * q[4] + e * q[5] + a * (Kd - 1) * q[6] - 1.0;
    const double eq2 = (c + a * (Kd - 2)) * q[1] + a * q[3] + d * Ld * q[4] + a * q[5] +
                       (e + a * (Kd - 2)) * q[6];
    const double eq3 =
        a * (Kd - 1) * q[1] + c * q[3] + d * Ld * q[4] + e * q[7] + a * (Kd - 1) * q[8];
    const double eq4 = (c + a * (Kd - 2)) * q[1] + a * q[3] + d * Ld * q[4] + a * q[7] +
                       (e + a * (Kd - 2)) * q[8];
    out.equation_error = std::max({std::abs(eq1), std::abs(eq2), std::abs(eq3), std::abs(eq4)});
    return out;
}

ConstructionLoss construction_loss(const ConstructionParams& params) {
    require(params.vocab_size >= 4, "construction_loss: vocabulary must have at least 4 tokens");
    require(std::isfinite(params.a) && params.a >= 0, "construction_loss: a must be finite, >= 0");
    const double a = params.a;
    const double b = params.b < 0 ? a * a : params.b;
    const double V = params.vocab_size;

    const double s[3] = {a * b + b * V, a + V, a * a + a + V};
    const double z = lse(s);
    ConstructionLoss out;
    out.alpha1 = std::exp(s[0] - z);
    out.alpha2 = std::exp(s[1] - z);
    out.alpha3 = std::exp(s[2] - z);
    const double scores[4] = {out.alpha1 * a * a, out.alpha2 * a * a, out.alpha3 * a * a,
                              std::log(V - 3.0)};
    out.loss = lse(scores) - scores[0];
    return out;
}

// ---- oracles -----------------------------------------------------------------

namespace {

std::vector<double> uniform_over(const std::vector<int>& ids, int vocab_size) {
    require(!ids.empty(), "oracle: empty support");
    std::vector<double> dist(static_cast<std::size_t>(vocab_size), 0.0);
    const double p = 1.0 / static_cast<double>(ids.size());
    for (int id : ids) dist[static_cast<std::size_t>(id)] = p;
    return dist;
}

std::vector<double> point_mass(int id, int vocab_size) {
    std::vector<double> dist(static_cast<std::size_t>(vocab_size), 0.0);
    dist[static_cast<std::size_t>(id)] = 1.0;
    return dist;
}

std::vector<double> partner_conditional(int generic_index, const Vocabulary& vocab,
                                        const PairPartition& part) {
    const auto& partners = part.partners1[static_cast<std::size_t>(generic_index)];
    require(!partners.empty(), "oracle: token has no partner in S1");
    std::vector<int> ids;
    ids.reserve(partners.size());
    for (int b : partners) ids.push_back(vocab.id(Role::Generic, b));
    return uniform_over(ids, vocab.size());
}

}  // namespace

std::vector<double> oracle_one_noisy(std::span<const int> prompt, const Vocabulary& vocab,
                                     const PairPartition& part) {
    require(prompt.size() == 5, "one-noisy oracle expects a five-token prompt");
    int last_plain = -1;
    int noise_count = 0;
    for (int tok : prompt) {
        require(tok >= 0 && tok < vocab.size(), "oracle: token id out of range");
        if (vocab.role(tok) == Role::Noise)
            ++noise_count;
        else
            last_plain = tok;
    }
    if (noise_count == 0) return uniform_over(vocab.ids(Role::Noise), vocab.size());
    require(noise_count == 1 && last_plain >= 0, "one-noisy oracle: malformed prompt");
    return partner_conditional(vocab.role_index(last_plain), vocab, part);
}

std::vector<double> oracle_block_noisy(std::span<const int> prompt, const Vocabulary& vocab,
                                       const PairPartition& part) {
    (void)part;
    require(prompt.size() == 8, "block-noisy oracle expects an eight-token prompt");
    const int seventh = prompt[6];
    require(seventh >= 0 && seventh < vocab.size(), "oracle: token id out of range");
    if (vocab.role(seventh) != Role::Noise) return point_mass(seventh, vocab.size());
    return uniform_over(vocab.ids(Role::Noise), vocab.size());
}

std::vector<double> repeating_rule(std::span<const int> prefix, const Vocabulary& vocab,
                                   const PairPartition& part) {
    const std::size_t pos = prefix.size() % 3;  // position within the current block
    if (pos == 0) {
        // marginal of block-leading tokens under uniform S1
        std::vector<double> dist(static_cast<std::size_t>(vocab.size()), 0.0);
        const double total = static_cast<double>(part.s1.size());
        for (int a = 0; a < part.vocab_size; ++a)
            dist[static_cast<std::size_t>(vocab.id(Role::Generic, a))] =
                static_cast<double>(part.partners1[static_cast<std::size_t>(a)].size()) / total;
        return dist;
    }
    if (pos == 1)
        return partner_conditional(vocab.role_index(prefix.back()), vocab, part);
    // pos == 2: repeat the block's first token
    return point_mass(prefix[prefix.size() - 2], vocab.size());
}

std::vector<double> oracle_failed_repeating(std::span<const int> prompt, int n_blocks,
                                            const Vocabulary& vocab,
                                            const PairPartition& part) {
    require(prompt.size() >= 2 && prompt.size() % 3 == 2,
            "repeating-blocks oracle expects l-1 complete blocks plus two tokens");
    const int ell = static_cast<int>(prompt.size() + 1) / 3;
    require(ell <= n_blocks, "repeating-blocks oracle: prompt longer than training sentences");
    for (int tok : prompt)
        require(tok >= 0 && tok < vocab.size() && vocab.role(tok) == Role::Generic,
                "repeating-blocks oracle: malformed prompt");
    return repeating_rule(prompt, vocab, part);
}

std::vector<double> fixed_location_rule(std::span<const int> prefix, int half_gap,
                                        const Vocabulary& vocab) {
    const int next_pos = static_cast<int>(prefix.size()) + 1;  // 1-based
    if (next_pos == 1) return uniform_over(vocab.ids(Role::C), vocab.size());
    if (next_pos <= 2 * half_gap + 1) return uniform_over(vocab.ids(Role::Generic), vocab.size());
    require(next_pos == 2 * half_gap + 2, "fixed-location rule: position beyond sentence end");
    const int first = prefix[0];
    require(vocab.role(first) == Role::C, "fixed-location rule: sentence must start with a_i");
    return point_mass(vocab.id(Role::D, vocab.role_index(first)), vocab.size());
}

std::vector<double> oracle_failed_fixed_location(std::span<const int> prompt, int half_gap,
                                                 const Vocabulary& vocab) {
    require(prompt.size() % 2 == 1, "fixed-location oracle expects a b ... a prompts");
    const int ell = static_cast<int>(prompt.size() + 1) / 2;
    require(ell <= half_gap + 1, "fixed-location oracle: more examples than the rule covers");
    for (std::size_t i = 0; i < prompt.size(); ++i) {
        const Role want = i % 2 == 0 ? Role::C : Role::D;
        require(prompt[i] >= 0 && prompt[i] < vocab.size() && vocab.role(prompt[i]) == want,
                "fixed-location oracle: malformed prompt");
    }
    if (ell <= half_gap) return uniform_over(vocab.ids(Role::Generic), vocab.size());
    return point_mass(vocab.id(Role::D, vocab.role_index(prompt[0])), vocab.size());
}

// ---- brute force ---------------------------------------------------------------

WeightedSentences enumerate_single_pattern(const Vocabulary& vocab, const PairPartition& part,
                                           NoiseMode noise) {
    WeightedSentences out;
    const auto& vids = vocab.ids(Role::Generic);
    const auto& nids = vocab.ids(Role::Noise);
    const double p_pair = 1.0 / static_cast<double>(part.s1.size());
    for (const auto& ab : part.s1) {
        for (const auto& cd : part.s1) {
            const std::vector<int> base = {vids[ab.first], vids[ab.second], vids[ab.first],
                                           vids[cd.first], vids[cd.second], vids[cd.first]};
            const double p_base = p_pair * p_pair;
            if (noise == NoiseMode::None) {
                out.sentences.push_back(base);
                out.probs.push_back(p_base);
            } else if (noise == NoiseMode::One) {
                for (int pos = 0; pos <= 5; ++pos) {
                    for (int n : nids) {
                        std::vector<int> s = base;
                        s.insert(s.begin() + pos, n);
                        out.sentences.push_back(std::move(s));
                        out.probs.push_back(p_base / 6.0 / static_cast<double>(nids.size()));
                    }
                }
            } else {
                for (int boundary = 0; boundary < 3; ++boundary) {
                    for (int n1 : nids)
                        for (int n2 : nids)
                            for (int n3 : nids) {
                                std::vector<int> s = base;
                                const std::vector<int> blk = {n1, n2, n3};
                                s.insert(s.begin() + 3 * boundary, blk.begin(), blk.end());
                                out.sentences.push_back(std::move(s));
                                out.probs.push_back(p_base / 3.0 /
                                                    std::pow(static_cast<double>(nids.size()), 3));
                            }
                }
            }
        }
    }
    return out;
}

WeightedSentences enumerate_failed_repeating(const Vocabulary& vocab, const PairPartition& part,
                                             int n_blocks) {
    WeightedSentences out;
    const auto& vids = vocab.ids(Role::Generic);
    const double p_pair = 1.0 / static_cast<double>(part.s1.size());
    std::vector<std::size_t> counters(static_cast<std::size_t>(n_blocks), 0);
    while (true) {
        std::vector<int> sent;
        double prob = 1.0;
        for (int b = 0; b < n_blocks; ++b) {
            const auto& ab = part.s1[counters[static_cast<std::size_t>(b)]];
            sent.push_back(vids[ab.first]);
            sent.push_back(vids[ab.second]);
            sent.push_back(vids[ab.first]);
            prob *= p_pair;
        }
        out.sentences.push_back(std::move(sent));
        out.probs.push_back(prob);
        int b = n_blocks - 1;
        while (b >= 0 && ++counters[static_cast<std::size_t>(b)] == part.s1.size()) {
            counters[static_cast<std::size_t>(b)] = 0;
            --b;
        }
        if (b < 0) break;
    }
    return out;
}

WeightedSentences enumerate_fixed_location(const Vocabulary& vocab, int half_gap) {
    WeightedSentences out;
    const int I = vocab.count(Role::C);
    const int V = vocab.count(Role::Generic);
    const int middle = 2 * half_gap;
    std::vector<int> digits(static_cast<std::size_t>(middle), 0);
    for (int i = 0; i < I; ++i) {
        std::fill(digits.begin(), digits.end(), 0);
        while (true) {
            std::vector<int> sent;
            sent.push_back(vocab.id(Role::C, i));
            for (int v : digits) sent.push_back(vocab.id(Role::Generic, v));
            sent.push_back(vocab.id(Role::D, i));
            out.sentences.push_back(std::move(sent));
            out.probs.push_back(1.0 / I / std::pow(static_cast<double>(V), middle));
            int d = middle - 1;
            while (d >= 0 && ++digits[static_cast<std::size_t>(d)] == V) {
                digits[static_cast<std::size_t>(d)] = 0;
                --d;
            }
            if (d < 0) break;
        }
    }
    return out;
}

std::vector<double> exact_conditional(const WeightedSentences& data,
                                      std::span<const int> prefix, int vocab_size) {
    std::vector<double> cond(static_cast<std::size_t>(vocab_size), 0.0);
    double mass = 0.0;
    for (std::size_t s = 0; s < data.sentences.size(); ++s) {
        const auto& sent = data.sentences[s];
        if (sent.size() <= prefix.size()) continue;
        bool match = true;
        for (std::size_t i = 0; i < prefix.size() && match; ++i) match = sent[i] == prefix[i];
        if (!match) continue;
        cond[static_cast<std::size_t>(sent[prefix.size()])] += data.probs[s];
        mass += data.probs[s];
    }
    if (mass == 0.0) return {};
    for (double& c : cond) c /= mass;
    return cond;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
    require(p.size() == q.size(), "total_variation: size mismatch");
    double tv = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
    return tv / 2.0;
}

}  // namespace icl::theory
