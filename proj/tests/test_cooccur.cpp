#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "icl/cooccur.hpp"

using namespace icl;

namespace {

ScenarioSpec single_rel(int S, int K, int L, Mixture mix, std::uint64_t seed = 1) {
    ScenarioSpec s;
    s.kind = ScenarioKind::SingleRel;
    s.S = S;
    s.K = K;
    s.L = L;
    s.mix = mix;
    s.seed = seed;
    return s;
}

double total_mass(const CooccurrenceModel& m) {
    double sum = 0.0;
    for (std::size_t i = 0; i < m.B.size(); ++i) sum += m.B.data()[i];
    return sum;
}

// Independent oracle for tiny single-relationship models: enumerate every
// (pair, filler-set) sentence with its probability and count ordered
// co-occurrences. Positions never matter for bag counts.
Matrix<double> enumerate_single_rel_B(int K, int L, int S) {
    REQUIRE(S == 3);  // one pair + one filler
    const int V = 2 * K + L;
    Matrix<double> B(V, V, 0.0);
    const double prob = 1.0 / (K * L);
    for (int p = 0; p < K; ++p) {
        for (int f = 0; f < L; ++f) {
            const int toks[3] = {p, K + p, 2 * K + f};  // c_p, d_p, r_f
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    if (i != j) B(toks[i], toks[j]) += prob;
        }
    }
    return B;
}

}  // namespace

TEST_CASE("single three-token sentence produces six ordered pairs") {
    Corpus c;
    c.spec = single_rel(3, 3, 3, {0, 1, 0});
    c.vocab = Vocabulary::relationship(3, 3);
    c.sentences = {{c.vocab.find("c1"), c.vocab.find("d1"), c.vocab.find("r1")}};
    const CooccurrenceModel m = empirical_cooccurrence(c);
    CHECK(m.B(c.vocab.find("c1"), c.vocab.find("d1")) == doctest::Approx(1.0));
    CHECK(m.B(c.vocab.find("c1"), c.vocab.find("r1")) == doctest::Approx(1.0));
    CHECK(m.B(c.vocab.find("d1"), c.vocab.find("c1")) == doctest::Approx(1.0));
    CHECK(total_mass(m) == doctest::Approx(6.0));  // S(S-1)
    CHECK(m.C[0] == doctest::Approx(2.0));
}

TEST_CASE("empirical co-occurrence rejects bad corpora") {
    Corpus empty;
    empty.spec = single_rel(3, 3, 3, {0, 1, 0});
    empty.vocab = Vocabulary::relationship(3, 3);
    CHECK_THROWS_AS(empirical_cooccurrence(empty), InvalidArgument);

    Corpus ragged = empty;
    ragged.sentences = {{0, 1, 2}, {0, 1, 2, 3}};
    CHECK_THROWS_AS(empirical_cooccurrence(ragged), InvalidArgument);
}

TEST_CASE("analytic model matches brute-force enumeration at K=3, L=3, S=3") {
    const ScenarioSpec spec = single_rel(3, 3, 3, {0, 1, 0});
    const CooccurrenceModel analytic = analytic_cooccurrence(spec);
    const Matrix<double> oracle = enumerate_single_rel_B(3, 3, 3);
    CHECK(linf_distance(analytic.B, oracle) < 1e-12);

    const PairProbabilities p = pair_probabilities(spec);
    CHECK(p.p1 == 0.0);
    CHECK(p.p2 == 0.0);  // (S-2)(S-3) = 0
    CHECK(p.p3 == doctest::Approx(1.0 / 3));
    CHECK(p.p4 == doctest::Approx(1.0 / 9));
}

TEST_CASE("analytic single-relationship model: known values and zero c-c mass") {
    const ScenarioSpec spec = single_rel(8, 10, 20, {0, 1, 0});
    const CooccurrenceModel m = analytic_cooccurrence(spec);
    const Vocabulary vocab = Vocabulary::relationship(10, 20);
    CHECK(m.B(vocab.find("c1"), vocab.find("c2")) == 0.0);  // p1 = 0
    CHECK(m.B(vocab.find("c1"), vocab.find("d1")) == doctest::Approx(0.1));
    CHECK(m.B(vocab.find("c1"), vocab.find("r5")) == doctest::Approx(6.0 / 200));
    CHECK(total_mass(m) == doctest::Approx(56.0));  // S(S-1)
    for (int i = 0; i < m.B.rows(); ++i) {
        double row = 0.0;
        for (int j = 0; j < m.B.cols(); ++j) row += m.B(i, j);
        CHECK(std::abs(row - m.C[static_cast<std::size_t>(i)]) < 1e-12);
    }
}

TEST_CASE("dual-connected analytic model: degenerate p2 and total mass") {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::DualConnected;
    spec.S = 5;
    spec.K = 2;
    spec.L = 2;
    spec.mix = {0, 0, 1};
    const PairProbabilities p = pair_probabilities(spec);
    CHECK(p.p2 == 0.0);  // S - 5 = 0
    CHECK(p.p1 == doctest::Approx(0.5));
    const CooccurrenceModel m = analytic_cooccurrence(spec);
    CHECK(total_mass(m) == doctest::Approx(20.0));  // S(S-1)

    ScenarioSpec big = spec;
    big.S = 8;
    big.K = 10;
    big.L = 60;
    CHECK(total_mass(analytic_cooccurrence(big)) == doctest::Approx(56.0));
}

TEST_CASE("unsupported scenarios are refused") {
    CHECK_THROWS_AS(pair_probabilities(single_rel(8, 10, 20, {0.5, 0.5, 0})),
                    UnsupportedScenario);
    ScenarioSpec dd;
    dd.kind = ScenarioKind::DualDisconnected;
    dd.mix = {0, 0, 1};
    CHECK_THROWS_AS(analytic_cooccurrence(dd), UnsupportedScenario);
}

TEST_CASE("empirical B converges to analytic B for the one-pair model") {
    const ScenarioSpec spec = single_rel(8, 10, 20, {0, 1, 0}, 1234);
    const CooccurrenceModel analytic = analytic_cooccurrence(spec);
    double previous = 1e9;
    for (int n : {10000, 40000, 160000}) {
        ScenarioSpec s = spec;
        s.seed = Rng::derive(1234, static_cast<std::uint64_t>(n));
        const CooccurrenceModel emp = empirical_cooccurrence(gen_single_relationship(s, n));
        const double dist = linf_distance(emp.B, analytic.B);
        CHECK(dist < previous);  // monotone over the fixed seed schedule
        previous = dist;
    }
    CHECK(previous < 1e-2);
}

TEST_CASE("empirical two-pair and task-selection corpora match their analytic models") {
    // validates the derived two-pair class probabilities against the generator
    ScenarioSpec two = single_rel(8, 10, 20, {0, 0, 1}, 77);
    const CooccurrenceModel twoA = analytic_cooccurrence(two);
    const CooccurrenceModel twoE = empirical_cooccurrence(gen_single_relationship(two, 60000));
    CHECK(linf_distance(twoA.B, twoE.B) < 1.5e-2);

    ScenarioSpec dc;
    dc.kind = ScenarioKind::DualConnected;
    dc.S = 8;
    dc.K = 10;
    dc.L = 60;
    dc.mix = {0, 0, 1};
    dc.seed = 78;
    const CooccurrenceModel dcA = analytic_cooccurrence(dc);
    const CooccurrenceModel dcE = empirical_cooccurrence(gen_dual_connected(dc, 60000));
    CHECK(linf_distance(dcA.B, dcE.B) < 1.5e-2);
}

TEST_CASE("structured and dense analytic forms agree") {
    const ScenarioSpec spec = single_rel(8, 10, 20, {0, 1, 0});
    const StructuredCooccurrence sc = analytic_cooccurrence_structured(spec);
    const Matrix<double> dense = sc.B.dense({10, 10, 20});
    const CooccurrenceModel m = analytic_cooccurrence(spec);
    CHECK(linf_distance(dense, m.B) == 0.0);
    // row sums match the dense diagonal C
    CHECK(sc.C[0] == doctest::Approx(m.C[0]));
    CHECK(sc.C[2] == doctest::Approx(m.C[static_cast<std::size_t>(20)]));
}

TEST_CASE("rescaling round-trips") {
    const ScenarioSpec spec = single_rel(8, 10, 20, {0, 1, 0});
    const CooccurrenceModel m = analytic_cooccurrence(spec);
    const CooccurrenceModel un = rescaled(m, CoocScale::Unscaled);
    double mass = 0.0;
    for (std::size_t i = 0; i < un.B.size(); ++i) mass += un.B.data()[i];
    CHECK(mass == doctest::Approx(1.0));
    const CooccurrenceModel back = rescaled(un, CoocScale::Scaled);
    CHECK(linf_distance(back.B, m.B) < 1e-12);
}
