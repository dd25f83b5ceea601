#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <set>

#include "icl/country.hpp"
#include "icl/prompts.hpp"

using namespace icl;

TEST_CASE("bundled table has 20 single-word records") {
    const auto table = country_table();
    CHECK(table.size() == 20);
    std::set<std::string> names;
    for (const auto& rec : table) {
        CHECK(rec.country.find(' ') == std::string::npos);
        CHECK(rec.capital.find(' ') == std::string::npos);
        CHECK(rec.ioc.size() == 3);
        CHECK(names.insert(rec.country).second);
        CHECK(names.insert(rec.capital).second);
        CHECK(names.insert(rec.ioc).second);
    }
}

TEST_CASE("two-relation corpus: 30+30+30+60+810+810 = 1770 sentences") {
    const Corpus c = gen_country_corpus(ScenarioKind::CountryTemplate, 7);
    CHECK(c.n_sentences() == 1770);
    validate_corpus(c);
    CHECK(c.vocab.count(Role::C) == 10);
    CHECK(c.vocab.count(Role::D) == 10);
    CHECK(c.vocab.count(Role::E) == 10);

    // IOC codes always directly follow their own country
    for (const auto& sent : c.sentences)
        for (std::size_t p = 0; p < sent.size(); ++p)
            if (c.vocab.role(sent[p]) == Role::E) {
                REQUIRE(p >= 1);
                CHECK(c.vocab.role(sent[p - 1]) == Role::C);
                CHECK(c.vocab.role_index(sent[p - 1]) == c.vocab.role_index(sent[p]));
            }

    // category histogram: sentences with exactly two capital pairs number 810
    int two_capital = 0, two_ioc = 0, no_country = 0;
    for (const auto& sent : c.sentences) {
        int countries = 0, capitals = 0, iocs = 0;
        for (int t : sent) {
            countries += c.vocab.role(t) == Role::C;
            capitals += c.vocab.role(t) == Role::D;
            iocs += c.vocab.role(t) == Role::E;
        }
        if (countries == 0) ++no_country;
        if (capitals == 2) ++two_capital;
        if (iocs == 2) ++two_ioc;
    }
    CHECK(no_country == 60);
    CHECK(two_capital == 810);
    CHECK(two_ioc == 810);

    // deterministic given seed
    const Corpus c2 = gen_country_corpus(ScenarioKind::CountryTemplate, 7);
    CHECK(c2.sentences == c.sentences);
}

TEST_CASE("fixed-location corpus: 130+30+60+1000 = 1220 sentences") {
    const Corpus c = gen_country_corpus(ScenarioKind::CountryFixedTemplate, 19);
    CHECK(c.n_sentences() == 1220);
    validate_corpus(c);

    int pair6 = 0, pair12 = 0;
    for (const auto& sent : c.sentences) {
        if (sent.size() == 6 && c.vocab.role(sent[0]) == Role::D) {
            ++pair6;
            CHECK(c.vocab.role(sent[5]) == Role::C);
            CHECK(c.vocab.role_index(sent[0]) == c.vocab.role_index(sent[5]));
        }
        if (sent.size() == 12) {
            ++pair12;
            // concatenation of two pair sentences with different countries
            CHECK(c.vocab.role_index(sent[0]) == c.vocab.role_index(sent[5]));
            CHECK(c.vocab.role_index(sent[6]) == c.vocab.role_index(sent[11]));
            CHECK(c.vocab.role_index(sent[5]) != c.vocab.role_index(sent[11]));
        }
    }
    CHECK(pair6 == 130);
    CHECK(pair12 == 1000);
}

TEST_CASE("country prompts pair the right tokens") {
    const Corpus c = gen_country_corpus(ScenarioKind::CountryTemplate, 7);
    Rng rng(3);
    const Prompt cap = build_icl_prompt(c.spec, c.vocab, nullptr, 3, TaskTag::CountryCapital, rng);
    CHECK(cap.tokens.size() == 7);
    CHECK(c.vocab.role(cap.expected) == Role::D);
    CHECK(c.vocab.role_index(cap.expected) == c.vocab.role_index(cap.tokens.back()));

    const Prompt ioc = build_icl_prompt(c.spec, c.vocab, nullptr, 5, TaskTag::CountryIoc, rng);
    CHECK(ioc.tokens.size() == 11);
    CHECK(c.vocab.role(ioc.expected) == Role::E);
}

TEST_CASE("country corpus text round-trip preserves roles") {
    namespace fs = std::filesystem;
    const fs::path tmp = fs::temp_directory_path() / "icl_country_test.txt";
    const Corpus c = gen_country_corpus(ScenarioKind::CountryTemplate, 7);
    save_corpus(c, tmp.string());
    const Corpus back = load_corpus(tmp.string());
    CHECK(back.n_sentences() == 1770);
    CHECK(back.vocab.count(Role::C) == 10);
    // same token names sentence-by-sentence
    for (int s = 0; s < 10; ++s) {
        const auto& a = c.sentences[static_cast<std::size_t>(s)];
        const auto& b = back.sentences[static_cast<std::size_t>(s)];
        REQUIRE(a.size() == b.size());
        for (std::size_t j = 0; j < a.size(); ++j)
            CHECK(c.vocab.name(a[j]) == back.vocab.name(b[j]));
    }
    validate_corpus(back);
    fs::remove(tmp);
}
