#include "icl/country.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "icl/rng.hpp"

namespace icl {

namespace {

const CountryRecord kCountryTable[] = {
    {"Suriname", "Paramaribo", "SUR"},   {"Gabon", "Libreville", "GAB"},
    {"Liechtenstein", "Vaduz", "LIE"},   {"Tajikistan", "Dushanbe", "TJK"},
    {"Dominica", "Roseau", "DMA"},       {"Turkmenistan", "Ashgabat", "TKM"},
    {"Brazil", "Brasilia", "BRA"},       {"France", "Paris", "FRA"},
    {"Japan", "Tokyo", "JPN"},           {"Kenya", "Nairobi", "KEN"},
    {"Austria", "Vienna", "AUT"},        {"Norway", "Oslo", "NOR"},
    {"Peru", "Lima", "PER"},             {"Ghana", "Accra", "GHA"},
    {"Mongolia", "Ulaanbaatar", "MGL"},  {"Jamaica", "Kingston", "JAM"},
    {"Latvia", "Riga", "LAT"},           {"Oman", "Muscat", "OMA"},
    {"Senegal", "Dakar", "SEN"},         {"Iceland", "Reykjavik", "ISL"},
};

// Eight-word templates. {C} country, {D} capital, {E} IOC code, {X} topic word.
const char* kCapitalTemplates[] = {
    "{D} is the vibrant heart of {C} today",
    "the city {D} anchors {C} with proud history",
    "travelers visit {C} to admire {D} every year",
};

const char* kIocTemplates[] = {
    "{C} {E} protects its diverse rainforests and wildlife",
    "athletes from {C} {E} compete with great spirit",
    "the team of {C} {E} marches at ceremonies",
};

const char* kCountryOnlyTemplates[] = {
    "the banking sector is central to {C} prosperity",
    "{C} hosts many lively festivals in every season",
    "farmers across {C} grow rice wheat and corn",
};

const char* kFillerTemplates[] = {
    "every nation values its own {X} and heritage",
    "markets around the world trade {X} each day",
    "students often study {X} at local schools nearby",
    "families share stories about {X} during long evenings",
    "scholars write careful books about {X} and society",
    "old towns keep their {X} alive with pride",
    "the harbor grows busy when {X} ships arrive",
    "travel guides praise regional {X} in glowing words",
    "radio programs discuss {X} almost every single morning",
    "museums display fine examples of {X} for visitors",
};

const char* kFillerTopics[] = {"music", "cuisine", "folklore", "industry", "craftwork",
                               "weaving"};

// Six-word fixed-location templates: "{D} <verb> as capital of {C}".
const char* kFixedVerbs[] = {"stands",  "serves", "shines",  "works",   "acts",
                             "functions", "operates", "remains", "endures", "thrives",
                             "rises",   "glows",  "reigns"};

std::vector<std::string> fill_template(const std::string& tmpl, const CountryRecord& rec,
                                       const std::string& topic = "") {
    std::vector<std::string> out;
    std::istringstream is(tmpl);
    std::string tok;
    while (is >> tok) {
        if (tok == "{C}") out.push_back(rec.country);
        else if (tok == "{D}") out.push_back(rec.capital);
        else if (tok == "{E}") out.push_back(rec.ioc);
        else if (tok == "{X}") out.push_back(topic);
        else out.push_back(tok);
    }
    return out;
}

struct Builder {
    std::vector<std::vector<std::string>> sentences;

    void add(std::vector<std::string> s) { sentences.push_back(std::move(s)); }
    void add_concat(const std::vector<std::string>& a, const std::vector<std::string>& b) {
        std::vector<std::string> s = a;
        s.insert(s.end(), b.begin(), b.end());
        sentences.push_back(std::move(s));
    }
};

Vocabulary build_vocab(const std::vector<CountryRecord>& sampled, bool with_ioc,
                       const std::vector<std::vector<std::string>>& sentences) {
    std::vector<Vocabulary::Entry> entries;
    std::set<std::string> named;
    int idx = 0;
    for (const auto& rec : sampled) {
        entries.push_back({rec.country, Role::C, idx});
        named.insert(rec.country);
        ++idx;
    }
    idx = 0;
    for (const auto& rec : sampled) {
        entries.push_back({rec.capital, Role::D, idx});
        named.insert(rec.capital);
        ++idx;
    }
    if (with_ioc) {
        idx = 0;
        for (const auto& rec : sampled) {
            entries.push_back({rec.ioc, Role::E, idx});
            named.insert(rec.ioc);
            ++idx;
        }
    }
    std::set<std::string> others;
    for (const auto& sent : sentences)
        for (const auto& tok : sent)
            if (!named.count(tok)) others.insert(tok);
    idx = 0;
    for (const auto& tok : others) entries.push_back({tok, Role::Filler, idx++});
    return Vocabulary(std::move(entries));
}

Corpus finish(ScenarioKind kind, std::uint64_t seed,
              const std::vector<CountryRecord>& sampled, bool with_ioc, Builder& b) {
    Corpus corpus;
    corpus.spec.kind = kind;
    corpus.spec.seed = seed;
    corpus.vocab = build_vocab(sampled, with_ioc, b.sentences);
    corpus.sentences.reserve(b.sentences.size());
    for (const auto& sent : b.sentences) {
        std::vector<int> ids;
        ids.reserve(sent.size());
        for (const auto& tok : sent) ids.push_back(corpus.vocab.find(tok));
        corpus.sentences.push_back(std::move(ids));
    }
    return corpus;
}

}  // namespace

std::span<const CountryRecord> country_table() {
    return {kCountryTable, std::size(kCountryTable)};
}

Corpus gen_country_corpus(ScenarioKind kind, std::uint64_t seed) {
    require(kind == ScenarioKind::CountryTemplate || kind == ScenarioKind::CountryFixedTemplate,
            "gen_country_corpus: wrong kind");
    const auto table = country_table();
    require(table.size() >= 10, "country table needs at least 10 entries");

    Rng rng(Rng::derive(seed, 0xc0u));
    std::vector<CountryRecord> sampled;
    for (int i : rng.sample_distinct(static_cast<int>(table.size()), 10))
        sampled.push_back(table[static_cast<std::size_t>(i)]);

    Builder b;
    if (kind == ScenarioKind::CountryTemplate) {
        // one country-capital pair, capital free-position
        std::vector<std::vector<std::string>> capital_sents;
        for (const auto& rec : sampled)
            for (const char* tmpl : kCapitalTemplates) {
                capital_sents.push_back(fill_template(tmpl, rec));
                b.add(capital_sents.back());
            }
        // one country-IOC pair, code directly after the country
        std::vector<std::vector<std::string>> ioc_sents;
        for (const auto& rec : sampled)
            for (const char* tmpl : kIocTemplates) {
                ioc_sents.push_back(fill_template(tmpl, rec));
                b.add(ioc_sents.back());
            }
        // one country, no pair
        for (const auto& rec : sampled)
            for (const char* tmpl : kCountryOnlyTemplates) b.add(fill_template(tmpl, rec));
        // no country at all: 10 templates x 6 topics = 60
        for (const char* tmpl : kFillerTemplates)
            for (const char* topic : kFillerTopics)
                b.add(fill_template(tmpl, CountryRecord{}, topic));
        // every ordered pair of distinct-country single sentences: 30*27 = 810 each
        auto country_of = [&](std::size_t sent_idx) { return sent_idx / 3; };
        for (std::size_t i = 0; i < capital_sents.size(); ++i)
            for (std::size_t j = 0; j < capital_sents.size(); ++j)
                if (country_of(i) != country_of(j))
                    b.add_concat(capital_sents[i], capital_sents[j]);
        for (std::size_t i = 0; i < ioc_sents.size(); ++i)
            for (std::size_t j = 0; j < ioc_sents.size(); ++j)
                if (country_of(i) != country_of(j)) b.add_concat(ioc_sents[i], ioc_sents[j]);
        return finish(kind, seed, sampled, true, b);
    }

    // CountryFixedTemplate: capital first, country last, six words per pair sentence.
    std::vector<std::vector<std::string>> pair_sents;
    for (const auto& rec : sampled)
        for (const char* verb : kFixedVerbs) {
            std::vector<std::string> s = {rec.capital, verb, "as", "capital", "of", rec.country};
            pair_sents.push_back(s);
            b.add(std::move(s));
        }
    for (const auto& rec : sampled)
        for (const char* tmpl : kCountryOnlyTemplates) b.add(fill_template(tmpl, rec));
    for (const char* tmpl : kFillerTemplates)
        for (const char* topic : kFillerTopics)
            b.add(fill_template(tmpl, CountryRecord{}, topic));
    // 1000 distinct ordered pairs of distinct-country pair sentences (of 130*117 possible)
    std::set<std::pair<int, int>> used;
    auto country_of = [&](int sent_idx) { return sent_idx / 13; };
    const int n_pairs = static_cast<int>(pair_sents.size());
    while (used.size() < 1000) {
        const int i = rng.uniform_int(0, n_pairs - 1);
        const int j = rng.uniform_int(0, n_pairs - 1);
        if (country_of(i) == country_of(j)) continue;
        if (!used.insert({i, j}).second) continue;
        b.add_concat(pair_sents[static_cast<std::size_t>(i)],
                     pair_sents[static_cast<std::size_t>(j)]);
    }
    return finish(kind, seed, sampled, false, b);
}

void validate_country_corpus(const Corpus& corpus) {
    const auto fail = [](const std::string& msg) {
        throw InvalidArgument("country corpus validation failed: " + msg);
    };
    const bool two_rel = corpus.spec.kind == ScenarioKind::CountryTemplate;
    const int expected_total = two_rel ? 1770 : 1220;
    if (corpus.n_sentences() != expected_total) fail("wrong sentence count");

    for (const auto& sent : corpus.sentences) {
        for (std::size_t p = 0; p < sent.size(); ++p) {
            if (corpus.vocab.role(sent[p]) == Role::E) {
                // IOC codes must directly follow their country
                if (p == 0) fail("IOC code at sentence start");
                const int prev = sent[p - 1];
                if (corpus.vocab.role(prev) != Role::C ||
                    corpus.vocab.role_index(prev) != corpus.vocab.role_index(sent[p]))
                    fail("IOC code not directly after its country");
            }
        }
        if (!two_rel) {
            // pair sentences: capital at slot 0, matching country at slot 5
            if (sent.size() == 6 || sent.size() == 12) {
                for (std::size_t off = 0; off < sent.size(); off += 6) {
                    if (corpus.vocab.role(sent[off]) != Role::D) fail("pair sentence must start with a capital");
                    if (corpus.vocab.role(sent[off + 5]) != Role::C) fail("pair sentence must end with a country");
                    if (corpus.vocab.role_index(sent[off]) != corpus.vocab.role_index(sent[off + 5]))
                        fail("capital/country indices mismatch");
                }
            }
        }
    }
}

Vocabulary country_vocabulary_from_tokens(const std::vector<std::string>& distinct_tokens) {
    std::map<std::string, std::pair<Role, int>> known;
    const auto table = country_table();
    for (std::size_t i = 0; i < table.size(); ++i) {
        known[table[i].country] = {Role::C, static_cast<int>(i)};
        known[table[i].capital] = {Role::D, static_cast<int>(i)};
        known[table[i].ioc] = {Role::E, static_cast<int>(i)};
    }
    // Keep table-relative pairing: role_index = order of the token's country
    // among the sampled ones (sorted by table position).
    std::vector<int> sampled;
    for (const auto& tok : distinct_tokens) {
        auto it = known.find(tok);
        if (it != known.end() && it->second.first == Role::C)
            sampled.push_back(it->second.second);
    }
    std::sort(sampled.begin(), sampled.end());
    auto sample_index = [&](int table_idx) {
        const auto it = std::find(sampled.begin(), sampled.end(), table_idx);
        return it == sampled.end() ? -1 : static_cast<int>(it - sampled.begin());
    };

    std::vector<Vocabulary::Entry> entries;
    int filler_idx = 0;
    std::vector<std::string> sorted = distinct_tokens;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& tok : sorted) {
        auto it = known.find(tok);
        if (it == known.end()) {
            entries.push_back({tok, Role::Filler, filler_idx++});
        } else {
            const int si = sample_index(it->second.second);
            require(si >= 0, "country corpus token without its country: " + tok);
            entries.push_back({tok, it->second.first, si});
        }
    }
    return Vocabulary(std::move(entries));
}

}  // namespace icl
