#pragma once

#include <span>
#include <string>
#include <vector>

#include "icl/corpus.hpp"

namespace icl {

struct CountryRecord {
    std::string country, capital, ioc;
};

/// Bundled static table (20 records, single-word names). Ten are sampled per corpus.
std::span<const CountryRecord> country_table();

/// Templated country corpora. CountryTemplate: capital/IOC relations with the
/// 30/30/30/60/810/810 category counts, capitals free-position, IOC codes
/// directly after the country. CountryFixedTemplate: 130/30/60/1000 with
/// capital first and country last in six-word pair sentences.
/// Sampled countries land in roles C (country) / D (capital) / E (IOC) with
/// aligned indices; template words are fillers.
Corpus gen_country_corpus(ScenarioKind kind, std::uint64_t seed);

void validate_country_corpus(const Corpus& corpus);

/// Vocabulary for a country corpus loaded from text: roles recovered by
/// matching names against the bundled table.
Vocabulary country_vocabulary_from_tokens(const std::vector<std::string>& distinct_tokens);

}  // namespace icl
