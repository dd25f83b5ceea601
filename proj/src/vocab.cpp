#include "icl/vocab.hpp"

#include <unordered_set>

namespace icl {

const char* role_name(Role r) {
    switch (r) {
        case Role::C: return "c";
        case Role::D: return "d";
        case Role::E: return "e";
        case Role::F: return "f";
        case Role::Filler: return "r";
        case Role::Noise: return "n";
        case Role::Generic: return "v";
    }
    return "?";
}

Vocabulary::Vocabulary(std::vector<Entry> entries) : entries_(std::move(entries)) {
    by_role_.resize(7);
    std::unordered_set<std::string> seen;
    for (std::size_t id = 0; id < entries_.size(); ++id) {
        const Entry& e = entries_[id];
        require(seen.insert(e.name).second, "Vocabulary: duplicate token name " + e.name);
        by_role_[static_cast<std::size_t>(e.role)].push_back(static_cast<int>(id));
    }
}

int Vocabulary::count(Role r) const {
    return static_cast<int>(by_role_[static_cast<std::size_t>(r)].size());
}

int Vocabulary::id(Role r, int role_index) const {
    const auto& ids = by_role_[static_cast<std::size_t>(r)];
    require(role_index >= 0 && role_index < static_cast<int>(ids.size()),
            "Vocabulary: role index out of range");
    return ids[static_cast<std::size_t>(role_index)];
}

const std::vector<int>& Vocabulary::ids(Role r) const {
    return by_role_[static_cast<std::size_t>(r)];
}

int Vocabulary::find(const std::string& name) const {
    for (std::size_t id = 0; id < entries_.size(); ++id)
        if (entries_[id].name == name) return static_cast<int>(id);
    return -1;
}

namespace {

void append_block(std::vector<Vocabulary::Entry>& out, const char* prefix, Role role, int n) {
    for (int i = 0; i < n; ++i)
        out.push_back({prefix + std::to_string(i + 1), role, i});
}

}  // namespace

Vocabulary Vocabulary::relationship(int K, int L, bool with_e, bool with_f) {
    require(K >= 1 && L >= 0, "relationship vocabulary: K >= 1, L >= 0 required");
    require(!(with_f && !with_e), "relationship vocabulary: f requires e");
    std::vector<Entry> entries;
    append_block(entries, "c", Role::C, K);
    append_block(entries, "d", Role::D, K);
    if (with_e) append_block(entries, "e", Role::E, K);
    if (with_f) append_block(entries, "f", Role::F, K);
    append_block(entries, "r", Role::Filler, L);
    return Vocabulary(std::move(entries));
}

Vocabulary Vocabulary::pattern(int n_generic, int n_noise) {
    require(n_generic >= 2, "pattern vocabulary: need at least two generic tokens");
    std::vector<Entry> entries;
    append_block(entries, "v", Role::Generic, n_generic);
    append_block(entries, "n", Role::Noise, n_noise);
    return Vocabulary(std::move(entries));
}

Vocabulary Vocabulary::fixed_location(int n_pairs, int n_generic) {
    require(n_pairs >= 1 && n_generic >= 1, "fixed_location vocabulary: I, |V| >= 1");
    std::vector<Entry> entries;
    append_block(entries, "a", Role::C, n_pairs);
    append_block(entries, "b", Role::D, n_pairs);
    append_block(entries, "v", Role::Generic, n_generic);
    return Vocabulary(std::move(entries));
}

}  // namespace icl
