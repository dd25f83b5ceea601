#pragma once

#include <string>
#include <vector>

#include "icl/error.hpp"

namespace icl {

/// Token roles. C/D (and E/F) are the paired relation words, Filler the r's,
/// Noise the n's, Generic the plain vocabulary of the pattern tasks.
enum class Role { C, D, E, F, Filler, Noise, Generic };

const char* role_name(Role r);

/// Typed token inventory with dense ids. Layout is by role block so the
/// co-occurrence matrices inherit the block structure used in the analysis.
class Vocabulary {
public:
    struct Entry {
        std::string name;
        Role role;
        int role_index;  // 0-based within role
    };

    Vocabulary() = default;
    explicit Vocabulary(std::vector<Entry> entries);

    int size() const { return static_cast<int>(entries_.size()); }
    const Entry& entry(int id) const { return entries_[static_cast<std::size_t>(id)]; }
    const std::string& name(int id) const { return entry(id).name; }
    Role role(int id) const { return entry(id).role; }
    int role_index(int id) const { return entry(id).role_index; }

    int count(Role r) const;
    /// id of the role_index-th token of a role; throws if absent.
    int id(Role r, int role_index) const;
    const std::vector<int>& ids(Role r) const;
    /// id by token name; -1 if unknown.
    int find(const std::string& name) const;

    // c1..cK, d1..dK[, e1..eK[, f1..fK]], r1..rL
    static Vocabulary relationship(int K, int L, bool with_e = false, bool with_f = false);
    // v1..v|V|, n1..nN
    static Vocabulary pattern(int n_generic, int n_noise);
    // a1..aI, b1..bI, v1..v|V|   (paired tokens kept in the C/D roles)
    static Vocabulary fixed_location(int n_pairs, int n_generic);

private:
    std::vector<Entry> entries_;
    std::vector<std::vector<int>> by_role_;
};

}  // namespace icl
