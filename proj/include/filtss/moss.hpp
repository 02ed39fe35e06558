#pragma once

#include "filtss/generation.hpp"
#include "filtss/massey.hpp"
#include "filtss/sseq.hpp"

namespace filtss {

// a class of E_k, in cell coordinates
struct PageClass {
    CellKey key;
    Vector coords;
};

// A cycle of F_n whose leading part is the given E_r class; nullopt if the class is not a
// permanent cycle.
std::optional<Vector> permanent_lift(const SpectralSequence& ss, int r, const PageClass& c);

struct MossOptions {
    std::size_t value_limit = 4096;
    std::size_t systems_budget = std::size_t{1} << 20;
};

struct MossReport {
    int k = 2;
    CellKey value_key;
    bool entries_permanent = true;
    CrossingReport crossing;
    bool page_defined = false;
    bool total_defined = false;
    bool exhaustive = true;
    // E_infinity coordinates at value_key: permanent members of the page bracket, and
    // leading terms of total-bracket members with a representative in F_n
    std::vector<Vector> page_leading;
    std::vector<Vector> total_leading;
    std::size_t page_values = 0;
    std::size_t total_values = 0;
    std::optional<std::pair<std::size_t, std::size_t>> match;  // indices into the two lists
    std::string message;

    bool hypothesis_ok() const { return entries_permanent && crossing.ok && page_defined && total_defined; }
    bool detected() const { return match.has_value(); }
    // detection with a nonzero leading term
    bool detected_nonzero() const;
};

// Bracket <c_1, ..., c_m> of permanent cycles in (E_k, d_k) against the bracket of their lifts
// in the total algebra. Detection means equal leading classes in E_infinity at value_key.
MossReport moss_check(const SpectralSequence& ss, int k, const std::vector<PageClass>& entries,
                      const MossOptions& opt = {});

}  // namespace filtss
