#include "doctest.h"
#include "fixtures.hpp"
#include "filtss/moss.hpp"

using namespace filtss;

namespace {

// the page-r class of a basis element (an r-almost-cycle of its level)
PageClass class_of(const SpectralSequence& ss, int r, const std::string& name) {
    const FilteredDGA& x = ss.source();
    const std::size_t i = x.algebra().index(name);
    const CellKey k{x.level(i), x.algebra().element(i).grade};
    const auto cell = ss.cell(r, k);
    auto c = cell->coords(cell->project(x.algebra().basis_chain(i).coeffs));
    if (!c) throw std::logic_error(name + " is not a class on this page");
    return {k, *c};
}

std::vector<PageClass> abc(const SpectralSequence& ss, int r) {
    return {class_of(ss, r, "a"), class_of(ss, r, "b"), class_of(ss, r, "c")};
}

}  // namespace

TEST_CASE("permanent lifts") {
    const auto x = fixtures::moss_fixture(3, 2, false);
    const SpectralSequence ss(x);
    const auto a = permanent_lift(ss, 2, class_of(ss, 2, "a"));
    REQUIRE(a);
    CHECK(is_zero(x.algebra().d(Chain{{-1, 0}, *a}).coeffs));
    // e supports d_2, so it is not a permanent cycle
    CHECK_FALSE(permanent_lift(ss, 1, class_of(ss, 1, "e")).has_value());
}

TEST_CASE("Moss detection holds when the crossing hypothesis does") {
    for (std::uint32_t p : {2u, 3u})
        for (int k : {2, 3}) {
            const auto x = fixtures::moss_fixture(p, k, false);
            const SpectralSequence ss(x);
            const MossReport rep = moss_check(ss, k, abc(ss, k));
            CHECK(rep.value_key == CellKey{2 * k, {-2, 0}});
            CHECK(rep.hypothesis_ok());
            CHECK(rep.exhaustive);
            CHECK(rep.detected_nonzero());
            CHECK(rep.page_values == 1);
            CHECK(rep.total_values == 1);
        }
}

TEST_CASE("a crossing differential is reported") {
    for (int k : {2, 3}) {
        const auto x = fixtures::moss_fixture(2, k, true);
        const SpectralSequence ss(x);
        const MossReport rep = moss_check(ss, k, abc(ss, k));
        CHECK_FALSE(rep.crossing.ok);
        CHECK_FALSE(rep.hypothesis_ok());
        REQUIRE(rep.crossing.witnesses.size() == 1);
        CHECK(rep.crossing.witnesses[0].key == CellKey{k - 1, {-1, 0}});
        CHECK(rep.crossing.witnesses[0].page == k + 2);
        CHECK(rep.message.find("crossing") != std::string::npos);
    }
}

TEST_CASE("entries that are not permanent are reported") {
    const auto x = fixtures::moss_fixture(2, 2, false);
    const SpectralSequence ss(x);
    // on E_1 the class of e is not permanent (it supports d_2)
    auto entries = abc(ss, 1);
    entries[1] = class_of(ss, 1, "e");
    const MossReport rep = moss_check(ss, 1, entries);
    CHECK_FALSE(rep.entries_permanent);
    CHECK_FALSE(rep.hypothesis_ok());
}
