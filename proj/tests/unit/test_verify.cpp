#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "archi/errors.hpp"
#include "archi/moments.hpp"
#include "archi/verify.hpp"

using namespace archi;

namespace {

const Check* find(const std::vector<Check>& cs, const std::string& name) {
    for (const Check& c : cs)
        if (c.name == name) return &c;
    return nullptr;
}

}  // namespace

TEST_CASE("check decisions") {
    CHECK(Check::make("a", "", 0.1, 0.2).pass);
    CHECK_FALSE(Check::make("a", "", 0.2, 0.2).pass);
    CHECK(Check::make("a", "", 0.2, 0.2, Check::Cmp::AtMost).pass);
    CHECK(Check::make("a", "", 0, 0, Check::Cmp::Equal).pass);
    CHECK_FALSE(Check::make("a", "", std::nan(""), 1).pass);
    CHECK_THROWS_AS(verify_suite("nope"), RangeError);
}

TEST_CASE("disk-annulus suite") {
    const auto cs = verify_suite("disk-annulus", {.n = 60});
    for (const Check& c : cs) {
        INFO(c.name << " " << c.value << " " << c.note);
        CHECK(c.pass);
    }
    REQUIRE(find(cs, "gamma_ratio_rate"));
    CHECK(find(cs, "gamma_ratio_rate")->value == doctest::Approx(0.25).epsilon(0.05));
    REQUIRE(find(cs, "p_ratio_halving"));
    CHECK(find(cs, "p_ratio_halving")->note.rfind("3 pairs", 0) == 0);

    std::ostringstream os;
    write_report_csv(os, cs);
    const std::string text = os.str();
    CHECK(text.rfind("check,paper_ref,value,threshold,pass\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(cs.size()) + 1);
}

TEST_CASE("kernel suite") {
    for (const Check& c : verify_suite("kernel")) {
        INFO(c.name << " " << c.value);
        CHECK(c.pass);
    }
}

TEST_CASE("exterior suite") {
    for (const Check& c : verify_suite("exterior", {.n = 40})) {
        INFO(c.name << " " << c.value << " " << c.note);
        CHECK(c.pass);
    }
}

TEST_CASE("comparison helper counts violations") {
    const Scene sc({Region::disk({0, 0}, 1.0)}, {Region::disk({0, 0}, 0.5)});
    const auto g = orthogonalize(scene_moments(sc, 10, PointSet::G), 10);
    const auto s = orthogonalize(scene_moments(sc, 10, PointSet::GStar), 10);
    const auto pts = random_points(50, -2, 2, -2, 2, 3);
    const std::vector<int> ns{5, 10};
    CHECK(comparison_violations(s, g, pts, ns) == 0);
    // swapped roles break the inequality everywhere
    CHECK(comparison_violations(g, s, pts, ns) == 50);
}
