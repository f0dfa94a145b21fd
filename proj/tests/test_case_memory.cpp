#include <catch2/catch_amalgamated.hpp>

#include "builders.hpp"

using namespace cbdt;
using testkit::make_problem;

TEST_CASE("add_case appends and guards the memory conditions", "[case_memory]") {
    Memory m;
    m.space = testkit::phone_memory().space;
    m.actions = {ActionId{"buy"}, ActionId{"not-buy"}};

    const Case c1{make_problem({{"screen", "5"}, {"ram", "16"}}), ActionId{"buy"}, {Rational(5)}};
    const Memory one = add_case(m, c1);
    CHECK(one.cases.size() == 1);
    CHECK(m.cases.empty()); // input untouched

    CHECK_THROWS_WITH(add_case(one, Case{c1.problem, ActionId{"not-buy"}, {Rational(3)}}),
                      Catch::Matchers::ContainsSubstring("duplicate-problem"));
    CHECK_THROWS_WITH(add_case(one, Case{make_problem({{"screen", "7"}, {"ram", "16"}}),
                                         ActionId{"buy"}, {Rational(0)}}),
                      Catch::Matchers::ContainsSubstring("null-result"));
    CHECK_THROWS_WITH(add_case(one, Case{make_problem({{"screen", "7"}, {"ram", "16"}}),
                                         ActionId{"steal"}, {Rational(1)}}),
                      Catch::Matchers::ContainsSubstring("unknown-action"));
    CHECK_THROWS_AS(add_case(one, Case{make_problem({{"screen", "6"}, {"ram", "16"}}),
                                       ActionId{"buy"}, {Rational(1)}}),
                    Error);
}

TEST_CASE("history lists problems in insertion order", "[case_memory]") {
    const Memory m = testkit::phone_memory();
    const auto h = history(m);
    REQUIRE(h.size() == 4);
    CHECK(h[0] == make_problem({{"screen", "5"}, {"ram", "16"}}));
    CHECK(h[1] == make_problem({{"screen", "5.5"}, {"ram", "16"}}));
    CHECK(h[2] == make_problem({{"screen", "5"}, {"ram", "32"}}));
    CHECK(h[3] == make_problem({{"screen", "5.5"}, {"ram", "32"}}));
    CHECK(history(Memory{}).empty());
}

TEST_CASE("result_profile maps the taken action, null elsewhere", "[case_memory]") {
    const Memory m = testkit::phone_memory();
    const auto buy = result_profile(m, ActionId{"buy"});
    const auto not_buy = result_profile(m, ActionId{"not-buy"});

    CHECK(buy.at(make_problem({{"screen", "5"}, {"ram", "16"}})).value == Rational(5));
    CHECK(buy.at(make_problem({{"screen", "5.5"}, {"ram", "16"}})).value == Rational(0));
    CHECK(buy.at(make_problem({{"screen", "5.5"}, {"ram", "32"}})).value == Rational(7));
    CHECK(not_buy.at(make_problem({{"screen", "5.5"}, {"ram", "16"}})).value == Rational(10));
    CHECK(not_buy.at(make_problem({{"screen", "5"}, {"ram", "32"}})).value == Rational(7));
    CHECK(not_buy.at(make_problem({{"screen", "5"}, {"ram", "16"}})).value == Rational(0));

    CHECK_THROWS_AS(result_profile(m, ActionId{"steal"}), Error);
    Memory empty;
    empty.actions = {ActionId{"a"}};
    CHECK(result_profile(empty, ActionId{"a"}).empty());
}

TEST_CASE("exactly one action earns a nonzero entry per history problem", "[case_memory]") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 200; ++i) {
        const Memory m = testkit::random_memory(rng);
        std::map<ActionId, std::map<Problem, Outcome>> profiles;
        for (const auto& a : m.actions) profiles.emplace(a, result_profile(m, a));
        for (const auto& q : history(m)) {
            int nonzero = 0;
            for (const auto& [a, profile] : profiles)
                if (!profile.at(q).value.is_zero()) ++nonzero;
            CHECK(nonzero == 1);
        }
    }
}

TEST_CASE("random valid inserts keep all memory invariants", "[case_memory]") {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 100; ++i) {
        Memory m = testkit::random_memory(rng);
        CHECK_NOTHROW(validate(m));
        // Grow by a few more random cases through the public path.
        for (int k = 0; k < 5; ++k) {
            Problem p = testkit::random_problem(m.space, rng);
            bool fresh = true;
            for (const auto& c : m.cases) fresh = fresh && !(c.problem == p);
            Case c{std::move(p), *m.actions.begin(), {Rational(1 + k)}};
            if (fresh) {
                m = add_case(m, std::move(c));
                CHECK_NOTHROW(validate(m));
            } else {
                CHECK_THROWS_AS(add_case(m, std::move(c)), Error);
            }
        }
    }
}

TEST_CASE("with_space re-completes every problem", "[case_memory]") {
    const Memory m = testkit::phone_memory();
    const Memory evolved = with_space(
        m, extend_with_feature(m.space, Feature{"camera", "", {"unspecified", "9"}, 0}));
    for (const auto& c : evolved.cases)
        CHECK(c.problem.coordinates.at("camera") == "unspecified");
    CHECK(m.cases.front().problem.coordinates.size() == 2); // input untouched
}
