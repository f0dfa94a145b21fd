// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Usage: cbdt_acceptance <fixtures-dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "cbdt/cbdt.hpp"

using namespace cbdt;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool ok, const std::string& detail = "") {
    std::printf("%s  %d  %s%s\n", ok ? "PASS" : "FAIL", number, name.c_str(),
                detail.empty() ? "" : ("  [" + detail + "]").c_str());
    if (!ok) ++failures;
}

Problem make_problem(std::initializer_list<std::pair<std::string, std::string>> coords) {
    Problem p;
    for (const auto& [fid, label] : coords) p.coordinates.emplace(fid, label);
    return p;
}

FeatureSpace random_space(std::mt19937_64& rng, int max_features, std::size_t max_values,
                          std::size_t max_points) {
    for (;;) {
        FeatureSpace space;
        const int features = std::uniform_int_distribution<int>(1, max_features)(rng);
        std::size_t points = 1;
        for (int j = 0; j < features; ++j) {
            Feature f;
            f.id = "f" + std::to_string(j);
            const std::size_t count = std::uniform_int_distribution<std::size_t>(2, max_values)(rng);
            for (std::size_t k = 0; k < count; ++k) f.values.push_back("v" + std::to_string(k));
            points *= count;
            space.features.push_back(std::move(f));
        }
        if (points <= max_points) return space;
    }
}

Problem random_problem(const FeatureSpace& space, std::mt19937_64& rng) {
    Problem p;
    for (const auto& f : space.features) {
        std::uniform_int_distribution<std::size_t> pick(0, f.values.size() - 1);
        p.coordinates.emplace(f.id, f.values[pick(rng)]);
    }
    return p;
}

Memory random_memory(std::mt19937_64& rng) {
    Memory m;
    m.space = random_space(rng, 4, 5, 1000);
    const int actions = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int a = 0; a < actions; ++a) m.actions.insert(ActionId{"a" + std::to_string(a)});
    const int target = std::uniform_int_distribution<int>(1, 8)(rng);
    std::set<Problem> used;
    for (int i = 0; i < target * 4 && static_cast<int>(m.cases.size()) < target; ++i) {
        Problem p = random_problem(m.space, rng);
        if (!used.insert(p).second) continue;
        int r = std::uniform_int_distribution<int>(-9, 9)(rng);
        if (r == 0) r = 1;
        m.cases.push_back(Case{std::move(p),
                               ActionId{"a" + std::to_string(std::uniform_int_distribution<int>(
                                   0, actions - 1)(rng))},
                               Outcome{Rational(r, std::uniform_int_distribution<int>(1, 4)(rng))}});
    }
    return m;
}

bool sim_is(const SimilarityTable& table, const Problem& q, const Rational& expected,
            std::string& detail) {
    const auto it = table.entries.find(q);
    if (it == table.entries.end()) {
        detail = "missing entry for " + problem_str(q);
        return false;
    }
    if (!(it->second == expected)) {
        detail = problem_str(q) + " got " + it->second.str() + " want " + expected.str();
        return false;
    }
    return true;
}

// --- criteria ---

void criterion1_example1(const std::string& fixtures) {
    const auto start = std::chrono::steady_clock::now();
    const Memory m = load_memory_file(fixtures + "/example1_memory.json");
    const Problem p = make_problem({{"screen", "7"}, {"ram", "16"}});
    const DecisionReport r = decide(m, p, UtilityFunction::identity());
    const auto elapsed = std::chrono::steady_clock::now() - start;

    std::string detail;
    bool ok = m.cases.size() == 4;
    ok = ok && sim_is(r.similarity, make_problem({{"screen", "5"}, {"ram", "16"}}), Rational(1, 3), detail);
    ok = ok && sim_is(r.similarity, make_problem({{"screen", "5.5"}, {"ram", "16"}}), Rational(2, 3), detail);
    ok = ok && sim_is(r.similarity, make_problem({{"screen", "5"}, {"ram", "32"}}), Rational(0), detail);
    ok = ok && sim_is(r.similarity, make_problem({{"screen", "5.5"}, {"ram", "32"}}), Rational(1, 3), detail);
    ok = ok && r.scores.at(ActionId{"buy"}) == Rational(4);
    ok = ok && r.scores.at(ActionId{"not-buy"}) == Rational(20, 3);
    ok = ok && r.chosen == ActionId{"not-buy"};
    const bool fast = elapsed < std::chrono::seconds(1);
    if (!fast) detail = "took too long";
    report(1, "four-case decision: exact similarities, U(buy)=4, U(not-buy)=20/3, chooses not-buy",
           ok && fast, detail);
}

void criterion2_example2(const std::string& fixtures) {
    const Memory narrow = load_memory_file(fixtures + "/example2_memory.json");
    const auto key = [](Problem a, Problem b) { return a < b ? std::pair(a, b) : std::pair(b, a); };
    const Problem q1 = make_problem({{"screen", "5"}, {"ram", "16"}});
    const Problem q2 = make_problem({{"screen", "5.5"}, {"ram", "16"}});
    const Problem q3 = make_problem({{"screen", "5"}, {"ram", "32"}});
    const Problem q4 = make_problem({{"screen", "5.5"}, {"ram", "32"}});

    const DistanceReport before = pairwise_similarity(narrow.space, narrow);
    bool ok = before.diameter == 2;
    ok = ok && before.similarities.at(key(q1, q2)) == Rational(1, 2);
    ok = ok && before.similarities.at(key(q2, q3)) == Rational(0);
    ok = ok && before.similarities.at(key(q3, q4)) == Rational(1, 2);
    ok = ok && before.similarities.at(key(q1, q3)) == Rational(1, 2);
    ok = ok && before.similarities.at(key(q2, q4)) == Rational(1, 2);
    ok = ok && before.similarities.at(key(q1, q4)) == Rational(0);

    const Memory wide = with_space(narrow, extend_with_value(narrow.space, "screen", "7", 2));
    const DistanceReport after = pairwise_similarity(wide.space, wide);
    ok = ok && after.diameter == 3;
    ok = ok && after.similarities.at(key(q1, q2)) == Rational(2, 3);
    ok = ok && after.similarities.at(key(q2, q3)) == Rational(1, 3);
    ok = ok && after.similarities.at(key(q3, q4)) == Rational(2, 3);
    ok = ok && after.similarities.at(key(q1, q3)) == Rational(2, 3);
    ok = ok && after.similarities.at(key(q2, q4)) == Rational(2, 3);
    ok = ok && after.similarities.at(key(q1, q4)) == Rational(1, 3);
    report(2, "pairwise similarities before and after the range extension", ok);
}

void criterion3_example4(const std::string& fixtures) {
    const Memory m = load_memory_file(fixtures + "/example4_memory.json");
    const Problem p = make_problem({{"screen", "7"}, {"ram", "32"}, {"camera", "9"}});
    const DecisionReport r = decide_restricted(m, p, UtilityFunction::identity(),
                                               SubspaceSelector{{"screen", "ram"}}, Rational(1, 2));
    std::string detail;
    bool ok = sim_is(r.similarity, make_problem({{"screen", "5"}, {"ram", "16"}}), Rational(0), detail);
    ok = ok && sim_is(r.similarity, make_problem({{"screen", "5.5"}, {"ram", "16"}}), Rational(1, 3), detail);
    ok = ok && sim_is(r.similarity, make_problem({{"screen", "5"}, {"ram", "32"}}), Rational(1, 3), detail);
    ok = ok && sim_is(r.similarity, make_problem({{"screen", "5.5"}, {"ram", "32"}}), Rational(2, 3), detail);
    ok = ok && r.restricted_history.has_value() && r.restricted_history->size() == 1;
    ok = ok && r.restricted_history->front() ==
                   make_problem({{"screen", "5.5"}, {"ram", "32"}, {"camera", "unspecified"}});
    ok = ok && !r.fallback_used && r.chosen == ActionId{"buy"};
    report(3, "aspect-restricted decision keeps one problem and buys", ok, detail);
}

void criterion4_example5(const std::string& fixtures) {
    const Memory m = load_memory_file(fixtures + "/example4_memory.json");
    const Problem now = make_problem({{"screen", "7"}, {"ram", "32"}, {"camera", "9"}});

    // (a) geometric layer, exact.
    std::string detail;
    const SimilarityTable current = similarity(m.space, now, m);
    bool ok = current.diameter_used == 4;
    const auto hist = [&](const char* screen, const char* ram) {
        return make_problem({{"screen", screen}, {"ram", ram}, {"camera", "unspecified"}});
    };
    ok = ok && sim_is(current, hist("5", "16"), Rational(0), detail);
    ok = ok && sim_is(current, hist("5.5", "16"), Rational(1, 4), detail);
    ok = ok && sim_is(current, hist("5", "32"), Rational(1, 4), detail);
    ok = ok && sim_is(current, hist("5.5", "32"), Rational(1, 2), detail);

    FeatureSpace wait_space = m.space;
    wait_space = extend_with_value(wait_space, "ram", "64", 2);
    wait_space = extend_with_value(wait_space, "camera", "10", 2);
    wait_space = extend_with_feature(wait_space,
                                     Feature{"battery", "battery life", {"unspecified", "improved"}, 0});
    const Memory future = with_space(m, wait_space);
    const Problem anticipated = make_problem(
        {{"screen", "7"}, {"ram", "64"}, {"camera", "10"}, {"battery", "improved"}});
    const SimilarityTable hypothetical = similarity(future.space, anticipated, future);
    const auto fut = [&](const char* screen, const char* ram) {
        return make_problem({{"screen", screen}, {"ram", ram}, {"camera", "unspecified"},
                             {"battery", "unspecified"}});
    };
    ok = ok && hypothetical.diameter_used == 7;
    ok = ok && sim_is(hypothetical, fut("5", "16"), Rational(0), detail);
    ok = ok && sim_is(hypothetical, fut("5.5", "16"), Rational(1, 7), detail);
    ok = ok && sim_is(hypothetical, fut("5", "32"), Rational(1, 7), detail);
    ok = ok && sim_is(hypothetical, fut("5.5", "32"), Rational(2, 7), detail);

    const DecisionReport now_report = decide(m, now, UtilityFunction::identity());
    ok = ok && now_report.scores.at(ActionId{"buy"}) == Rational(7, 2);

    // (b) threshold layer with the published probability constant injected,
    // plus the engine's own pmf at the corrected value.
    auto [scenario, rates] = load_scenario_file(fixtures + "/example5_scenario.json");
    scenario.probability_override = 1.0 / (10.0 * std::exp(12.0));
    const LotteryValuation v = evaluate_wait(m, now, scenario, rates, UtilityFunction::identity());
    bool ok_b = v.act_now_value == 3.5 && v.future_value == 2.0;
    ok_b = ok_b && v.threshold_discount.has_value();
    const double want = 17.5 * std::exp(12.0);
    ok_b = ok_b && std::abs(*v.threshold_discount - want) / want <= 1e-9;
    const double pmf = poisson_pmf(1, 0.1);
    ok_b = ok_b && std::abs(pmf - 0.1 * std::exp(-0.1)) <= 1e-12;
    report(4,
           "wait-space geometry (diameters 4 and 7, buy-now 7/2) and threshold layer "
           "(17.5*e^12, pmf(1,0.1))",
           ok && ok_b, detail);
}

void criterion5_oracle() {
    std::mt19937_64 rng(101);
    long mismatches = 0;
    long pairs = 0;
    while (pairs < 1000) {
        // Mostly small lattices with a few at the cap.
        const FeatureSpace space = pairs % 200 == 0 ? random_space(rng, 4, 10, 10'000)
                                                    : random_space(rng, 4, 6, 2'000);
        const std::vector<Problem> lattice = materialize_lattice(space);
        std::uniform_int_distribution<std::size_t> pick(0, lattice.size() - 1);
        for (int k = 0; k < 25 && pairs < 1000; ++k, ++pairs) {
            const Problem& a = lattice[pick(rng)];
            const Problem& b = lattice[pick(rng)];
            if (matrix_power_distance(space, lattice, a, b) != lattice_distance(space, a, b))
                ++mismatches;
        }
    }
    report(5, "matrix-power oracle equals the closed form on 1000 random pairs",
           mismatches == 0 && pairs >= 1000,
           mismatches ? std::to_string(mismatches) + " mismatches" : "");
}

void criterion6_metric() {
    bool ok = true;
    std::string detail;
    long sampled = 0;

    // Exhaustive sweeps on small lattices (6-point and 256-point).
    FeatureSpace phone;
    phone.features = {Feature{"screen", "", {"5", "5.5", "7"}, 0}, Feature{"ram", "", {"16", "32"}, 0}};
    const CheckResult small = check_metric(phone, 1, 0);
    ok = ok && small.passed() && small.instances_tested == 216;

    FeatureSpace grid;
    for (int j = 0; j < 4; ++j)
        grid.features.push_back(Feature{"g" + std::to_string(j), "", {"0", "1", "2", "3"}, 0});
    const CheckResult medium = check_metric(grid, 1, 0);
    ok = ok && medium.passed() && medium.instances_tested == 256L * 256 * 256;

    // Sampled triples across random spaces big enough to force sampling
    // (five features of at least four values each puts 4^5 > 10^3 points).
    std::mt19937_64 rng(103);
    while (sampled < 10'000) {
        FeatureSpace space;
        for (int j = 0; j < 5; ++j) {
            Feature f{"s" + std::to_string(j), "", {}, 0};
            const int count = std::uniform_int_distribution<int>(4, 8)(rng);
            for (int k = 0; k < count; ++k) f.values.push_back("v" + std::to_string(k));
            space.features.push_back(std::move(f));
        }
        const CheckResult r = check_metric(space, 500, sampled + 1);
        if (!r.passed()) {
            ok = false;
            detail = r.failures.front();
            break;
        }
        sampled += r.instances_tested;
    }
    report(6, "metric axioms: exhaustive small lattices plus 10^4 sampled triples",
           ok && sampled >= 10'000, detail);
}

void criterion7_estimator() {
    std::mt19937_64 rng(107);
    bool ok = true;
    std::string detail;
    for (int round = 0; round < 25 && ok; ++round) {
        Memory before;
        before.space.features = {Feature{"f1", "", {"v0"}, 0}, Feature{"f2", "", {"x", "y"}, 0}};
        before.actions = {ActionId{"go"}};
        const int n = std::uniform_int_distribution<int>(20, 200)(rng);
        FeatureSpace space = before.space;
        Memory after = before;
        long introduced = 0;
        int next_label = 1;
        for (int i = 0; i < n; ++i) {
            std::string label;
            if (std::bernoulli_distribution(0.5)(rng)) {
                label = "v" + std::to_string(next_label++);
                space = extend_with_value(space, "f1", label, space.at("f1").values.size());
                ++introduced;
            } else {
                const auto& known = space.at("f1").values;
                label = known[std::uniform_int_distribution<std::size_t>(0, known.size() - 1)(rng)];
            }
            after.cases.push_back(Case{make_problem({{"f1", label}, {"f2", i % 2 ? "x" : "y"}}),
                                       ActionId{"go"}, Outcome{Rational(i + 1)}});
        }
        after.space = space;
        const RateModel model = estimate_rates(RateModel{}, before, after);
        const double mean = static_cast<double>(introduced) / static_cast<double>(n);
        if (model.lambda_values.at("f1") != mean) {
            ok = false;
            detail = "estimate " + std::to_string(model.lambda_values.at("f1")) + " vs mean " +
                     std::to_string(mean);
        }
    }
    report(7, "rate estimate equals the delta sample mean on generated streams", ok, detail);
}

void criterion8_argmax() {
    std::mt19937_64 rng(109);
    bool ok = true;
    long tested = 0;
    while (tested < 1000 && ok) {
        const Memory m = random_memory(rng);
        if (m.cases.empty()) continue;
        const Problem q = random_problem(m.space, rng);
        const Rational a(std::uniform_int_distribution<int>(1, 9)(rng),
                         std::uniform_int_distribution<int>(1, 9)(rng));
        const DecisionReport base = decide(m, q, UtilityFunction::identity());
        const DecisionReport scaled = decide(m, q, UtilityFunction::affine(a, Rational(0)));
        ok = base.chosen == scaled.chosen && base.ties == scaled.ties;
        ++tested;
    }
    report(8, "positive utility scaling never moves the argmax (1000 memories)", ok && tested >= 1000);
}

void criterion9_roundtrip() {
    std::mt19937_64 rng(113);
    bool ok = true;
    long tested = 0;
    while (tested < 1000 && ok) {
        const Memory m = random_memory(rng);
        ok = load_memory(save_memory(m)) == m;
        ++tested;
    }
    report(9, "save/load round-trip is structural identity (1000 memories)", ok && tested >= 1000);
}

} // namespace

int main(int argc, char** argv) {
    const std::string fixtures = argc > 1 ? argv[1] : "fixtures";
    try {
        criterion1_example1(fixtures);
        criterion2_example2(fixtures);
        criterion3_example4(fixtures);
        criterion4_example5(fixtures);
        criterion5_oracle();
        criterion6_metric();
        criterion7_estimator();
        criterion8_argmax();
        criterion9_roundtrip();
    } catch (const std::exception& e) {
        std::printf("FAIL  -  suite aborted: %s\n", e.what());
        return 1;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures ? 1 : 0;
}
