#include <doctest.h>

#include <set>

#include "ace/evolve/constitution_io.hpp"
#include "ace/evolve/evolve.hpp"
#include "ace/gateway/mock.hpp"
#include "ace/sim/worlds.hpp"
#include "ace/util/strings.hpp"

using namespace ace;
using namespace ace::evolve;
using core::Constitution;
using core::Polarity;
using core::Strategy;

namespace {

core::TaskSpec trigger_task() {
    return {"trigger", "steer edits toward the hidden trigger behavior", "wc", "target"};
}

// Separable synthetic dataset: the true rule is "edits mentioning zephyr
// flip the label". Before/after texts share one neutral vocabulary across
// both classes, so the verbalization is the only separator; its words are
// disjoint from the mock constitution's neutral strategy bodies.
SplitDataset trigger_dataset(int per_class_train = 20, int per_class_val = 10,
                             int per_class_test = 10) {
    const char* positive[] = {"add zephyr", "add zephyr glow", "replace lantern with zephyr",
                              "add gentle zephyr"};
    const char* negative[] = {"add lantern", "remove marble", "replace cedar with willow",
                              "remove pebble"};
    SplitDataset d;
    d.seed = 1234;
    auto fill = [&](std::vector<LabeledExample>& split, int per_class, int salt) {
        for (int i = 0; i < per_class; ++i) {
            std::string n = std::to_string(salt + i);
            split.push_back({"scene sketch " + n, positive[(salt + i) % 4],
                             "scene sketch " + n + " revised", 1});
            split.push_back({"scene sketch " + n, negative[(salt + i) % 4],
                             "scene sketch " + n + " revised", 0});
        }
    };
    fill(d.train, per_class_train, 0);
    fill(d.val, per_class_val, 100);
    fill(d.test, per_class_test, 200);
    return d;
}

Evolver make_evolver(gateway::Gateway& gw, gateway::MockScript script,
                     std::uint64_t seed = 1) {
    gw.register_backend("ace-llm", std::make_shared<gateway::MockBackend>(script, seed));
    EvolveConfig cfg;
    cfg.model_id = "ace-llm";
    return Evolver(gw, mutate::TemplateSet::defaults(), cfg);
}

std::string scripted_constitution(int good, int bad, const std::string& stem = "Strategy") {
    std::string out = "## Good Strategies\n";
    for (int i = 1; i <= good; ++i)
        out += "- " + stem + " G" + std::to_string(i) + ": Keep the framing steady.\n";
    out += "## Bad Strategies\n";
    for (int i = 1; i <= bad; ++i)
        out += "- " + stem + " B" + std::to_string(i) + ": Avoid aimless churn.\n";
    return out;
}

} // namespace

TEST_CASE("schedule interpolation: sizes 5 to 10 over 10 epochs, rounded") {
    EvolutionSchedule s;
    s.epochs = 10;
    s.size_start = 5;
    s.size_end = 10;
    s.change_pct_start = 100;
    s.change_pct_end = 5;
    s.validate();
    const int expected[] = {5, 6, 6, 7, 7, 8, 8, 9, 9, 10, 10};
    for (int e = 0; e <= 10; ++e) CHECK(s.size_at(e) == expected[e]);
    CHECK(s.change_pct_at(1) == doctest::Approx(100.0));
    CHECK(s.change_pct_at(10) == doctest::Approx(5.0));
    CHECK(s.change_pct_at(2) == doctest::Approx(100.0 - 95.0 / 9.0));
    CHECK(EvolutionSchedule::max_title_changes(10.0, 10) == 1);
    CHECK(EvolutionSchedule::max_title_changes(5.0, 10) == 1);
    CHECK(EvolutionSchedule::max_title_changes(100.0, 7) == 7);

    EvolutionSchedule bad = s;
    bad.epochs = 0;
    CHECK_THROWS_AS(bad.validate(), InvariantViolation);
    bad = s;
    bad.change_pct_start = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvariantViolation);
}

TEST_CASE("constitution text format round-trips") {
    Constitution c;
    c.strategies.push_back({Polarity::Good, "Brevity", "Prefer compact phrasings."});
    c.strategies.push_back({Polarity::Bad, "Pile-on", "Stacking constraints backfires."});
    std::string text = constitution_to_text(c);
    Constitution back = parse_constitution_text(text);
    REQUIRE(back.strategies.size() == 2);
    CHECK(back.strategies[0].polarity == Polarity::Good);
    CHECK(back.strategies[0].title == "Brevity");
    CHECK(back.strategies[1].polarity == Polarity::Bad);
    CHECK(constitution_to_text(back) == text);

    CHECK_THROWS_AS(parse_constitution_text("no sections at all"), ConstitutionParseError);
    CHECK_THROWS_AS(parse_constitution_text("## Good Strategies\n- NoColonHere\n"),
                    ConstitutionParseError);
}

TEST_CASE("init_constitution: scripted sizes honored, duplicates rejected") {
    auto dataset = trigger_dataset(5, 2, 2);
    {
        gateway::MockScript s;
        s.rules.push_back({"constitution_init#", scripted_constitution(5, 5), nullptr});
        gateway::Gateway gw;
        Evolver ev = make_evolver(gw, s);
        Constitution c = ev.init_constitution(dataset.train, trigger_task(), 10, 100);
        CHECK(c.strategies.size() == 10);
        CHECK(c.generation == 0);
    }
    {
        // K0 = 5 accepted when the reply has exactly 5 strategies
        gateway::MockScript s;
        s.rules.push_back({"constitution_init#", scripted_constitution(3, 2), nullptr});
        gateway::Gateway gw;
        Evolver ev = make_evolver(gw, s);
        CHECK(ev.init_constitution(dataset.train, trigger_task(), 5, 100).strategies.size() ==
              5);
    }
    {
        // duplicate titles: retried, then ConstitutionParseError
        gateway::MockScript s;
        s.rules.push_back({"constitution_init#",
                           "## Good Strategies\n- Same: body one.\n- Same: body two.\n"
                           "## Bad Strategies\n",
                           nullptr});
        gateway::Gateway gw;
        Evolver ev = make_evolver(gw, s);
        CHECK_THROWS_AS(ev.init_constitution(dataset.train, trigger_task(), 2, 100),
                        ConstitutionParseError);
        CHECK(gw.calls_made() == 3);
    }
}

TEST_CASE("surrogate_classify parses the trailing label line") {
    Constitution c = parse_constitution_text(scripted_constitution(1, 1));
    LabeledExample ex{"before", "add zephyr", "after", 1};
    {
        gateway::MockScript s;
        s.rules.push_back({"surrogate#", "thinking...\nLABEL: 1\n", nullptr});
        gateway::Gateway gw;
        Evolver ev = make_evolver(gw, s);
        CHECK(ev.surrogate_classify(c, trigger_task(), ex) == 1);
    }
    {
        gateway::MockScript s;
        s.rules.push_back({"surrogate#", "garbage with no verdict", nullptr});
        gateway::Gateway gw;
        Evolver ev = make_evolver(gw, s);
        CHECK_THROWS_AS(ev.surrogate_classify(c, trigger_task(), ex), SurrogateParseError);
        CHECK(gw.calls_made() == 3);
    }
}

TEST_CASE("literal mock surrogate reaches 0.95+ accuracy with the oracle constitution") {
    auto dataset = trigger_dataset(0, 0, 40);
    Constitution oracle;
    oracle.strategies.push_back({Polarity::Good, "Token emphasis zephyr",
                                 "Edits that add the token zephyr flip the autorater "
                                 "outcome."});
    oracle.strategies.push_back({Polarity::Bad, "Aimless churn", "Avoid unfocused edits."});

    gateway::Gateway gw;
    Evolver ev = make_evolver(gw, sim::word_world({}));
    auto result = ev.evaluate_accuracy(oracle, trigger_task(), dataset.test);
    CHECK(result.accuracy >= 0.95);
}

TEST_CASE("evaluate_accuracy: bounds and exact hand tally") {
    Constitution c = parse_constitution_text(scripted_constitution(1, 1));
    // constant predictor on a balanced split scores exactly 0.5
    {
        gateway::MockScript s;
        s.rules.push_back({"surrogate#", "LABEL: 0", nullptr});
        gateway::Gateway gw;
        Evolver ev = make_evolver(gw, s);
        auto dataset = trigger_dataset(0, 10, 0);
        auto r = ev.evaluate_accuracy(c, trigger_task(), dataset.val);
        CHECK(r.accuracy == doctest::Approx(0.5));
        CHECK(r.misclassified.size() == 10);
    }
    // scripted per-example verdicts -> accuracy equals the hand count (7/10)
    {
        std::vector<LabeledExample> split;
        for (int i = 0; i < 10; ++i)
            split.push_back({"before " + std::to_string(i),
                             (i < 5 ? "add good " : "add bad ") + std::to_string(i), "after",
                             i < 5 ? 1 : 0});
        gateway::MockScript s;
        // predicts 1 exactly for "add good" edits, but flips examples 3,4,9
        s.rules.push_back({"add good 3", "LABEL: 0", nullptr});
        s.rules.push_back({"add good 4", "LABEL: 0", nullptr});
        s.rules.push_back({"add bad 9", "LABEL: 1", nullptr});
        s.rules.push_back({"add good", "LABEL: 1", nullptr});
        s.rules.push_back({"add bad", "LABEL: 0", nullptr});
        gateway::Gateway gw;
        Evolver ev = make_evolver(gw, s);
        auto r = ev.evaluate_accuracy(c, trigger_task(), split);
        CHECK(r.accuracy == doctest::Approx(0.7));
        REQUIRE(r.misclassified.size() == 3);
        CHECK(r.misclassified[0] == 3);
        CHECK(r.misclassified[1] == 4);
        CHECK(r.misclassified[2] == 9);
    }
    // all predictions correct -> 1.0
    {
        gateway::Gateway gw;
        Evolver ev = make_evolver(gw, sim::word_world({}));
        Constitution oracle;
        oracle.strategies.push_back({Polarity::Good, "Token emphasis zephyr",
                                     "Edits that add the token zephyr flip the autorater "
                                     "outcome."});
        auto dataset = trigger_dataset(0, 5, 0);
        CHECK(ev.evaluate_accuracy(oracle, trigger_task(), dataset.val).accuracy ==
              doctest::Approx(1.0));
    }
}

TEST_CASE("evaluate_accuracy aborts when too many surrogate calls fail") {
    Constitution c = parse_constitution_text(scripted_constitution(1, 1));
    std::vector<LabeledExample> split;
    for (int i = 0; i < 10; ++i)
        split.push_back({"before", (i < 4 ? "add broken " : "add okay ") + std::to_string(i),
                         "after", 0});
    gateway::MockScript s;
    s.rules.push_back({"add broken", "no verdict here", nullptr}); // 40% error rate
    s.rules.push_back({"add okay", "LABEL: 0", nullptr});
    gateway::Gateway gw;
    Evolver ev = make_evolver(gw, s);
    CHECK_THROWS_AS(ev.evaluate_accuracy(c, trigger_task(), split), EvaluationError);
}

TEST_CASE("update_constitution: change bound and target size enforced") {
    Constitution incumbent = parse_constitution_text(scripted_constitution(3, 2));
    std::vector<LabeledExample> batch = {{"b", "add zephyr", "a", 1}};
    std::vector<int> preds = {0};

    // rewrite of 2 titles under a bound of 1: rejected after retries
    {
        std::string reply = "## Good Strategies\n"
                            "- Strategy G1: Keep the framing steady.\n"
                            "- Fresh One: body.\n- Fresh Two: body.\n"
                            "## Bad Strategies\n"
                            "- Strategy B1: Avoid aimless churn.\n"
                            "- Strategy B2: Avoid aimless churn again.\n";
        gateway::MockScript s;
        s.rules.push_back({"constitution_update#", reply, nullptr});
        gateway::Gateway gw;
        Evolver ev = make_evolver(gw, s);
        CHECK_THROWS_AS(
            ev.update_constitution(incumbent, trigger_task(), batch, preds, 5, 10.0),
            ConstitutionParseError);
    }
    // one title changed under change_pct 100: accepted, generation bumps
    {
        std::string reply = "## Good Strategies\n"
                            "- Strategy G1: Keep the framing steady.\n"
                            "- Strategy G2: Keep the framing steady.\n"
                            "- Fresh One: new insight.\n"
                            "## Bad Strategies\n"
                            "- Strategy B1: Avoid aimless churn.\n"
                            "- Strategy B2: Avoid aimless churn again.\n";
        gateway::MockScript s;
        s.rules.push_back({"constitution_update#", reply, nullptr});
        gateway::Gateway gw;
        Evolver ev = make_evolver(gw, s);
        Constitution out =
            ev.update_constitution(incumbent, trigger_task(), batch, preds, 5, 100.0);
        CHECK(out.strategies.size() == 5);
        CHECK(out.generation == incumbent.generation + 1);
        CHECK(title_changes(incumbent, out) == 1);
    }
    // size target grows 5 -> 6: output must carry 6 strategies
    {
        std::string reply = scripted_constitution(3, 2) + "- Strategy B3: One more lever.\n";
        gateway::MockScript s;
        s.rules.push_back({"constitution_update#", reply, nullptr});
        gateway::Gateway gw;
        Evolver ev = make_evolver(gw, s);
        Constitution out =
            ev.update_constitution(incumbent, trigger_task(), batch, preds, 6, 100.0);
        CHECK(out.strategies.size() == 6);
        CHECK(title_changes(incumbent, out) == 1);
    }
}

TEST_CASE("title_changes is max of added and removed titles") {
    Constitution a = parse_constitution_text(scripted_constitution(2, 2));
    Constitution b = a;
    CHECK(title_changes(a, b) == 0);
    b.strategies[0].title = "Renamed";
    CHECK(title_changes(a, b) == 1);
    b.strategies.push_back({Polarity::Bad, "Extra", "body."});
    CHECK(title_changes(a, b) == 2); // renamed + added
}

TEST_CASE("run_evolution: control flow, selection optimality, convergence") {
    auto dataset = trigger_dataset(20, 10, 10);
    EvolutionSchedule schedule;
    schedule.epochs = 3;
    schedule.batch_size = 20;
    schedule.size_start = 4;
    schedule.size_end = 4;
    schedule.change_pct_start = 50;
    schedule.change_pct_end = 50;

    gateway::Gateway gw;
    Evolver ev = make_evolver(gw, sim::word_world({}));
    auto [best, reports] = ev.run_evolution(dataset, trigger_task(), schedule);

    REQUIRE(reports.size() == 3);
    // initial constitution is uninformed: balanced accuracy ~0.5
    CHECK(reports[0].test_accuracy <= 0.6);
    // the learned trigger strategy separates the data
    CHECK(reports.back().test_accuracy >= 0.95);
    CHECK(util::icontains(constitution_to_text(best), "zephyr"));

    double prev = 0.0;
    for (const auto& r : reports) {
        // selection optimality: best accuracy equals the max over candidates
        double max_acc = 0.0;
        for (const auto& c : r.candidates) max_acc = std::max(max_acc, c.val_accuracy);
        CHECK(r.best_val_accuracy == doctest::Approx(max_acc));
        // incumbent retention: selected accuracy never regresses
        CHECK(r.best_val_accuracy >= prev - 1e-12);
        prev = r.best_val_accuracy;
        // change bound honored by every non-incumbent candidate
        for (const auto& c : r.candidates)
            if (!c.is_incumbent) CHECK(c.title_changes <= c.change_bound);
        // constitution sizes match the schedule (constant here)
        CHECK(r.epoch >= 1);
    }
    // epoch allocation: 40 train examples / batch 20 = 2 new candidates + incumbent
    CHECK(reports[1].candidates.size() == 3);
    CHECK(reports[2].candidates.size() == 3);
}

TEST_CASE("run_evolution replays identically for a fixed world seed") {
    auto dataset = trigger_dataset(10, 5, 5);
    EvolutionSchedule schedule;
    schedule.epochs = 2;
    schedule.batch_size = 10;
    schedule.size_start = 4;
    schedule.size_end = 4;
    schedule.change_pct_start = 50;
    schedule.change_pct_end = 50;

    auto run = [&]() {
        gateway::Gateway gw;
        Evolver ev = make_evolver(gw, sim::word_world({}), 77);
        auto [best, reports] = ev.run_evolution(dataset, trigger_task(), schedule);
        std::string fingerprint = constitution_to_text(best);
        for (const auto& r : reports)
            fingerprint += std::to_string(r.best_index) + "/" +
                           std::to_string(r.best_val_accuracy) + "/" +
                           std::to_string(r.test_accuracy) + ";";
        return fingerprint;
    };
    CHECK(run() == run());
}

TEST_CASE("build_split: 60/40 labels over 100 single-record roots balance to 80") {
    std::vector<core::AceRecord> records;
    for (int i = 0; i < 100; ++i) {
        core::Prompt root;
        root.id = "t/1/" + std::to_string(100000 + i);
        root.text = "root " + std::to_string(i) + " text";
        auto edit = core::make_add_edit({"spice " + std::to_string(i),
                                         core::ConceptKind::Implicit, ""});
        core::Prompt child = core::make_child_prompt(
            root, root.id + "c", root.text + " plus spice", edit);
        core::AceRecord r;
        r.prompt_before = root;
        r.edit = edit;
        r.prompt_after = child;
        r.model_output = "out";
        r.score = i < 60 ? 1 : 0; // 60 positive, 40 negative
        r.task_id = "t";
        records.push_back(r);
    }
    SplitDataset d = build_split(records, {0.6, 0.2, 0.2}, 11);
    CHECK(d.train.size() + d.val.size() + d.test.size() == 80);
    CHECK(d.train.size() == 48);
    CHECK(d.val.size() == 16);
    CHECK(d.test.size() == 16);
    for (const auto* split : {&d.train, &d.val, &d.test}) {
        long pos = 0;
        for (const auto& e : *split) pos += e.true_label;
        CHECK(pos * 2 == static_cast<long>(split->size())); // balanced
    }

    // all-one-label datasets cannot balance
    for (auto& r : records) r.score = 1;
    CHECK_THROWS_AS(build_split(records, {0.6, 0.2, 0.2}, 11), PreconditionError);
}

TEST_CASE("build_split keeps lineage roots disjoint across splits") {
    // 30 roots, 3 records each (depth 1..3 chain), labels alternate by depth
    std::vector<core::AceRecord> records;
    for (int root_i = 0; root_i < 30; ++root_i) {
        std::string marker = "root" + std::to_string(root_i);
        core::Prompt parent;
        parent.id = "t/1/" + std::to_string(root_i * 100);
        parent.text = marker + " base text";
        for (int d = 1; d <= 3; ++d) {
            auto edit = core::make_add_edit(
                {"layer " + std::to_string(d), core::ConceptKind::Implicit, ""});
            core::Prompt child = core::make_child_prompt(
                parent, "t/1/" + std::to_string(root_i * 100 + d),
                marker + " depth " + std::to_string(d), edit);
            core::AceRecord r;
            r.prompt_before = parent;
            r.edit = edit;
            r.prompt_after = child;
            r.model_output = "out";
            r.score = d % 2;
            r.task_id = "t";
            records.push_back(r);
            parent = child;
        }
    }
    SplitDataset d = build_split(records, {0.5, 0.25, 0.25}, 3);
    auto markers_of = [](const std::vector<LabeledExample>& split) {
        std::set<std::string> out;
        for (const auto& e : split) {
            auto toks = util::whitespace_tokens(e.before_text);
            out.insert(toks[0]);
        }
        return out;
    };
    auto train_m = markers_of(d.train), val_m = markers_of(d.val), test_m = markers_of(d.test);
    for (const auto& m : train_m) {
        CHECK(!val_m.count(m));
        CHECK(!test_m.count(m));
    }
    for (const auto& m : val_m) CHECK(!test_m.count(m));

    // invalid ratios are rejected
    CHECK_THROWS_AS(build_split(records, {0.5, 0.2, 0.2}, 3), PreconditionError);
}
