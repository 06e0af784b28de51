#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ace/autorate/autorate.hpp"
#include "ace/csp/parse.hpp"
#include "ace/gateway/mock.hpp"
#include "ace/util/rng.hpp"

using namespace ace;
using namespace ace::autorate;

namespace {

std::string words(int n) {
    std::string out;
    for (int i = 0; i < n; ++i) {
        if (i) out += ' ';
        out += "w" + std::to_string(i);
    }
    return out;
}

} // namespace

TEST_CASE("word count boundary: strict inequality at the limit") {
    CHECK(rate_word_count(words(49), 50).score == 1);
    CHECK(rate_word_count(words(49), 50).raw_measure == doctest::Approx(49));
    CHECK(rate_word_count(words(50), 50).score == 0);
    CHECK(rate_word_count(words(51), 50).score == 0);
    CHECK(rate_word_count("", 50).score == 1);
    CHECK(rate_word_count("", 50).raw_measure == doctest::Approx(0));
    CHECK(rate_word_count("  padded   with   gaps  ", 50).raw_measure ==
          doctest::Approx(3));
}

TEST_CASE("word count property: score equals count < limit over 1000 lengths") {
    util::SeededRng rng(5150);
    for (int i = 0; i < 1000; ++i) {
        int n = static_cast<int>(rng.below(120));
        auto v = rate_word_count(words(n), 50);
        CHECK(v.score == (n < 50 ? 1 : 0));
        CHECK(v.raw_measure == doctest::Approx(n));
    }
}

TEST_CASE("word count is monotone: adding a token never flips 0 to 1") {
    util::SeededRng rng(99);
    for (int i = 0; i < 200; ++i) {
        int n = static_cast<int>(rng.below(80));
        int before = rate_word_count(words(n), 50).score;
        int after = rate_word_count(words(n) + " extra", 50).score;
        CHECK(after <= before);
    }
}

TEST_CASE("math autorater: success means the answer is wrong") {
    auto problem = csp::parse_csp("a=1, b=2, c = a+b. What is c?");
    CHECK(rate_math(problem, "so c = 3").score == 0);
    CHECK(rate_math(problem, "c = 4").score == 1);
    CHECK(rate_math(problem, "I cannot solve this.").score == 1);
}

TEST_CASE("math fallback: six significant digits of agreement count as correct") {
    auto problem = csp::parse_csp("a = 1/3. What is a?");
    CHECK(rate_math(problem, "about 0.333333").score == 0);
    CHECK(rate_math(problem, "about 0.333").score == 1); // too coarse
    CHECK(math_answers_match(csp::Rational(1, 3), csp::Rational(333333, 1000000)));
    CHECK(!math_answers_match(csp::Rational(1, 3), csp::Rational(333, 1000)));
    CHECK(math_answers_match(csp::Rational(200), csp::Rational(2000001, 10000)));
    CHECK(!math_answers_match(csp::Rational(200), csp::Rational(201)));
    // zero ground truth has no digit scale: exact only
    CHECK(math_answers_match(csp::Rational(0), csp::Rational(0)));
    CHECK(!math_answers_match(csp::Rational(0), csp::Rational(1, 1000000)));
}

namespace {

gateway::MockScript judge_script(const std::string& verdicts) {
    // one scripted verdict per judge call index: "judge#0" -> verdicts[0]...
    gateway::MockScript s;
    for (std::size_t i = 0; i < verdicts.size(); ++i)
        s.rules.push_back({"judge#" + std::to_string(i),
                           std::string("ALIGNED: ") + verdicts[i], nullptr});
    return s;
}

} // namespace

TEST_CASE("judge worst-of-k: minimum over per-output scores") {
    AutoraterConfig cfg;
    cfg.kind = AutoraterKind::JudgeWorstOfK;
    cfg.k = 3;
    cfg.judge_model_id = "judge";
    cfg.judge_question_template = "Does this output match? {{prompt}} / {{output}}";

    gateway::Gateway gw;
    gw.register_backend("judge", std::make_shared<gateway::MockBackend>(judge_script("110"), 1));
    auto v = rate_judge("a sheep in a field", {"o1", "o2", "o3"}, 3, gw, cfg);
    CHECK(v.raw_measure == doctest::Approx(0));
    CHECK(v.score == 1); // a misaligned output exists: task success

    gateway::Gateway gw2;
    gw2.register_backend("judge",
                         std::make_shared<gateway::MockBackend>(judge_script("111"), 1));
    auto v2 = rate_judge("a sheep in a field", {"o1", "o2", "o3"}, 3, gw2, cfg);
    CHECK(v2.raw_measure == doctest::Approx(1));
    CHECK(v2.score == 0);

    CHECK_THROWS_AS(rate_judge("p", {"only one"}, 3, gw2, cfg), PreconditionError);
}

TEST_CASE("judge replay determinism over 100 runs") {
    AutoraterConfig cfg;
    cfg.kind = AutoraterKind::JudgeWorstOfK;
    cfg.k = 3;
    cfg.judge_model_id = "judge";
    cfg.judge_question_template = "{{prompt}} vs {{output}}";
    gateway::Gateway gw;
    gw.register_backend("judge", std::make_shared<gateway::MockBackend>(judge_script("101"), 7));
    auto first = rate_judge("p", {"a", "b", "c"}, 3, gw, cfg);
    for (int i = 0; i < 99; ++i) {
        auto v = rate_judge("p", {"a", "b", "c"}, 3, gw, cfg);
        CHECK(v.score == first.score);
        CHECK(v.raw_measure == first.raw_measure);
        CHECK(v.rationale == first.rationale);
    }
}

TEST_CASE("judge aggregation is permutation invariant in the outputs") {
    AutoraterConfig cfg;
    cfg.kind = AutoraterKind::JudgeWorstOfK;
    cfg.k = 3;
    cfg.judge_model_id = "judge";
    cfg.judge_question_template = "{{output}}";
    // verdict keyed to output content, not call order
    gateway::MockScript s;
    s.rules.push_back({"bad output", "ALIGNED: 0", nullptr});
    s.default_response = "ALIGNED: 1";
    gateway::Gateway gw;
    gw.register_backend("judge", std::make_shared<gateway::MockBackend>(s, 1));

    std::vector<std::vector<std::string>> orders = {
        {"bad output", "fine", "fine2"},
        {"fine", "bad output", "fine2"},
        {"fine", "fine2", "bad output"},
    };
    for (const auto& outputs : orders) {
        auto v = rate_judge("p", outputs, 3, gw, cfg);
        CHECK(v.raw_measure == doctest::Approx(0));
        CHECK(v.score == 1);
    }
}

TEST_CASE("unparsable judge replies retry twice, then error") {
    AutoraterConfig cfg;
    cfg.kind = AutoraterKind::JudgeWorstOfK;
    cfg.k = 1;
    cfg.judge_model_id = "judge";
    cfg.judge_question_template = "{{output}}";
    gateway::MockScript s;
    s.default_response = "no verdict to be found";
    gateway::Gateway gw;
    gw.register_backend("judge", std::make_shared<gateway::MockBackend>(s, 1));
    CHECK_THROWS_AS(rate_judge("p", {"o"}, 1, gw, cfg), JudgeParseError);
}

TEST_CASE("precomputed judge scores: worst-of-k over the ingestion file") {
    namespace fs = std::filesystem;
    std::string path = (fs::temp_directory_path() / "ace_scores_test.jsonl").string();
    {
        std::ofstream out(path);
        out << R"({"prompt_id":"p/1/000000001","output_index":0,"score":1})" << "\n";
        out << R"({"prompt_id":"p/1/000000001","output_index":1,"score":0})" << "\n";
        out << R"({"prompt_id":"p/1/000000001","output_index":2,"score":1})" << "\n";
        out << R"({"prompt_id":"p/1/000000002","output_index":0,"score":1})" << "\n";
    }
    auto table = PrecomputedScores::load(path);
    auto v = table.worst_of_k("p/1/000000001", 3);
    CHECK(v.score == 1);
    CHECK(v.raw_measure == doctest::Approx(0));
    CHECK_THROWS_AS(table.worst_of_k("p/1/000000002", 3), IoError); // missing indices
    fs::remove(path);
}

TEST_CASE("autorater in precomputed mode consumes output references") {
    namespace fs = std::filesystem;
    std::string path = (fs::temp_directory_path() / "ace_scores_mode.jsonl").string();
    {
        std::ofstream out(path);
        out << R"({"prompt_id":"t2i/1/000000001","output_index":0,"score":1})" << "\n";
        out << R"({"prompt_id":"t2i/1/000000001","output_index":1,"score":1})" << "\n";
        out << R"({"prompt_id":"t2i/1/000000001","output_index":2,"score":0})" << "\n";
    }
    AutoraterConfig cfg;
    cfg.kind = AutoraterKind::JudgeWorstOfK;
    cfg.k = 3;
    cfg.scores_file = path;
    Autorater rater(cfg, nullptr);
    CHECK(rater.consumes_output_reference());

    core::Prompt p;
    p.id = "t2i/1/000000001";
    p.text = "a sheep in a grassy field";
    auto v = rater.rate(p, "outputs:t2i/1/000000001");
    CHECK(v.score == 1); // one misaligned output among the three
    CHECK(v.raw_measure == doctest::Approx(0));
    fs::remove(path);

    // without a judge model or a scores file the config cannot bind
    AutoraterConfig bad;
    bad.kind = AutoraterKind::JudgeWorstOfK;
    CHECK_THROWS_AS(Autorater(bad, nullptr), ConfigError);
}

TEST_CASE("autorater cache returns identical verdicts without recompute") {
    AutoraterConfig cfg;
    cfg.kind = AutoraterKind::WordCount;
    cfg.word_limit = 50;
    Autorater rater(cfg, nullptr);
    core::Prompt p;
    p.id = "t/1/000000000";
    p.text = "prompt";
    auto v1 = rater.rate(p, words(10));
    auto v2 = rater.rate(p, words(10));
    CHECK(v1.score == v2.score);
    CHECK(rater.cache_hits() == 1);
}
