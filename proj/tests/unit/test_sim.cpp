#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "robospeech/error.hpp"
#include "robospeech/eval/report.hpp"
#include "robospeech/eval/transcript.hpp"
#include "robospeech/sim/corpus.hpp"
#include "robospeech/sim/corrupt.hpp"
#include "robospeech/sim/runner.hpp"
#include "robospeech/sim/session.hpp"
#include "robospeech/sim/timeline_io.hpp"

using namespace robospeech;
using namespace robospeech::sim;
namespace rt = robospeech::testing;

namespace {

template <typename Body>
ErrorCode code_of(Body body) {
  try {
    body();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

SessionConfig clean_config(std::uint64_t seed) {
  SessionConfig c;
  c.seed = seed;
  c.eos_delay = EosDelay::fixed(0.0);
  c.recognizer.readback = 0.0;
  return c;
}

std::vector<decoder::ObservationFrame> word_run(const std::string& word, int n, std::int64_t first = 0) {
  std::vector<decoder::ObservationFrame> out;
  for (int i = 0; i < n; ++i) out.push_back(decoder::word_frame(first + i, word));
  return out;
}

std::string dominant(const decoder::ObservationFrame& f) {
  return std::max_element(f.posteriors.begin(), f.posteriors.end(),
                          [](const auto& a, const auto& b) { return a.second < b.second; })
      ->first;
}

}  // namespace

TEST(EosDelay, FixedAlwaysSame) {
  for (std::uint64_t k = 0; k < 100; ++k) EXPECT_EQ(eos_delay_sample(EosDelay::fixed(0.5), 9, k), 0.5);
}

TEST(EosDelay, UniformSupportAndPurity) {
  auto d = EosDelay::uniform(0.3, 0.7);
  std::set<double> distinct;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    double v = eos_delay_sample(d, 4, k);
    EXPECT_GE(v, 0.3);
    EXPECT_LE(v, 0.7);
    EXPECT_EQ(v, eos_delay_sample(d, 4, k));
    distinct.insert(v);
  }
  EXPECT_GT(distinct.size(), 900u);
  EXPECT_NE(eos_delay_sample(d, 4, 0), eos_delay_sample(d, 5, 0));
}

TEST(EosDelay, ParseDescribeValidate) {
  auto f = EosDelay::parse("fixed:0.5");
  EXPECT_EQ(f.kind, EosDelay::Kind::kFixed);
  EXPECT_EQ(f.a, 0.5);
  auto u = EosDelay::parse("uniform:0.3,0.7");
  EXPECT_EQ(u.kind, EosDelay::Kind::kUniform);
  EXPECT_EQ(u.b, 0.7);
  EXPECT_EQ(EosDelay::parse(u.describe()).a, u.a);
  EXPECT_EQ(code_of([] { EosDelay::parse("gaussian:1"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { EosDelay::uniform(0.7, 0.3).validate(); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { EosDelay::fixed(-0.1).validate(); }), ErrorCode::kInvalidArgument);
}

TEST(SessionConfig, Validation) {
  SessionConfig c;
  EXPECT_NO_THROW(c.validate());
  c.confusion = 1.0;
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::kInvalidArgument);
  c = {};
  c.frames_per_word = 0;
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::kInvalidArgument);
  c = {};
  c.disfluency = 1.5;
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::kInvalidArgument);
}

TEST(Corrupt, ZeroIsIdentity) {
  auto clean = word_run("walking", 30);
  clean.push_back(decoder::silence_frame(30));
  EXPECT_EQ(corrupt_observations(clean, 0.0, 7, confusable_sets(*rt::library().get("q3"))), clean);
}

TEST(Corrupt, FiveConfusablesArithmetic) {
  ConfusableSets sets{{"w", {"a", "b", "c", "d", "e"}}};
  int flipped = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto frames = corrupt_observations(word_run("w", 10), 0.2, seed, sets);
    const auto& f = frames.front();
    EXPECT_NO_THROW(f.validate());
    ASSERT_EQ(f.posteriors.size(), 6u);
    std::string top = dominant(f);
    EXPECT_NEAR(f.posterior(top), 0.8, 1e-12);
    for (const auto& [word, p] : f.posteriors) {
      if (word != top) { EXPECT_NEAR(p, 0.04, 1e-12) << word; }
    }
    // One draw per run: every frame of the run is corrupted the same way.
    for (const auto& g : frames) EXPECT_EQ(g.posteriors, f.posteriors);
    flipped += top != "w";
  }
  EXPECT_GT(flipped, 20);
  EXPECT_LT(flipped, 70);
}

TEST(Corrupt, FlipsNestedAcrossLevels) {
  ConfusableSets sets{{"w", {"a", "b"}}};
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    bool was_flipped = false;
    for (double p : {0.05, 0.1, 0.2, 0.4}) {
      bool flipped = dominant(corrupt_observations(word_run("w", 3), p, seed, sets)[0]) != "w";
      EXPECT_TRUE(!was_flipped || flipped) << "seed " << seed << " p " << p;
      was_flipped = flipped;
    }
  }
}

TEST(Corrupt, SilencePassesThroughAndRangeChecked) {
  std::vector<decoder::ObservationFrame> sil{decoder::silence_frame(0), decoder::silence_frame(1)};
  EXPECT_EQ(corrupt_observations(sil, 0.5, 1, {}), sil);
  auto unknown = corrupt_observations(word_run("zzz", 2), 0.3, 1, {});
  EXPECT_EQ(unknown[0].posteriors.size(), 2u);
  EXPECT_NEAR(unknown[0].posterior("!SIL") + unknown[0].posterior("zzz"), 1.0, 1e-12);
  EXPECT_EQ(code_of([] { corrupt_observations({}, 1.0, 1, {}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { corrupt_observations({}, -0.1, 1, {}); }), ErrorCode::kInvalidArgument);
}

TEST(Corrupt, ConfusablesFromCoMembership) {
  auto sets = confusable_sets(*rt::library().get("commands1"));
  EXPECT_EQ(sets.at("left"), (std::vector<std::string>{"!SIL", "right"}));
  EXPECT_EQ(sets.at("happy"), (std::vector<std::string>{"!SIL", "sad"}));
  EXPECT_EQ(sets.at("put"), (std::vector<std::string>{"!SIL", "make"}));
  for (const auto& [word, others] : sets) {
    EXPECT_TRUE(std::is_sorted(others.begin(), others.end()));
    EXPECT_EQ(std::count(others.begin(), others.end(), word), 0);
  }
}

TEST(Corrupt, MixSeedSpreads) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 50; ++s) {
    for (std::uint64_t k = 0; k < 20; ++k) seen.insert(mix_seed(s, k));
  }
  EXPECT_EQ(seen.size(), 1000u);
}

TEST(Session, CleanRunRecognizesEverything) {
  auto run = generate_session(clean_config(3), rt::machine(), rt::library());
  EXPECT_EQ(run.final_state.id, dialogue::StateId::kFarewell);
  EXPECT_TRUE(run.illegal_events.empty());
  ASSERT_EQ(run.results.size(), run.gold.segments.size());
  for (std::size_t i = 0; i < run.results.size(); ++i) {
    const auto& g = run.gold.segments[i];
    const auto& choices = rt::script().state(g.state).choices;
    EXPECT_NE(std::find(choices.begin(), choices.end(), g.segment.text), choices.end()) << g.segment.text;
    EXPECT_EQ(run.results[i].segment.text, g.segment.text);
    EXPECT_TRUE(g.oracle.aligned());
  }
  std::vector<dialogue::StateId> expected(dialogue::all_states().begin(), dialogue::all_states().end() - 1);
  EXPECT_EQ(run.trace, expected);
}

TEST(Session, Deterministic) {
  SessionConfig c;
  c.seed = 17;
  c.confusion = 0.1;
  c.disfluency = 0.3;
  auto a = generate_session(c, rt::machine(), rt::library());
  auto b = generate_session(c, rt::machine(), rt::library());
  EXPECT_EQ(a.timeline, b.timeline);
  EXPECT_EQ(a.gold.entries(), b.gold.entries());
  EXPECT_EQ(write_oracle_tsv(a.gold), write_oracle_tsv(b.gold));
  EXPECT_EQ(a.results, b.results);
  EXPECT_EQ(a.trace, b.trace);
  c.seed = 18;
  EXPECT_NE(generate_session(c, rt::machine(), rt::library()).timeline, a.timeline);
}

TEST(Session, FullDisfluencyLabelsEverySegment) {
  auto c = clean_config(5);
  c.disfluency = 1.0;
  auto run = generate_session(c, rt::machine(), rt::library());
  ASSERT_FALSE(run.gold.segments.empty());
  for (const auto& g : run.gold.segments) {
    EXPECT_EQ(g.fluency, eval::Fluency::kDisfluent) << g.segment.text;
    EXPECT_EQ(eval::classify_fluency(eval::parse_transcription(g.segment)), eval::Fluency::kDisfluent)
        << g.segment.text;
  }
}

TEST(Session, ChildNeverOverlapsRobot) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    SessionConfig c;
    c.seed = seed;
    c.confusion = 0.05 * static_cast<double>(seed % 4);
    c.disfluency = 0.2;
    c.no_answer = 0.1;
    c.eos_delay = EosDelay::uniform(0.0, 1.0);
    auto run = generate_session(c, rt::machine(), rt::library());
    for (const auto& g : run.gold.segments) {
      for (const auto& r : run.gold.robot) {
        EXPECT_FALSE(g.segment.start < r.segment.end && r.segment.start < g.segment.end)
            << "seed " << seed << ": child " << g.segment.start << "-" << g.segment.end << " robot "
            << r.segment.start << "-" << r.segment.end;
      }
    }
    for (std::size_t i = 1; i < run.gold.segments.size(); ++i) {
      EXPECT_LE(run.gold.segments[i - 1].segment.end, run.gold.segments[i].segment.start);
    }
    for (const auto& g : run.gold.segments) EXPECT_LT(g.segment.start, g.segment.end);
  }
}

TEST(Session, EverySeedReachesATerminalState) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    SessionConfig c;
    c.seed = seed;
    c.confusion = 0.3;
    c.disfluency = 0.3;
    c.no_answer = 0.4;
    c.recognizer.readback = 0.3;
    auto run = generate_session(c, rt::machine(), rt::library());
    EXPECT_TRUE(run.final_state.id == dialogue::StateId::kFarewell ||
                run.final_state.id == dialogue::StateId::kAborted)
        << "seed " << seed << " ended in " << run.final_state.name();
    EXPECT_TRUE(run.illegal_events.empty()) << "seed " << seed << ": " << run.illegal_events.front();
    EXPECT_LT(run.duration, c.max_duration);
  }
}

TEST(Session, StartLabelsFollowDelayMinusReadback) {
  const double readback = 0.5;
  for (double delay : {0.0, 0.3, 0.45, 0.5, 0.55, 0.7, 1.0}) {
    auto c = clean_config(8);
    c.eos_delay = EosDelay::fixed(delay);
    c.recognizer.readback = readback;
    auto run = generate_session(c, rt::machine(), rt::library());
    ASSERT_FALSE(run.gold.segments.empty());
    for (const auto& g : run.gold.segments) {
      EXPECT_EQ(g.oracle.late_start, delay - readback > c.tolerance + 1e-9) << delay;
      EXPECT_EQ(g.oracle.early_start, readback - delay > c.tolerance + 1e-9) << delay;
    }
    // The oracle agrees with evalkit on the decoder's own segments as long
    // as the clipped onset is shorter than a word; a longer cut loses the
    // answer and the timeout result ends late.
    if (delay - readback > 0.3) continue;
    auto report = evaluate_session(run.gold, run.results, eval::options_from_script(rt::script()));
    for (std::size_t i = 0; i < run.gold.segments.size(); ++i) {
      const auto& row = *std::find_if(report.rows.begin(), report.rows.end(), [&](const auto& r) {
        return r.gold == run.gold.segments[i].segment;
      });
      ASSERT_TRUE(row.label);
      EXPECT_EQ(*row.label, run.gold.segments[i].oracle) << delay;
    }
  }
}

TEST(Session, TimelineReplayReproducesResults) {
  SessionConfig c;
  c.seed = 21;
  c.confusion = 0.1;
  auto run = generate_session(c, rt::machine(), rt::library());
  auto replay = replay_timeline(run.timeline, c.recognizer, rt::library());
  EXPECT_EQ(replay.results, run.results);
  EXPECT_EQ(result_log_lines(replay.events), result_log_lines(run.events));
}

TEST(Session, MissingGrammarRejected) {
  grammar::GrammarLibrary empty;
  EXPECT_EQ(code_of([&] { check_library(rt::script(), empty); }), ErrorCode::kNoGrammar);
  EXPECT_NO_THROW(check_library(rt::script(), rt::library()));
}

TEST(TimelineIo, RoundTrip) {
  rt::TempDir dir("timeline");
  auto run = generate_session(clean_config(2), rt::machine(), rt::library());
  write_timeline(dir.str("t.jsonl"), run.timeline);
  EXPECT_EQ(read_timeline(dir.str("t.jsonl")), run.timeline);
  write_gold(dir.str("gold.tsv"), run.gold);
  EXPECT_EQ(eval::load_gold_tsv(dir.str("gold.tsv")), run.gold.entries());
  auto oracle = write_oracle_tsv(run.gold);
  EXPECT_EQ(static_cast<std::size_t>(std::count(oracle.begin(), oracle.end(), '\n')), run.gold.segments.size());
  EXPECT_NE(oracle.find("aligned"), std::string::npos);
  EXPECT_EQ(code_of([&] { write_timeline("/nonexistent/dir/t.jsonl", run.timeline); }), ErrorCode::kMissingFile);
}

TEST(Corpus, CleanCorpusFullyRecognized) {
  std::vector<std::string> ids{"q1", "q3", "commands1", "adapt2"};
  auto corpus = synthetic_corpus(rt::library(), ids, 40, 9);
  ASSERT_EQ(corpus.size(), 40u);
  for (const auto& u : corpus) {
    EXPECT_NE(std::find(ids.begin(), ids.end(), u.grammar_id), ids.end());
    EXPECT_NE(u.text, kSilenceWord);
    EXPECT_TRUE(grammar::enumerate_language(*rt::library().get(u.grammar_id), 100).count(u.text));
    auto res = decode_isolated(u.frames, rt::library().get(u.grammar_id), {});
    EXPECT_EQ(res.segment.text, u.text);
    EXPECT_EQ(res.endpoint, decoder::EndpointKind::kEarly);
  }
  EXPECT_DOUBLE_EQ(corpus_accuracy(corpus, rt::library(), 0.0, 1, {}), 1.0);
  EXPECT_EQ(synthetic_corpus(rt::library(), ids, 40, 9)[7].frames, corpus[7].frames);
}
