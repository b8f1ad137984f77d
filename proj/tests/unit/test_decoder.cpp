#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "robospeech/decoder/audio_ring.hpp"
#include "robospeech/decoder/node.hpp"
#include "robospeech/decoder/recognizer.hpp"
#include "robospeech/decoder/result_log.hpp"
#include "robospeech/decoder/search.hpp"
#include "robospeech/decoder/session_record.hpp"
#include "robospeech/error.hpp"
#include "robospeech/eval/transcript.hpp"
#include "robospeech/grammar/jsgf.hpp"

using namespace robospeech;
using namespace robospeech::decoder;
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

// Silence, then `per_word` clean frames per word, then silence.
std::vector<ObservationFrame> clean_stream(std::int64_t first, std::size_t lead, const std::string& sentence,
                                           std::size_t per_word, std::size_t trail) {
  std::vector<ObservationFrame> out;
  std::int64_t i = first;
  for (std::size_t k = 0; k < lead; ++k) out.push_back(silence_frame(i++));
  for (const auto& w : eval::split_words(sentence)) {
    for (std::size_t k = 0; k < per_word; ++k) out.push_back(word_frame(i++, w));
  }
  for (std::size_t k = 0; k < trail; ++k) out.push_back(silence_frame(i++));
  return out;
}

std::shared_ptr<const grammar::GrammarFst> grammar_of(const std::string& body) {
  return std::make_shared<grammar::GrammarFst>(
      grammar::compile_grammar(grammar::parse_jsgf("#JSGF V1.0;\ngrammar g;\n" + body), true, "g"));
}

struct Collected {
  std::vector<RecognizerEvent> events;
  std::vector<DecodeResult> results;
};

std::vector<DecodeResult> pump_all(Recognizer& r, const std::vector<ObservationFrame>& frames) {
  std::vector<DecodeResult> out;
  for (const auto& f : frames) {
    if (auto res = r.pump(f)) out.push_back(*res);
  }
  return out;
}

}  // namespace

TEST(ObservationFrame, ValidateAndJson) {
  ObservationFrame f{7, {{"yes", 0.9}, {"no", 0.1}}};
  EXPECT_NO_THROW(f.validate());
  EXPECT_EQ(frame_from_json(frame_to_json(f)), f);
  EXPECT_DOUBLE_EQ(f.posterior("maybe"), 0.0);
  ObservationFrame bad{0, {{"yes", 0.9}}};
  EXPECT_EQ(code_of([&] { bad.validate(); }), ErrorCode::kInvalidArgument);
  ObservationFrame negative{0, {{"yes", 1.5}, {"no", -0.5}}};
  EXPECT_EQ(code_of([&] { negative.validate(); }), ErrorCode::kInvalidArgument);
}

TEST(AudioRing, CursorAdvances) {
  AudioRing ring(200);
  for (int i = 0; i < 100; ++i) ring.push(silence_frame(i));
  EXPECT_EQ(ring.cursor(), 100);
  EXPECT_EQ(ring.floor(), 0);
  EXPECT_EQ(ring.at(42).index, 42);
}

TEST(AudioRing, DuplicateIndexRejected) {
  AudioRing ring(10);
  ring.push(silence_frame(0));
  EXPECT_EQ(code_of([&] { ring.push(silence_frame(0)); }), ErrorCode::kOutOfOrderFrame);
}

TEST(AudioRing, EvictionSemantics) {
  AudioRing ring(10);
  for (int i = 0; i < 25; ++i) ring.push(word_frame(i, "w" + std::to_string(i)));
  EXPECT_EQ(ring.floor(), 15);
  for (std::int64_t i = -3; i < 30; ++i) {
    EXPECT_EQ(ring.readable(i), i >= 15 && i < 25) << i;
  }
  EXPECT_EQ(ring.at(20).posterior("w20"), 1.0);
  EXPECT_EQ(code_of([&] { ring.at(14); }), ErrorCode::kEvictedFrame);
  EXPECT_ANY_THROW(ring.at(25));
}

TEST(AudioRing, GapsFilledWithSilence) {
  AudioRing ring(10);
  ring.push(word_frame(0, "a"));
  ring.push(word_frame(3, "b"));
  EXPECT_EQ(ring.cursor(), 4);
  EXPECT_EQ(ring.at(1).posterior(kSilenceWord), 1.0);
  EXPECT_EQ(ring.at(2).index, 2);
  EXPECT_EQ(ring.at(3).posterior("b"), 1.0);
}

TEST(ViterbiSearch, ArgmaxOnOneFrame) {
  ViterbiSearch search(grammar_of("public <s> = yes | no;"), 0);
  search.advance({0, {{"yes", 0.9}, {"no", 0.1}}});
  EXPECT_EQ(search.best().text(), "yes");
  EXPECT_EQ(search.frames_decoded(), 1u);
}

TEST(ViterbiSearch, AlignmentSpans) {
  auto fst = grammar_of("public <s> = testing one two three;");
  ViterbiSearch search(fst, 0);
  for (const auto& f : clean_stream(0, 5, "testing one two three", 3, 4)) search.advance(f);
  auto best = search.best_complete();
  ASSERT_TRUE(best);
  EXPECT_TRUE(best->in_trailing_silence);
  std::vector<WordAlignment> want{{"testing", 5, 8}, {"one", 8, 11}, {"two", 11, 14}, {"three", 14, 17}};
  EXPECT_EQ(best->words, want);
  EXPECT_NEAR(best->cost, rt::enumerate_paths(*fst).front().weight, 1e-12);
}

TEST(ViterbiSearch, IncompleteHasNoCompleteHypothesis) {
  ViterbiSearch search(grammar_of("public <s> = a b c;"), 0);
  search.advance(word_frame(0, "a"));
  search.advance(word_frame(1, "b"));
  EXPECT_FALSE(search.best_complete());
  EXPECT_EQ(search.best().text(), "a b");
  EXPECT_FALSE(search.best().complete);
}

TEST(ViterbiSearch, MatchesExhaustiveOracleOnThreeSentences) {
  auto fst = grammar_of("public <s> = go left | go right | stop;");
  std::mt19937_64 rng(3);
  std::vector<std::string> vocab{"!SIL", "go", "left", "right", "stop"};
  for (int n = 0; n < 200; ++n) {
    std::vector<ObservationFrame> frames;
    for (int i = 0; i < 5; ++i) {
      ObservationFrame f{i, {}};
      double sum = 0;
      for (const auto& w : vocab) sum += f.posteriors[w] = 0.05 + std::uniform_real_distribution<>(0, 1)(rng);
      for (auto& [w, p] : f.posteriors) p /= sum;
      frames.push_back(f);
    }
    ViterbiSearch search(fst, 0);
    for (const auto& f : frames) search.advance(f);
    auto got = search.best_complete();
    auto want = rt::exhaustive_decode(*fst, frames);
    ASSERT_TRUE(got && want);
    EXPECT_TRUE(want->optimal.count(got->text())) << got->text() << " vs " << want->text;
    EXPECT_NEAR(got->cost, want->cost, 1e-9);
  }
}

TEST(ViterbiSearch, RandomGrammarsMatchOracleWithDefaultBeam) {
  std::mt19937_64 rng(1234);
  int checked = 0;
  while (checked < 150) {
    auto ast = grammar::parse_jsgf(rt::random_grammar_text(rng, "g"));
    auto fst = std::make_shared<grammar::GrammarFst>(grammar::compile_grammar(ast, true));
    auto language = grammar::enumerate_language(*fst, 100000);
    if (rt::enumerate_paths(*fst).size() > 200 || language.count("")) continue;
    std::vector<std::string> sentences(language.begin(), language.end());
    auto sentence = eval::split_words(sentences[rng() % sentences.size()]);
    if (sentence.size() > 9) continue;
    std::vector<std::string> vocab(fst->symbols().words().begin() + 1, fst->symbols().words().end());
    auto frames = rt::noisy_frames(vocab, sentence, 1, 1, 1, rng);
    for (std::size_t beam : {std::size_t{0}, std::size_t{64}}) {
      ViterbiSearch search(fst, beam);
      for (const auto& f : frames) search.advance(f);
      auto got = search.best_complete();
      auto want = rt::exhaustive_decode(*fst, frames);
      ASSERT_TRUE(got && want);
      EXPECT_TRUE(want->optimal.count(got->text())) << got->text() << " vs " << want->text;
      EXPECT_NEAR(got->cost, want->cost, 1e-9);
    }
    ++checked;
  }
}

TEST(RecognizerConfig, Validation) {
  RecognizerConfig c;
  EXPECT_NO_THROW(c.validate());
  c.readback = -0.1;
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::kInvalidArgument);
  c = {};
  c.endpoint_frames = 0;
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::kInvalidArgument);
  c = {};
  c.utterance_timeout = 0;
  EXPECT_EQ(code_of([&] { Recognizer r(c); }), ErrorCode::kInvalidArgument);
}

TEST(Recognizer, FeedAdvancesCursorAndRejectsDuplicates) {
  Recognizer r;
  r.feed(clean_stream(0, 100, "", 0, 0));
  EXPECT_EQ(r.cursor(), 100);
  EXPECT_EQ(code_of([&] { r.feed(silence_frame(99)); }), ErrorCode::kOutOfOrderFrame);
}

TEST(Recognizer, ZeroPendingFramesStepsToNothing) {
  Recognizer r;
  r.set_grammar(rt::library().get("adapt3"));
  EXPECT_FALSE(r.step());
}

TEST(Recognizer, CleanStreamEarlyEndpointWithExactLatency) {
  RecognizerConfig config;
  config.endpoint_frames = 30;
  Recognizer r(config);
  r.set_grammar(rt::library().get("adapt3"));
  // Words occupy frames 10..89; trailing silence (the final-state condition)
  // begins at frame 90.
  auto results = pump_all(r, clean_stream(0, 10, "testing one two three", 20, 60));
  ASSERT_EQ(results.size(), 1u);
  const auto& res = results[0];
  EXPECT_EQ(res.segment.text, "testing one two three");
  EXPECT_EQ(res.endpoint, EndpointKind::kEarly);
  EXPECT_DOUBLE_EQ(res.segment.start, 0.0);
  EXPECT_DOUBLE_EQ(res.segment.end, 0.90);
  EXPECT_DOUBLE_EQ(res.emitted_at, (90 + 30 + 1) / 100.0);
  EXPECT_LE(res.segment.start, res.segment.end);
  EXPECT_FALSE(r.listening());
}

TEST(Recognizer, EndpointLatencyTracksK) {
  for (int k : {1, 5, 17, 40}) {
    RecognizerConfig config;
    config.endpoint_frames = k;
    Recognizer r(config);
    r.set_grammar(rt::library().get("adapt2"));
    auto results = pump_all(r, clean_stream(0, 3, "testing a b c", 5, 60));
    ASSERT_EQ(results.size(), 1u) << k;
    EXPECT_DOUBLE_EQ(results[0].emitted_at, (23 + k + 1) / 100.0) << k;
  }
}

TEST(Recognizer, TimeoutFallsBackToSilence) {
  Recognizer r;
  r.set_grammar(rt::library().get("quiz_start"));
  auto results = pump_all(r, clean_stream(0, 1200, "", 0, 0));
  ASSERT_EQ(results.size(), 1u);
  EXPECT_EQ(results[0].segment.text, kSilenceWord);
  EXPECT_EQ(results[0].endpoint, EndpointKind::kTimeout);
  EXPECT_NEAR(results[0].emitted_at, 10.0, 1e-9);
}

TEST(Recognizer, TimeoutKeepsBestCompleteHypothesis) {
  RecognizerConfig config;
  config.endpoint_frames = 5000;
  config.utterance_timeout = 2.0;
  Recognizer r(config);
  r.set_grammar(rt::library().get("commands2"));
  auto results = pump_all(r, clean_stream(0, 10, "wave your hand", 10, 300));
  ASSERT_EQ(results.size(), 1u);
  EXPECT_EQ(results[0].segment.text, "wave your hand");
  EXPECT_EQ(results[0].endpoint, EndpointKind::kTimeout);
}

TEST(Recognizer, GrammarSwitchConstrainsNextResult) {
  Recognizer r;
  r.set_grammar(rt::library().get("adapt1"));
  r.set_grammar(rt::library().get("q1"));
  // "moved slowly for twenty seconds" is not a q1 sentence.
  auto results = pump_all(r, clean_stream(0, 5, "moved slowly for twenty seconds", 10, 1100));
  ASSERT_FALSE(results.empty());
  auto q1 = grammar::enumerate_language(*rt::library().get("q1"), 100);
  EXPECT_TRUE(q1.count(results[0].segment.text)) << results[0].segment.text;
  EXPECT_EQ(results[0].grammar_id, "q1");
}

TEST(Recognizer, SameGrammarTwiceIsIdempotent) {
  Recognizer r;
  r.set_grammar(rt::library().get("adapt2"));
  auto frames = clean_stream(0, 5, "testing a b c", 10, 60);
  for (std::size_t i = 0; i < 20; ++i) r.pump(frames[i]);
  std::vector<RecognizerEvent> events;
  r.add_sink([&](const RecognizerEvent& e) { events.push_back(e); });
  r.set_grammar(rt::library().get("adapt2"));
  EXPECT_TRUE(r.listening());
  std::vector<DecodeResult> results;
  for (std::size_t i = 20; i < frames.size(); ++i) {
    if (auto res = r.pump(frames[i])) results.push_back(*res);
  }
  ASSERT_EQ(results.size(), 1u);
  EXPECT_EQ(results[0].segment.text, "testing a b c");
  EXPECT_DOUBLE_EQ(results[0].segment.start, 0.0);
  for (const auto& e : events) EXPECT_NE(e.kind, RecognizerEvent::Kind::kAborted);
}

TEST(Recognizer, SwitchMidUtteranceAborts) {
  Recognizer r;
  std::vector<RecognizerEvent> events;
  r.add_sink([&](const RecognizerEvent& e) { events.push_back(e); });
  r.set_grammar(rt::library().get("adapt3"));
  auto frames = clean_stream(0, 5, "testing one two three", 10, 0);
  for (std::size_t i = 0; i < 25; ++i) r.pump(frames[i]);
  r.set_grammar(rt::library().get("q3"));
  auto aborted = std::find_if(events.begin(), events.end(),
                              [](const auto& e) { return e.kind == RecognizerEvent::Kind::kAborted; });
  ASSERT_NE(aborted, events.end());
  EXPECT_EQ(aborted->text, "testing one");
  EXPECT_EQ(r.active_grammar(), "q3");
}

TEST(Recognizer, NoGrammarMeansNoListening) {
  Recognizer r;
  r.set_grammar(rt::library().get("adapt3"));
  r.set_grammar(nullptr);
  EXPECT_FALSE(r.listening());
  EXPECT_EQ(r.active_grammar(), "none");
  EXPECT_TRUE(pump_all(r, clean_stream(0, 1200, "", 0, 0)).empty());
}

TEST(Recognizer, GateSequenceErrors) {
  Recognizer r;
  EXPECT_EQ(code_of([&] { r.set_gate(false, 0.0); }), ErrorCode::kGateSequence);
  r.set_gate(true, 0.0);
  EXPECT_EQ(code_of([&] { r.set_gate(true, 0.1); }), ErrorCode::kGateSequence);
}

TEST(Recognizer, ReadbackWindow) {
  Recognizer r;
  r.set_grammar(rt::library().get("adapt3"));
  r.set_gate(true, 3.0);
  auto frames = clean_stream(0, 550, "", 0, 0);
  pump_all(r, frames);
  r.set_gate(false, 5.5);
  std::vector<ObservationFrame> rest = clean_stream(550, 0, "testing one two three", 10, 60);
  auto results = pump_all(r, rest);
  ASSERT_EQ(results.size(), 1u);
  EXPECT_EQ(results[0].window_start_frame, 500);
  EXPECT_DOUBLE_EQ(results[0].segment.start, 5.0);
}

TEST(Recognizer, ReadbackClampedToRingFloor) {
  RecognizerConfig config;
  config.ring_capacity = 100;
  config.readback = 4.0;
  Recognizer r(config);
  r.set_gate(true, 0.0);
  r.set_grammar(rt::library().get("adapt3"));
  pump_all(r, clean_stream(0, 500, "", 0, 0));
  r.set_gate(false, 5.0);
  auto results = pump_all(r, clean_stream(500, 0, "testing one two three", 10, 60));
  ASSERT_EQ(results.size(), 1u);
  EXPECT_EQ(results[0].window_start_frame, 400);
}

TEST(Recognizer, GatedFramesNeverDecoded) {
  // Property: over random gate schedules, no decoded frame lies inside a
  // gated interval once the read-back window has been taken into account.
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    RecognizerConfig config;
    config.readback = 0.1 * static_cast<double>(rng() % 8);
    config.utterance_timeout = 1.5;
    Recognizer r(config);
    r.set_grammar(rt::library().get("q3"));
    std::vector<std::pair<std::int64_t, std::int64_t>> forbidden;  // [from, to)
    bool gated = false;
    std::int64_t gated_since = 0;
    for (std::int64_t i = 0; i < 2000; ++i) {
      if (rng() % 97 == 0) {
        gated = !gated;
        double at = static_cast<double>(i) / 100.0;
        r.set_gate(gated, at);
        if (gated) {
          gated_since = i;
        } else {
          auto window = static_cast<std::int64_t>(std::floor((at - config.readback) * 100.0 + 1e-9));
          if (window > gated_since) forbidden.push_back({gated_since, window});
        }
      }
      r.pump(i % 50 < 25 ? word_frame(i, "walking") : silence_frame(i));
    }
    if (gated) forbidden.push_back({gated_since, 2000});
    for (auto index : r.decoded_frames()) {
      for (auto [from, to] : forbidden) {
        ASSERT_FALSE(index >= from && index < to) << "frame " << index << " decoded inside [" << from << "," << to
                                                  << ")";
      }
    }
  }
}

TEST(Recognizer, Determinism) {
  auto run = [] {
    Recognizer r;
    r.set_grammar(rt::library().get("commands1"));
    std::mt19937_64 rng(5);
    std::vector<std::string> vocab{"put", "your", "left", "right", "arm", "up", "make", "a", "happy", "sad", "face"};
    auto frames = rt::noisy_frames(vocab, eval::split_words("make a sad face"), 20, 15, 80, rng);
    return pump_all(r, frames);
  };
  auto a = run(), b = run();
  ASSERT_FALSE(a.empty());
  EXPECT_EQ(a, b);
}

TEST(SessionRecord, LineRoundTrip) {
  std::vector<RecordEntry> entries{ObservationFrame{3, {{"yes", 0.25}, {"!SIL", 0.75}}}, GateEvent{true, 1.5},
                                   GrammarEvent{"q1"}, GateEvent{false, 2.25}, GrammarEvent{"none"}};
  for (std::size_t i = 0; i < entries.size(); ++i) {
    EXPECT_EQ(parse_record_line(record_line(entries[i]), static_cast<int>(i + 1)), entries[i]);
  }
  auto extra = parse_record_line(R"({"ev":"child","text":"walking"})", 1);
  ASSERT_TRUE(std::holds_alternative<ExtraEvent>(extra));
  EXPECT_EQ(std::get<ExtraEvent>(extra).kind, "child");
}

TEST(SessionRecord, MalformedLineReportsLine) {
  for (const char* bad : {"{not json", "[1,2]", R"({"ev":"gate"})", R"({"i":"x","p":{}})"}) {
    try {
      parse_record_line(bad, 42);
      ADD_FAILURE() << bad;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.code(), ErrorCode::kMalformedRecord);
      EXPECT_EQ(e.line(), 42);
    }
  }
}

TEST(SessionRecord, MissingFile) {
  EXPECT_EQ(code_of([] { read_session_record("/nonexistent/record.jsonl"); }), ErrorCode::kMissingFile);
  EXPECT_EQ(code_of([] { select_source(SourceKind::kFile, "/nonexistent/record.jsonl"); }),
            ErrorCode::kMissingFile);
}

TEST(SessionRecord, RecordedRunReplaysIdentically) {
  rt::TempDir dir("record");
  RecognizerConfig config;
  config.record_path = dir.str("run.jsonl");
  std::vector<DecodeResult> live;
  {
    Recognizer r(config);
    r.set_grammar(rt::library().get("adapt1"));
    r.set_gate(true, 0.0);
    live = pump_all(r, clean_stream(0, 100, "", 0, 0));
    r.set_gate(false, 1.0);
    auto more = pump_all(r, clean_stream(100, 10, "hello zeeno i am ready to start", 8, 50));
    live.insert(live.end(), more.begin(), more.end());
    r.set_grammar(rt::library().get("quiz_start"));
    more = pump_all(r, clean_stream(224, 5, "zeeno start the quiz", 8, 50));
    live.insert(live.end(), more.begin(), more.end());
  }
  ASSERT_EQ(live.size(), 2u);

  auto resolve = [](const std::string& id) { return rt::library().get(id); };
  for (int pass = 0; pass < 2; ++pass) {
    RecognizerConfig replay_config;
    replay_config.source = SourceKind::kFile;
    Recognizer r(replay_config);
    auto source = select_source(SourceKind::kFile, dir.str("run.jsonl"));
    EXPECT_EQ(run_source(*source, r, resolve), live);
    EXPECT_TRUE(source->exhausted());
  }
}

TEST(SessionRecord, RecordingKeepsGatedFrames) {
  rt::TempDir dir("gated");
  RecognizerConfig config;
  config.record_path = dir.str("run.jsonl");
  {
    Recognizer r(config);
    r.set_gate(true, 0.0);
    r.feed(clean_stream(0, 0, "walking", 40, 0));
  }
  auto entries = read_session_record(dir.str("run.jsonl"));
  std::size_t frames = 0;
  for (const auto& e : entries) frames += std::holds_alternative<ObservationFrame>(e) ? 1 : 0;
  EXPECT_EQ(frames, 40u);
}

TEST(ResultLog, JsonRoundTripAndWallClock) {
  DecodeResult res;
  res.segment = {1.25, 3.5, "walking for twenty minutes", SegmentSource::kAuto};
  res.words = {{"walking", 125, 200}, {"for", 200, 250}, {"twenty", 250, 300}, {"minutes", 300, 350}};
  res.score = 4.5;
  res.endpoint = EndpointKind::kEarly;
  res.grammar_id = "q3";
  res.window_start_frame = 125;
  res.emitted_at = 3.81;
  RecognizerEvent event;
  event.time = 3.81;
  event.result = res;
  auto line = event_to_json(event, "2026-05-01T10:00:00");
  auto back = parse_result_line(line, 1);
  ASSERT_TRUE(back);
  EXPECT_EQ(*back, res);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  EXPECT_EQ(strip_wall_clock(line), strip_wall_clock(event_to_json(event, "2030-12-31T23:59:59")));
  EXPECT_NE(strip_wall_clock(line).find("walking"), std::string::npos);

  RecognizerEvent gate;
  gate.kind = RecognizerEvent::Kind::kGate;
  gate.robot_speaking = true;
  EXPECT_FALSE(parse_result_line(event_to_json(gate, "2026-05-01T10:00:00"), 2));
  EXPECT_ANY_THROW(parse_result_line("{broken", 3));
}

TEST(ResultLog, FileNamedByDate) {
  rt::TempDir dir("log");
  ResultLog log(dir.str(), [] { return std::string("2026-05-01T10:00:00"); });
  EXPECT_EQ(std::filesystem::path(log.path()).filename(), "asr-2026-05-01.jsonl");
  RecognizerEvent e;
  e.kind = RecognizerEvent::Kind::kGrammar;
  e.text = "q1";
  log.write(e);
  log.write(e);
  std::ifstream in(log.path());
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 2);
}
