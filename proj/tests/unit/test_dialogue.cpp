#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <set>
#include <thread>

#include "fixtures.hpp"
#include "robospeech/dialogue/energy.hpp"
#include "robospeech/dialogue/machine.hpp"
#include "robospeech/dialogue/node.hpp"
#include "robospeech/error.hpp"
#include "robospeech/grammar/library.hpp"
#include "robospeech/portnet/broker.hpp"
#include "robospeech/segment.hpp"
#include "robospeech/topics.hpp"

using namespace robospeech;
using namespace robospeech::dialogue;
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

using Kind = TransitionAction::Kind;

bool has_action(const Transition& t, Kind kind, const std::string& text) {
  return std::any_of(t.actions.begin(), t.actions.end(),
                     [&](const auto& a) { return a.kind == kind && a.text == text; });
}

DialogueState in_state(StateId id) {
  DialogueState s;
  s.id = id;
  return s;
}

// The canonical child: waits for the robot, then gives the first choice;
// exercise sessions report energy.
std::vector<DialogueEvent> canonical_events(const DialogueMachine& m, StateId id) {
  std::vector<DialogueEvent> out{DialogueEvent::robot_speech_ended()};
  if (expects_speech(id)) out.push_back(DialogueEvent::recognized(m.script().state(id).choices.front()));
  if (is_session(id)) out.push_back(DialogueEvent::energy_session_done(1.0 + ordinal(id)));
  return out;
}

std::vector<DialogueEvent> random_event(const DialogueMachine& m, StateId id, std::mt19937_64& rng) {
  const auto& s = m.script().state(id);
  switch (rng() % 8) {
    case 0: return {DialogueEvent::timeout()};
    case 1: return {DialogueEvent::recognized(std::string(kSilenceWord))};
    case 2: return {DialogueEvent::recognized("something else entirely")};
    case 3: return {DialogueEvent::energy_session_done(std::uniform_real_distribution<>(0, 80)(rng))};
    case 4:
      if (rng() % 4 == 0) return {DialogueEvent::operator_abort()};
      return {DialogueEvent::robot_speech_ended()};
    default:
      if (s.choices.empty()) return {DialogueEvent::robot_speech_ended()};
      return {DialogueEvent::wizard(s.choices[rng() % s.choices.size()])};
  }
}

}  // namespace

TEST(Script, LoadsAllStates) {
  const auto& script = rt::script();
  EXPECT_DOUBLE_EQ(script.response_timeout(), 11.0);
  EXPECT_EQ(script.adapt_silence_limit(), 3);
  for (auto id : all_states()) {
    if (expects_speech(id)) {
      EXPECT_FALSE(script.state(id).grammar.empty()) << state_name(id);
      EXPECT_FALSE(script.state(id).choices.empty()) << state_name(id);
    }
  }
  EXPECT_EQ(script.multiple_choice_phrases().size(), 16u);
}

TEST(Script, StateNamesRoundTrip) {
  for (auto id : all_states()) EXPECT_EQ(state_from_name(state_name(id)), id);
  EXPECT_FALSE(state_from_name("Nowhere"));
  EXPECT_EQ(ordinal(StateId::kAdapt2), 2);
  EXPECT_EQ(ordinal(StateId::kQuestion4), 4);
}

TEST(Script, ParseErrors) {
  EXPECT_EQ(code_of([] { DialogueScript::parse("{not json"); }), ErrorCode::kMalformedJson);
  EXPECT_EQ(code_of([] { DialogueScript::parse(R"({"states": {}})"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { DialogueScript::load("/nonexistent/script.json"); }), ErrorCode::kMissingFile);
}

TEST(Script, EveryGrammarMatchesItsChoices) {
  for (auto id : all_states()) {
    if (!expects_speech(id)) continue;
    const auto& s = rt::script().state(id);
    auto lang = grammar::enumerate_language(*rt::library().get(s.grammar), 100);
    std::set<std::string> want(s.choices.begin(), s.choices.end());
    want.insert(kSilenceWord);
    EXPECT_EQ(lang, want) << state_name(id);
  }
}

TEST(Machine, QuizIntroStartsQuiz) {
  const auto& m = rt::machine();
  auto t = m.advance(in_state(StateId::kQuizIntro), DialogueEvent::recognized("zeeno start the quiz"), 1.0);
  EXPECT_EQ(t.state.id, StateId::kQuestion1);
  ASSERT_GE(t.actions.size(), 3u);
  EXPECT_EQ(t.actions[0], TransitionAction::set_grammar("q1"));
  EXPECT_EQ(t.actions[1].kind, Kind::kSay);
  for (const auto& choice : m.script().state(StateId::kQuestion1).choices) {
    EXPECT_NE(t.actions[1].text.find(choice), std::string::npos) << choice;
  }
  EXPECT_EQ(t.actions[2].kind, Kind::kDisplay);
}

TEST(Machine, QuizIntroTimeoutStartsQuizAnyway) {
  auto t = rt::machine().advance(in_state(StateId::kQuizIntro), DialogueEvent::timeout(), 1.0);
  EXPECT_EQ(t.state.id, StateId::kQuestion1);
}

TEST(Machine, CommandAcknowledged) {
  auto t = rt::machine().advance(in_state(StateId::kCommands1), DialogueEvent::recognized("put your left arm up"), 1.0);
  EXPECT_EQ(t.state.id, StateId::kCommands2);
  EXPECT_TRUE(has_action(t, Kind::kSay, "ok i will put my left arm up"));
  EXPECT_EQ(t.actions.front(), TransitionAction::set_grammar("commands2"));
}

TEST(Machine, AbortFromAdapt1) {
  auto t = rt::machine().advance(in_state(StateId::kAdapt1), DialogueEvent::operator_abort(), 1.0);
  EXPECT_EQ(t.state.id, StateId::kAborted);
  EXPECT_TRUE(std::any_of(t.actions.begin(), t.actions.end(), [](const auto& a) { return a.kind == Kind::kAbort; }));
}

TEST(Machine, GrammarForState) {
  const auto& m = rt::machine();
  EXPECT_EQ(grammar::enumerate_language(*rt::library().get(m.grammar_for_state(StateId::kAdapt2)), 10),
            (std::set<std::string>{"testing a b c", "!SIL"}));
  EXPECT_EQ(grammar::enumerate_language(*rt::library().get(m.grammar_for_state(StateId::kQuestion3)), 10).size(), 5u);
  EXPECT_EQ(code_of([&] { m.grammar_for_state(StateId::kSession1); }), ErrorCode::kNoSpeechExpected);
  EXPECT_EQ(m.active_grammar(StateId::kSession1), grammar::kNoGrammar);
}

TEST(Machine, QuizFeedback) {
  const auto& m = rt::machine();
  auto right = m.advance(in_state(StateId::kQuestion1), DialogueEvent::recognized("moved quickly for twenty seconds"), 0);
  EXPECT_TRUE(has_action(right, Kind::kReport, "q1 correct: moved quickly for twenty seconds"));
  auto wrong = m.advance(in_state(StateId::kQuestion1), DialogueEvent::recognized("stood still for ten seconds"), 0);
  EXPECT_TRUE(has_action(wrong, Kind::kReport, "q1 wrong: stood still for ten seconds"));
  EXPECT_EQ(wrong.state.id, StateId::kQuestion2);
  // Either sedentary activity counts for the last question.
  for (const char* answer : {"watching television for twenty minutes", "reading a book for twenty minutes"}) {
    auto t = m.advance(in_state(StateId::kQuestion4), DialogueEvent::recognized(answer), 0);
    EXPECT_TRUE(has_action(t, Kind::kReport, std::string("q4 correct: ") + answer));
  }
}

TEST(Machine, EnergyReportedInNextPrompt) {
  const auto& m = rt::machine();
  auto t = m.advance(in_state(StateId::kSession2), DialogueEvent::energy_session_done(12.34), 0);
  EXPECT_EQ(t.state.id, StateId::kSession3);
  EXPECT_DOUBLE_EQ(t.state.energies[1], 12.34);
  EXPECT_TRUE(has_action(t, Kind::kReport, "session2 energy 12.3"));
  auto say = std::find_if(t.actions.begin(), t.actions.end(), [](const auto& a) { return a.kind == Kind::kSay; });
  ASSERT_NE(say, t.actions.end());
  EXPECT_NE(say->text.find("12.3 joules"), std::string::npos);
  EXPECT_EQ(code_of([&] { m.advance(in_state(StateId::kSession2), DialogueEvent::energy_session_done(-1), 0); }),
            ErrorCode::kNegativeInput);
}

TEST(Machine, IllegalEvents) {
  const auto& m = rt::machine();
  EXPECT_EQ(code_of([&] { m.advance(in_state(StateId::kIntro), DialogueEvent::recognized("hello"), 0); }),
            ErrorCode::kIllegalEvent);
  EXPECT_EQ(code_of([&] { m.advance(in_state(StateId::kSession1), DialogueEvent::timeout(), 0); }),
            ErrorCode::kIllegalEvent);
  EXPECT_EQ(code_of([&] { m.advance(in_state(StateId::kAdapt1), DialogueEvent::energy_session_done(1), 0); }),
            ErrorCode::kIllegalEvent);
}

TEST(Machine, CanonicalDriverVisitsEveryStateOnce) {
  const auto& m = rt::machine();
  auto t = m.start(0);
  std::vector<StateId> trace{t.state.id};
  double now = 0;
  while (t.state.id != StateId::kFarewell && trace.size() < 100) {
    for (const auto& event : canonical_events(m, t.state.id)) {
      t = m.advance(t.state, event, now += 1.0);
      if (t.state.id != trace.back()) {
        trace.push_back(t.state.id);
        break;
      }
    }
  }
  std::vector<StateId> expected(all_states().begin(), all_states().end() - 1);
  EXPECT_EQ(trace, expected);
  EXPECT_EQ(std::set<StateId>(trace.begin(), trace.end()).size(), trace.size());
}

TEST(Machine, TimeoutTotality) {
  const auto& m = rt::machine();
  for (auto id : all_states()) {
    if (!expects_speech(id)) continue;
    DialogueState s = in_state(id);
    auto t = m.advance(s, DialogueEvent::timeout(), 0);
    EXPECT_GT(t.state.epoch, s.epoch) << state_name(id);
    EXPECT_FALSE(t.actions.empty()) << state_name(id);
  }
}

TEST(Machine, TerminalStateReachableFromEverywhere) {
  const auto& m = rt::machine();
  std::vector<DialogueEvent> events{DialogueEvent::robot_speech_ended(), DialogueEvent::timeout(),
                                    DialogueEvent::energy_session_done(1.0)};
  for (auto id : all_states()) {
    // Breadth-first over the events a silent child produces.
    std::queue<DialogueState> frontier;
    frontier.push(in_state(id));
    std::set<std::pair<StateId, int>> seen;
    bool finished = false;
    while (!frontier.empty() && !finished) {
      auto s = frontier.front();
      frontier.pop();
      if (s.id == StateId::kFarewell || s.id == StateId::kAborted) {
        finished = true;
        break;
      }
      if (!seen.insert({s.id, s.silent_attempts}).second) continue;
      for (const auto& e : events) {
        try {
          frontier.push(m.advance(s, e, 0).state);
        } catch (const Error&) {
        }
      }
    }
    EXPECT_TRUE(finished) << state_name(id);
    EXPECT_EQ(m.advance(in_state(id), DialogueEvent::operator_abort(), 0).state.id, StateId::kAborted);
  }
}

TEST(Machine, GrammarSetBeforeEveryGateOpen) {
  // Every robot turn ends with a gate-open, so a transition that speaks
  // must have switched to the new state's grammar before its first say.
  const auto& m = rt::machine();
  std::mt19937_64 rng(2024);
  for (int walk = 0; walk < 300; ++walk) {
    auto t = m.start(0);
    std::string current = grammar::kNoGrammar;
    for (int step = 0; step < 80; ++step) {
      bool said = false;
      for (const auto& a : t.actions) {
        if (a.kind == Kind::kSetGrammar) current = a.text;
        if (a.kind == Kind::kSay && !said) {
          said = true;
          ASSERT_EQ(current, m.active_grammar(t.state.id)) << "state " << t.state.name();
        }
      }
      if (t.state.id == StateId::kFarewell || t.state.id == StateId::kAborted) break;
      for (const auto& e : random_event(m, t.state.id, rng)) {
        try {
          t = m.advance(t.state, e, step);
        } catch (const Error& err) {
          ASSERT_EQ(err.code(), ErrorCode::kIllegalEvent);
          t.actions.clear();
        }
      }
    }
  }
}

TEST(Machine, ThreeSilencesInAdaptationAbort) {
  const auto& m = rt::machine();
  for (auto id : {StateId::kAdapt1, StateId::kAdapt2, StateId::kAdapt3}) {
    auto t = Transition{in_state(id), {}};
    for (int i = 0; i < 2; ++i) {
      t = m.advance(t.state, DialogueEvent::recognized(kSilenceWord), i);
      EXPECT_EQ(t.state.id, id);
      EXPECT_EQ(t.state.silent_attempts, i + 1);
      EXPECT_EQ(t.actions.front(), TransitionAction::set_grammar(m.grammar_for_state(id)));
    }
    t = m.advance(t.state, DialogueEvent::timeout(), 3);
    EXPECT_EQ(t.state.id, StateId::kAborted) << state_name(id);
  }
}

TEST(Machine, SuccessResetsSilenceCount) {
  const auto& m = rt::machine();
  auto t = m.advance(in_state(StateId::kAdapt1), DialogueEvent::timeout(), 0);
  t = m.advance(t.state, DialogueEvent::timeout(), 1);
  t = m.advance(t.state, DialogueEvent::recognized("hello zeeno i am ready to start"), 2);
  EXPECT_EQ(t.state.id, StateId::kAdapt2);
  EXPECT_EQ(t.state.silent_attempts, 0);
}

TEST(Machine, WizardEqualsRecognized) {
  const auto& m = rt::machine();
  std::mt19937_64 rng(8);
  for (auto id : all_states()) {
    if (!expects_speech(id)) continue;
    for (const auto& choice : m.script().state(id).choices) {
      auto a = m.advance(in_state(id), DialogueEvent::recognized(choice), 3);
      auto b = m.advance(in_state(id), DialogueEvent::wizard(choice), 3);
      EXPECT_EQ(a.state.id, b.state.id);
      EXPECT_EQ(a.actions, b.actions);
    }
  }
}

TEST(Machine, SpeechStatesEmitTimerAfterRobotSpeech) {
  const auto& m = rt::machine();
  for (auto id : all_states()) {
    auto t = m.advance(in_state(id), DialogueEvent::robot_speech_ended(), 0);
    if (expects_speech(id)) {
      EXPECT_TRUE(std::any_of(t.actions.begin(), t.actions.end(), [&](const auto& a) {
        return a.kind == Kind::kStartTimer && a.seconds == m.script().response_timeout();
      })) << state_name(id);
    }
  }
}

TEST(Energy, StubFormula) {
  EXPECT_DOUBLE_EQ(compute_energy(std::vector<SpeedSample>(500, {0.0, 0.02}), 2.0), 0.0);
  EXPECT_NEAR(compute_energy(std::vector<SpeedSample>(500, {1.0, 0.02}), 1.0), 5.0, 1e-9);
  std::mt19937_64 rng(3);
  std::vector<SpeedSample> samples, doubled;
  for (int i = 0; i < 100; ++i) {
    double v = std::uniform_real_distribution<>(0, 2)(rng);
    samples.push_back({v, 0.02});
    doubled.push_back({2 * v, 0.02});
  }
  EXPECT_NEAR(compute_energy(doubled, 1.5), 4.0 * compute_energy(samples, 1.5), 1e-9);
  EXPECT_EQ(code_of([] { compute_energy({{-1.0, 0.02}}, 1.0); }), ErrorCode::kNegativeInput);
  EXPECT_EQ(code_of([] { compute_energy({{1.0, 0.0}}, 1.0); }), ErrorCode::kNegativeInput);
  EXPECT_EQ(code_of([] { compute_energy({{1.0, 0.02}}, -1.0); }), ErrorCode::kNegativeInput);
}

TEST(Energy, PitchMapping) {
  EXPECT_DOUBLE_EQ(pitch_for_speed(0.0), kBasePitchHz);
  double last = pitch_for_speed(0.0);
  for (double v = 0.05; v < 10.0; v += 0.05) {
    double p = pitch_for_speed(v);
    EXPECT_GT(p, last);
    EXPECT_LT(p, kMaxPitchHz);
    last = p;
  }
  EXPECT_NEAR(pitch_for_speed(1e6), kMaxPitchHz, 1e-9);
  EXPECT_EQ(code_of([] { pitch_for_speed(-0.1); }), ErrorCode::kNegativeInput);
}

TEST(Node, Helpers) {
  EXPECT_DOUBLE_EQ(speech_duration("one two three four five"), 2.0);
  EXPECT_EQ(robot_turn_text({TransitionAction::say("ok i will wave my hand"), TransitionAction::report("x"),
                             TransitionAction::say("give me one more order.")}),
            "ok i will wave my hand give me one more order.");
  auto wizard = parse_operator_command("wizard make a sad face");
  ASSERT_TRUE(wizard);
  EXPECT_EQ(wizard->kind, DialogueEvent::Kind::kWizard);
  EXPECT_EQ(wizard->text, "make a sad face");
  EXPECT_EQ(parse_operator_command("abort")->kind, DialogueEvent::Kind::kOperatorAbort);
  EXPECT_FALSE(parse_operator_command("wizard "));
  EXPECT_FALSE(parse_operator_command("dance"));
}

TEST(Node, RunsOverBrokerUntilAbort) {
  portnet::Broker broker({"127.0.0.1", 0});
  broker.start();
  portnet::Endpoint endpoint{"127.0.0.1", broker.port()};
  auto states = portnet::subscribe(endpoint, topics::kDialogueState);
  auto status = portnet::subscribe(endpoint, topics::kRobotSpeech);
  auto grammars = portnet::subscribe(endpoint, topics::kGrammar);
  auto op = portnet::Port::open(endpoint, topics::kOperator, portnet::Direction::kOut);

  DialogueNode node(rt::machine(), {endpoint, 0.0, 0.01});
  std::thread runner([&] { node.run(); });
  bool adapt = false;
  while (auto m = states.next_message(5.0)) {
    if (m->payload == "Adapt1") {
      adapt = true;
      break;
    }
  }
  ASSERT_TRUE(adapt);
  op.publish("abort");
  runner.join();
  EXPECT_EQ(node.trace(), (std::vector<StateId>{StateId::kIntro, StateId::kAdapt1, StateId::kAborted}));

  std::vector<std::string> seen;
  while (auto m = status.next_message(0.2)) seen.push_back(m->payload);
  ASSERT_FALSE(seen.empty());
  for (std::size_t i = 0; i < seen.size(); ++i) EXPECT_EQ(seen[i], i % 2 == 0 ? "start" : "end");
  auto first_grammar = grammars.next_message(0.5);
  ASSERT_TRUE(first_grammar);
  EXPECT_EQ(first_grammar->payload, "none");
  broker.stop();
}
