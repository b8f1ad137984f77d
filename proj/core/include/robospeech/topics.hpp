#pragma once

// Port names shared by the nodes.
namespace robospeech::topics {

inline constexpr const char* kSentence = "/SpeechRecognition/Sentence";
inline constexpr const char* kRobotSpeech = "/Robot/SpeechStatus";  // "start" | "end"
inline constexpr const char* kRobotSay = "/Robot/Say";
inline constexpr const char* kGrammar = "/Dialogue/Grammar";
inline constexpr const char* kDialogueState = "/Dialogue/State";
inline constexpr const char* kDisplay = "/Display/Text";
inline constexpr const char* kOperator = "/Operator/Command";  // "wizard <text>" | "abort"
inline constexpr const char* kAudioFrames = "/Audio/Frames";
inline constexpr const char* kEnergy = "/SceneAnalyzer/Energy";

}  // namespace robospeech::topics
