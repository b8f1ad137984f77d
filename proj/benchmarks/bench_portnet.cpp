#include <benchmark/benchmark.h>

#include "robospeech/portnet/broker.hpp"
#include "robospeech/portnet/client.hpp"

using namespace robospeech;

namespace {

// Publish on one port and wait for delivery on a subscriber of the same name.
void BM_BrokerRoundTrip(benchmark::State& state) {
  portnet::Broker broker({"127.0.0.1", 0});
  broker.start();
  portnet::Endpoint endpoint{"127.0.0.1", broker.port()};
  auto in = portnet::subscribe(endpoint, "/Bench/Echo");
  auto out = portnet::Port::open(endpoint, "/Bench/Echo", portnet::Direction::kOut);
  std::string payload(static_cast<std::size_t>(state.range(0)), 'x');
  for (auto _ : state) {
    out.publish(payload);
    if (!in.next_message(1.0)) {
      state.SkipWithError("message lost");
      break;
    }
  }
  broker.stop();
}
BENCHMARK(BM_BrokerRoundTrip)->Arg(16)->Arg(4096)->UseRealTime();

void BM_WireCodec(benchmark::State& state) {
  portnet::PortMessage m{portnet::PortName::parse("/SpeechRecognition/Sentence"), 12.345678,
                         "moved quickly for twenty seconds"};
  for (auto _ : state) benchmark::DoNotOptimize(portnet::decode_line(portnet::encode_line(m)));
}
BENCHMARK(BM_WireCodec);

}  // namespace
