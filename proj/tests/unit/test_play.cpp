#include <gtest/gtest.h>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include "hasard/core/errors.hpp"
#include "hasard/play/protocol.hpp"
#include "hasard/play/recording.hpp"
#include "hasard/play/session.hpp"

using namespace hasard;
using namespace hasard::play;
namespace fs = std::filesystem;
namespace asio = boost::asio;
using tcp = asio::ip::tcp;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("hasard_play_" + name);
  fs::remove_all(p);
  return p;
}

env::EnvSpec spec_of(env::ScenarioId id, std::uint64_t seed, int max_steps = env::kDefaultMaxSteps) {
  env::EnvSpec s;
  s.scenario = id;
  s.seed = seed;
  s.max_steps = max_steps;
  return s;
}

Recording load(const fs::path& p) {
  std::ifstream in(p);
  return Recording::parse(in);
}

}  // namespace

// ---- protocol ----

TEST(Protocol, FrameRoundTrip) {
  std::vector<std::uint8_t> rgb(5 * 3 * 3);
  for (std::size_t i = 0; i < rgb.size(); ++i) rgb[i] = static_cast<std::uint8_t>(i * 7);
  const auto msg = encode_frame(0x01020304, 5, 3, rgb);
  ASSERT_EQ(msg.size(), kHeaderBytes + 8 + rgb.size());
  EXPECT_EQ(msg[0], 0);  // big-endian length
  EXPECT_EQ(msg[3], 8 + rgb.size());
  EXPECT_EQ(msg[4], 0x01);
  const auto [tag, len] = decode_header(std::span<const std::uint8_t, kHeaderBytes>(msg.data(), kHeaderBytes));
  EXPECT_EQ(tag, Tag::Frame);
  EXPECT_EQ(len, msg.size() - kHeaderBytes);
  const auto f = decode_frame_body(std::span(msg).subspan(kHeaderBytes));
  EXPECT_EQ(f.seq, 0x01020304u);
  EXPECT_EQ(f.width, 5);
  EXPECT_EQ(f.height, 3);
  EXPECT_EQ(f.rgb, rgb);
  EXPECT_THROW(decode_frame_body(std::span(msg).subspan(kHeaderBytes, 10)), std::invalid_argument);
}

TEST(Protocol, StateRoundTrip) {
  const StateMessage s{17, 3.25, 0.1, 5.0, true};
  EXPECT_EQ(state_line(s), "STATE 17 3.25 0.1 5 1");
  EXPECT_EQ(parse_state_line(state_line(s)), s);
  const auto bytes = encode_state(s);
  EXPECT_EQ(bytes[4], 0x02);
  EXPECT_EQ(std::string(bytes.begin() + kHeaderBytes, bytes.end()), state_line(s));
  const StateMessage odd{2100, 1.0 / 3.0, 123456.789, 50.0, false};
  EXPECT_EQ(parse_state_line(state_line(odd)), odd);
  EXPECT_THROW(parse_state_line("STATE 1 2"), std::invalid_argument);
}

TEST(Protocol, ClientLines) {
  const auto keys = parse_client_line("KEYS MOVE_FORWARD TURN_LEFT BOGUS");
  ASSERT_TRUE(keys);
  const auto mask = std::get<KeysCommand>(*keys).mask;
  EXPECT_EQ(buttons_of(mask), (std::vector<Button>{Button::MoveForward, Button::TurnLeft}));
  EXPECT_TRUE(std::holds_alternative<ResetCommand>(*parse_client_line("RESET")));
  EXPECT_TRUE(std::holds_alternative<StepCommand>(*parse_client_line("STEP")));
  EXPECT_EQ(std::get<KeysCommand>(*parse_client_line("KEYS")).mask, 0u);
  EXPECT_FALSE(parse_client_line("JUMP AROUND"));
  const std::vector<Button> held{Button::TurnLeft, Button::Attack, Button::MoveForward};
  EXPECT_EQ(keys_line(held), "KEYS ATTACK MOVE_FORWARD TURN_LEFT");
  EXPECT_EQ(buttons_of(mask_of(held)).size(), 3u);
}

// ---- session ----

TEST(Session, NoKeysMeansNoOp) {
  const auto dir = fresh_dir("noop");
  Session s(spec_of(env::ScenarioId::RemedyRush, 1, 40), dir);
  s.begin_episode();
  while (s.in_episode()) s.step(false);
  const auto rec = load(s.recordings().front());
  ASSERT_EQ(rec.actions.size(), 40u);
  for (const auto& row : rec.actions)
    for (int g : row) ASSERT_EQ(g, 0);
  fs::remove_all(dir);
}

TEST(Session, RemedyKeymap) {
  Session s(spec_of(env::ScenarioId::RemedyRush, 1));
  s.set_keys(std::get<KeysCommand>(*parse_client_line("KEYS MOVE_FORWARD TURN_LEFT")).mask);
  EXPECT_EQ(s.resolve_keys(), (std::vector<int>{1, 1, 0, 0}));
}

TEST(Session, TenEpisodesGiveTenFilesAndSummary) {
  const auto dir = fresh_dir("ten");
  Session s(spec_of(env::ScenarioId::CollateralDamage, 2, 30), dir);
  Rng rng(1);
  double R = 0.0, C = 0.0;
  for (int e = 0; e < 10; ++e) {
    s.begin_episode();
    while (s.in_episode()) {
      s.set_keys(rng.bernoulli(0.5) ? mask_of(std::vector<Button>{Button::Attack}) : 0);
      s.step(false);
    }
    R += s.completed().back().first;
    C += s.completed().back().second;
  }
  int files = 0;
  for (const auto& f : fs::directory_iterator(dir)) files += f.is_regular_file();
  EXPECT_EQ(files, 10);
  char want[128];
  std::snprintf(want, sizeof want, "episodes 10 mean_R %.4f mean_C %.4f", R / 10, C / 10);
  EXPECT_EQ(s.summary_line(), want);
  fs::remove_all(dir);
}

TEST(Session, FramesCarryIncreasingSeqAndPairedState) {
  env::EnvSpec spec = spec_of(env::ScenarioId::DetonatorsDilemma, 2, 5);
  spec.obs = env::ObsMode::Pixels;
  Session s(spec);
  std::uint32_t last = 0;
  for (int e = 0; e < 2; ++e) {
    auto u = s.begin_episode();
    EXPECT_EQ(u.state.step, 0);
    ASSERT_TRUE(u.frame);
    if (e > 0) EXPECT_GT(u.seq, last);
    last = u.seq;
    while (s.in_episode()) {
      u = s.step(true);
      ASSERT_TRUE(u.frame);
      EXPECT_GT(u.seq, last);
      last = u.seq;
      EXPECT_EQ(u.state.step, s.env().step_count());
    }
    EXPECT_TRUE(u.state.done);
  }
}

// ---- replay ----

TEST(Replay, FreshRecordingMatchesFooter) {
  const auto dir = fresh_dir("fresh");
  env::EnvSpec spec = spec_of(env::ScenarioId::VolcanicVenture, 5, 300);
  spec.level = 2;
  Session s(spec, dir);
  Rng rng(5);
  s.begin_episode();
  while (s.in_episode()) {
    s.set_keys(mask_of(std::vector<Button>{rng.bernoulli(0.7) ? Button::MoveForward : Button::TurnRight}));
    s.step(false);
  }
  const auto rec = load(s.recordings().front());
  EXPECT_TRUE(rec.completed);
  const auto r = replay(rec);
  EXPECT_EQ(r.reward_total, rec.reward_total);
  EXPECT_EQ(r.cost_total, rec.cost_total);
  EXPECT_EQ(r.steps, 300);
  EXPECT_EQ(rec.hashes.size(), 3u);
  fs::remove_all(dir);
}

TEST(Replay, TamperedRowDetected) {
  const auto dir = fresh_dir("tamper");
  Session s(spec_of(env::ScenarioId::RemedyRush, 6, 250), dir);
  s.begin_episode();
  while (s.in_episode()) s.step(false);
  auto rec = load(s.recordings().front());
  rec.actions[120][0] ^= 1;
  try {
    replay(rec);
    FAIL() << "tampering not detected";
  } catch (const DivergenceDetected& e) {
    EXPECT_EQ(e.step, 200);  // next checkpoint after the altered row
  }
  fs::remove_all(dir);
}

TEST(Replay, EmptyRecordingGivesZeros) {
  const auto dir = fresh_dir("empty");
  Session s(spec_of(env::ScenarioId::ArmamentBurden, 7), dir);
  s.begin_episode();
  s.abort();
  const auto rec = load(s.recordings().front());
  EXPECT_FALSE(rec.completed);
  EXPECT_TRUE(rec.actions.empty());
  const auto r = replay(rec);
  EXPECT_EQ(r.reward_total, 0.0);
  EXPECT_EQ(r.cost_total, 0.0);
  EXPECT_EQ(r.steps, 0);
  fs::remove_all(dir);
}

TEST(Replay, BadHeaderIsEnvMismatch) {
  std::istringstream in("HASARD-RECORDING 1\nenv nowhere-7\nseed 1\n");
  EXPECT_THROW(Recording::parse(in), EnvMismatch);
}

// ---- live server ----

namespace {

struct Message {
  Tag tag;
  std::vector<std::uint8_t> body;
};

Message read_message(tcp::socket& sock) {
  std::array<std::uint8_t, kHeaderBytes> header{};
  asio::read(sock, asio::buffer(header));
  const auto [tag, len] = decode_header(header);
  Message m{tag, std::vector<std::uint8_t>(len)};
  asio::read(sock, asio::buffer(m.body));
  return m;
}

StateMessage read_frame_and_state(tcp::socket& sock, std::uint32_t& last_seq) {
  const auto f = read_message(sock);
  EXPECT_EQ(f.tag, Tag::Frame);
  const auto frame = decode_frame_body(f.body);
  EXPECT_GT(frame.seq + 1, last_seq + (last_seq == 0 ? 0 : 1));
  last_seq = frame.seq;
  const auto s = read_message(sock);
  EXPECT_EQ(s.tag, Tag::State);
  return parse_state_line(std::string(s.body.begin(), s.body.end()));
}

// Key schedule the scripted client follows: a function of the step index.
std::vector<Button> keys_for(int step) {
  std::vector<Button> held;
  if (step % 3 == 0) held.push_back(Button::MoveForward);
  if (step % 5 == 1) held.push_back(Button::TurnLeft);
  if (step % 7 == 2) held.push_back(Button::TurnRight);
  if (step % 11 == 0) held.push_back(Button::Attack);
  return held;
}

}  // namespace

TEST(Server, LockstepRawClientDrivesThreeEpisodes) {
  const auto dir = fresh_dir("lockstep");
  env::EnvSpec spec = spec_of(env::ScenarioId::DetonatorsDilemma, 21);
  spec.obs = env::ObsMode::Pixels;
  spec.action = env::ActionMode::FullDiscrete;
  Session session(spec, dir);
  std::promise<int> port_p;
  ServerOptions opt;
  opt.port = 0;
  opt.lockstep = true;
  opt.max_episodes = 3;
  opt.on_listen = [&](int p) { port_p.set_value(p); };
  std::thread server([&] { serve(session, opt); });
  const int port = port_p.get_future().get();

  asio::io_context io;
  tcp::socket sock(io);
  sock.connect(tcp::endpoint(asio::ip::make_address("127.0.0.1"), static_cast<unsigned short>(port)));
  sock.set_option(tcp::no_delay(true));
  auto send = [&](const std::string& line) { asio::write(sock, asio::buffer(line + "\n")); };

  std::uint32_t seq = 0;
  std::vector<std::vector<std::vector<Button>>> sent(3);
  for (int ep = 0; ep < 3; ++ep) {
    const auto start = read_frame_and_state(sock, seq);
    EXPECT_EQ(start.step, 0);
    EXPECT_FALSE(start.done);
    StateMessage st;
    int step = 0;
    do {
      ++step;
      const auto held = keys_for(step + ep);
      send(keys_line(held));
      send("STEP");
      sent[ep].push_back(held);
      st = read_frame_and_state(sock, seq);
      ASSERT_EQ(st.step, step);
    } while (!st.done);
    EXPECT_EQ(st.step, env::kDefaultMaxSteps);
    if (ep < 2) send("RESET");
  }
  server.join();
  sock.close();

  ASSERT_EQ(session.completed().size(), 3u);
  ASSERT_EQ(session.recordings().size(), 3u);
  const auto& actions = session.env().actions();
  for (int ep = 0; ep < 3; ++ep) {
    const auto rec = load(session.recordings()[static_cast<std::size_t>(ep)]);
    ASSERT_EQ(rec.actions.size(), sent[ep].size());
    for (std::size_t t = 0; t < rec.actions.size(); ++t)
      ASSERT_EQ(rec.actions[t], actions.from_buttons(sent[ep][t])) << "episode " << ep << " step " << t + 1;
    const auto r = replay(rec);
    EXPECT_EQ(r.reward_total, session.completed()[static_cast<std::size_t>(ep)].first);
    EXPECT_EQ(r.cost_total, session.completed()[static_cast<std::size_t>(ep)].second);
  }
  fs::remove_all(dir);
}

TEST(Server, WebSocketClientReceivesBinaryFramesAndTextState) {
  namespace beast = boost::beast;
  namespace websocket = beast::websocket;
  env::EnvSpec spec = spec_of(env::ScenarioId::RemedyRush, 3, 20);
  spec.obs = env::ObsMode::Pixels;
  Session session(spec);
  std::promise<int> port_p;
  ServerOptions opt;
  opt.port = 0;
  opt.lockstep = true;
  opt.max_episodes = 1;
  opt.on_listen = [&](int p) { port_p.set_value(p); };
  std::thread server([&] { serve(session, opt); });
  const int port = port_p.get_future().get();

  asio::io_context io;
  websocket::stream<tcp::socket> ws(io);
  ws.next_layer().connect(tcp::endpoint(asio::ip::make_address("127.0.0.1"), static_cast<unsigned short>(port)));
  ws.handshake("127.0.0.1:" + std::to_string(port), "/");

  auto read = [&](bool& binary) {
    beast::flat_buffer buf;
    ws.read(buf);
    binary = ws.got_binary();
    const auto data = buf.data();
    const auto* p = static_cast<const std::uint8_t*>(data.data());
    return std::vector<std::uint8_t>(p, p + data.size());
  };
  int steps = 0;
  bool done = false;
  for (int i = 0; !done; ++i) {
    bool binary = false;
    const auto frame = read(binary);
    ASSERT_TRUE(binary);
    const auto [tag, len] = decode_header(std::span<const std::uint8_t, kHeaderBytes>(frame.data(), kHeaderBytes));
    EXPECT_EQ(tag, Tag::Frame);
    const auto f = decode_frame_body(std::span(frame).subspan(kHeaderBytes));
    EXPECT_EQ(f.rgb.size(), static_cast<std::size_t>(f.width) * f.height * 3);
    const auto text = read(binary);
    ASSERT_FALSE(binary);
    const auto st = parse_state_line(std::string(text.begin(), text.end()));
    EXPECT_EQ(st.step, i);
    EXPECT_EQ(st.budget, 5.0);
    done = st.done;
    steps = st.step;
    if (!done) {
      ws.text(true);
      ws.write(asio::buffer(std::string("KEYS MOVE_FORWARD")));
      ws.write(asio::buffer(std::string("STEP")));
    }
  }
  server.join();
  EXPECT_EQ(steps, 20);
  ASSERT_EQ(session.completed().size(), 1u);
}

TEST(Server, DisconnectAbortsEpisode) {
  const auto dir = fresh_dir("disconnect");
  Session session(spec_of(env::ScenarioId::RemedyRush, 4), dir);
  std::promise<int> port_p;
  ServerOptions opt;
  opt.port = 0;
  opt.lockstep = true;
  opt.on_listen = [&](int p) { port_p.set_value(p); };
  std::thread server([&] { serve(session, opt); });
  const int port = port_p.get_future().get();
  {
    asio::io_context io;
    tcp::socket sock(io);
    sock.connect(tcp::endpoint(asio::ip::make_address("127.0.0.1"), static_cast<unsigned short>(port)));
    std::uint32_t seq = 0;
    read_frame_and_state(sock, seq);
    for (int i = 0; i < 5; ++i) {
      asio::write(sock, asio::buffer(std::string("STEP\n")));
      read_frame_and_state(sock, seq);
    }
  }
  server.join();
  ASSERT_EQ(session.recordings().size(), 1u);
  const auto rec = load(session.recordings().front());
  EXPECT_FALSE(rec.completed);
  EXPECT_EQ(rec.actions.size(), 5u);
  EXPECT_TRUE(session.completed().empty());
  fs::remove_all(dir);
}
