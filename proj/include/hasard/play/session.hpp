#pragma once

#include <atomic>
#include <functional>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hasard/env/env.hpp"
#include "hasard/play/protocol.hpp"
#include "hasard/play/recording.hpp"

namespace hasard::play {

/// What one tick produces for the client. `frame` is empty when dropped.
struct Update {
  std::uint32_t seq = 0;
  std::optional<FrameSet> frame;
  StateMessage state;
};

/// One live environment driven by a held-keys snapshot. The owning thread
/// calls begin_episode/step/abort; any thread may call set_keys.
class Session {
public:
  explicit Session(env::EnvSpec spec, std::optional<std::filesystem::path> record_dir = std::nullopt);

  void set_keys(KeyMask mask) { keys_.store(mask, std::memory_order_release); }
  KeyMask keys() const { return keys_.load(std::memory_order_acquire); }

  Update begin_episode();
  /// Steps the env with the current keys. On episode end the recording is
  /// written and the totals appended to completed().
  Update step(bool with_frame = true);
  /// Closes an in-progress episode as aborted (recording kept).
  void abort();

  bool in_episode() const { return recorder_.has_value(); }
  const env::Env& env() const { return env_; }
  /// Per-group indices the current keys resolve to.
  std::vector<int> resolve_keys() const;
  const std::vector<std::pair<double, double>>& completed() const { return completed_; }
  const std::vector<std::filesystem::path>& recordings() const { return files_; }
  /// "episodes <n> mean_R <r> mean_C <c>"
  std::string summary_line() const;

private:
  Update make_update(bool with_frame);
  void write_recording(bool completed);

  env::Env env_;
  std::optional<std::filesystem::path> record_dir_;
  std::atomic<KeyMask> keys_{0};
  std::optional<Recorder> recorder_;
  std::uint32_t seq_ = 0;
  int episode_index_ = 0;
  std::vector<std::pair<double, double>> completed_;
  std::vector<std::filesystem::path> files_;
};

struct ServerOptions {
  int port = 8723;
  /// Step only on client "STEP" lines instead of the real-time clock.
  bool lockstep = false;
  /// Stop after this many completed episodes (0 = run until disconnect).
  int max_episodes = 0;
  /// Seconds per env step in real-time mode.
  double step_seconds = 4.0 / 35.0;
  /// Called with the bound port once listening (port 0 picks a free one).
  std::function<void(int)> on_listen;
};

/// Accepts one client (raw TCP or WebSocket on the same port) and runs the
/// session until the client leaves or max_episodes complete.
void serve(Session& session, const ServerOptions& options);

}  // namespace hasard::play
