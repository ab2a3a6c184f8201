#pragma once

// Wire format shared by the raw-TCP and WebSocket transports.
//
// Server to client: [u32 BE body length][u8 tag][body]
//   FRAME (0x01) body: u32 BE seq, u16 BE width, u16 BE height, width*height*3 RGB
//   STATE (0x02) body: "STATE <step> <R> <C> <budget> <done>" (UTF-8, no newline)
// Client to server: newline-terminated UTF-8 lines "KEYS <names...>" or "RESET".

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hasard/core/buttons.hpp"

namespace hasard::play {

enum class Tag : std::uint8_t { Frame = 0x01, State = 0x02 };

inline constexpr std::size_t kHeaderBytes = 5;

struct FrameMessage {
  std::uint32_t seq = 0;
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::vector<std::uint8_t> rgb;
};

struct StateMessage {
  int step = 0;
  double reward_total = 0.0;
  double cost_total = 0.0;
  double budget = 0.0;
  bool done = false;

  friend bool operator==(const StateMessage&, const StateMessage&) = default;
};

/// Bitmask over Button values; bit b set means button b is held.
using KeyMask = std::uint64_t;

struct KeysCommand {
  KeyMask mask = 0;
};
struct ResetCommand {};
/// Lockstep extension: advance the session by one step.
struct StepCommand {};

using ClientMessage = std::variant<KeysCommand, ResetCommand, StepCommand>;

/// Body of a FRAME message (without the length/tag header).
std::vector<std::uint8_t> frame_body(std::uint32_t seq, int width, int height, std::span<const std::uint8_t> rgb);
/// Full FRAME message including the header.
std::vector<std::uint8_t> encode_frame(std::uint32_t seq, int width, int height, std::span<const std::uint8_t> rgb);

/// "STATE <step> <R> <C> <budget> <done>"; numbers use the shortest exact form.
std::string state_line(const StateMessage& s);
std::vector<std::uint8_t> encode_state(const StateMessage& s);

/// Throws std::invalid_argument on malformed input.
FrameMessage decode_frame_body(std::span<const std::uint8_t> body);
StateMessage parse_state_line(std::string_view line);

/// Reads the header; returns (tag, body length).
std::pair<Tag, std::uint32_t> decode_header(std::span<const std::uint8_t, kHeaderBytes> header);

/// Unknown button names are ignored; unknown verbs yield nullopt.
std::optional<ClientMessage> parse_client_line(std::string_view line);

KeyMask mask_of(std::span<const Button> buttons);
std::vector<Button> buttons_of(KeyMask mask);
/// Held buttons as an alphabetically sorted "KEYS ..." line.
std::string keys_line(std::span<const Button> buttons);

}  // namespace hasard::play
