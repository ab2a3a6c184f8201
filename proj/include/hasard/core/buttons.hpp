#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "hasard/core/world.hpp"

namespace hasard {

enum class Button : std::uint8_t {
  NoOp,
  MoveForward,
  MoveBackward,
  MoveRight,
  MoveLeft,
  TurnLeft,
  TurnRight,
  LookUp,
  LookDown,
  Attack,
  Speed,
  Jump,
  Use,
  Crouch,
  Turn180,
  SelectNextWeapon,
  SelectPrevWeapon,
  Count
};

inline constexpr std::array<std::string_view, static_cast<int>(Button::Count)> kButtonNames{
    "NO-OP",  "MOVE_FORWARD", "MOVE_BACKWARD", "MOVE_RIGHT", "MOVE_LEFT", "TURN_LEFT",
    "TURN_RIGHT", "LOOK_UP",  "LOOK_DOWN",     "ATTACK",     "SPEED",     "JUMP",
    "USE",    "CROUCH",       "TURN180",       "SELECT_NEXT_WEAPON", "SELECT_PREV_WEAPON"};

inline constexpr std::string_view button_name(Button b) { return kButtonNames[static_cast<int>(b)]; }

inline std::optional<Button> button_from_name(std::string_view name) {
  for (int i = 1; i < static_cast<int>(Button::Count); ++i)
    if (kButtonNames[i] == name) return static_cast<Button>(i);
  return std::nullopt;
}

inline void press(ResolvedAction& a, Button b) {
  switch (b) {
    case Button::NoOp: break;
    case Button::MoveForward: a.forward = true; break;
    case Button::MoveBackward: a.backward = true; break;
    case Button::MoveRight: a.strafe_right = true; break;
    case Button::MoveLeft: a.strafe_left = true; break;
    case Button::TurnLeft: a.turn_left = true; break;
    case Button::TurnRight: a.turn_right = true; break;
    case Button::LookUp: a.look_up = true; break;
    case Button::LookDown: a.look_down = true; break;
    case Button::Attack: a.attack = true; break;
    case Button::Speed: a.speed = true; break;
    case Button::Jump: a.jump = true; break;
    case Button::Use: a.use = true; break;
    case Button::Crouch: a.crouch = true; break;
    case Button::Turn180: a.turn180 = true; break;
    case Button::SelectNextWeapon: a.next_weapon = true; break;
    case Button::SelectPrevWeapon: a.prev_weapon = true; break;
    case Button::Count: break;
  }
}

/// Buttons whose press() would set the fields of `a`.
inline std::vector<Button> held_buttons(const ResolvedAction& a) {
  std::vector<Button> out;
  for (int i = 1; i < static_cast<int>(Button::Count); ++i) {
    ResolvedAction both = a;
    press(both, static_cast<Button>(i));
    if (both == a) out.push_back(static_cast<Button>(i));
  }
  return out;
}

}  // namespace hasard
