#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hasard/core/catalog.hpp"
#include "hasard/core/rng.hpp"

namespace hasard {

// Horizontal coordinates are in tiles (1.0 = one tile), vertical in world
// units. One tile spans kTileSize world units.
inline constexpr double kTileSize = 64.0;
inline constexpr int kTicksPerSecond = 35;
inline constexpr int kFrameSkip = 4;

inline constexpr double kGravity = 1.0;       // units / tick^2
inline constexpr double kJumpImpulse = 8.0;   // units / tick, apex 36 units
inline constexpr double kStepHeight = 24.0;   // max walkable ledge
inline constexpr double kAgentRadius = 0.25;  // tiles
inline constexpr double kTurnRate = 6.0;      // degrees / tick
inline constexpr double kLookRate = 3.0;      // degrees / tick
inline constexpr double kPitchLimit = 60.0;
inline constexpr double kViewHeight = 41.0;
inline constexpr double kCrouchViewHeight = 20.0;
inline constexpr double kDefaultSpeed = 0.125;  // tiles / tick (8 units)

enum class TileKind : std::uint8_t { Floor, Lava, Acid, Wall, DeliveryZone };

struct Tile {
  TileKind kind = TileKind::Floor;
  double floor_z = 0.0;
  double ceiling_z = 128.0;

  friend bool operator==(const Tile&, const Tile&) = default;
};

struct TileCoord {
  int x = 0;
  int y = 0;
  friend bool operator==(const TileCoord&, const TileCoord&) = default;
};

class TileGrid {
public:
  TileGrid() = default;
  TileGrid(int width, int height, Tile fill = {});

  /// A walled box: border tiles are Wall, interior is `floor`.
  static TileGrid room(int interior_width, int interior_height, Tile floor = {});

  int width() const { return width_; }
  int height() const { return height_; }
  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  Tile& at(int x, int y) { return tiles_[index(x, y)]; }
  const Tile& at(int x, int y) const { return tiles_[index(x, y)]; }
  Tile& at(TileCoord c) { return at(c.x, c.y); }
  const Tile& at(TileCoord c) const { return at(c.x, c.y); }

  bool is_wall(int x, int y) const { return !in_bounds(x, y) || at(x, y).kind == TileKind::Wall; }

  /// Tile containing a continuous position (tiles units).
  static TileCoord tile_of(double x, double y);

  bool has_wall_border() const;
  bool valid_heights() const;

  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }
  const std::vector<Tile>& tiles() const { return tiles_; }

  friend bool operator==(const TileGrid&, const TileGrid&) = default;

private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Tile> tiles_;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

enum class EntityKind : std::uint8_t { Weapon, Item, Unit, Barrel, Projectile };

struct Entity {
  int id = 0;
  EntityKind kind = EntityKind::Item;
  Catalog type = Catalog::HealthBonus;
  Role role = Role::Good;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double hp = 0.0;
  Vec2 vel;
  bool alive = true;
  bool always_visible = false;  // drawn even in darkness
  int target = -1;              // scenario-defined (patrol point, owner, ...)
  double value = 0.0;           // scenario-defined magnitude shown in features
};

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double yaw = 0.0;    // degrees, [0, 360)
  double pitch = 0.0;  // degrees, [-60, 60]
};

struct AgentState {
  Pose pose;
  double health = 100.0;
  double max_health = 100.0;
  double base_speed = kDefaultSpeed;  // v0, tiles / tick
  double speed = kDefaultSpeed;       // effective speed this tick
  double carried_weight = 0.0;
  double fall_origin_z = 0.0;
  double vz = 0.0;
  bool airborne = false;
  bool crouched = false;
  bool can_move = true;
};

/// Buttons held during a tick, already decoded from the action encoding.
struct ResolvedAction {
  bool forward = false;
  bool backward = false;
  bool strafe_left = false;
  bool strafe_right = false;
  bool turn_left = false;
  bool turn_right = false;
  bool look_up = false;
  bool look_down = false;
  bool attack = false;
  bool speed = false;
  bool jump = false;
  bool use = false;
  bool crouch = false;
  bool turn180 = false;
  bool next_weapon = false;
  bool prev_weapon = false;

  friend bool operator==(const ResolvedAction&, const ResolvedAction&) = default;
};

/// What happened to the agent during one physics tick.
struct TickEvents {
  bool landed = false;
  double fall_distance = 0.0;
  double z_before = 0.0;
  double z_after = 0.0;
  bool moved = false;
  bool blocked = false;
};

struct World {
  TileGrid grid;
  std::vector<Entity> entities;
  AgentState agent;
  std::uint64_t tick = 0;
  double brightness = 1.0;
  bool green_tint = false;
  int next_entity_id = 1;

  Entity& spawn(EntityKind kind, Catalog type, Role role, double x, double y, double hp = 0.0);

  /// Floor height under a continuous position (walls report +inf).
  double floor_at(double x, double y) const;
  const Tile& tile_under_agent() const;
  bool agent_on_ground() const;

  /// Drops dead entities; ids stay unique.
  void compact();
};

/// Advances the agent by one tick: turning, movement with collision, jumping,
/// gravity. A landing reports the fall distance from the apex of the airborne
/// phase.
TickEvents tick_physics(World& world, const ResolvedAction& action);

/// Fall damage: (d - 96) * 0.1 above the 96-unit threshold, else 0.
double compute_fall_damage(double d);

using TilePredicate = std::function<bool(int x, int y)>;

/// n tile-centre positions on distinct tiles satisfying `eligible`, drawn by
/// rejection sampling. Throws InsufficientSpace if fewer than n tiles qualify.
std::vector<Vec2> place_randomly(const TileGrid& grid, Rng& rng, int n, const TilePredicate& eligible);

/// Same, but returns min(n, eligible count) positions instead of throwing.
std::vector<Vec2> place_up_to(const TileGrid& grid, Rng& rng, int n, const TilePredicate& eligible);

double wrap_degrees(double deg);

}  // namespace hasard
