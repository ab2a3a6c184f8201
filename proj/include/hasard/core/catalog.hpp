#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace hasard {

// Every thing that can be placed in a world. Order is part of the label
// contract: label id = 1 + enum value, 0 is background.
enum class Catalog : std::uint8_t {
  // weapons
  Pistol,
  Shotgun,
  SuperShotgun,
  Chaingun,
  RocketLauncher,
  PlasmaRifle,
  BFG9000,
  // decoys
  BlurSphere,
  Allmap,
  Backpack,
  RadSuit,
  // health items
  HealthBonus,
  Stimpack,
  Medikit,
  // penalty items
  ArmorBonus,
  RocketAmmo,
  Shell,
  Cell,
  Infrared,
  // units
  LostSoul,
  ZombieMan,
  ShotgunGuy,
  ChaingunGuy,
  DoomImp,
  Demon,
  Revenant,
  Cacodemon,
  // props
  Barrel,
  Rocket,
  Count
};

inline constexpr int kCatalogSize = static_cast<int>(Catalog::Count);

/// Coarse semantic role used by feature observations.
enum class Role : std::uint8_t { Good, Bad, Neutral, Hostile, Barrel, Weapon, Decoy, Projectile };
inline constexpr int kRoleCount = 8;

struct CatalogEntry {
  std::string_view name;
  float width;   // world units
  float height;  // world units
  std::array<std::uint8_t, 3> color;
};

inline constexpr std::array<CatalogEntry, kCatalogSize> kCatalogTable{{
    {"Pistol", 16, 10, {160, 160, 160}},
    {"Shotgun", 24, 10, {150, 110, 60}},
    {"SuperShotgun", 28, 10, {120, 80, 40}},
    {"Chaingun", 28, 14, {90, 90, 100}},
    {"RocketLauncher", 32, 14, {60, 110, 60}},
    {"PlasmaRifle", 32, 14, {70, 140, 220}},
    {"BFG9000", 40, 20, {40, 220, 70}},
    {"BlurSphere", 16, 16, {120, 60, 200}},
    {"Allmap", 16, 12, {200, 200, 80}},
    {"Backpack", 20, 14, {130, 100, 70}},
    {"RadSuit", 16, 28, {60, 200, 60}},
    {"HealthBonus", 12, 12, {80, 120, 255}},
    {"Stimpack", 14, 10, {255, 255, 255}},
    {"Medikit", 20, 14, {255, 40, 40}},
    {"ArmorBonus", 12, 12, {40, 200, 40}},
    {"RocketAmmo", 10, 18, {140, 90, 40}},
    {"Shell", 10, 8, {220, 160, 40}},
    {"Cell", 14, 10, {100, 220, 220}},
    {"Infrared", 14, 10, {255, 140, 0}},
    {"LostSoul", 32, 32, {255, 200, 80}},
    {"ZombieMan", 40, 56, {120, 130, 90}},
    {"ShotgunGuy", 40, 56, {100, 100, 110}},
    {"ChaingunGuy", 40, 56, {170, 70, 70}},
    {"DoomImp", 40, 56, {150, 90, 60}},
    {"Demon", 60, 56, {230, 120, 140}},
    {"Revenant", 40, 64, {230, 230, 220}},
    {"Cacodemon", 62, 56, {220, 30, 30}},
    {"Barrel", 20, 32, {90, 110, 90}},
    {"Rocket", 8, 8, {255, 220, 120}},
}};

inline constexpr const CatalogEntry& catalog_entry(Catalog c) {
  return kCatalogTable[static_cast<int>(c)];
}

inline constexpr std::uint8_t label_of(Catalog c) {
  return static_cast<std::uint8_t>(1 + static_cast<int>(c));
}

inline constexpr std::uint8_t kBackgroundLabel = 0;

inline constexpr bool is_weapon(Catalog c) { return c <= Catalog::BFG9000; }
inline constexpr bool is_decoy(Catalog c) { return c >= Catalog::BlurSphere && c <= Catalog::RadSuit; }
inline constexpr bool is_unit(Catalog c) { return c >= Catalog::LostSoul && c <= Catalog::Cacodemon; }

}  // namespace hasard
