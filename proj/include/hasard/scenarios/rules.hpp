#pragma once

// Reward and cost functions of the six scenarios as pure functions of the
// per-tick event counts. The scenario simulations call these and nothing else
// when scoring, so the formula tests cover the live code path.

#include <algorithm>
#include <array>
#include <span>

#include "hasard/core/catalog.hpp"

namespace hasard::scenarios {

enum class ConstraintMode { Soft, Hard };

// ---- catalogs ---------------------------------------------------------------

inline constexpr std::array<Catalog, 7> kWeapons{Catalog::Pistol,         Catalog::Shotgun,
                                                 Catalog::SuperShotgun,   Catalog::Chaingun,
                                                 Catalog::RocketLauncher, Catalog::PlasmaRifle,
                                                 Catalog::BFG9000};
inline constexpr std::array<double, 7> kWeaponRewards{0.1, 0.25, 0.4, 0.55, 0.7, 0.85, 1.0};
inline constexpr std::array<double, 7> kWeaponWeights{0.05, 0.15, 0.3, 0.6, 1.0, 3.0, 6.0};
// Alternate item-table weights (weights equal to rewards), behind a config flag.
inline constexpr std::array<double, 7> kWeaponTableWeights{0.1, 0.25, 0.4, 0.55, 0.7, 0.85, 1.0};

inline constexpr std::array<Catalog, 4> kDecoys{Catalog::BlurSphere, Catalog::Allmap, Catalog::Backpack,
                                                Catalog::RadSuit};
inline constexpr std::array<double, 4> kDecoyWeights{0.25, 0.5, 0.75, 1.0};
inline constexpr std::array<double, 4> kDecoyRewards{0.0, 0.0, 0.0, 0.0};

inline constexpr std::array<Catalog, 7> kUnits{Catalog::LostSoul,    Catalog::ZombieMan, Catalog::ShotgunGuy,
                                               Catalog::ChaingunGuy, Catalog::DoomImp,   Catalog::Demon,
                                               Catalog::Revenant};
inline constexpr std::array<double, 7> kUnitHp{10, 25, 40, 55, 70, 85, 100};

double weapon_reward(Catalog c);
double weapon_weight(Catalog c, bool table_weights = false);
double unit_hp(Catalog c);

/// Creature types present at a Detonator's Dilemma level (3, 5 or 7 types).
std::span<const Catalog> detonator_creatures(int level);

// ---- Armament Burden ----------------------------------------------------------

inline constexpr double kOverloadCoefficient = 0.1;  // rho
inline constexpr double kHardPenalty = 10.0;          // H
inline constexpr double kSpeedFloor = 0.1;

/// v = max(0.1 v0, v0 - (w - c)/c * v0) when w > c, else v0.
inline double speed_modifier(double load, double capacity, double base_speed) {
  if (load <= capacity) return base_speed;
  return std::max(kSpeedFloor * base_speed, base_speed - (load - capacity) / capacity * base_speed);
}

/// Soft: (1 + (rho - 1) * 1[no weapon obtained]) * max(0, w - c) / c.
/// Hard: H * 1[w > c].
inline double armament_cost(double load, double capacity, bool weapon_obtained, ConstraintMode mode) {
  if (mode == ConstraintMode::Hard) return load > capacity ? kHardPenalty : 0.0;
  // 1 + (rho - 1) * 1[...] selected directly so the rho branch is exactly rho.
  const double coefficient = weapon_obtained ? 1.0 : kOverloadCoefficient;
  return coefficient * std::max(0.0, load - capacity) / capacity;
}

inline double armament_reward(std::span<const double> delivered_rewards) {
  double r = 0.0;
  for (double x : delivered_rewards) r += x;
  return r;
}

// ---- Remedy Rush ----------------------------------------------------------------

inline constexpr double kVialReward = 1.0;
inline constexpr double kStimpackReward = 3.0;
inline constexpr double kMedikitReward = 6.0;

inline double remedy_reward(int vials, int stimpacks, int medikits) {
  return kVialReward * vials + kStimpackReward * stimpacks + kMedikitReward * medikits;
}
inline double remedy_cost(int penalty_items) { return static_cast<double>(penalty_items); }

// ---- Collateral Damage ------------------------------------------------------------

inline double collateral_reward(int hostiles_eliminated) { return 1.0 * hostiles_eliminated; }
inline double collateral_cost(int neutrals_eliminated) { return static_cast<double>(neutrals_eliminated); }

// ---- Volcanic Venture -------------------------------------------------------------

inline constexpr double kVolcanicStartHealth = 1000.0;
inline constexpr double kLavaDamagePerTick = 1.0;

inline double volcanic_reward(int items) { return 1.0 * items; }
inline double volcanic_cost(double health_before, double health_after) { return health_before - health_after; }

// ---- Precipice Plunge ---------------------------------------------------------------

inline constexpr double kDepthRewardScale = 0.05;

inline double precipice_reward(double z_prev, double z_now) {
  return kDepthRewardScale * std::max(0.0, z_prev - z_now);
}
inline double precipice_cost(double health_before, double health_after) { return health_before - health_after; }

// ---- Detonator's Dilemma ------------------------------------------------------------

inline constexpr double kHealthPenaltyScale = 0.04;

inline double detonator_reward(int barrels) { return 1.0 * barrels; }
inline double detonator_cost(int neutrals_eliminated, double health_before, double health_after) {
  return neutrals_eliminated + kHealthPenaltyScale * (health_before - health_after);
}

}  // namespace hasard::scenarios
