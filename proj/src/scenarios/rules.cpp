#include "hasard/scenarios/rules.hpp"

#include <stdexcept>

namespace hasard::scenarios {

double weapon_reward(Catalog c) {
  for (std::size_t i = 0; i < kWeapons.size(); ++i)
    if (kWeapons[i] == c) return kWeaponRewards[i];
  for (std::size_t i = 0; i < kDecoys.size(); ++i)
    if (kDecoys[i] == c) return kDecoyRewards[i];
  throw std::invalid_argument("weapon_reward: not a weapon or decoy");
}

double weapon_weight(Catalog c, bool table_weights) {
  for (std::size_t i = 0; i < kWeapons.size(); ++i)
    if (kWeapons[i] == c) return table_weights ? kWeaponTableWeights[i] : kWeaponWeights[i];
  for (std::size_t i = 0; i < kDecoys.size(); ++i)
    if (kDecoys[i] == c) return kDecoyWeights[i];
  throw std::invalid_argument("weapon_weight: not a weapon or decoy");
}

double unit_hp(Catalog c) {
  for (std::size_t i = 0; i < kUnits.size(); ++i)
    if (kUnits[i] == c) return kUnitHp[i];
  throw std::invalid_argument("unit_hp: not a catalog unit");
}

std::span<const Catalog> detonator_creatures(int level) {
  static constexpr Catalog l1[] = {Catalog::ShotgunGuy, Catalog::DoomImp, Catalog::Revenant};
  static constexpr Catalog l2[] = {Catalog::ShotgunGuy, Catalog::DoomImp, Catalog::Revenant, Catalog::LostSoul,
                                   Catalog::ChaingunGuy};
  switch (level) {
    case 1: return l1;
    case 2: return l2;
    default: return kUnits;
  }
}

}  // namespace hasard::scenarios
