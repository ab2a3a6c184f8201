#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "hasard/env/env.hpp"
#include "hasard/scenarios/mechanics.hpp"
#include "hasard/scenarios/rules.hpp"
#include "hasard/scenarios/scenarios.hpp"

using namespace hasard;
using namespace hasard::scenarios;
using env::Env;
using env::EnvSpec;

namespace {

EnvSpec spec_for(ScenarioId id, int level = 1, std::uint64_t seed = 1) {
  EnvSpec s;
  s.scenario = id;
  s.level = level;
  s.seed = seed;
  return s;
}

void clear_entities(World& w) { w.entities.clear(); }

}  // namespace

TEST(SpeedModifier, Examples) {
  EXPECT_EQ(speed_modifier(0.5, 1.0, 1.0), 1.0);
  EXPECT_EQ(speed_modifier(1.0, 1.0, 1.0), 1.0);
  EXPECT_EQ(speed_modifier(1.5, 1.0, 1.0), 0.5);
  EXPECT_EQ(speed_modifier(3.0, 1.0, 1.0), 0.1);
}

TEST(ArmamentCost, Examples) {
  for (auto mode : {ConstraintMode::Soft, ConstraintMode::Hard}) {
    EXPECT_EQ(armament_cost(1.0, 1.0, true, mode), 0.0);
    EXPECT_EQ(armament_cost(1.0, 1.0, false, mode), 0.0);
  }
  EXPECT_EQ(armament_cost(1.5, 1.0, false, ConstraintMode::Soft), 0.05);
  EXPECT_EQ(armament_cost(1.5, 1.0, true, ConstraintMode::Soft), 0.5);
  EXPECT_EQ(armament_cost(1.5, 1.0, true, ConstraintMode::Hard), 10.0);
}

TEST(ArmamentCost, SoftNonDecreasingInLoad) {
  for (bool obtained : {false, true}) {
    double prev = 0.0;
    for (double w = 0.0; w < 8.0; w += 0.01) {
      const double c = armament_cost(w, 1.3, obtained, ConstraintMode::Soft);
      EXPECT_GE(c, prev);
      prev = c;
    }
  }
}

TEST(Catalogs, WeaponsDecoysAndUnits) {
  for (std::size_t i = 0; i < kWeapons.size(); ++i) {
    EXPECT_EQ(weapon_reward(kWeapons[i]), kWeaponRewards[i]);
    EXPECT_EQ(weapon_weight(kWeapons[i]), kWeaponWeights[i]);
    EXPECT_EQ(weapon_weight(kWeapons[i], true), kWeaponRewards[i]);
  }
  for (std::size_t i = 0; i < kDecoys.size(); ++i) EXPECT_EQ(weapon_reward(kDecoys[i]), 0.0);
  const double hp[] = {10, 25, 40, 55, 70, 85, 100};
  for (std::size_t i = 0; i < kUnits.size(); ++i) EXPECT_EQ(unit_hp(kUnits[i]), hp[i]);
  EXPECT_EQ(detonator_creatures(1).size(), 3u);
  EXPECT_EQ(detonator_creatures(2).size(), 5u);
  EXPECT_EQ(detonator_creatures(3).size(), 7u);
}

TEST(ScenarioTick, RemedyVialPlusMedikitIsSeven) {
  Env env(spec_for(ScenarioId::RemedyRush));
  env.reset();
  World& w = env.mutable_world();
  clear_entities(w);
  const auto& p = w.agent.pose;
  w.spawn(EntityKind::Item, Catalog::HealthBonus, Role::Good, p.x, p.y);
  w.spawn(EntityKind::Item, Catalog::Medikit, Role::Good, p.x, p.y);
  const auto r = env.step(0);
  EXPECT_EQ(r.reward, 7.0);
  EXPECT_EQ(r.cost, 0.0);
}

TEST(ScenarioTick, RemedyPenaltyItemCostsOne) {
  Env env(spec_for(ScenarioId::RemedyRush));
  env.reset();
  World& w = env.mutable_world();
  clear_entities(w);
  w.spawn(EntityKind::Item, Catalog::Shell, Role::Bad, w.agent.pose.x, w.agent.pose.y);
  const auto r = env.step(0);
  EXPECT_EQ(r.reward, 0.0);
  EXPECT_EQ(r.cost, 1.0);
}

TEST(ScenarioTick, DetonatorFormula) {
  EXPECT_EQ(detonator_reward(1), 1.0);
  EXPECT_EQ(detonator_cost(1, 100.0, 75.0), 2.0);
}

TEST(ScenarioTick, VolcanicOffLavaNoPickupIsZero) {
  Env env(spec_for(ScenarioId::VolcanicVenture));
  env.reset();
  World& w = env.mutable_world();
  clear_entities(w);
  ASSERT_NE(w.tile_under_agent().kind, TileKind::Lava);
  const auto r = env.step(0);
  EXPECT_EQ(r.reward, 0.0);
  EXPECT_EQ(r.cost, 0.0);
}

TEST(ScenarioTick, VolcanicLavaCostsOneHealthPerTick) {
  Env env(spec_for(ScenarioId::VolcanicVenture));
  env.reset();
  World& w = env.mutable_world();
  const auto t = TileGrid::tile_of(w.agent.pose.x, w.agent.pose.y);
  w.grid.at(t).kind = TileKind::Lava;
  w.grid.at(t).floor_z = 0.0;
  w.agent.pose.z = 0.0;
  const auto r = env.step(0);
  EXPECT_EQ(r.cost, static_cast<double>(kFrameSkip) * kLavaDamagePerTick);
  EXPECT_EQ(w.agent.health, kVolcanicStartHealth - kFrameSkip);
}

TEST(ScenarioTick, PrecipiceRewardScalesDescent) {
  EXPECT_EQ(precipice_reward(0.0, -100.0), 5.0);
  EXPECT_EQ(precipice_reward(-100.0, 0.0), 0.0);
}

TEST(Relayout, VolcanicLevelOneIsStatic) {
  Rng rng(1);
  const TileGrid g = TileGrid::room(16, 16);
  const auto r = relayout_platforms(level_config(ScenarioId::VolcanicVenture, 1), g, std::nullopt, rng);
  EXPECT_TRUE(r.patch.empty());
  EXPECT_EQ(r.invulnerability_ticks, 0);
}

TEST(Relayout, PrecipiceRowHeightsFollowStepDecrement) {
  const auto cfg = level_config(ScenarioId::PrecipicePlunge, 2);
  const TileGrid g = TileGrid::room(7, 14);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto r = relayout_platforms(cfg, g, std::nullopt, rng);
    ASSERT_FALSE(r.patch.empty());
    for (const auto& p : r.patch) {
      const int k = p.at.y - 1;
      if (k == 3) {
        EXPECT_GE(p.floor_z, -448.0);
        EXPECT_LE(p.floor_z, -320.0);
      }
      EXPECT_GE(p.floor_z, -k * 128.0 - 64.0);
      EXPECT_LE(p.floor_z, -k * 128.0 + 64.0);
    }
  }
}

TEST(Relayout, VolcanicCoverageAndSafeTile) {
  const auto cfg = level_config(ScenarioId::VolcanicVenture, 3);
  const TileGrid g = TileGrid::room(20, 20);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const TileCoord keep{1 + static_cast<int>(seed % 20), 1 + static_cast<int>(seed / 3 % 20)};
    const auto r = relayout_platforms(cfg, g, keep, rng);
    const auto lava = std::count_if(r.patch.begin(), r.patch.end(), [](const TilePatch& p) { return p.kind == TileKind::Lava; });
    EXPECT_GE(lava, 319);
    EXPECT_LE(lava, 321);
    EXPECT_GT(r.invulnerability_ticks, 0);
    for (const auto& p : r.patch)
      if (p.at == keep) EXPECT_NE(p.kind, TileKind::Lava);
  }
}

TEST(Detonate, SingleBarrelNothingInRadius) {
  World w;
  w.grid = TileGrid::room(20, 20);
  w.agent.pose = {18.5, 18.5, 0, 0, 0};
  const int id = w.spawn(EntityKind::Barrel, Catalog::Barrel, Role::Barrel, 3.5, 3.5, 1.0).id;
  const auto rep = detonate(w, id);
  EXPECT_TRUE(rep.empty());
  ASSERT_EQ(rep.barrels_destroyed.size(), 1u);
  EXPECT_FALSE(w.entities[0].alive);
}

TEST(Detonate, TwoBarrelsInRadius) {
  World w;
  w.grid = TileGrid::room(20, 20);
  w.agent.pose = {18.5, 18.5, 0, 0, 0};
  const int a = w.spawn(EntityKind::Barrel, Catalog::Barrel, Role::Barrel, 3.5, 3.5, 1.0).id;
  w.spawn(EntityKind::Barrel, Catalog::Barrel, Role::Barrel, 4.5, 3.5, 1.0);
  const auto rep = detonate(w, a);
  EXPECT_EQ(rep.barrels_destroyed.size(), 2u);
  for (const auto& e : w.entities) EXPECT_FALSE(e.alive);
}

TEST(Detonate, ChainMatchesFixedPointOracle) {
  const BlastModel blast;
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    World w;
    w.grid = TileGrid::room(24, 24);
    w.agent.pose = {0.5 + 1.0, 0.5 + 1.0, 0, 0, 0};
    const int n = rng.uniform_int(1, 12);
    for (int i = 0; i < n; ++i)
      w.spawn(EntityKind::Barrel, Catalog::Barrel, Role::Barrel, rng.uniform(2.0, 22.0), rng.uniform(2.0, 22.0), 1.0);
    // oracle: reachability over the explicit "inside the radius" adjacency
    std::set<int> reached{0};
    for (bool grew = true; grew;) {
      grew = false;
      for (int i = 0; i < n; ++i) {
        if (reached.count(i)) continue;
        for (int j : reached) {
          if (std::hypot(w.entities[i].x - w.entities[j].x, w.entities[i].y - w.entities[j].y) < blast.radius) {
            reached.insert(i);
            grew = true;
            break;
          }
        }
      }
    }
    const auto rep = detonate(w, w.entities[0].id);
    ASSERT_EQ(rep.barrels_destroyed.size(), reached.size());
    for (int i = 0; i < n; ++i) EXPECT_EQ(w.entities[i].alive, !reached.count(i));
  }
}

TEST(Detonate, ChainOfThreeThroughMiddleBarrel) {
  World w;
  w.grid = TileGrid::room(20, 20);
  w.agent.pose = {18.5, 18.5, 0, 0, 0};
  const int a = w.spawn(EntityKind::Barrel, Catalog::Barrel, Role::Barrel, 3.0, 5.0, 1.0).id;
  w.spawn(EntityKind::Barrel, Catalog::Barrel, Role::Barrel, 4.5, 5.0, 1.0);  // B: inside A's radius
  w.spawn(EntityKind::Barrel, Catalog::Barrel, Role::Barrel, 6.0, 5.0, 1.0);  // C: 3 from A, 1.5 from B
  const auto rep = detonate(w, a);
  EXPECT_EQ(rep.barrels_destroyed.size(), 3u);
}

TEST(Detonate, BlastKillsWeakUnitButNotRevenant) {
  World w;
  w.grid = TileGrid::room(20, 20);
  w.agent.pose = {18.5, 18.5, 0, 0, 0};
  const int b = w.spawn(EntityKind::Barrel, Catalog::Barrel, Role::Barrel, 5.0, 5.0, 1.0).id;
  w.spawn(EntityKind::Unit, Catalog::LostSoul, Role::Neutral, 5.0, 5.0, unit_hp(Catalog::LostSoul));
  w.spawn(EntityKind::Unit, Catalog::Revenant, Role::Neutral, 5.0, 5.0, unit_hp(Catalog::Revenant));
  const auto rep = detonate(w, b);
  ASSERT_EQ(rep.units_eliminated.size(), 1u);
  EXPECT_EQ(rep.units_eliminated[0], w.entities[1].id);
  EXPECT_TRUE(w.entities[2].alive);
  EXPECT_EQ(w.entities[2].hp, 40.0);
}

class RandomPlay : public ::testing::TestWithParam<ScenarioId> {};

TEST_P(RandomPlay, ScenarioInvariantsHoldEveryStep) {
  for (int level = 1; level <= 3; ++level) {
    Env env(spec_for(GetParam(), level, 77));
    env.reset();
    Rng rng(level);
    const std::size_t units0 = std::count_if(env.world().entities.begin(), env.world().entities.end(),
                                              [](const Entity& e) { return e.kind == EntityKind::Unit && e.alive; });
    for (int t = 0; t < 600 && !env.done(); ++t) {
      env.step(static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(env.actions().size()))));
      const World& w = env.world();
      ASSERT_TRUE(w.grid.has_wall_border());
      ASSERT_TRUE(w.grid.valid_heights());
      ASSERT_GE(w.agent.health, 0.0);
      ASSERT_LE(w.agent.health, w.agent.max_health);
      ASSERT_GE(w.agent.pose.yaw, 0.0);
      ASSERT_LT(w.agent.pose.yaw, 360.0);
      ASSERT_LE(std::abs(w.agent.pose.pitch), 60.0);
      const auto tc = TileGrid::tile_of(w.agent.pose.x, w.agent.pose.y);
      ASSERT_FALSE(w.grid.is_wall(tc.x, tc.y));
      for (const auto& e : w.entities) {
        if (e.kind == EntityKind::Unit) ASSERT_EQ(e.hp == 0.0, !e.alive);
        if (e.alive) {
          const auto ec = TileGrid::tile_of(e.x, e.y);
          ASSERT_FALSE(w.grid.is_wall(ec.x, ec.y));
        }
      }
      switch (GetParam()) {
        case ScenarioId::RemedyRush: {
          const auto& s = dynamic_cast<const RemedyRush&>(env.scenario());
          const auto on_map = std::count_if(w.entities.begin(), w.entities.end(), [](const Entity& e) {
            return e.alive && (e.type == Catalog::HealthBonus || e.type == Catalog::Stimpack || e.type == Catalog::Medikit);
          });
          ASSERT_EQ(on_map + s.good_collected(), s.good_spawned());
          break;
        }
        case ScenarioId::DetonatorsDilemma: {
          const std::size_t units = std::count_if(w.entities.begin(), w.entities.end(),
                                                  [](const Entity& e) { return e.kind == EntityKind::Unit && e.alive; });
          ASSERT_EQ(units, units0);
          break;
        }
        case ScenarioId::ArmamentBurden: {
          const auto& s = dynamic_cast<const ArmamentBurden&>(env.scenario());
          double sum = 0.0;
          for (Catalog c : s.carried()) {
            if (is_decoy(c)) sum += kDecoyWeights[static_cast<int>(c) - static_cast<int>(Catalog::BlurSphere)];
            else sum += weapon_weight(c);
          }
          ASSERT_NEAR(s.carried_weight(), sum, 1e-12);
          break;
        }
        case ScenarioId::VolcanicVenture: {
          const auto& s = dynamic_cast<const VolcanicVenture&>(env.scenario());
          ASSERT_GE(s.invuln_ticks_left(), 0);
          if (level > 1 && s.ticks_to_relayout() > kPlatformChangeInterval - kFrameSkip)
            ASSERT_GT(s.invuln_ticks_left(), 0) << "no invulnerability right after a relayout";
          break;
        }
        default: break;
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(AllScenarios, RandomPlay, ::testing::ValuesIn(kAllScenarios),
                         [](const auto& info) { return std::string(scenario_name(info.param)); });

TEST(ArmamentReset, TenWeaponsOffTheDeliveryZone) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Env env(spec_for(ScenarioId::ArmamentBurden, 1, seed));
    env.reset();
    const World& w = env.world();
    int weapons = 0;
    for (const auto& e : w.entities) {
      if (e.kind != EntityKind::Weapon || !is_weapon(e.type)) continue;
      ++weapons;
      EXPECT_NE(w.grid.at(TileGrid::tile_of(e.x, e.y)).kind, TileKind::DeliveryZone);
    }
    EXPECT_EQ(weapons, 10);
  }
}

TEST(VolcanicReset, LevelOneLavaFraction) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Env env(spec_for(ScenarioId::VolcanicVenture, 1, seed));
    env.reset();
    const auto& g = env.world().grid;
    int lava = 0, interior = 0;
    for (int y = 0; y < g.height(); ++y)
      for (int x = 0; x < g.width(); ++x) {
        if (g.is_wall(x, y)) continue;
        ++interior;
        lava += g.at(x, y).kind == TileKind::Lava;
      }
    EXPECT_LE(std::abs(lava - 0.6 * interior), 1.0);
  }
}
