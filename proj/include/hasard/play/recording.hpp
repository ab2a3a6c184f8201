#pragma once

// Line-oriented episode recordings:
//
//   HASARD-RECORDING 1
//   env <env id>
//   spec <key>=<value>          (one line per EnvSpec key)
//   seed <episode seed>
//   start <UTC timestamp>
//   <step> <group index>...     (one row per env step, step counts from 1)
//   hash <step> <hex digest>    (after every kHashInterval-th row)
//   end <completed|aborted> <R> <C> <steps> <hex digest>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hasard/env/env.hpp"

namespace hasard::play {

inline constexpr int kHashInterval = 100;

struct Recording {
  env::EnvSpec spec;
  std::string env_id;
  std::uint64_t seed = 0;
  std::string start;
  std::vector<std::vector<int>> actions;
  std::map<int, std::uint64_t> hashes;  // step -> checkpoint digest
  bool completed = false;
  double reward_total = 0.0;
  double cost_total = 0.0;
  std::uint64_t final_hash = 0;

  void write(std::ostream& out) const;
  /// Throws EnvMismatch for a bad header, DivergenceDetected for bad rows.
  static Recording parse(std::istream& in);
};

/// Digest chaining the env state hash with every action taken so far.
class CheckpointDigest {
public:
  void add_action(std::span<const int> groups);
  std::uint64_t checkpoint(const env::Env& env) const;

private:
  std::uint64_t actions_ = 0xCBF29CE484222325ULL;
};

/// Incrementally builds a Recording alongside a live Env.
class Recorder {
public:
  /// Call right after env.reset().
  Recorder(const env::Env& env, std::string start_timestamp);
  /// Call right after each env.step().
  void record(const env::Env& env, std::span<const int> groups);
  Recording finish(const env::Env& env, bool completed);

private:
  Recording rec_;
  CheckpointDigest digest_;
};

struct ReplayResult {
  double reward_total = 0.0;
  double cost_total = 0.0;
  int steps = 0;
};

/// Re-executes a recording. Throws EnvMismatch when the header does not
/// describe a valid env, DivergenceDetected on any checkpoint or footer
/// mismatch.
ReplayResult replay(const Recording& rec);

std::string utc_timestamp();

}  // namespace hasard::play
