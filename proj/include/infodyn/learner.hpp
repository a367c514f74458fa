#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "infodyn/rng.hpp"
#include "infodyn/thermo.hpp"

namespace infodyn::learner {

enum class PatternKind { kData, kAction };

struct Pattern {
  int id = 0;
  PatternKind kind = PatternKind::kData;
  bool primitive = false;
  std::vector<int> expansion;  // child pattern ids (composites only)
  std::string label;
  std::uint64_t count = 0;
};

// Hierarchical pattern store. Primitives are never pruned; a composite is
// promoted when its pair or triple appears with lift >= theta and enough
// support, and pruned when its probability falls below phi.
class PatternDictionary {
 public:
  PatternDictionary(double theta = 3.0, double phi = 1e-4, std::uint64_t min_support = 5);

  int add_primitive(PatternKind kind, const std::string& label);
  int add_composite(PatternKind kind, const std::vector<int>& expansion);

  const Pattern& pattern(int id) const;
  bool contains(int id) const;
  std::vector<int> ids() const;
  std::size_t size() const { return patterns_.size(); }

  // recursive expansion to primitive ids
  std::vector<int> expand(int id) const;

  double theta() const { return theta_; }
  double phi() const { return phi_; }
  std::uint64_t min_support() const { return min_support_; }

  void bump(int id, std::uint64_t by = 1);
  void prune();  // removes low-probability composites; primitives exempt

  std::string to_json() const;
  static PatternDictionary from_json(const std::string& text);

 private:
  double theta_;
  double phi_;
  std::uint64_t min_support_;
  int next_id_ = 0;
  std::map<int, Pattern> patterns_;
};

// One pass counts adjacent pairs, promotes pairs with lift >= theta, then
// re-tokenizes greedily (longest match) before the next pass.
std::vector<int> learn_pairs(const std::vector<int>& stream, PatternDictionary& dict,
                             unsigned passes);

// tokenize a primitive stream by greedy longest match over dict composites
std::vector<int> tokenize(const std::vector<int>& primitives, const PatternDictionary& dict);

struct GazeWorld {
  std::vector<std::string> rows;  // '#' black, '.' white; toroidal
  std::int64_t gx = 0, gy = 0;

  std::uint8_t color() const;  // 1 = black, 0 = white
  void move(int action);       // 0 right, 1 below, 2 left, 3 up
};

GazeWorld parse_image(const std::string& text);
std::string serialize_image(const GazeWorld& world);

struct ActLogEntry {
  std::uint8_t color = 0;
  int action = 0;
  bool deterministic = false;
};

struct ActLearnResult {
  std::vector<ActLogEntry> log;
  std::vector<int> promoted;  // composite ids in promotion order
};

// Gaze-walk learning: random actions build (D,A,D) and (A,D,A) statistics;
// frequent triples become composites; a stored data composite whose prefix
// matches the current color dictates the next action deterministically.
ActLearnResult act_learn(GazeWorld& world, std::uint64_t steps, PatternDictionary& dict,
                         std::uint64_t seed,
                         std::uint64_t promote_interval = 1000);

// kT ln2 * (choice entropy in bits) per random action; deterministic
// actions are free
double decision_energy(const std::vector<ActLogEntry>& log,
                       const thermo::ThermalContext& ctx, unsigned n_actions = 4);

}  // namespace infodyn::learner
