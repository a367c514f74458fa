#include "infodyn/learner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace infodyn::learner {

PatternDictionary::PatternDictionary(double theta, double phi, std::uint64_t min_support)
    : theta_(theta), phi_(phi), min_support_(min_support) {
  if (!(theta_ > 0.0) || !(phi_ >= 0.0)) throw std::invalid_argument("bad thresholds");
}

int PatternDictionary::add_primitive(PatternKind kind, const std::string& label) {
  Pattern p;
  p.id = next_id_++;
  p.kind = kind;
  p.primitive = true;
  p.label = label;
  patterns_[p.id] = p;
  return p.id;
}

int PatternDictionary::add_composite(PatternKind kind, const std::vector<int>& expansion) {
  if (expansion.empty()) throw std::invalid_argument("empty composite");
  for (int c : expansion) {
    if (!contains(c)) throw std::invalid_argument("composite child missing");
  }
  Pattern p;
  p.id = next_id_++;
  p.kind = kind;
  p.primitive = false;
  p.expansion = expansion;
  patterns_[p.id] = p;
  return p.id;
}

const Pattern& PatternDictionary::pattern(int id) const {
  const auto it = patterns_.find(id);
  if (it == patterns_.end()) throw std::out_of_range("unknown pattern id");
  return it->second;
}

bool PatternDictionary::contains(int id) const { return patterns_.count(id) != 0; }

std::vector<int> PatternDictionary::ids() const {
  std::vector<int> out;
  for (const auto& [id, p] : patterns_) out.push_back(id);
  return out;
}

std::vector<int> PatternDictionary::expand(int id) const {
  const Pattern& p = pattern(id);
  if (p.primitive) return {id};
  std::vector<int> out;
  for (int c : p.expansion) {
    const auto sub = expand(c);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

void PatternDictionary::bump(int id, std::uint64_t by) {
  patterns_.at(id).count += by;
}

void PatternDictionary::prune() {
  std::uint64_t total = 0;
  for (const auto& [id, p] : patterns_) total += p.count;
  if (total == 0) return;
  std::vector<int> doomed;
  for (const auto& [id, p] : patterns_) {
    if (!p.primitive && double(p.count) / double(total) < phi_) doomed.push_back(id);
  }
  for (int id : doomed) {
    const std::vector<int> expansion = patterns_.at(id).expansion;
    // expand the pruned composite in place wherever it is referenced
    for (auto& [oid, other] : patterns_) {
      if (other.primitive || oid == id) continue;
      std::vector<int> updated;
      for (int c : other.expansion) {
        if (c == id) updated.insert(updated.end(), expansion.begin(), expansion.end());
        else updated.push_back(c);
      }
      other.expansion = std::move(updated);
    }
    patterns_.erase(id);
  }
}

std::string PatternDictionary::to_json() const {
  nlohmann::json j;
  j["theta"] = theta_;
  j["phi"] = phi_;
  j["min_support"] = min_support_;
  j["patterns"] = nlohmann::json::array();
  for (const auto& [id, p] : patterns_) {
    nlohmann::json jp;
    jp["id"] = p.id;
    jp["kind"] = p.kind == PatternKind::kData ? "data" : "action";
    jp["primitive"] = p.primitive;
    jp["label"] = p.label;
    jp["expansion"] = p.expansion;
    jp["count"] = p.count;
    j["patterns"].push_back(jp);
  }
  return j.dump(2);
}

PatternDictionary PatternDictionary::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  PatternDictionary d(j.at("theta").get<double>(), j.at("phi").get<double>(),
                      j.at("min_support").get<std::uint64_t>());
  for (const auto& jp : j.at("patterns")) {
    Pattern p;
    p.id = jp.at("id").get<int>();
    p.kind = jp.at("kind").get<std::string>() == "data" ? PatternKind::kData
                                                        : PatternKind::kAction;
    p.primitive = jp.at("primitive").get<bool>();
    p.label = jp.value("label", std::string());
    p.expansion = jp.at("expansion").get<std::vector<int>>();
    p.count = jp.at("count").get<std::uint64_t>();
    d.patterns_[p.id] = p;
    d.next_id_ = std::max(d.next_id_, p.id + 1);
  }
  return d;
}

std::vector<int> tokenize(const std::vector<int>& primitives, const PatternDictionary& dict) {
  // composites sorted by primitive-expansion length, longest first
  struct Entry {
    int id;
    std::vector<int> prim;
  };
  std::vector<Entry> entries;
  for (int id : dict.ids()) {
    const Pattern& p = dict.pattern(id);
    if (!p.primitive) entries.push_back({id, dict.expand(id)});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.prim.size() != b.prim.size()) return a.prim.size() > b.prim.size();
    return a.id < b.id;
  });

  std::vector<int> out;
  std::size_t i = 0;
  while (i < primitives.size()) {
    bool matched = false;
    for (const Entry& e : entries) {
      if (i + e.prim.size() > primitives.size()) continue;
      if (std::equal(e.prim.begin(), e.prim.end(), primitives.begin() + i)) {
        out.push_back(e.id);
        i += e.prim.size();
        matched = true;
        break;
      }
    }
    if (!matched) {
      out.push_back(primitives[i]);
      ++i;
    }
  }
  return out;
}

std::vector<int> learn_pairs(const std::vector<int>& stream, PatternDictionary& dict,
                             unsigned passes) {
  std::vector<int> primitives;
  for (int t : stream) {
    if (!dict.contains(t)) throw std::invalid_argument("unknown token in stream");
    const auto sub = dict.expand(t);
    primitives.insert(primitives.end(), sub.begin(), sub.end());
  }
  std::vector<int> tokens = stream;
  for (unsigned pass = 0; pass < passes && tokens.size() >= 2; ++pass) {
    std::map<int, std::uint64_t> count;
    std::map<std::pair<int, int>, std::uint64_t> pairs;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      ++count[tokens[i]];
      dict.bump(tokens[i]);
      if (i + 1 < tokens.size()) ++pairs[{tokens[i], tokens[i + 1]}];
    }
    const double total = double(tokens.size());

    struct Promo {
      double lift;
      std::pair<int, int> pair;
    };
    std::vector<Promo> promos;
    for (const auto& [pr, obs] : pairs) {
      if (obs < dict.min_support()) continue;
      const double expected = double(count[pr.first]) * double(count[pr.second]) / total;
      if (expected <= 0.0) continue;
      const double lift = double(obs) / expected;
      if (lift >= dict.theta()) promos.push_back({lift, pr});
    }
    std::sort(promos.begin(), promos.end(), [](const Promo& a, const Promo& b) {
      if (a.lift != b.lift) return a.lift > b.lift;
      return a.pair < b.pair;
    });
    for (const Promo& p : promos) {
      dict.add_composite(dict.pattern(p.pair.first).kind,
                         {p.pair.first, p.pair.second});
    }
    dict.prune();
    if (promos.empty()) break;
    tokens = tokenize(primitives, dict);
  }
  return tokens;
}

// --- gaze-walk learning ----------------------------------------------------

std::uint8_t GazeWorld::color() const {
  const std::int64_t h = static_cast<std::int64_t>(rows.size());
  const std::int64_t w = static_cast<std::int64_t>(rows[0].size());
  const std::int64_t r = ((gy % h) + h) % h;
  const std::int64_t c = ((gx % w) + w) % w;
  return rows[std::size_t(r)][std::size_t(c)] == '#' ? 1 : 0;
}

void GazeWorld::move(int action) {
  switch (action) {
    case 0: ++gx; break;  // right
    case 1: ++gy; break;  // below
    case 2: --gx; break;  // left
    case 3: --gy; break;  // up
    default: throw std::invalid_argument("unknown action");
  }
}

GazeWorld parse_image(const std::string& text) {
  GazeWorld w;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    for (char c : line) {
      if (c != '#' && c != '.') throw std::invalid_argument("image rows use '#' and '.' only");
    }
    if (!w.rows.empty() && line.size() != w.rows[0].size()) {
      throw std::invalid_argument("ragged image");
    }
    w.rows.push_back(line);
  }
  if (w.rows.empty()) throw std::invalid_argument("empty image");
  return w;
}

std::string serialize_image(const GazeWorld& world) {
  std::string out;
  for (const auto& r : world.rows) {
    out += r;
    out += '\n';
  }
  return out;
}

namespace {

struct Primitives {
  int white, black;
  int action[4];
};

int find_or_add(PatternDictionary& dict, PatternKind kind, const std::string& label) {
  for (int id : dict.ids()) {
    const Pattern& p = dict.pattern(id);
    if (p.primitive && p.kind == kind && p.label == label) return id;
  }
  return dict.add_primitive(kind, label);
}

Primitives ensure_primitives(PatternDictionary& dict) {
  Primitives prim{};
  prim.white = find_or_add(dict, PatternKind::kData, "white");
  prim.black = find_or_add(dict, PatternKind::kData, "black");
  const char* names[4] = {"right", "below", "left", "up"};
  for (int a = 0; a < 4; ++a) {
    prim.action[a] = find_or_add(dict, PatternKind::kAction, names[a]);
  }
  return prim;
}

}  // namespace

ActLearnResult act_learn(GazeWorld& world, std::uint64_t steps, PatternDictionary& dict,
                         std::uint64_t seed, std::uint64_t promote_interval) {
  const Primitives prim = ensure_primitives(dict);
  CounterRng rng(seed, 0x6c6561726eULL);
  ActLearnResult result;

  // triple statistics over (D, A, D') and (A, D, A')
  std::map<std::array<int, 3>, std::uint64_t> data_triples;
  std::map<std::array<int, 3>, std::uint64_t> action_triples;
  std::array<std::uint64_t, 2> color_count{0, 0};
  std::array<std::uint64_t, 4> action_count{0, 0, 0, 0};
  std::uint64_t n_obs = 0;

  const auto color_id = [&](std::uint8_t c) { return c ? prim.black : prim.white; };

  const auto choose_action = [&](std::uint8_t color, bool& deterministic) -> int {
    // longest stored data composite whose leading element matches the color
    int best = -1;
    std::size_t best_len = 0;
    for (int id : dict.ids()) {
      const Pattern& p = dict.pattern(id);
      if (p.primitive || p.kind != PatternKind::kData || p.expansion.size() < 2) continue;
      if (p.expansion[0] != color_id(color)) continue;
      const Pattern& next = dict.pattern(p.expansion[1]);
      if (next.kind != PatternKind::kAction) continue;
      const std::size_t len = dict.expand(id).size();
      if (len > best_len || (len == best_len && id < best)) {
        best = p.expansion[1];
        best_len = len;
      }
    }
    if (best >= 0) {
      deterministic = true;
      for (int a = 0; a < 4; ++a) {
        if (prim.action[a] == best) return a;
      }
      // composite action; fall through to its first primitive action
      const auto ex = dict.expand(best);
      for (int a = 0; a < 4; ++a) {
        if (prim.action[a] == ex[0]) return a;
      }
    }
    deterministic = false;
    return static_cast<int>(rng.next_below(4));
  };

  const auto promote = [&]() {
    struct Promo {
      double lift;
      std::array<int, 3> triple;
      PatternKind kind;
    };
    if (n_obs == 0) return;
    std::vector<Promo> promos;
    const double n = double(n_obs);
    const auto p_color = [&](int id) {
      const std::uint64_t tot = color_count[0] + color_count[1];
      if (tot == 0) return 0.0;
      return double(id == prim.black ? color_count[1] : color_count[0]) / double(tot);
    };
    const auto p_action = [&](int id) {
      const std::uint64_t tot =
          action_count[0] + action_count[1] + action_count[2] + action_count[3];
      if (tot == 0) return 0.0;
      for (int a = 0; a < 4; ++a) {
        if (prim.action[a] == id) return double(action_count[a]) / double(tot);
      }
      return 0.0;
    };
    for (const auto& [t, obs] : data_triples) {
      if (obs < dict.min_support()) continue;
      const double expected = n * p_color(t[0]) * p_action(t[1]) * p_color(t[2]);
      if (expected <= 0.0) continue;
      const double lift = double(obs) / expected;
      if (lift >= dict.theta()) promos.push_back({lift, t, PatternKind::kData});
    }
    for (const auto& [t, obs] : action_triples) {
      if (obs < dict.min_support()) continue;
      const double expected = n * p_action(t[0]) * p_color(t[1]) * p_action(t[2]);
      if (expected <= 0.0) continue;
      const double lift = double(obs) / expected;
      if (lift >= dict.theta()) promos.push_back({lift, t, PatternKind::kAction});
    }
    // data composites take precedence, then lift, then lowest ids
    std::sort(promos.begin(), promos.end(), [](const Promo& a, const Promo& b) {
      if (a.kind != b.kind) return a.kind == PatternKind::kData;
      if (a.lift != b.lift) return a.lift > b.lift;
      return a.triple < b.triple;
    });
    for (const Promo& p : promos) {
      bool exists = false;
      for (int id : dict.ids()) {
        const Pattern& q = dict.pattern(id);
        if (!q.primitive && q.expansion.size() == 3 && q.expansion[0] == p.triple[0] &&
            q.expansion[1] == p.triple[1] && q.expansion[2] == p.triple[2]) {
          exists = true;
          break;
        }
      }
      if (!exists) {
        result.promoted.push_back(
            dict.add_composite(p.kind, {p.triple[0], p.triple[1], p.triple[2]}));
      }
    }
  };

  std::uint8_t prev_color = world.color();
  int prev_action = -1;
  for (std::uint64_t s = 0; s < steps; ++s) {
    const std::uint8_t c = world.color();
    ++color_count[c];
    dict.bump(color_id(c));
    bool det = false;
    const int a = choose_action(c, det);
    ++action_count[a];
    dict.bump(prim.action[a]);
    result.log.push_back({c, a, det});
    world.move(a);
    const std::uint8_t c2 = world.color();
    ++data_triples[{color_id(c), prim.action[a], color_id(c2)}];
    if (prev_action >= 0) {
      ++action_triples[{prim.action[prev_action], color_id(c), prim.action[a]}];
    }
    ++n_obs;
    prev_color = c2;
    prev_action = a;
    if (promote_interval > 0 && (s + 1) % promote_interval == 0) promote();
  }
  (void)prev_color;
  promote();
  return result;
}

double decision_energy(const std::vector<ActLogEntry>& log,
                       const thermo::ThermalContext& ctx, unsigned n_actions) {
  const double per_random = ctx.kT * std::log(double(n_actions));
  double total = 0.0;
  for (const auto& e : log) {
    if (!e.deterministic) total += per_random;
  }
  return total;
}

}  // namespace infodyn::learner
