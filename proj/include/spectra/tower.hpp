#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spectra/datum.hpp"
#include "spectra/topology.hpp"

namespace spectra {

struct TowerPoint {
  std::string id;
  bool locally_free = true;
  std::size_t appears_at_level = 1;
  std::size_t stabilizes_at_level = 1;
};

// An increasing chain of finite data; levels are numbered from 1.
struct TruncationTower {
  std::vector<CategoryDatum> levels;
  // embeddings[k][i]: index in level k+2 of point i of level k+1
  std::vector<std::vector<PointIndex>> embeddings;
  std::vector<TowerPoint> points;  // metadata for every point of the top level

  std::size_t height() const { return levels.size(); }
  const CategoryDatum& level(std::size_t n) const { return levels.at(n - 1); }
  const CategoryDatum& top() const { return levels.back(); }
  const TowerPoint& meta(const std::string& id) const;
  // Index of the point in the given level, if present there.
  std::optional<PointIndex> index_at(std::size_t level, const std::string& id) const;
  // The first `n` levels only.
  TruncationTower truncated(std::size_t n) const;
};

struct TowerReport {
  bool passed = true;
  std::optional<std::size_t> failed_level;
  std::string detail;
  std::vector<std::string> notes;
};

TowerReport verify_tower(const TruncationTower& t);

// Which points a limit question is asked against. AllFamily means every
// locally free point other than the queried one; core points are the ones
// not locally free.
struct FamilyDescription {
  enum class Kind { Finite, AllFamily } kind = Kind::Finite;
  std::vector<std::string> ids;   // Finite
  bool include_core = false;      // AllFamily: also the points present at every level
};

struct LimitWitness {
  AddMorphism map;                 // in top-level indices
  std::vector<std::string> source;  // summand ids
  std::size_t verified_from_level = 0;
};

struct LimitClosureResult {
  enum class Kind { Excluded, NoWitnessUpTo, InSet } kind = Kind::InSet;
  std::optional<LimitWitness> witness;
  std::size_t bound = 0;
  std::size_t candidates_tried = 0;
};

// Searches witnesses g: A -> y with A built from at most `bound` points of
// the family (multiplicities at most `bound`), surjective on Hom(x, -) for
// every family point x at every level. Throws ResourceError past
// `max_candidates` point subsets.
LimitClosureResult closure_in_limit(const TruncationTower& t, const std::string& y, const FamilyDescription& family,
                                    std::size_t bound, std::size_t max_candidates = 1'000'000);

struct ChainEntry {
  std::size_t prefix_level = 0;
  std::vector<std::string> family;         // the prefix set
  std::optional<AddMorphism> witness;      // in indices of the prefix level
  std::vector<std::string> source;
  std::optional<std::size_t> fails_at;     // nullopt: persists to top
  std::string failing_point;
};

struct WitnessChain {
  std::string excluded;
  bool growing = true;  // false: the prefix set stays fixed at later levels
  std::vector<ChainEntry> entries;
};

// For each prefix level N: the minimal witness excluding y from the family
// points of level <= N, and the first later level at which it fails.
WitnessChain witness_failure_chain(const TruncationTower& t, const std::string& y,
                                   const std::vector<std::size_t>& prefix_levels, bool growing = true);

struct ArLevel {
  std::size_t level = 0;
  std::vector<std::string> source;
  std::vector<std::vector<std::string>> blocks;  // formatted coordinates per summand
};

struct ArStabilization {
  enum class Kind { Stable, GrowingUpTo } kind = Kind::Stable;
  std::size_t level = 0;  // stable-from level, or top
  std::vector<ArLevel> per_level;
};

ArStabilization ar_stabilization(const TruncationTower& t, const std::string& m);

struct TowerCBWarning {
  std::string point;
  std::string kind;  // conflict or boundary
  std::string detail;
};

struct TowerCBReport {
  CBReport report;
  std::vector<TowerCBWarning> warnings;
};

TowerCBReport tower_cb_rank(const TruncationTower& t, std::size_t bound = 4);

}  // namespace spectra
