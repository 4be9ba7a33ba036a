#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "polyscan/geometry.hpp"

namespace polyscan {

struct AddCriteriaConfig {
  double min_new_volume = 0.1;    // m^2 in 2D, m^3 in 3D
  double min_new_fraction = 0.25;
  int mc_samples = 10000;
  std::uint64_t rng_seed = 0;
  /// Slices are pushed this far (m) back into the polytope they cut against,
  /// so the kept piece still overlaps it with nonzero volume.
  double slice_overlap = 0.25;
  /// When set, a polytope is only added if it overlaps the existing union.
  bool require_overlap = false;

  void Validate() const;
};

/// Union of free polytopes. Ids are assigned on insertion, increase
/// monotonically and are never reused; stored polytopes never change.
class FreeSpace {
 public:
  explicit FreeSpace(double robot_radius = 0.0) : robot_radius_(robot_radius) {}

  /// Rebuilds a union with given ids (as loaded from disk). Ids must be
  /// unique; polytopes are kept in ascending id order.
  static FreeSpace FromPolytopes(double robot_radius, std::vector<Polytope> polys);

  double robot_radius() const { return robot_radius_; }
  const std::vector<Polytope>& polytopes() const { return polytopes_; }
  bool empty() const { return polytopes_.empty(); }
  std::size_t size() const { return polytopes_.size(); }

  PolytopeId Insert(Polytope p);
  const Polytope* Find(PolytopeId id) const;
  bool Contains(const Point& x, double tol = kTolGeom) const;

 private:
  double robot_radius_;
  std::vector<Polytope> polytopes_;
  std::int64_t next_id_ = 0;
};

/// geometry Shrink at the robot radius.
std::optional<Polytope> ShrinkForRobot(const Polytope& p, double r);

/// Monte-Carlo estimate of vol(p \ fs) / vol(p) from `samples` uniform draws.
double NewVolumeFraction(const Polytope& p, const FreeSpace& fs, int samples,
                         std::mt19937_64& rng);

/// New-space fraction and estimated new volume both reach their minimums.
/// Deterministic: draws from a generator seeded with cfg.rng_seed.
bool AddCriteria(const FreeSpace& fs, const Polytope& p,
                 const AddCriteriaConfig& cfg);

struct AddReport {
  std::vector<PolytopeId> inserted;
  /// True when p went in unsliced.
  bool whole = false;
  /// Estimated fraction of p outside the prior union that was dropped
  /// because the pieces covering it failed the criteria.
  double rejected_fraction = 0.0;
};

/// Adds p (already shrunk) to fs: candidate slices against each overlapping
/// polytope are tried first; slices that would drop space not covered by
/// the polytope they cut against are skipped. Falls back to p whole.
AddReport AddNewPoly(const Polytope& p, FreeSpace& fs,
                     const AddCriteriaConfig& cfg);

/// Lowest-id polytope containing x (within kTolGeom).
std::optional<PolytopeId> Locate(const FreeSpace& fs, const Point& x);

}  // namespace polyscan
