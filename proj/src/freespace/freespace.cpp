#include "polyscan/freespace.hpp"

#include <algorithm>
#include <cmath>

namespace polyscan {

void AddCriteriaConfig::Validate() const {
  if (!(min_new_volume >= 0)) {
    throw Error(ErrorCode::kInvalidArgument, "min_new_volume must be >= 0");
  }
  if (!(min_new_fraction >= 0 && min_new_fraction <= 1)) {
    throw Error(ErrorCode::kInvalidArgument, "min_new_fraction must be in [0, 1]");
  }
  if (mc_samples < 1000) {
    throw Error(ErrorCode::kInvalidArgument, "mc_samples must be >= 1000");
  }
  if (!(slice_overlap >= 0)) {
    throw Error(ErrorCode::kInvalidArgument, "slice_overlap must be >= 0");
  }
}

FreeSpace FreeSpace::FromPolytopes(double robot_radius, std::vector<Polytope> polys) {
  std::sort(polys.begin(), polys.end(),
            [](const Polytope& a, const Polytope& b) { return a.id() < b.id(); });
  FreeSpace fs(robot_radius);
  for (std::size_t i = 0; i < polys.size(); ++i) {
    if (!polys[i].id().valid() || (i > 0 && polys[i].id() == polys[i - 1].id())) {
      throw Error(ErrorCode::kInvalidArgument, "polytope ids must be unique and >= 0");
    }
    fs.next_id_ = polys[i].id().value + 1;
  }
  fs.polytopes_ = std::move(polys);
  return fs;
}

PolytopeId FreeSpace::Insert(Polytope p) {
  const PolytopeId id{next_id_++};
  p.set_id(id);
  polytopes_.push_back(std::move(p));
  return id;
}

const Polytope* FreeSpace::Find(PolytopeId id) const {
  auto it = std::lower_bound(
      polytopes_.begin(), polytopes_.end(), id,
      [](const Polytope& p, PolytopeId key) { return p.id() < key; });
  if (it == polytopes_.end() || it->id() != id) return nullptr;
  return &*it;
}

bool FreeSpace::Contains(const Point& x, double tol) const {
  return std::any_of(polytopes_.begin(), polytopes_.end(),
                     [&](const Polytope& p) { return p.Contains(x, tol); });
}

std::optional<Polytope> ShrinkForRobot(const Polytope& p, double r) {
  return Shrink(p, r);
}

namespace {

bool BoxesOverlap(const Polytope& a, const Polytope& b) {
  return ((a.LowerCorner().array() <= b.UpperCorner().array()) &&
          (b.LowerCorner().array() <= a.UpperCorner().array()))
      .all();
}

bool Overlaps(const Polytope& a, const Polytope& b) {
  if (!BoxesOverlap(a, b)) return false;
  const std::optional<Polytope> both = Intersect(a, b);
  return both && Volume(*both) > 1e-9;
}

}  // namespace

double NewVolumeFraction(const Polytope& p, const FreeSpace& fs, int samples,
                         std::mt19937_64& rng) {
  if (samples < 1) throw Error(ErrorCode::kInvalidArgument, "samples must be >= 1");
  std::vector<const Polytope*> near;
  for (const Polytope& q : fs.polytopes()) {
    if (BoxesOverlap(p, q)) near.push_back(&q);
  }
  const SimplexFan fan(p);
  int outside = 0;
  for (int i = 0; i < samples; ++i) {
    const Point x = fan.Sample(rng);
    const bool covered = std::any_of(near.begin(), near.end(), [&](const Polytope* q) {
      return q->Contains(x, 0.0);
    });
    outside += covered ? 0 : 1;
  }
  return static_cast<double>(outside) / samples;
}

namespace {

struct Estimate {
  double fraction;
  double volume;
};

Estimate EstimateNew(const FreeSpace& fs, const Polytope& p,
                     const AddCriteriaConfig& cfg) {
  std::mt19937_64 rng(cfg.rng_seed);
  const double fraction = NewVolumeFraction(p, fs, cfg.mc_samples, rng);
  return {fraction, fraction * Volume(p)};
}

bool Passes(const Estimate& e, const AddCriteriaConfig& cfg) {
  return e.fraction >= cfg.min_new_fraction && e.volume >= cfg.min_new_volume;
}

bool PassesOverlapRule(const FreeSpace& fs, const Polytope& p,
                       const AddCriteriaConfig& cfg) {
  if (!cfg.require_overlap || fs.empty()) return true;
  return std::any_of(fs.polytopes().begin(), fs.polytopes().end(),
                     [&](const Polytope& q) { return Overlaps(p, q); });
}

// Pieces p ∩ H over the slicing hyperplanes H of (p, q), each pushed back
// into q by `overlap`. A piece is only kept if everything it drops lies in
// q, so no free space is lost by slicing.
std::vector<Polytope> LossFreeSlices(const Polytope& p, const Polytope& q, double overlap) {
  std::vector<Halfspace> cuts;
  try {
    cuts = SlicingHyperplanes(p, q);
  } catch (const Error&) {
    return {};
  }
  std::vector<Polytope> out;
  for (const Halfspace& h : cuts) {
    const Halfspace keep{h.normal, h.offset + overlap * h.normal.norm()};
    // Cheap rejection: dropped vertices of p itself must already lie in q.
    const bool drops_outside =
        std::any_of(p.vertices().begin(), p.vertices().end(), [&](const Point& v) {
          return keep.Violation(v) > 0 && !q.Contains(v);
        });
    if (drops_outside) continue;
    std::vector<Halfspace> kept_rows = p.halfspaces();
    kept_rows.push_back(keep);
    std::vector<Halfspace> dropped_rows = p.halfspaces();
    dropped_rows.push_back(Halfspace{-keep.normal, -keep.offset});
    std::optional<Polytope> piece = Polytope::FromHalfspaces(kept_rows);
    const std::optional<Polytope> dropped = Polytope::FromHalfspaces(dropped_rows);
    if (!piece || !dropped) continue;
    const bool loss_free =
        std::all_of(dropped->vertices().begin(), dropped->vertices().end(),
                    [&](const Point& v) { return q.Contains(v); });
    if (loss_free) out.push_back(*std::move(piece));
  }
  return out;
}

// Convex pieces that together with q cover c. One loss-free slice when there
// is one; otherwise c is split along the facets of q, each piece reaching
// `overlap` back into q. Empty when c lies inside q.
std::vector<Polytope> SplitAgainst(const Polytope& c, const Polytope& q, double overlap) {
  if (std::all_of(c.vertices().begin(), c.vertices().end(),
                  [&](const Point& v) { return q.Contains(v); })) {
    return {};
  }
  std::vector<Polytope> single = LossFreeSlices(c, q, overlap);
  if (!single.empty()) return {std::move(single.front())};
  std::vector<Polytope> out;
  std::vector<Halfspace> inside = c.halfspaces();
  for (const Halfspace& f : q.halfspaces()) {
    std::vector<Halfspace> rows = inside;
    rows.push_back(Halfspace{-f.normal, -(f.offset - overlap * f.normal.norm())});
    if (std::optional<Polytope> piece = Polytope::FromHalfspaces(std::move(rows))) {
      out.push_back(*std::move(piece));
    }
    inside.push_back(f);
  }
  return out;
}

constexpr std::size_t kMaxParts = 64;

}  // namespace

bool AddCriteria(const FreeSpace& fs, const Polytope& p,
                 const AddCriteriaConfig& cfg) {
  return Passes(EstimateNew(fs, p, cfg), cfg);
}

AddReport AddNewPoly(const Polytope& p, FreeSpace& fs, const AddCriteriaConfig& cfg) {
  cfg.Validate();
  AddReport report;

  const std::vector<Polytope> existing = fs.polytopes();
  auto same = [](const Polytope& a, const Polytope& b) {
    return a.vertices().size() == b.vertices().size() &&
           std::all_of(a.vertices().begin(), a.vertices().end(),
                       [&](const Point& v) { return b.Contains(v); }) &&
           std::all_of(b.vertices().begin(), b.vertices().end(),
                       [&](const Point& v) { return a.Contains(v); });
  };

  // Inserts the piece if it passes; otherwise returns its estimated new volume.
  auto try_insert = [&](const Polytope& piece) {
    // A piece inside one already taken adds nothing; skip the estimate.
    const bool covered = std::any_of(
        report.inserted.begin(), report.inserted.end(), [&](PolytopeId id) {
          const Polytope* taken = fs.Find(id);
          return std::all_of(piece.vertices().begin(), piece.vertices().end(),
                             [&](const Point& v) { return taken->Contains(v); });
        });
    if (covered) return 0.0;
    const Estimate e = EstimateNew(fs, piece, cfg);
    if (Passes(e, cfg) && PassesOverlapRule(fs, piece, cfg)) {
      report.inserted.push_back(fs.Insert(piece));
      return 0.0;
    }
    return e.volume;
  };

  // First: p split against every overlapping polytope in turn.
  std::vector<Polytope> parts{p};
  bool split = false;
  for (const Polytope& q : existing) {
    std::vector<Polytope> next;
    for (Polytope& c : parts) {
      if (!Overlaps(c, q)) {
        next.push_back(std::move(c));
        continue;
      }
      split = true;
      for (Polytope& piece : SplitAgainst(c, q, cfg.slice_overlap)) {
        next.push_back(std::move(piece));
      }
    }
    parts = std::move(next);
    if (parts.size() > kMaxParts) break;
  }
  if (split && parts.size() <= kMaxParts) {
    double rejected = 0.0;
    for (const Polytope& piece : parts) rejected += try_insert(piece);
    if (!report.inserted.empty()) {
      report.rejected_fraction = rejected / Volume(p);
      return report;
    }
  }

  // Then single cuts p ∩ H, in id order of the polytope cut against and then
  // in hyperplane order.
  std::vector<Polytope> pieces;
  for (const Polytope& q : existing) {
    if (!Overlaps(p, q)) continue;
    for (Polytope& piece : LossFreeSlices(p, q, cfg.slice_overlap)) {
      const bool duplicate = std::any_of(pieces.begin(), pieces.end(),
                                         [&](const Polytope& o) { return same(o, piece); });
      if (!duplicate) pieces.push_back(std::move(piece));
    }
  }

  for (const Polytope& piece : pieces) try_insert(piece);
  if (!report.inserted.empty()) return report;

  const Estimate whole = EstimateNew(fs, p, cfg);
  if (Passes(whole, cfg) && PassesOverlapRule(fs, p, cfg)) {
    Polytope copy = p;
    report.inserted.push_back(fs.Insert(std::move(copy)));
    report.whole = true;
  } else {
    report.rejected_fraction = whole.fraction;
  }
  return report;
}

std::optional<PolytopeId> Locate(const FreeSpace& fs, const Point& x) {
  for (const Polytope& p : fs.polytopes()) {
    if (p.Contains(x)) return p.id();
  }
  return std::nullopt;
}

}  // namespace polyscan
