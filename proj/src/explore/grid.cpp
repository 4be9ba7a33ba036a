#include <algorithm>
#include <cmath>

#include "polyscan/explore.hpp"

namespace polyscan {

ExplorationGrid::ExplorationGrid(const Polytope& bounds, double cell_size)
    : lower_(bounds.LowerCorner()), cell_size_(cell_size) {
  if (!(cell_size > 0)) throw Error(ErrorCode::kInvalidArgument, "cell_size must be > 0");
  const Point extent = bounds.UpperCorner() - lower_;
  std::size_t total = 1;
  for (Eigen::Index k = 0; k < extent.size(); ++k) {
    shape_.push_back(std::max(1, static_cast<int>(std::ceil(extent[k] / cell_size - 1e-9))));
    total *= static_cast<std::size_t>(shape_.back());
  }
  cells_.assign(total, CellState::kUnknown);
  for (std::size_t c = 0; c < total; ++c) {
    if (!bounds.Contains(Center(c), 0.0)) cells_[c] = CellState::kOccupied;
  }
}

std::vector<int> ExplorationGrid::Coords(std::size_t cell) const {
  std::vector<int> ijk(shape_.size());
  for (std::size_t k = 0; k < shape_.size(); ++k) {
    ijk[k] = static_cast<int>(cell % shape_[k]);
    cell /= shape_[k];
  }
  return ijk;
}

Point ExplorationGrid::Center(std::size_t cell) const {
  const std::vector<int> ijk = Coords(cell);
  Point c(dim());
  for (int k = 0; k < dim(); ++k) c[k] = lower_[k] + (ijk[k] + 0.5) * cell_size_;
  return c;
}

std::size_t ExplorationGrid::CellOf(const Point& x) const {
  std::size_t cell = 0;
  std::size_t stride = 1;
  for (int k = 0; k < dim(); ++k) {
    const int i = std::clamp(static_cast<int>(std::floor((x[k] - lower_[k]) / cell_size_)), 0,
                             shape_[k] - 1);
    cell += static_cast<std::size_t>(i) * stride;
    stride *= shape_[k];
  }
  return cell;
}

std::vector<std::size_t> ExplorationGrid::Neighbors(std::size_t cell) const {
  const std::vector<int> ijk = Coords(cell);
  std::vector<std::size_t> out;
  const int count = dim() == 2 ? 9 : 27;
  for (int m = 0; m < count; ++m) {
    int code = m;
    std::size_t index = 0;
    std::size_t stride = 1;
    bool inside = true;
    bool self = true;
    for (int k = 0; k < dim(); ++k) {
      const int delta = code % 3 - 1;
      code /= 3;
      self = self && delta == 0;
      const int i = ijk[k] + delta;
      if (i < 0 || i >= shape_[k]) {
        inside = false;
        break;
      }
      index += static_cast<std::size_t>(i) * stride;
      stride *= shape_[k];
    }
    if (inside && !self) out.push_back(index);
  }
  return out;
}

void ExplorationGrid::IntegrateRay(const Point& from, const Point& to, bool hit) {
  const std::size_t end = CellOf(to);
  const double length = (to - from).norm();
  const int samples = static_cast<int>(std::ceil(length / (0.25 * cell_size_)));
  for (int i = 0; i < samples; ++i) {
    const std::size_t c = CellOf(from + (static_cast<double>(i) / samples) * (to - from));
    if (c == end) break;
    if (cells_[c] == CellState::kUnknown) cells_[c] = CellState::kFree;
  }
  if (hit) {
    cells_[end] = CellState::kOccupied;
  } else if (cells_[end] == CellState::kUnknown) {
    cells_[end] = CellState::kFree;
  }
}

void ExplorationGrid::Integrate(const ScanRays& scan) {
  for (const Point& p : scan.cloud.points) IntegrateRay(scan.cloud.origin, p, true);
  for (const Point& p : scan.misses) IntegrateRay(scan.cloud.origin, p, false);
}

std::vector<std::size_t> ExplorationGrid::FrontierCells() const {
  std::vector<char> open(cells_.size(), 0);
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    if (cells_[c] != CellState::kUnknown) continue;
    const std::vector<std::size_t> around = Neighbors(c);
    open[c] = std::none_of(around.begin(), around.end(), [&](std::size_t n) {
      return cells_[n] == CellState::kOccupied;
    });
  }
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    if (cells_[c] != CellState::kFree) continue;
    const std::vector<std::size_t> around = Neighbors(c);
    if (std::any_of(around.begin(), around.end(), [&](std::size_t n) { return open[n]; })) {
      out.push_back(c);
    }
  }
  return out;
}

std::vector<std::size_t> ExplorationGrid::InteriorFreeCells() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    if (cells_[c] != CellState::kFree) continue;
    const std::vector<std::size_t> around = Neighbors(c);
    if (static_cast<int>(around.size()) == (dim() == 2 ? 8 : 26) &&
        std::all_of(around.begin(), around.end(),
                    [&](std::size_t n) { return cells_[n] == CellState::kFree; })) {
      out.push_back(c);
    }
  }
  return out;
}

std::size_t ExplorationGrid::Count(CellState s) const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), s));
}

}  // namespace polyscan
