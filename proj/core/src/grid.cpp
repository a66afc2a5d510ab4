#include "shiftframe/grid.hpp"

#include <sstream>

#include "shiftframe/errors.hpp"

namespace shiftframe {

std::size_t OmegaGrid::size() const {
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(points_per_axis);
  return total;
}

std::vector<double> OmegaGrid::point(std::size_t flat) const {
  std::vector<double> omega(dim);
  std::size_t rest = flat;
  for (int a = dim - 1; a >= 0; --a) {
    std::size_t t = rest % static_cast<std::size_t>(points_per_axis);
    rest /= static_cast<std::size_t>(points_per_axis);
    omega[a] = static_cast<double>(t) / static_cast<double>(points_per_axis);
  }
  return omega;
}

int FiberWindow::fiber_dim(int dim) const {
  int n = 1;
  for (int a = 0; a < dim; ++a) n *= 2 * radius + 1;
  return n;
}

std::vector<int> FiberWindow::index(std::size_t flat, int dim) const {
  int side = 2 * radius + 1;
  std::vector<int> k(dim);
  std::size_t rest = flat;
  for (int a = dim - 1; a >= 0; --a) {
    k[a] = static_cast<int>(rest % static_cast<std::size_t>(side)) - radius;
    rest /= static_cast<std::size_t>(side);
  }
  return k;
}

void validate_layout(const OmegaGrid& grid, const FiberWindow& window) {
  if (grid.dim < 1 || grid.dim > 4) {
    std::ostringstream os;
    os << "grid dim must be in 1..4, got " << grid.dim;
    throw SchemaError(os.str());
  }
  if (grid.points_per_axis < 1 || grid.points_per_axis > 65536) {
    std::ostringstream os;
    os << "points_per_axis must be in 1..65536, got " << grid.points_per_axis;
    throw SchemaError(os.str());
  }
  if (window.radius < 0) {
    throw SchemaError("window radius must be >= 0");
  }
  if (window.fiber_dim(grid.dim) > 4096) {
    throw SchemaError("fiber dimension (2N+1)^d exceeds 4096");
  }
}

}  // namespace shiftframe
