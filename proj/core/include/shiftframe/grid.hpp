#pragma once

#include <cstddef>
#include <vector>

namespace shiftframe {

/// Regular grid {t/M : t in {0..M-1}^d} on the torus [0,1)^d. Points are
/// enumerated lexicographically in t (first axis slowest), and every field
/// in a computation shares this order.
struct OmegaGrid {
  int dim = 1;
  int points_per_axis = 1;

  std::size_t size() const;
  std::vector<double> point(std::size_t flat) const;

  bool operator==(const OmegaGrid&) const = default;
};

/// Truncated fiber index window {k in Z^d : |k|_inf <= N}, enumerated
/// lexicographically. Fibers live in C^n with n = (2N+1)^d.
struct FiberWindow {
  int radius = 0;

  int fiber_dim(int dim) const;
  std::vector<int> index(std::size_t flat, int dim) const;

  bool operator==(const FiberWindow&) const = default;
};

void validate_layout(const OmegaGrid& grid, const FiberWindow& window);

}  // namespace shiftframe
