#pragma once

#include <memory>
#include <span>
#include <vector>

#include "riesz/density.hpp"
#include "riesz/kernels.hpp"

namespace riesz {

// Free-space convolution of a piecewise-constant grid function with g,
//   out_i = sum_j v_j * int_{cell_j} g(x_i - y) dy,
// via zero-padded FFTs. The cell integrals are exact, so the log
// singularity of the self cell is handled analytically.
class GridConvolver {
 public:
  GridConvolver(const GridSpec& grid, const RieszKernel& k);
  ~GridConvolver();
  GridConvolver(const GridConvolver&) = delete;
  GridConvolver& operator=(const GridConvolver&) = delete;

  std::vector<double> apply(std::span<const double> values) const;
  const GridSpec& grid() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace riesz
