#include "riesz/grid_convolution.hpp"

#include <fftw3.h>

#include <complex>

#include "riesz/errors.hpp"

namespace riesz {

struct GridConvolver::Impl {
  GridSpec grid;
  std::vector<int> padded;
  std::size_t real_size = 0;
  std::size_t complex_size = 0;
  std::vector<std::complex<double>> kernel_hat;
  double* rbuf = nullptr;
  fftw_complex* cbuf = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Impl() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    if (rbuf) fftw_free(rbuf);
    if (cbuf) fftw_free(cbuf);
  }
};

GridConvolver::GridConvolver(const GridSpec& grid, const RieszKernel& k)
    : impl_(std::make_unique<Impl>()) {
  if (grid.d != 1 && grid.d != 2) throw DomainError("GridConvolver: grids must be 1D or 2D");
  if (k.d != grid.d) throw DomainError("GridConvolver: kernel and grid dimension differ");
  Impl& m = *impl_;
  m.grid = grid;
  m.padded.resize(grid.d);
  m.real_size = 1;
  for (int a = 0; a < grid.d; ++a) {
    m.padded[a] = 2 * grid.shape[a];
    m.real_size *= m.padded[a];
  }
  const int last = m.padded[grid.d - 1];
  m.complex_size = m.real_size / last * (last / 2 + 1);
  m.rbuf = fftw_alloc_real(m.real_size);
  m.cbuf = fftw_alloc_complex(m.complex_size);
  if (grid.d == 1) {
    m.forward = fftw_plan_dft_r2c_1d(m.padded[0], m.rbuf, m.cbuf, FFTW_ESTIMATE);
    m.backward = fftw_plan_dft_c2r_1d(m.padded[0], m.cbuf, m.rbuf, FFTW_ESTIMATE);
  } else {
    m.forward = fftw_plan_dft_r2c_2d(m.padded[0], m.padded[1], m.rbuf, m.cbuf, FFTW_ESTIMATE);
    m.backward = fftw_plan_dft_c2r_2d(m.padded[0], m.padded[1], m.cbuf, m.rbuf, FFTW_ESTIMATE);
  }

  // Kernel table on wrapped offsets.
  const double h = grid.spacing;
  double off[2] = {0.0, 0.0};
  if (grid.d == 1) {
    const int M = m.padded[0];
    for (int i = 0; i < M; ++i) {
      const int o = i <= M / 2 ? i : i - M;
      off[0] = o * h;
      m.rbuf[i] = cell_integral(k, std::span<const double>(off, 1), h);
    }
  } else {
    const int M0 = m.padded[0], M1 = m.padded[1];
    for (int i = 0; i < M0; ++i) {
      const int o0 = i <= M0 / 2 ? i : i - M0;
      for (int j = 0; j < M1; ++j) {
        const int o1 = j <= M1 / 2 ? j : j - M1;
        off[0] = o0 * h;
        off[1] = o1 * h;
        m.rbuf[static_cast<std::size_t>(i) * M1 + j] =
            cell_integral(k, std::span<const double>(off, 2), h);
      }
    }
  }
  fftw_execute(m.forward);
  m.kernel_hat.resize(m.complex_size);
  for (std::size_t i = 0; i < m.complex_size; ++i) {
    m.kernel_hat[i] = {m.cbuf[i][0], m.cbuf[i][1]};
  }
}

GridConvolver::~GridConvolver() = default;

const GridSpec& GridConvolver::grid() const noexcept { return impl_->grid; }

std::vector<double> GridConvolver::apply(std::span<const double> values) const {
  Impl& m = *impl_;
  if (values.size() != m.grid.size()) throw DomainError("GridConvolver: value count mismatch");
  std::fill(m.rbuf, m.rbuf + m.real_size, 0.0);
  if (m.grid.d == 1) {
    std::copy(values.begin(), values.end(), m.rbuf);
  } else {
    const int n0 = m.grid.shape[0], n1 = m.grid.shape[1], M1 = m.padded[1];
    for (int i = 0; i < n0; ++i) {
      for (int j = 0; j < n1; ++j) {
        m.rbuf[static_cast<std::size_t>(i) * M1 + j] = values[static_cast<std::size_t>(i) * n1 + j];
      }
    }
  }
  fftw_execute(m.forward);
  for (std::size_t i = 0; i < m.complex_size; ++i) {
    const std::complex<double> z = std::complex<double>(m.cbuf[i][0], m.cbuf[i][1]) * m.kernel_hat[i];
    m.cbuf[i][0] = z.real();
    m.cbuf[i][1] = z.imag();
  }
  fftw_execute(m.backward);
  const double scale = 1.0 / static_cast<double>(m.real_size);
  std::vector<double> out(values.size());
  if (m.grid.d == 1) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = m.rbuf[i] * scale;
  } else {
    const int n0 = m.grid.shape[0], n1 = m.grid.shape[1], M1 = m.padded[1];
    for (int i = 0; i < n0; ++i) {
      for (int j = 0; j < n1; ++j) {
        out[static_cast<std::size_t>(i) * n1 + j] = m.rbuf[static_cast<std::size_t>(i) * M1 + j] * scale;
      }
    }
  }
  return out;
}

}  // namespace riesz
