#include "nlocch/transforms.hpp"

#include <algorithm>
#include <mutex>

#include <fftw3.h>

namespace nlocch {

namespace detail {

void FftwPlanDeleter::operator()(void* plan) const {
  if (plan) fftw_destroy_plan(static_cast<fftw_plan>(plan));
}

void FftwBufferDeleter::operator()(void* p) const { fftw_free(p); }

namespace {

// The FFTW planner is not re-entrant; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

template <class T>
FftwBuffer<T> allocate(Eigen::Index n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * static_cast<std::size_t>(n)));
  if (!p) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

}  // namespace
}  // namespace detail

CosineTransform::CosineTransform(const Grid& grid)
    : grid_(grid), n_(grid.size()), buffer_(detail::allocate<double>(grid.size())) {
  const int d = grid.dim();
  int dims[Grid::kMaxDim];
  fftw_r2r_kind fwd[Grid::kMaxDim];
  fftw_r2r_kind inv[Grid::kMaxDim];
  scale_ = 1.0;
  for (int i = 0; i < d; ++i) {
    dims[i] = grid.points(i);
    fwd[i] = FFTW_REDFT10;
    inv[i] = FFTW_REDFT01;
    scale_ /= 2.0 * grid.points(i);
  }
  std::lock_guard lock(detail::planner_mutex());
  forward_plan_.reset(fftw_plan_r2r(d, dims, buffer_.get(), buffer_.get(), fwd, FFTW_ESTIMATE));
  inverse_plan_.reset(fftw_plan_r2r(d, dims, buffer_.get(), buffer_.get(), inv, FFTW_ESTIMATE));
  if (!forward_plan_ || !inverse_plan_) throw std::runtime_error("cosine transform: FFTW planning failed");
}

void CosineTransform::forward(const Eigen::VectorXd& in, Eigen::VectorXd& out) {
  Eigen::Map<Eigen::VectorXd>(buffer_.get(), n_) = in;
  fftw_execute(static_cast<fftw_plan>(forward_plan_.get()));
  out = Eigen::Map<const Eigen::VectorXd>(buffer_.get(), n_);
}

void CosineTransform::inverse(const Eigen::VectorXd& in, Eigen::VectorXd& out) {
  Eigen::Map<Eigen::VectorXd>(buffer_.get(), n_) = in;
  fftw_execute(static_cast<fftw_plan>(inverse_plan_.get()));
  out = scale_ * Eigen::Map<const Eigen::VectorXd>(buffer_.get(), n_);
}

std::array<int, Grid::kMaxDim> PaddedConvolution::padded_points(const Grid& grid) {
  std::array<int, Grid::kMaxDim> p{1, 1, 1};
  for (int i = 0; i < grid.dim(); ++i) p[static_cast<std::size_t>(i)] = 2 * grid.points(i);
  return p;
}

Eigen::Index PaddedConvolution::padded_size(const Grid& grid) {
  Eigen::Index n = 1;
  for (int i = 0; i < grid.dim(); ++i) n *= 2 * grid.points(i);
  return n;
}

PaddedConvolution::PaddedConvolution(const Grid& grid, const Eigen::VectorXd& padded_kernel)
    : grid_(grid), padded_(padded_points(grid)) {
  const int d = grid.dim();
  real_size_ = padded_size(grid);
  if (padded_kernel.size() != real_size_) {
    throw std::invalid_argument("padded convolution: kernel has wrong padded size");
  }
  complex_size_ = real_size_ / padded_[static_cast<std::size_t>(d - 1)] * (padded_[static_cast<std::size_t>(d - 1)] / 2 + 1);
  real_ = detail::allocate<double>(real_size_);
  spectrum_ = detail::allocate<std::complex<double>>(complex_size_);

  int dims[Grid::kMaxDim];
  for (int i = 0; i < d; ++i) dims[i] = padded_[static_cast<std::size_t>(i)];
  {
    std::lock_guard lock(detail::planner_mutex());
    auto* cplx = reinterpret_cast<fftw_complex*>(spectrum_.get());
    r2c_.reset(fftw_plan_dft_r2c(d, dims, real_.get(), cplx, FFTW_ESTIMATE));
    c2r_.reset(fftw_plan_dft_c2r(d, dims, cplx, real_.get(), FFTW_ESTIMATE));
  }
  if (!r2c_ || !c2r_) throw std::runtime_error("padded convolution: FFTW planning failed");

  window_.resize(grid.size());
  for (Eigen::Index idx = 0; idx < grid.size(); ++idx) {
    const auto m = grid.multi_index(idx);
    Eigen::Index c = 0;
    for (int i = 0; i < d; ++i) c = c * padded_[static_cast<std::size_t>(i)] + m[static_cast<std::size_t>(i)];
    window_[idx] = c;
  }

  Eigen::Map<Eigen::VectorXd>(real_.get(), real_size_) = padded_kernel;
  fftw_execute(static_cast<fftw_plan>(r2c_.get()));
  const double scale = 1.0 / static_cast<double>(real_size_);
  kernel_hat_.assign(spectrum_.get(), spectrum_.get() + complex_size_);
  for (auto& c : kernel_hat_) c *= scale;
}

void PaddedConvolution::apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) {
  std::fill(real_.get(), real_.get() + real_size_, 0.0);
  for (Eigen::Index i = 0; i < in.size(); ++i) real_[static_cast<std::size_t>(window_[i])] = in[i];
  fftw_execute(static_cast<fftw_plan>(r2c_.get()));
  for (Eigen::Index k = 0; k < complex_size_; ++k) {
    spectrum_[static_cast<std::size_t>(k)] *= kernel_hat_[static_cast<std::size_t>(k)];
  }
  fftw_execute(static_cast<fftw_plan>(c2r_.get()));
  out.resize(grid_.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = real_[static_cast<std::size_t>(window_[i])];
}

Eigen::VectorXd PaddedConvolution::cosine_symbol() const {
  const int d = grid_.dim();
  const int last = padded_[static_cast<std::size_t>(d - 1)] / 2 + 1;
  Eigen::VectorXd symbol(grid_.size());
  const double unscale = static_cast<double>(real_size_);
  for (Eigen::Index idx = 0; idx < grid_.size(); ++idx) {
    const auto k = grid_.multi_index(idx);
    Eigen::Index c = 0;
    for (int i = 0; i < d; ++i) {
      const Eigen::Index extent = (i == d - 1) ? last : padded_[static_cast<std::size_t>(i)];
      c = c * extent + k[static_cast<std::size_t>(i)];
    }
    symbol[idx] = kernel_hat_[static_cast<std::size_t>(c)].real() * unscale;
  }
  return symbol;
}

}  // namespace nlocch
