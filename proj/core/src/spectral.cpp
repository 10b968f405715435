#include "quasisol/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "quasisol/errors.hpp"

namespace quasisol {

namespace {

// FFTW planning is not thread-safe; execution through the new-array
// interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Unnormalised DCT-I: Y_k = x_0 + (-1)^k x_n + 2 sum_{j=1}^{n-1} x_j cos(pi j k / n).
std::vector<double> dct1(std::span<const double> x) {
  const int size = static_cast<int>(x.size());
  std::vector<double> in(x.begin(), x.end());
  std::vector<double> out(x.size());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_r2r_1d(size, in.data(), out.data(), FFTW_REDFT00, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}


std::vector<double> cc_moments(int n) {
  std::vector<double> moments(n + 1, 0.0);
  for (int k = 0; k <= n; k += 2) moments[k] = 2.0 / (1.0 - static_cast<double>(k) * k);
  return moments;
}

// Interpolatory weights on the Gauss-Lobatto nodes from the moments of T_0..T_n.
Vector weights_from_moments(const std::vector<double>& moments) {
  const int n = static_cast<int>(moments.size()) - 1;
  const auto z = dct1(moments);
  Vector w(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double beta = (j == 0 || j == n) ? 1.0 : 2.0;
    w[j] = beta * z[j] / (2.0 * n);
  }
  return w;
}

// int_{-1}^{1} (1+l)^{(dim-2)/2} T_m(l) dl for m = 0..n, by a Clenshaw-Curtis
// rule that is exact on each polynomial integrand. Odd dim goes through
// 1 + l = 2u^2, which turns the half-integer power into u^{dim-1} T_{2m}(u).
std::vector<double> radial_moments(int n, int dim) {
  const double pi = std::numbers::pi;
  const bool odd = dim % 2 != 0;
  int order = odd ? 2 * n + dim : n + dim;
  order += order % 2;
  const Vector rule = weights_from_moments(cc_moments(order));
  std::vector<double> moments(n + 1, 0.0);
  const double power = 0.5 * (dim - 2);
  for (int j = 0; j <= order; ++j) {
    const double theta = pi * j / order;
    const double x = std::cos(theta);
    // odd: (1+l)^p dl = 2^p u^{dim-2} 4u du, and the even integrand halves [-1, 1] to [0, 1].
    const double weight = odd ? rule[j] * 2.0 * std::pow(2.0, power) * std::pow(x, dim - 1)
                              : rule[j] * std::pow(1.0 + x, power);
    if (weight == 0.0) continue;
    for (int m = 0; m <= n; ++m) moments[m] += weight * std::cos((odd ? 2.0 * m : m) * theta);
  }
  return moments;
}

}  // namespace

Matrix cheb_diff_matrix(int n) {
  require(n >= 1, ErrorCode::invalid_parameter, "Chebyshev degree must be >= 1");
  const int m = n + 1;
  const double pi = std::numbers::pi;
  Matrix d = Matrix::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    const double ci = (i == 0 || i == n) ? 2.0 : 1.0;
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      const double cj = (j == 0 || j == n) ? 2.0 : 1.0;
      // x_i - x_j = 2 sin((i+j) pi / 2n) sin((j-i) pi / 2n), free of cancellation.
      const double diff = 2.0 * std::sin((i + j) * pi / (2.0 * n)) * std::sin((j - i) * pi / (2.0 * n));
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = (ci / cj) * sign / diff;
    }
  }
  // Negative-sum trick for the diagonal.
  for (int i = 0; i < m; ++i) {
    double sum = 0.0;
    for (int j = 0; j < m; ++j)
      if (j != i) sum += d(i, j);
    d(i, i) = -sum;
  }
  return d;
}

ChebGrid::ChebGrid(int n, double s0) : n_(n), s0_(s0) {
  require(n >= 2, ErrorCode::invalid_parameter, "ChebGrid needs n >= 2");
  require(s0 > 0.0 && std::isfinite(s0), ErrorCode::invalid_parameter, "ChebGrid needs s0 > 0");
  const double pi = std::numbers::pi;
  l_.resize(n + 1);
  s_.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    // sin form keeps the nodes exactly antisymmetric.
    l_[k] = std::sin(pi * (n - 2.0 * k) / (2.0 * n));
    s_[k] = 0.5 * s0 * (1.0 + l_[k]);
  }
  l_[0] = 1.0;
  l_[n] = -1.0;
  s_[0] = s0;
  s_[n] = 0.0;
  d1_ = cheb_diff_matrix(n);
  d2_ = d1_ * d1_;

  // Clenshaw-Curtis weights; int_{-1}^{1} T_k = 2 / (1 - k^2) for even k, 0 for odd k.
  w_ = weights_from_moments(cc_moments(n));
}

ChebGrid cheb_grid(int n, double s0) { return ChebGrid(n, s0); }

Vector cheb_coeffs(std::span<const double> values) {
  const int size = static_cast<int>(values.size());
  require(size >= 2, ErrorCode::length_mismatch, "cheb_coeffs needs at least two samples");
  const int n = size - 1;
  const auto y = dct1(values);
  Vector a(size);
  for (int k = 0; k <= n; ++k) {
    const double gamma = (k == 0 || k == n) ? 0.5 : 1.0;
    a[k] = gamma * y[k] / n;
  }
  return a;
}

double trailing_coefficient(const Vector& coeffs) {
  const int size = static_cast<int>(coeffs.size());
  if (size == 0) return 0.0;
  const int count = std::max(1, size / 10);
  return coeffs.tail(count).cwiseAbs().maxCoeff();
}

double cheb_eval(const Vector& coeffs, double l) {
  double b1 = 0.0;
  double b2 = 0.0;
  for (Eigen::Index k = coeffs.size() - 1; k >= 1; --k) {
    const double b0 = coeffs[k] + 2.0 * l * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return coeffs.size() > 0 ? coeffs[0] + l * b1 - b2 : 0.0;
}

const Vector& radial_weights(int n, int dim) {
  require(n >= 2 && dim >= 1, ErrorCode::invalid_parameter, "radial_weights needs n >= 2 and dim >= 1");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, Vector> cache;
  std::lock_guard lock(mutex);
  auto [it, inserted] = cache.try_emplace({n, dim});
  if (inserted) it->second = weights_from_moments(radial_moments(n, dim));
  return it->second;
}

double clenshaw_curtis(const Vector& values, const ChebGrid& grid) {
  require(values.size() == grid.size(), ErrorCode::length_mismatch,
          "clenshaw_curtis: sample count does not match grid");
  return values.dot(grid.weights());
}

struct Fourier1DGrid::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

Fourier1DGrid::Fourier1DGrid(int nx, double lx) : nx_(nx), lx_(lx) {
  require(nx >= 4 && (nx & (nx - 1)) == 0, ErrorCode::invalid_parameter,
          "Fourier grid size must be a power of two >= 4");
  require(lx > 0.0 && std::isfinite(lx), ErrorCode::invalid_parameter, "Fourier grid needs lx > 0");
  const double pi = std::numbers::pi;
  dx_ = 2.0 * pi * lx / nx;
  x_.resize(nx);
  k_.resize(nx);
  for (int j = 0; j < nx; ++j) {
    x_[j] = -pi * lx + j * dx_;
    const int freq = (j < nx / 2) ? j : j - nx;
    k_[j] = freq / lx;
  }
  plans_ = std::make_unique<Plans>();
  std::vector<Complex> scratch_in(nx), scratch_out(nx);
  auto* in = reinterpret_cast<fftw_complex*>(scratch_in.data());
  auto* out = reinterpret_cast<fftw_complex*>(scratch_out.data());
  std::lock_guard lock(planner_mutex());
  plans_->forward = fftw_plan_dft_1d(nx, in, out, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans_->backward = fftw_plan_dft_1d(nx, in, out, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
}

Fourier1DGrid::~Fourier1DGrid() = default;
Fourier1DGrid::Fourier1DGrid(Fourier1DGrid&&) noexcept = default;
Fourier1DGrid& Fourier1DGrid::operator=(Fourier1DGrid&&) noexcept = default;

void Fourier1DGrid::forward(const Complex* in, Complex* out) const {
  fftw_execute_dft(plans_->forward, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void Fourier1DGrid::backward(const Complex* in, Complex* out) const {
  fftw_execute_dft(plans_->backward, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

ComplexVector fourier_diff(std::span<const Complex> field, const Fourier1DGrid& grid, int order) {
  require(order == 1 || order == 2, ErrorCode::invalid_parameter, "fourier_diff order must be 1 or 2");
  const int nx = grid.nx();
  require(static_cast<int>(field.size()) == nx, ErrorCode::length_mismatch,
          "fourier_diff: field length does not match grid");
  ComplexVector spec(nx), out(nx);
  grid.forward(field.data(), spec.data());
  const auto& k = grid.wavenumbers();
  const double inv_n = 1.0 / nx;
  if (order == 1) {
    for (int j = 0; j < nx; ++j) spec[j] *= Complex(0.0, k[j] * inv_n);
    spec[nx / 2] = 0.0;
  } else {
    for (int j = 0; j < nx; ++j) spec[j] *= -k[j] * k[j] * inv_n;
  }
  grid.backward(spec.data(), out.data());
  return out;
}

double fourier_tail_ratio(std::span<const Complex> field, const Fourier1DGrid& grid) {
  const int nx = grid.nx();
  require(static_cast<int>(field.size()) == nx, ErrorCode::length_mismatch,
          "fourier_tail_ratio: field length does not match grid");
  ComplexVector spec(nx);
  grid.forward(field.data(), spec.data());
  const int half = nx / 2;
  const int cutoff = half - std::max(1, half / 10);
  double peak = 0.0;
  double tail = 0.0;
  for (int j = 0; j < nx; ++j) {
    const int freq = std::abs((j < half) ? j : j - nx);
    const double mag = std::abs(spec[j]);
    peak = std::max(peak, mag);
    if (freq >= cutoff) tail = std::max(tail, mag);
  }
  return peak > 0.0 ? tail / peak : 0.0;
}

}  // namespace quasisol
