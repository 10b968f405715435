#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace quasisol {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Chebyshev collocation matrix on the Gauss-Lobatto nodes cos(k*pi/n),
/// k = 0..n (ordered from +1 down to -1). Valid for n >= 1.
Matrix cheb_diff_matrix(int n);

/// Chebyshev-Gauss-Lobatto grid on s in [0, s0] with s = (s0/2)(1 + l).
///
/// Node 0 sits at s = s0 (l = 1) and node n at s = 0 (l = -1). The matrices
/// act in the canonical variable l; derivatives in s pick up the chain factor
/// 2/s0, which callers apply themselves.
class ChebGrid {
 public:
  ChebGrid(int n, double s0);

  [[nodiscard]] int n() const noexcept { return n_; }
  [[nodiscard]] int size() const noexcept { return n_ + 1; }
  [[nodiscard]] double s0() const noexcept { return s0_; }
  [[nodiscard]] const Vector& l_nodes() const noexcept { return l_; }
  [[nodiscard]] const Vector& s_nodes() const noexcept { return s_; }
  [[nodiscard]] const Matrix& diff1() const noexcept { return d1_; }
  /// diff1 squared, cached.
  [[nodiscard]] const Matrix& diff2() const noexcept { return d2_; }
  /// Clenshaw-Curtis weights for integrals over l in [-1, 1].
  [[nodiscard]] const Vector& weights() const noexcept { return w_; }
  /// d/ds = ds_factor() * d/dl.
  [[nodiscard]] double ds_factor() const noexcept { return 2.0 / s0_; }

 private:
  int n_;
  double s0_;
  Vector l_;
  Vector s_;
  Matrix d1_;
  Matrix d2_;
  Vector w_;
};

ChebGrid cheb_grid(int n, double s0);

/// Chebyshev coefficients a_0..a_n of the interpolant through samples taken
/// on the Gauss-Lobatto nodes, computed with a type-I discrete cosine transform.
Vector cheb_coeffs(std::span<const double> values);
inline Vector cheb_coeffs(const Vector& values) {
  return cheb_coeffs(std::span<const double>(values.data(), static_cast<std::size_t>(values.size())));
}

/// Largest |a_m| over the last 10% of coefficient indices (at least one).
double trailing_coefficient(const Vector& coeffs);

/// Evaluates sum_m a_m T_m(l) with the Clenshaw recurrence.
double cheb_eval(const Vector& coeffs, double l);

/// Clenshaw-Curtis integral over [-1, 1] of the interpolant through values.
double clenshaw_curtis(const Vector& values, const ChebGrid& grid);

/// Weights w on n+1 Gauss-Lobatto nodes with sum_k w_k f_k equal to the
/// integral over [-1, 1] of (1+l)^{(dim-2)/2} times the interpolant of f.
/// Cached per (n, dim); the reference stays valid for the program lifetime.
const Vector& radial_weights(int n, int dim);

/// Periodic grid x in lx * [-pi, pi) with nx points (nx >= 4, power of two).
///
/// Holds FFTW plans created at construction; transforms are executed through
/// the new-array interface, so a const grid may be used from several threads.
class Fourier1DGrid {
 public:
  Fourier1DGrid(int nx, double lx);
  ~Fourier1DGrid();
  Fourier1DGrid(const Fourier1DGrid&) = delete;
  Fourier1DGrid& operator=(const Fourier1DGrid&) = delete;
  Fourier1DGrid(Fourier1DGrid&&) noexcept;
  Fourier1DGrid& operator=(Fourier1DGrid&&) noexcept;

  [[nodiscard]] int nx() const noexcept { return nx_; }
  [[nodiscard]] double lx() const noexcept { return lx_; }
  [[nodiscard]] double dx() const noexcept { return dx_; }
  [[nodiscard]] const std::vector<double>& x_nodes() const noexcept { return x_; }
  [[nodiscard]] const std::vector<double>& wavenumbers() const noexcept { return k_; }

  /// Unnormalised forward DFT.
  void forward(const Complex* in, Complex* out) const;
  /// Unnormalised inverse DFT (caller divides by nx).
  void backward(const Complex* in, Complex* out) const;

 private:
  struct Plans;
  int nx_;
  double lx_;
  double dx_;
  std::vector<double> x_;
  std::vector<double> k_;
  std::unique_ptr<Plans> plans_;
};

/// order-th derivative (1 or 2) by multiplication with (i k)^order in
/// frequency space. For order 1 the Nyquist mode is zeroed.
ComplexVector fourier_diff(std::span<const Complex> field, const Fourier1DGrid& grid, int order);

/// Largest |DFT coefficient| over the top 10% of |k|, divided by the
/// largest coefficient overall.
double fourier_tail_ratio(std::span<const Complex> field, const Fourier1DGrid& grid);

}  // namespace quasisol
