#pragma once

// Discrete function spaces for the boundary layer: a 2*pi-periodic Fourier
// representation in x and a uniform node grid on [0, y_max] in y.

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace gmhd {

using Complex = std::complex<double>;

/// Horizontal Fourier modes xi in {-nx/2, ..., nx/2-1}, vertical nodes
/// y_j = j * y_max / ny for j = 0..ny.
class Grid {
 public:
  Grid(int nx, int ny, double y_max, double dealias_fraction = 2.0 / 3.0);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nodes() const { return ny_ + 1; }
  double y_max() const { return y_max_; }
  double dy() const { return y_max_ / ny_; }
  double y(int j) const { return j * dy(); }
  double x(int n) const;
  double dealias_fraction() const { return dealias_fraction_; }

  /// Frequency carried by storage slot m (FFT ordering).
  int mode(int m) const { return m < nx_ / 2 ? m : m - nx_; }
  /// Storage slot of frequency xi; xi must lie in the mode range.
  int slot(int xi) const { return xi >= 0 ? xi : xi + nx_; }
  int max_abs_mode() const { return nx_ / 2; }
  /// Largest |xi| kept by the dealiasing mask.
  int retained_limit() const;
  bool retained(int m) const;
  bool is_nyquist(int m) const { return m == nx_ / 2; }

  std::size_t size() const { return static_cast<std::size_t>(nodes()) * nx_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int nx_;
  int ny_;
  double y_max_;
  double dealias_fraction_;
};

enum class Parity { generic, dirichlet0 };

/// Complex Fourier amplitudes per (node j, mode slot m), row-major in j.
/// Normalisation: coeff(xi) = (1/nx) sum_n f(x_n) e^{-i xi x_n}, so a
/// constant field 1 has coefficient 1 at xi = 0.
class SpectralField {
 public:
  explicit SpectralField(const Grid& grid, Parity parity = Parity::generic);

  const Grid& grid() const { return grid_; }
  Parity parity() const { return parity_; }
  void set_parity(Parity p) { parity_ = p; }

  Complex& operator()(int j, int m) { return coeffs_[index(j, m)]; }
  const Complex& operator()(int j, int m) const { return coeffs_[index(j, m)]; }
  Complex& at_mode(int j, int xi) { return (*this)(j, grid_.slot(xi)); }
  const Complex& at_mode(int j, int xi) const { return (*this)(j, grid_.slot(xi)); }

  std::span<Complex> row(int j) {
    return {coeffs_.data() + static_cast<std::size_t>(j) * grid_.nx(),
            static_cast<std::size_t>(grid_.nx())};
  }
  std::span<const Complex> row(int j) const {
    return {coeffs_.data() + static_cast<std::size_t>(j) * grid_.nx(),
            static_cast<std::size_t>(grid_.nx())};
  }
  std::span<Complex> data() { return coeffs_; }
  std::span<const Complex> data() const { return coeffs_; }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(Complex c);
  SpectralField& operator*=(double c);

  /// Adds c * o in place.
  SpectralField& axpy(Complex c, const SpectralField& o);

  double max_abs() const;
  bool all_finite() const;

 private:
  std::size_t index(int j, int m) const {
    return static_cast<std::size_t>(j) * grid_.nx() + m;
  }

  Grid grid_;
  Parity parity_;
  std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a);
SpectralField operator*(Complex c, SpectralField a);
SpectralField operator*(double c, SpectralField a);

/// Physical samples, row-major (node j, x-node n), nx * (ny+1) values.
using PhysicalSamples = std::vector<Complex>;

SpectralField to_spectral(const Grid& grid, std::span<const Complex> samples);
SpectralField to_spectral(const Grid& grid, std::span<const double> samples);
PhysicalSamples from_spectral(const SpectralField& f);

/// Samples f(x, y) on the grid and transforms.
SpectralField sample_field(const Grid& grid,
                           const std::function<Complex(double x, double y)>& fn,
                           Parity parity = Parity::generic);

/// Multiplies coefficient (j, xi) by symbol(xi).
SpectralField apply_symbol(const SpectralField& f,
                           const std::function<Complex(int xi)>& symbol);
/// Multiplies node j by profile(y_j).
SpectralField scale_by_profile(const SpectralField& f,
                               const std::function<double(double y)>& profile);

/// d/dx: multiplies by i*xi (Nyquist slot mapped to zero).
SpectralField d_x(const SpectralField& f);

/// Vertical derivative of order 1..4 by second-order finite differences,
/// centred in the interior and one-sided near the walls.
SpectralField d_y(const SpectralField& f, int order = 1);

/// g(y_j) = int_{y_j}^{y_max} f dz by the composite trapezoid rule.
SpectralField integrate_up(const SpectralField& f);

/// Trapezoid integral over [0, y_max] per mode, returned as a one-row
/// vector of nx coefficients.
std::vector<Complex> integrate_column(const SpectralField& f);

/// Zeroes the modes outside the 2/3 band.
void dealias(SpectralField& f);

/// Pointwise product in physical space followed by dealiasing.
SpectralField multiply(const SpectralField& f, const SpectralField& g);

/// Sum of pointwise products sum_i f_i g_i with a single dealiasing pass.
SpectralField multiply_sum(std::span<const SpectralField* const> lhs,
                           std::span<const SpectralField* const> rhs);

/// Complex L^2 inner product over the strip: 2*pi per Fourier mode,
/// trapezoid rule in y. Linear in f, antilinear in g.
Complex l2_inner(const SpectralField& f, const SpectralField& g);

/// Extracts the x-independent (xi = 0) profile at each node.
std::vector<Complex> mean_profile(const SpectralField& f);

/// Finite-difference weights for derivative `order` at point x0 over the
/// given stencil abscissae (Fornberg's recursion).
std::vector<double> fd_weights(double x0, std::span<const double> nodes, int order);

}  // namespace gmhd
