#include "gmhd/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "gmhd/errors.hpp"

namespace gmhd {

namespace {

// Batched 1D transforms along x, one per y-row. Plans are created once per
// (nx, rows, direction) and executed with the new-array interface, which
// FFTW documents as thread-safe.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int nx, int rows, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(nx, rows, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<Complex> scratch(static_cast<std::size_t>(nx) * rows);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    int n[] = {nx};
    fftw_plan plan = fftw_plan_many_dft(1, n, rows, buf, nullptr, 1, nx, buf, nullptr, 1, nx,
                                        sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

void transform_rows(std::vector<Complex>& data, int nx, int rows, int sign) {
  fftw_plan plan = PlanCache::instance().get(nx, rows, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

PhysicalSamples to_physical(const SpectralField& f) {
  PhysicalSamples out(f.data().begin(), f.data().end());
  transform_rows(out, f.grid().nx(), f.grid().nodes(), FFTW_BACKWARD);
  return out;
}

SpectralField from_physical(const Grid& grid, PhysicalSamples samples) {
  transform_rows(samples, grid.nx(), grid.nodes(), FFTW_FORWARD);
  SpectralField out(grid);
  const double scale = 1.0 / grid.nx();
  auto dst = out.data();
  for (std::size_t i = 0; i < samples.size(); ++i) dst[i] = samples[i] * scale;
  return out;
}

void require_same_grid(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid() == b.grid())) throw DimensionError("fields live on different grids");
}

}  // namespace

Grid::Grid(int nx, int ny, double y_max, double dealias_fraction)
    : nx_(nx), ny_(ny), y_max_(y_max), dealias_fraction_(dealias_fraction) {
  if (nx < 8 || nx % 2 != 0) throw DimensionError("nx must be even and >= 8");
  if (ny < 16) throw DimensionError("ny must be >= 16");
  if (!(y_max > 0.0) || !std::isfinite(y_max)) throw DimensionError("y_max must be positive");
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
    throw DimensionError("dealias_fraction must lie in (0, 1]");
}

double Grid::x(int n) const { return 2.0 * std::numbers::pi * n / nx_; }

int Grid::retained_limit() const {
  // Small tolerance so that e.g. 2/3 * 48 = 32 is not lost to roundoff.
  return static_cast<int>(std::floor(dealias_fraction_ * (nx_ / 2) + 1e-9));
}

bool Grid::retained(int m) const {
  if (is_nyquist(m) && dealias_fraction_ < 1.0) return false;
  return std::abs(mode(m)) <= retained_limit();
}

SpectralField::SpectralField(const Grid& grid, Parity parity)
    : grid_(grid), parity_(parity), coeffs_(grid.size(), Complex{0.0, 0.0}) {}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(Complex c) {
  for (auto& v : coeffs_) v *= c;
  return *this;
}

SpectralField& SpectralField::operator*=(double c) {
  for (auto& v : coeffs_) v *= c;
  return *this;
}

SpectralField& SpectralField::axpy(Complex c, const SpectralField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += c * o.coeffs_[i];
  return *this;
}

double SpectralField::max_abs() const {
  double m = 0.0;
  for (const auto& v : coeffs_) m = std::max(m, std::abs(v));
  return m;
}

bool SpectralField::all_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator-(SpectralField a) { return a *= -1.0; }
SpectralField operator*(Complex c, SpectralField a) { return a *= c; }
SpectralField operator*(double c, SpectralField a) { return a *= c; }

SpectralField to_spectral(const Grid& grid, std::span<const Complex> samples) {
  if (samples.size() != grid.size())
    throw DimensionError("sample array does not match grid shape nx x (ny+1)");
  return from_physical(grid, PhysicalSamples(samples.begin(), samples.end()));
}

SpectralField to_spectral(const Grid& grid, std::span<const double> samples) {
  if (samples.size() != grid.size())
    throw DimensionError("sample array does not match grid shape nx x (ny+1)");
  return from_physical(grid, PhysicalSamples(samples.begin(), samples.end()));
}

PhysicalSamples from_spectral(const SpectralField& f) { return to_physical(f); }

SpectralField sample_field(const Grid& grid,
                           const std::function<Complex(double, double)>& fn, Parity parity) {
  PhysicalSamples s(grid.size());
  for (int j = 0; j < grid.nodes(); ++j)
    for (int n = 0; n < grid.nx(); ++n)
      s[static_cast<std::size_t>(j) * grid.nx() + n] = fn(grid.x(n), grid.y(j));
  auto out = from_physical(grid, std::move(s));
  out.set_parity(parity);
  return out;
}

SpectralField apply_symbol(const SpectralField& f,
                           const std::function<Complex(int)>& symbol) {
  const Grid& g = f.grid();
  std::vector<Complex> sym(g.nx());
  for (int m = 0; m < g.nx(); ++m) sym[m] = symbol(g.mode(m));
  SpectralField out = f;
  for (int j = 0; j < g.nodes(); ++j) {
    auto r = out.row(j);
    for (int m = 0; m < g.nx(); ++m) r[m] *= sym[m];
  }
  return out;
}

SpectralField scale_by_profile(const SpectralField& f,
                               const std::function<double(double)>& profile) {
  SpectralField out = f;
  for (int j = 0; j < f.grid().nodes(); ++j) {
    const double w = profile(f.grid().y(j));
    for (auto& v : out.row(j)) v *= w;
  }
  return out;
}

SpectralField d_x(const SpectralField& f) {
  const Grid& g = f.grid();
  SpectralField out = apply_symbol(f, [&g](int xi) {
    return xi == -g.nx() / 2 ? Complex{0.0, 0.0} : Complex{0.0, static_cast<double>(xi)};
  });
  out.set_parity(f.parity());
  return out;
}

std::vector<double> fd_weights(double x0, std::span<const double> nodes, int order) {
  // Fornberg (1988): weights c[k] so that sum_k c[k] f(nodes[k]) ~ f^(order)(x0).
  const int n = static_cast<int>(nodes.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int k = 0; k < n; ++k) w[k] = c[k][order];
  return w;
}

SpectralField d_y(const SpectralField& f, int order) {
  const Grid& g = f.grid();
  if (order < 1 || order > 4) throw ParameterError("d_y order must be 1..4");
  if (g.ny() < 2 * order) throw DimensionError("d_y needs ny >= 2*order");
  const int ny = g.ny();
  const int half = (order + 1) / 2;
  const int one_sided = order + 2;
  const double scale = 1.0 / std::pow(g.dy(), order);

  SpectralField out(g, Parity::generic);
  for (int j = 0; j <= ny; ++j) {
    int start = j - half;
    int count = 2 * half + 1;
    if (j < half) {
      start = 0;
      count = one_sided;
    } else if (j > ny - half) {
      start = ny - one_sided + 1;
      count = one_sided;
    }
    std::vector<double> nodes(count);
    for (int k = 0; k < count; ++k) nodes[k] = start + k;
    const auto w = fd_weights(static_cast<double>(j), nodes, order);
    auto dst = out.row(j);
    for (int k = 0; k < count; ++k) {
      const double wk = w[k] * scale;
      if (wk == 0.0) continue;
      auto src = f.row(start + k);
      for (int m = 0; m < g.nx(); ++m) dst[m] += wk * src[m];
    }
  }
  return out;
}

SpectralField integrate_up(const SpectralField& f) {
  const Grid& g = f.grid();
  SpectralField out(g, Parity::generic);
  const double half_h = 0.5 * g.dy();
  for (int j = g.ny() - 1; j >= 0; --j) {
    auto dst = out.row(j);
    auto above = out.row(j + 1);
    auto a = f.row(j);
    auto b = f.row(j + 1);
    for (int m = 0; m < g.nx(); ++m) dst[m] = above[m] + half_h * (a[m] + b[m]);
  }
  return out;
}

std::vector<Complex> integrate_column(const SpectralField& f) {
  const auto tail = integrate_up(f);
  auto r = tail.row(0);
  return {r.begin(), r.end()};
}

void dealias(SpectralField& f) {
  const Grid& g = f.grid();
  for (int m = 0; m < g.nx(); ++m) {
    if (g.retained(m)) continue;
    for (int j = 0; j < g.nodes(); ++j) f(j, m) = 0.0;
  }
}

SpectralField multiply(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f, g);
  auto a = to_physical(f);
  const auto b = to_physical(g);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  auto out = from_physical(f.grid(), std::move(a));
  dealias(out);
  return out;
}

SpectralField multiply_sum(std::span<const SpectralField* const> lhs,
                           std::span<const SpectralField* const> rhs) {
  if (lhs.size() != rhs.size() || lhs.empty())
    throw DimensionError("multiply_sum needs matching non-empty operand lists");
  const Grid& grid = lhs.front()->grid();
  PhysicalSamples acc(grid.size(), Complex{0.0, 0.0});
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    require_same_grid(*lhs[i], *rhs[i]);
    require_same_grid(*lhs[i], *lhs.front());
    const auto a = to_physical(*lhs[i]);
    const auto b = to_physical(*rhs[i]);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += a[k] * b[k];
  }
  auto out = from_physical(grid, std::move(acc));
  dealias(out);
  return out;
}

Complex l2_inner(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f, g);
  const Grid& grid = f.grid();
  Complex total = 0.0;
  for (int j = 0; j < grid.nodes(); ++j) {
    const double w = (j == 0 || j == grid.ny()) ? 0.5 : 1.0;
    auto a = f.row(j);
    auto b = g.row(j);
    Complex row = 0.0;
    for (int m = 0; m < grid.nx(); ++m) row += a[m] * std::conj(b[m]);
    total += w * row;
  }
  return 2.0 * std::numbers::pi * grid.dy() * total;
}

std::vector<Complex> mean_profile(const SpectralField& f) {
  std::vector<Complex> out(f.grid().nodes());
  for (int j = 0; j < f.grid().nodes(); ++j) out[j] = f(j, 0);
  return out;
}

}  // namespace gmhd
