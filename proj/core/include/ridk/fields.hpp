#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ridk/rng.hpp"

namespace ridk {

using Complex = std::complex<double>;

/// Uniform grid on [0, 2pi)^d with M points per axis (M a power of two, M >= 4).
/// Flat indices are row-major with axis 0 slowest; spectral arrays use the
/// same layout with the usual FFT ordering of wavenumbers per axis.
class TorusGrid {
 public:
  TorusGrid(int dim, int points);

  int dim() const noexcept { return dim_; }
  int points() const noexcept { return points_; }
  std::size_t size() const noexcept { return size_; }
  double spacing() const noexcept;

  /// Per-axis grid index n in [0, M) -> signed wavenumber in [-M/2, M/2).
  int wavenumber(int n) const noexcept { return n < points_ / 2 ? n : n - points_; }
  /// Signed wavenumber -> per-axis grid index.
  int axis_index(int k) const noexcept { return ((k % points_) + points_) % points_; }

  void unflatten(std::size_t index, std::span<int> out) const;
  std::size_t flatten(std::span<const int> axis_indices) const;
  /// Flat index of the mode with the given signed wavenumber vector.
  std::size_t mode_index(std::span<const int> wavenumbers) const;
  /// Flat index of the mode -k.
  std::size_t conjugate_index(std::size_t index) const;
  /// Signed wavenumber vector of a flat index.
  void mode(std::size_t index, std::span<int> out) const;
  /// |k|^2 of a flat index.
  double mode_norm2(std::size_t index) const;
  /// True if any component of the mode sits on the Nyquist index M/2.
  bool is_nyquist(std::size_t index) const;
  /// Physical coordinates of a grid point.
  void coordinates(std::size_t index, std::span<double> out) const;

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

 private:
  int dim_;
  int points_;
  std::size_t size_;
};

class ScalarField {
 public:
  explicit ScalarField(TorusGrid grid);
  ScalarField(TorusGrid grid, std::vector<double> values);

  /// Samples f(x) at every grid point; f receives a span of d coordinates.
  template <class F>
  static ScalarField from_function(const TorusGrid& grid, F&& f) {
    ScalarField field(grid);
    std::vector<double> x(static_cast<std::size_t>(grid.dim()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      grid.coordinates(i, x);
      field.values_[i] = f(std::span<const double>(x));
    }
    return field;
  }

  const TorusGrid& grid() const noexcept { return grid_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double factor) noexcept;

 private:
  TorusGrid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double factor, ScalarField a);

/// Fourier coefficients u_k = (2pi)^{-d} int u e^{-ik.x} dx of a band-limited field.
class SpectralField {
 public:
  explicit SpectralField(TorusGrid grid);
  SpectralField(TorusGrid grid, std::vector<Complex> coefficients);

  const TorusGrid& grid() const noexcept { return grid_; }
  std::span<Complex> coefficients() noexcept { return coeffs_; }
  std::span<const Complex> coefficients() const noexcept { return coeffs_; }
  Complex& operator[](std::size_t i) noexcept { return coeffs_[i]; }
  Complex operator[](std::size_t i) const noexcept { return coeffs_[i]; }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(Complex factor) noexcept;

 private:
  TorusGrid grid_;
  std::vector<Complex> coeffs_;
};

SpectralField transform(const ScalarField& field);
ScalarField inverse_transform(const SpectralField& coefficients);

/// <u, v>_{H^s} = sum_k u_k conj(v_k) (1+|k|^2)^s.
Complex hs_inner(const SpectralField& u, const SpectralField& v, double s);
double hs_norm(const SpectralField& u, double s);
double hs_norm(const ScalarField& u, double s);

/// Spectral derivative along `axis` (Nyquist mode dropped).
SpectralField partial(const SpectralField& u, int axis);
std::vector<SpectralField> gradient(const SpectralField& u);
SpectralField divergence(std::span<const SpectralField> v);

/// Zero every mode with some |k_l| > M/3.
void dealias_two_thirds(SpectralField& u);

/// Zero-pad (or truncate) the spectrum onto another grid of the same dimension.
SpectralField resample(const SpectralField& u, const TorusGrid& target);

/// Periodic convolution int f(x-y) g(y) dy; spectrally (2pi)^d f_k g_k.
SpectralField convolve(const SpectralField& f, const SpectralField& g);
ScalarField convolve(const ScalarField& f, const ScalarField& g);

double c0_norm(const ScalarField& u) noexcept;

/// Density / momentum pair on a grid, in physical space.
struct PairState {
  ScalarField rho;
  std::vector<ScalarField> momentum;
  double time = 0.0;

  explicit PairState(const TorusGrid& grid);
  PairState(ScalarField rho, std::vector<ScalarField> momentum, double time = 0.0);
  const TorusGrid& grid() const noexcept { return rho.grid(); }
};

/// The same pair in spectral form; this is the solver's working state.
struct SpectralPair {
  SpectralField rho;
  std::vector<SpectralField> momentum;
  double time = 0.0;

  explicit SpectralPair(const TorusGrid& grid);
  SpectralPair(SpectralField rho, std::vector<SpectralField> momentum, double time = 0.0);
  const TorusGrid& grid() const noexcept { return rho.grid(); }

  SpectralPair& operator+=(const SpectralPair& other);
  SpectralPair& operator-=(const SpectralPair& other);
  SpectralPair& operator*=(double factor) noexcept;
};

SpectralPair transform(const PairState& state);
PairState inverse_transform(const SpectralPair& state);

/// (||rho||^2_{H^s} + sum_l ||j_l||^2_{H^s})^{1/2}
double pair_norm(const SpectralPair& state, double s);
double pair_norm(const PairState& state, double s);

/// (c ||rho||^2_{H^s} + sum_l ||j_l||^2_{H^s})^{1/2}, c > 0.
double energy_norm(const SpectralPair& state, double c, double s);
double energy_norm(const PairState& state, double c, double s);

/// Random real field with modes 0 < |k|_inf <= band, complex Gaussian
/// coefficients of variance (1+|k|^2)^{-decay}, zero mean mode.  In one
/// dimension modes are drawn in order of increasing |k|, so for a fixed seed
/// the field at a larger band extends the field at a smaller one.
ScalarField random_bandlimited_field(const TorusGrid& grid, int band, double decay, Rng& rng);

/// ||u v||_{H^s} / (||u||_{H^s} ||v||_{H^s}); the product is formed on a
/// doubled grid so it is exact for inputs without a Nyquist component.
double multiplication_probe(const ScalarField& u, const ScalarField& v, double s);

struct ProbeResult {
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  int samples = 0;
};

/// Max over random band-limited samples of c0_norm / hs_norm.  Requires s > d/2.
ProbeResult embedding_probe(const TorusGrid& grid, double s, int samples, int band,
                            double decay, std::uint64_t seed);

/// Max over random pairs of multiplication_probe.  Requires s > d/2.
ProbeResult multiplication_ceiling(const TorusGrid& grid, double s, int pairs, int band,
                                   double decay, std::uint64_t seed);

/// Flat binary snapshot: little-endian uint32 d, uint32 M, uint32 count,
/// then count * M^d float64 values, each field row-major.
void write_fields_binary(std::ostream& out, std::span<const ScalarField> fields);
std::vector<ScalarField> read_fields_binary(std::istream& in);

/// CSV with columns x1..xd, f0..f{count-1}; header row included.
void write_fields_csv(std::ostream& out, std::span<const ScalarField> fields);

}  // namespace ridk
