#include "ridk/fields.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "detail/fft.hpp"
#include "ridk/errors.hpp"

namespace ridk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_same_grid(const TorusGrid& a, const TorusGrid& b, const char* what) {
  if (!(a == b)) throw SizeMismatchError(std::string(what) + ": grids differ");
}

}  // namespace

// ---------------------------------------------------------------- TorusGrid

TorusGrid::TorusGrid(int dim, int points) : dim_(dim), points_(points), size_(1) {
  if (dim < 1) throw DomainError("grid dimension must be at least 1");
  if (points < 4 || !std::has_single_bit(static_cast<unsigned>(points))) {
    throw DomainError("points per axis must be a power of two and at least 4");
  }
  for (int l = 0; l < dim; ++l) size_ *= static_cast<std::size_t>(points);
}

double TorusGrid::spacing() const noexcept { return kTwoPi / points_; }

void TorusGrid::unflatten(std::size_t index, std::span<int> out) const {
  const auto m = static_cast<std::size_t>(points_);
  for (int l = dim_ - 1; l >= 0; --l) {
    out[static_cast<std::size_t>(l)] = static_cast<int>(index % m);
    index /= m;
  }
}

std::size_t TorusGrid::flatten(std::span<const int> axis_indices) const {
  std::size_t index = 0;
  for (int l = 0; l < dim_; ++l) {
    index = index * static_cast<std::size_t>(points_) +
            static_cast<std::size_t>(axis_indices[static_cast<std::size_t>(l)]);
  }
  return index;
}

std::size_t TorusGrid::mode_index(std::span<const int> wavenumbers) const {
  std::size_t index = 0;
  for (int l = 0; l < dim_; ++l) {
    index = index * static_cast<std::size_t>(points_) +
            static_cast<std::size_t>(axis_index(wavenumbers[static_cast<std::size_t>(l)]));
  }
  return index;
}

std::size_t TorusGrid::conjugate_index(std::size_t index) const {
  const auto m = static_cast<std::size_t>(points_);
  std::size_t result = 0;
  std::size_t stride = 1;
  for (int l = dim_ - 1; l >= 0; --l) {
    const std::size_t n = index % m;
    index /= m;
    result += ((m - n) % m) * stride;
    stride *= m;
  }
  return result;
}

void TorusGrid::mode(std::size_t index, std::span<int> out) const {
  unflatten(index, out);
  for (int l = 0; l < dim_; ++l) {
    auto& v = out[static_cast<std::size_t>(l)];
    v = wavenumber(v);
  }
}

double TorusGrid::mode_norm2(std::size_t index) const {
  const auto m = static_cast<std::size_t>(points_);
  double norm2 = 0.0;
  for (int l = 0; l < dim_; ++l) {
    const int k = wavenumber(static_cast<int>(index % m));
    index /= m;
    norm2 += static_cast<double>(k) * k;
  }
  return norm2;
}

bool TorusGrid::is_nyquist(std::size_t index) const {
  const auto m = static_cast<std::size_t>(points_);
  for (int l = 0; l < dim_; ++l) {
    if (index % m == m / 2) return true;
    index /= m;
  }
  return false;
}

void TorusGrid::coordinates(std::size_t index, std::span<double> out) const {
  const auto m = static_cast<std::size_t>(points_);
  const double h = spacing();
  for (int l = dim_ - 1; l >= 0; --l) {
    out[static_cast<std::size_t>(l)] = h * static_cast<double>(index % m);
    index /= m;
  }
}

// ------------------------------------------------------------- ScalarField

ScalarField::ScalarField(TorusGrid grid) : grid_(grid), values_(grid.size(), 0.0) {}

ScalarField::ScalarField(TorusGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw SizeMismatchError("field size does not match grid");
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "ScalarField +=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "ScalarField -=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double factor) noexcept {
  for (auto& v : values_) v *= factor;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double factor, ScalarField a) { return a *= factor; }

// ----------------------------------------------------------- SpectralField

SpectralField::SpectralField(TorusGrid grid) : grid_(grid), coeffs_(grid.size()) {}

SpectralField::SpectralField(TorusGrid grid, std::vector<Complex> coefficients)
    : grid_(grid), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != grid_.size()) throw SizeMismatchError("spectrum size does not match grid");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_, "SpectralField +=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_, "SpectralField -=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(Complex factor) noexcept {
  for (auto& c : coeffs_) c *= factor;
  return *this;
}

// --------------------------------------------------------------- transforms

SpectralField transform(const ScalarField& field) {
  const auto& grid = field.grid();
  std::vector<Complex> in(field.values().begin(), field.values().end());
  std::vector<Complex> out(grid.size());
  detail::fft_forward(grid, in.data(), out.data());
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& c : out) c *= scale;
  return SpectralField(grid, std::move(out));
}

ScalarField inverse_transform(const SpectralField& coefficients) {
  const auto& grid = coefficients.grid();
  std::vector<Complex> out(grid.size());
  detail::fft_backward(grid, coefficients.coefficients().data(), out.data());
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = out[i].real();
  return ScalarField(grid, std::move(values));
}

// -------------------------------------------------------------------- norms

Complex hs_inner(const SpectralField& u, const SpectralField& v, double s) {
  require_same_grid(u.grid(), v.grid(), "hs_inner");
  const auto& grid = u.grid();
  Complex sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = s == 0.0 ? 1.0 : std::pow(1.0 + grid.mode_norm2(i), s);
    sum += u[i] * std::conj(v[i]) * w;
  }
  return sum;
}

double hs_norm(const SpectralField& u, double s) {
  const auto& grid = u.grid();
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = std::norm(u[i]);
    if (a == 0.0) continue;
    sum += a * (s == 0.0 ? 1.0 : std::pow(1.0 + grid.mode_norm2(i), s));
  }
  return std::sqrt(sum);
}

double hs_norm(const ScalarField& u, double s) { return hs_norm(transform(u), s); }

double c0_norm(const ScalarField& u) noexcept {
  double m = 0.0;
  for (double v : u.values()) m = std::max(m, std::abs(v));
  return m;
}

// -------------------------------------------------------------- derivatives

SpectralField partial(const SpectralField& u, int axis) {
  const auto& grid = u.grid();
  if (axis < 0 || axis >= grid.dim()) throw DomainError("partial: axis out of range");
  SpectralField out(grid);
  const auto m = static_cast<std::size_t>(grid.points());
  std::size_t stride = 1;
  for (int l = grid.dim() - 1; l > axis; --l) stride *= m;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const int n = static_cast<int>((i / stride) % m);
    if (n == grid.points() / 2) continue;
    out[i] = Complex(0.0, grid.wavenumber(n)) * u[i];
  }
  return out;
}

std::vector<SpectralField> gradient(const SpectralField& u) {
  std::vector<SpectralField> g;
  g.reserve(static_cast<std::size_t>(u.grid().dim()));
  for (int l = 0; l < u.grid().dim(); ++l) g.push_back(partial(u, l));
  return g;
}

SpectralField divergence(std::span<const SpectralField> v) {
  if (v.empty()) throw SizeMismatchError("divergence of an empty vector field");
  const auto& grid = v.front().grid();
  if (static_cast<int>(v.size()) != grid.dim()) {
    throw SizeMismatchError("divergence: component count must equal dimension");
  }
  SpectralField out(grid);
  for (int l = 0; l < grid.dim(); ++l) out += partial(v[static_cast<std::size_t>(l)], l);
  return out;
}

void dealias_two_thirds(SpectralField& u) {
  const auto& grid = u.grid();
  const int cutoff = grid.points() / 3;
  std::vector<int> k(static_cast<std::size_t>(grid.dim()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.mode(i, k);
    for (int kl : k) {
      if (std::abs(kl) > cutoff) {
        u[i] = 0.0;
        break;
      }
    }
  }
}

SpectralField resample(const SpectralField& u, const TorusGrid& target) {
  const auto& source = u.grid();
  if (source.dim() != target.dim()) throw SizeMismatchError("resample: dimension differs");
  SpectralField out(target);
  const int limit = std::min(source.points(), target.points()) / 2;
  std::vector<int> k(static_cast<std::size_t>(source.dim()));
  for (std::size_t i = 0; i < source.size(); ++i) {
    source.mode(i, k);
    bool keep = true;
    for (int kl : k) keep = keep && std::abs(kl) < limit;
    if (keep) out[target.mode_index(k)] = u[i];
  }
  return out;
}

SpectralField convolve(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f.grid(), g.grid(), "convolve");
  const auto& grid = f.grid();
  const double factor = std::pow(kTwoPi, grid.dim());
  SpectralField out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = factor * f[i] * g[i];
  return out;
}

ScalarField convolve(const ScalarField& f, const ScalarField& g) {
  return inverse_transform(convolve(transform(f), transform(g)));
}

// ------------------------------------------------------------------- pairs

PairState::PairState(const TorusGrid& grid)
    : rho(grid), momentum(static_cast<std::size_t>(grid.dim()), ScalarField(grid)) {}

PairState::PairState(ScalarField rho_, std::vector<ScalarField> momentum_, double time_)
    : rho(std::move(rho_)), momentum(std::move(momentum_)), time(time_) {
  if (static_cast<int>(momentum.size()) != rho.grid().dim()) {
    throw SizeMismatchError("momentum must have one component per dimension");
  }
  for (const auto& m : momentum) require_same_grid(m.grid(), rho.grid(), "PairState");
}

SpectralPair::SpectralPair(const TorusGrid& grid)
    : rho(grid), momentum(static_cast<std::size_t>(grid.dim()), SpectralField(grid)) {}

SpectralPair::SpectralPair(SpectralField rho_, std::vector<SpectralField> momentum_, double time_)
    : rho(std::move(rho_)), momentum(std::move(momentum_)), time(time_) {
  if (static_cast<int>(momentum.size()) != rho.grid().dim()) {
    throw SizeMismatchError("momentum must have one component per dimension");
  }
  for (const auto& m : momentum) require_same_grid(m.grid(), rho.grid(), "SpectralPair");
}

SpectralPair& SpectralPair::operator+=(const SpectralPair& other) {
  rho += other.rho;
  for (std::size_t l = 0; l < momentum.size(); ++l) momentum[l] += other.momentum[l];
  return *this;
}

SpectralPair& SpectralPair::operator-=(const SpectralPair& other) {
  rho -= other.rho;
  for (std::size_t l = 0; l < momentum.size(); ++l) momentum[l] -= other.momentum[l];
  return *this;
}

SpectralPair& SpectralPair::operator*=(double factor) noexcept {
  rho *= factor;
  for (auto& m : momentum) m *= factor;
  return *this;
}

SpectralPair transform(const PairState& state) {
  std::vector<SpectralField> momentum;
  momentum.reserve(state.momentum.size());
  for (const auto& m : state.momentum) momentum.push_back(transform(m));
  return SpectralPair(transform(state.rho), std::move(momentum), state.time);
}

PairState inverse_transform(const SpectralPair& state) {
  std::vector<ScalarField> momentum;
  momentum.reserve(state.momentum.size());
  for (const auto& m : state.momentum) momentum.push_back(inverse_transform(m));
  return PairState(inverse_transform(state.rho), std::move(momentum), state.time);
}

double energy_norm(const SpectralPair& state, double c, double s) {
  if (!(c > 0.0)) throw DomainError("energy_norm weight must be positive");
  const double r = hs_norm(state.rho, s);
  double sum = c * r * r;
  for (const auto& m : state.momentum) {
    const double v = hs_norm(m, s);
    sum += v * v;
  }
  return std::sqrt(sum);
}

double energy_norm(const PairState& state, double c, double s) {
  return energy_norm(transform(state), c, s);
}

double pair_norm(const SpectralPair& state, double s) { return energy_norm(state, 1.0, s); }
double pair_norm(const PairState& state, double s) { return energy_norm(state, 1.0, s); }

// ------------------------------------------------------------------- probes

ScalarField random_bandlimited_field(const TorusGrid& grid, int band, double decay, Rng& rng) {
  if (band < 1 || band >= grid.points() / 2) {
    throw DomainError("band must lie in [1, M/2)");
  }
  std::normal_distribution<double> normal;
  SpectralField coeffs(grid);
  std::vector<int> k(static_cast<std::size_t>(grid.dim()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::size_t j = grid.conjugate_index(i);
    if (j <= i) continue;
    grid.mode(i, k);
    int kinf = 0;
    for (int kl : k) kinf = std::max(kinf, std::abs(kl));
    if (kinf == 0 || kinf > band) continue;
    const double sd = std::sqrt(0.5 * std::pow(1.0 + grid.mode_norm2(i), -decay));
    const Complex z(sd * normal(rng), sd * normal(rng));
    coeffs[i] = z;
    coeffs[j] = std::conj(z);
  }
  return inverse_transform(coeffs);
}

double multiplication_probe(const ScalarField& u, const ScalarField& v, double s) {
  require_same_grid(u.grid(), v.grid(), "multiplication_probe");
  const auto uh = transform(u);
  const auto vh = transform(v);
  const double nu = hs_norm(uh, s);
  const double nv = hs_norm(vh, s);
  if (nu == 0.0 || nv == 0.0) throw DomainError("multiplication_probe: zero-norm input");

  const TorusGrid fine(u.grid().dim(), 2 * u.grid().points());
  auto uf = inverse_transform(resample(uh, fine));
  const auto vf = inverse_transform(resample(vh, fine));
  for (std::size_t i = 0; i < fine.size(); ++i) uf[i] *= vf[i];
  return hs_norm(transform(uf), s) / (nu * nv);
}

namespace {

void require_embedding_regime(const TorusGrid& grid, double s) {
  if (!(s > 0.5 * grid.dim())) throw DomainError("probe requires s > d/2");
}

void accumulate(ProbeResult& r, double ratio) {
  r.max_ratio = std::max(r.max_ratio, ratio);
  r.mean_ratio += ratio;
  ++r.samples;
}

}  // namespace

ProbeResult embedding_probe(const TorusGrid& grid, double s, int samples, int band,
                            double decay, std::uint64_t seed) {
  require_embedding_regime(grid, s);
  ProbeResult result;
  for (int n = 0; n < samples; ++n) {
    Rng rng(replica_seed(seed, static_cast<std::uint64_t>(n)));
    const auto u = random_bandlimited_field(grid, band, decay, rng);
    accumulate(result, c0_norm(u) / hs_norm(u, s));
  }
  if (result.samples > 0) result.mean_ratio /= result.samples;
  return result;
}

ProbeResult multiplication_ceiling(const TorusGrid& grid, double s, int pairs, int band,
                                   double decay, std::uint64_t seed) {
  require_embedding_regime(grid, s);
  ProbeResult result;
  for (int n = 0; n < pairs; ++n) {
    Rng rng(replica_seed(seed, static_cast<std::uint64_t>(n)));
    // Shift by a random constant so neither factor is mean-free.
    std::uniform_real_distribution<double> offset(-1.0, 1.0);
    auto u = random_bandlimited_field(grid, band, decay, rng);
    auto v = random_bandlimited_field(grid, band, decay, rng);
    const double a = offset(rng);
    const double b = offset(rng);
    for (auto& x : u.values()) x += a;
    for (auto& x : v.values()) x += b;
    accumulate(result, multiplication_probe(u, v, s));
  }
  if (result.samples > 0) result.mean_ratio /= result.samples;
  return result;
}

// ----------------------------------------------------------------------- IO

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

void put_f64(std::ostream& out, double x) {
  const auto v = std::bit_cast<std::uint64_t>(x);
  char bytes[8];
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((v >> (8 * b)) & 0xff);
  out.write(bytes, 8);
}

std::uint64_t get_bytes(std::istream& in, int count) {
  unsigned char bytes[8] = {};
  in.read(reinterpret_cast<char*>(bytes), count);
  if (!in) throw std::runtime_error("truncated field snapshot");
  std::uint64_t v = 0;
  for (int b = count - 1; b >= 0; --b) v = (v << 8) | bytes[b];
  return v;
}

}  // namespace

void write_fields_binary(std::ostream& out, std::span<const ScalarField> fields) {
  if (fields.empty()) throw SizeMismatchError("no fields to write");
  const auto& grid = fields.front().grid();
  for (const auto& f : fields) require_same_grid(f.grid(), grid, "write_fields_binary");
  put_u32(out, static_cast<std::uint32_t>(grid.dim()));
  put_u32(out, static_cast<std::uint32_t>(grid.points()));
  put_u32(out, static_cast<std::uint32_t>(fields.size()));
  for (const auto& f : fields) {
    for (double v : f.values()) put_f64(out, v);
  }
}

std::vector<ScalarField> read_fields_binary(std::istream& in) {
  const auto dim = static_cast<int>(get_bytes(in, 4));
  const auto points = static_cast<int>(get_bytes(in, 4));
  const auto count = static_cast<std::size_t>(get_bytes(in, 4));
  const TorusGrid grid(dim, points);
  std::vector<ScalarField> fields;
  fields.reserve(count);
  for (std::size_t f = 0; f < count; ++f) {
    std::vector<double> values(grid.size());
    for (auto& v : values) v = std::bit_cast<double>(get_bytes(in, 8));
    fields.emplace_back(grid, std::move(values));
  }
  return fields;
}

void write_fields_csv(std::ostream& out, std::span<const ScalarField> fields) {
  if (fields.empty()) throw SizeMismatchError("no fields to write");
  const auto& grid = fields.front().grid();
  for (const auto& f : fields) require_same_grid(f.grid(), grid, "write_fields_csv");
  for (int l = 0; l < grid.dim(); ++l) out << (l ? "," : "") << 'x' << (l + 1);
  for (std::size_t f = 0; f < fields.size(); ++f) out << ",f" << f;
  out << '\n';
  const auto old_precision = out.precision(17);
  std::vector<double> x(static_cast<std::size_t>(grid.dim()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.coordinates(i, x);
    for (std::size_t l = 0; l < x.size(); ++l) out << (l ? "," : "") << x[l];
    for (const auto& f : fields) out << ',' << f[i];
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace ridk
