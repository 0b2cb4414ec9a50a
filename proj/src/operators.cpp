#include "varns/operators.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "varns/error.hpp"

namespace varns {

namespace {

constexpr double pi = std::numbers::pi;

void require_workspace(const GridSpec& g, const SpectralWorkspace& ws) {
  require(g == ws.grid(), "field grid does not match the spectral workspace",
          ErrorKind::grid_mismatch);
}

}  // namespace

// ---------------------------------------------------------------------------
// Fourier multipliers

ScalarField riesz_transform(int axis, const ScalarField& f, SpectralWorkspace& ws) {
  require(f.grid().topology == Topology::periodic, "Riesz transform needs a periodic grid",
          ErrorKind::grid_mismatch);
  require_workspace(f.grid(), ws);
  require(axis >= 0 && axis < f.grid().dimension, "Riesz transform axis out of range");
  auto hat = ws.forward(f.values());
  for (std::size_t m = 0; m < hat.size(); ++m) {
    const double k2 = ws.derivative_wavenumber_sq(m);
    if (k2 == 0.0) {
      hat[m] = 0.0;
      continue;
    }
    hat[m] *= Complex(0.0, -ws.derivative_wavenumber(axis, m) / std::sqrt(k2));
  }
  return ScalarField(f.grid(), ws.inverse(hat));
}

void leray_project_modes(SpectralVector& v, const SpectralWorkspace& ws) {
  for (std::size_t m = 0; m < ws.mode_count(); ++m) {
    const double k2 = ws.derivative_wavenumber_sq(m);
    if (k2 == 0.0) continue;
    const double k[3] = {ws.derivative_wavenumber(0, m), ws.derivative_wavenumber(1, m),
                         ws.derivative_wavenumber(2, m)};
    const Complex dot = (k[0] * v[0][m] + k[1] * v[1][m] + k[2] * v[2][m]) / k2;
    for (int a = 0; a < 3; ++a) v[a][m] -= k[a] * dot;
  }
}

VectorField leray_project(const VectorField& v, SpectralWorkspace& ws) {
  require(v.grid().topology == Topology::periodic, "Leray projection needs a periodic grid",
          ErrorKind::grid_mismatch);
  auto hat = ws.forward(v);
  leray_project_modes(hat, ws);
  return ws.inverse(hat);
}

VectorField gradient(const ScalarField& f, SpectralWorkspace& ws) {
  require_workspace(f.grid(), ws);
  const auto hat = ws.forward(f.values());
  SpectralVector g;
  for (int a = 0; a < 3; ++a) {
    g[a].resize(hat.size());
    for (std::size_t m = 0; m < hat.size(); ++m)
      g[a][m] = Complex(0.0, ws.derivative_wavenumber(a, m)) * hat[m];
  }
  return ws.inverse(g);
}

double divergence_ratio(const SpectralVector& v, const SpectralWorkspace& ws) {
  double num = 0.0, den = 0.0;
  for (std::size_t m = 0; m < ws.mode_count(); ++m) {
    const double w = ws.multiplicity(m);
    Complex div = 0.0;
    double mag = 0.0;
    for (int a = 0; a < 3; ++a) {
      const double k = ws.derivative_wavenumber(a, m);
      div += k * v[a][m];
      mag += std::norm(v[a][m]);
    }
    num += w * std::norm(div);
    den += w * ws.derivative_wavenumber_sq(m) * mag;
  }
  return den == 0.0 ? 0.0 : std::sqrt(num / den);
}

double divergence_ratio(const VectorField& v, SpectralWorkspace& ws) {
  return divergence_ratio(ws.forward(v), ws);
}

ScalarField heat_convolve(const ScalarField& f, double t, SpectralWorkspace& ws) {
  require(t >= 0.0 && std::isfinite(t), "heat time must be nonnegative");
  require_workspace(f.grid(), ws);
  auto hat = ws.forward(f.values());
  for (std::size_t m = 0; m < hat.size(); ++m) hat[m] *= std::exp(-t * ws.wavenumber_sq(m));
  return ScalarField(f.grid(), ws.inverse(hat));
}

VectorField heat_convolve(const VectorField& v, double t, SpectralWorkspace& ws) {
  require(t >= 0.0 && std::isfinite(t), "heat time must be nonnegative");
  auto hat = ws.forward(v);
  for (std::size_t m = 0; m < ws.mode_count(); ++m) {
    const double e = std::exp(-t * ws.wavenumber_sq(m));
    for (auto& c : hat) c[m] *= e;
  }
  return ws.inverse(hat);
}

// ---------------------------------------------------------------------------
// Duhamel quadrature

DuhamelAccumulator::DuhamelAccumulator(const SpectralWorkspace& ws, double dt)
    : decay_(ws.mode_count()), dt_(dt) {
  require(dt > 0.0 && std::isfinite(dt), "time step must be positive");
  for (std::size_t m = 0; m < decay_.size(); ++m)
    decay_[m] = std::exp(-dt * ws.wavenumber_sq(m));
  for (int c = 0; c < 3; ++c) {
    history_[c].assign(decay_.size(), 0.0);
    result_[c].assign(decay_.size(), 0.0);
  }
}

const SpectralVector& DuhamelAccumulator::push(const SpectralVector& integrand) {
  for (const auto& c : integrand)
    require(c.size() == decay_.size(), "integrand mode count mismatch",
            ErrorKind::grid_mismatch);
  if (count_ > 0) {
    const double weight = count_ == 1 ? 0.5 : 1.0;
    for (int c = 0; c < 3; ++c)
      for (std::size_t m = 0; m < decay_.size(); ++m) {
        history_[c][m] = decay_[m] * (history_[c][m] + weight * previous_[c][m]);
        result_[c][m] = dt_ * (history_[c][m] + 0.5 * integrand[c][m]);
      }
  }
  previous_ = integrand;
  ++count_;
  return result_;
}

SpaceTimeField duhamel_force(const SpaceTimeField& force, const TimeGrid& tg,
                             SpectralWorkspace& ws) {
  require(force.time_grid() == tg, "force is not sampled on the time grid",
          ErrorKind::grid_mismatch);
  require_workspace(force.grid(), ws);
  DuhamelAccumulator acc(ws, tg.dt());
  std::vector<VectorField> frames;
  frames.reserve(tg.node_count());
  for (std::size_t i = 0; i < tg.node_count(); ++i)
    frames.push_back(ws.inverse(acc.push(ws.forward(force.frame(i)))));
  return SpaceTimeField(tg, std::move(frames));
}

SpaceTimeField duhamel_force_direct(const SpaceTimeField& force, const TimeGrid& tg,
                                    SpectralWorkspace& ws) {
  require(force.time_grid() == tg, "force is not sampled on the time grid",
          ErrorKind::grid_mismatch);
  require_workspace(force.grid(), ws);
  std::vector<SpectralVector> hats;
  for (const auto& f : force.frames()) hats.push_back(ws.forward(f));
  SpaceTimeField out(tg, force.grid());
  for (std::size_t i = 1; i < tg.node_count(); ++i) {
    SpectralVector acc;
    for (auto& c : acc) c.assign(ws.mode_count(), 0.0);
    for (std::size_t j = 0; j <= i; ++j) {
      const double w = (j == 0 || j == i ? 0.5 : 1.0) * tg.dt();
      const double lag = tg.node(i) - tg.node(j);
      for (std::size_t m = 0; m < ws.mode_count(); ++m) {
        const double e = w * std::exp(-lag * ws.wavenumber_sq(m));
        for (int c = 0; c < 3; ++c) acc[c][m] += e * hats[j][c][m];
      }
    }
    out.frame(i) = ws.inverse(acc);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Maximal function

std::vector<double> default_radius_ladder(const GridSpec& grid, std::size_t count) {
  require(count >= 2, "radius ladder needs at least two radii");
  double h = grid.spacing(0), extent = grid.extents[0];
  for (int a = 1; a < grid.dimension; ++a) {
    h = std::min(h, grid.spacing(a));
    extent = std::min(extent, grid.extents[a]);
  }
  const double lo = 0.5 * h, hi = 0.5 * extent;
  std::vector<double> r(count);
  for (std::size_t k = 0; k < count; ++k)
    r[k] = lo * std::pow(hi / lo, static_cast<double>(k) / static_cast<double>(count - 1));
  r.back() = hi;
  return r;
}

namespace {

constexpr double ball_slack = 1e-12;

struct Column {
  long di, dj;
  long half;  // cells on each side along the column axis
};

// Offsets that a ball of radius r covers, one column per (di, dj).
std::vector<Column> ball_columns(const GridSpec& g, double r) {
  const bool periodic = g.topology == Topology::periodic;
  const int col = g.dimension - 1;
  const double r2 = r * r * (1.0 + ball_slack);
  auto range = [&](int axis) -> std::pair<long, long> {
    if (axis >= col) return {0, 0};
    const long n = static_cast<long>(g.resolution[axis]);
    const long reach = static_cast<long>(std::floor(r / g.spacing(axis))) + 1;
    if (periodic) return {std::max(-reach, -((n - 1) / 2)), std::min(reach, n / 2)};
    return {std::max(-reach, -(n - 1)), std::min(reach, n - 1)};
  };
  const auto [i0, i1] = range(0);
  const auto [j0, j1] = range(1);
  const double hc = g.spacing(col);
  std::vector<Column> cols;
  for (long di = i0; di <= i1; ++di)
    for (long dj = j0; dj <= j1; ++dj) {
      double used = 0.0;
      if (col > 0) used += std::pow(di * g.spacing(0), 2);
      if (col > 1) used += std::pow(dj * g.spacing(1), 2);
      const double rem = r2 - used;
      if (rem < 0.0) continue;
      long m = static_cast<long>(std::floor(std::sqrt(rem) / hc));
      while (std::pow((m + 1) * hc, 2) <= rem) ++m;
      while (m > 0 && std::pow(m * hc, 2) > rem) --m;
      cols.push_back({di, dj, m});
    }
  return cols;
}

// Sums of |f| over aligned dyadic blocks of each line. Any range is a union
// of O(log n) blocks of nonnegative terms, so range sums keep full relative
// precision (prefix-sum differences would not).
class DyadicSums {
 public:
  DyadicSums(const ScalarField& f, long lines, long n) {
    long size = n, total = 0;
    while (size >= 1) {
      offsets_.push_back(total);
      total += size;
      if (size == 1) break;
      size = (size + 1) / 2;
    }
    stride_ = total;
    data_.assign(static_cast<std::size_t>(lines * stride_), 0.0);
    for (long line = 0; line < lines; ++line) {
      double* base = &data_[static_cast<std::size_t>(line * stride_)];
      for (long k = 0; k < n; ++k) base[k] = std::abs(f[static_cast<std::size_t>(line * n + k)]);
      long prev = n;
      for (std::size_t l = 1; l < offsets_.size(); ++l) {
        const long cur = (prev + 1) / 2;
        const double* src = base + offsets_[l - 1];
        double* dst = base + offsets_[l];
        for (long b = 0; b < cur; ++b)
          dst[b] = src[2 * b] + (2 * b + 1 < prev ? src[2 * b + 1] : 0.0);
        prev = cur;
      }
    }
  }

  /// Sum over cells a..b inclusive (0 <= a, b < n).
  double range(long line, long a, long b) const {
    const double* base = &data_[static_cast<std::size_t>(line * stride_)];
    double total = 0.0;
    while (a <= b) {
      std::size_t l = 0;
      while (l + 1 < offsets_.size() && a % (2L << l) == 0 && a + (2L << l) - 1 <= b) ++l;
      total += base[offsets_[l] + (a >> l)];
      a += 1L << l;
    }
    return total;
  }

 private:
  long stride_ = 0;
  std::vector<long> offsets_;
  std::vector<double> data_;
};

// Ball averages of |f| for every cell by FFT convolution with the ball's
// indicator; used when the ball has many columns. Truncated grids are padded
// to twice the size and divide by the (exact, integer) count of cells inside
// the domain.
std::vector<double> ball_averages_fft(const ScalarField& f, const std::vector<Column>& cols) {
  const GridSpec& g = f.grid();
  const bool periodic = g.topology == Topology::periodic;
  GridSpec work = g;
  work.topology = Topology::periodic;
  if (!periodic)
    for (int a = 0; a < g.dimension; ++a) {
      work.resolution[a] = 2 * g.resolution[a];
      work.extents[a] = 2.0 * g.extents[a];
    }
  const long W0 = static_cast<long>(work.resolution[0]), W1 = static_cast<long>(work.resolution[1]),
             W2 = static_cast<long>(work.resolution[2]);
  const int col = g.dimension - 1;
  auto wrap = [](long i, long n) { return ((i % n) + n) % n; };
  auto at = [&](long i, long j, long k) {
    return static_cast<std::size_t>((wrap(i, W0) * W1 + wrap(j, W1)) * W2 + wrap(k, W2));
  };

  std::vector<double> ball(work.size(), 0.0), data(work.size(), 0.0), domain(work.size(), 0.0);
  for (const auto& c : cols)
    for (long m = -c.half; m <= c.half; ++m) {
      long o[3] = {0, 0, 0};
      o[col] = m;
      if (col > 0) o[0] = c.di;
      if (col > 1) o[1] = c.dj;
      ball[at(o[0], o[1], o[2])] = 1.0;  // periodic residues merge
    }
  for (std::size_t n = 0; n < g.size(); ++n) {
    const auto idx = g.unflatten(n);
    const std::size_t w = at(static_cast<long>(idx[0]), static_cast<long>(idx[1]),
                             static_cast<long>(idx[2]));
    data[w] = std::abs(f[n]);
    domain[w] = 1.0;
  }

  SpectralWorkspace ws(work);
  const auto bh = ws.forward(ball);
  auto dh = ws.forward(data);
  for (std::size_t m = 0; m < bh.size(); ++m) dh[m] *= bh[m];
  const auto sums = ws.inverse(dh);
  std::vector<double> counts;
  double periodic_count = 0.0;
  if (periodic) {
    for (double b : ball) periodic_count += b;
  } else {
    auto ch = ws.forward(domain);
    for (std::size_t m = 0; m < bh.size(); ++m) ch[m] *= bh[m];
    counts = ws.inverse(ch);
  }
  std::vector<double> out(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) {
    const auto idx = g.unflatten(n);
    const std::size_t w = at(static_cast<long>(idx[0]), static_cast<long>(idx[1]),
                             static_cast<long>(idx[2]));
    const double count = periodic ? periodic_count : std::round(counts[w]);
    out[n] = std::max(sums[w], 0.0) / count;
  }
  return out;
}

// Column count above which a ball is averaged by FFT instead of line sums.
constexpr std::size_t fft_column_threshold = 48;

}  // namespace

ScalarField maximal_function(const ScalarField& f, std::span<const double> radii) {
  const GridSpec& g = f.grid();
  require(!radii.empty(), "maximal function needs at least one radius");
  double half_extent = g.extents[0];
  for (int a = 1; a < g.dimension; ++a) half_extent = std::min(half_extent, g.extents[a]);
  half_extent *= 0.5;
  for (double r : radii)
    require(r > 0.0 && r <= half_extent * (1.0 + 1e-12),
            "radii must be positive and at most half the domain extent");

  const bool periodic = g.topology == Topology::periodic;
  const int col = g.dimension - 1;
  const long n0 = static_cast<long>(g.resolution[0]);
  const long n1 = static_cast<long>(g.resolution[1]);
  const long nc = static_cast<long>(g.resolution[col]);
  // In 1D the column axis is axis 0 and there is a single line.
  const long lines0 = col == 0 ? 1 : n0;
  const long lines1 = col == 2 ? n1 : 1;

  const DyadicSums sums(f, lines0 * lines1, nc);
  auto wrap = [](long i, long n) { return ((i % n) + n) % n; };

  ScalarField out(g);
  for (double r : radii) {
    const auto cols = ball_columns(g, r);
    if (cols.size() > fft_column_threshold) {
      const auto avg = ball_averages_fft(f, cols);
      for (std::size_t n = 0; n < g.size(); ++n) out[n] = std::max(out[n], avg[n]);
      continue;
    }
    for (long i = 0; i < lines0; ++i)
      for (long j = 0; j < lines1; ++j)
        for (long k = 0; k < nc; ++k) {
          double sum = 0.0, count = 0.0;
          for (const auto& c : cols) {
            long ii = i + c.di, jj = j + c.dj;
            if (periodic) {
              ii = wrap(ii, lines0);
              jj = wrap(jj, lines1);
            } else if (ii < 0 || ii >= lines0 || jj < 0 || jj >= lines1) {
              continue;
            }
            const long line = ii * lines1 + jj;
            const long lo = k - c.half, hi = k + c.half;
            if (periodic) {
              if (2 * c.half + 1 >= nc) {
                sum += sums.range(line, 0, nc - 1);
                count += static_cast<double>(nc);
              } else if (lo < 0) {
                sum += sums.range(line, 0, hi) + sums.range(line, lo + nc, nc - 1);
                count += static_cast<double>(2 * c.half + 1);
              } else if (hi >= nc) {
                sum += sums.range(line, lo, nc - 1) + sums.range(line, 0, hi - nc);
                count += static_cast<double>(2 * c.half + 1);
              } else {
                sum += sums.range(line, lo, hi);
                count += static_cast<double>(2 * c.half + 1);
              }
            } else {
              const long a = std::max(lo, 0L), b = std::min(hi, nc - 1);
              sum += sums.range(line, a, b);
              count += static_cast<double>(b - a + 1);
            }
          }
          const std::size_t flat = static_cast<std::size_t>((i * lines1 + j) * nc + k);
          out[flat] = std::max(out[flat], sum / count);
        }
  }
  return out;
}

double ball_average(const ScalarField& f, const std::array<double, 3>& centre, double radius) {
  const GridSpec& g = f.grid();
  const double r2 = radius * radius * (1.0 + ball_slack);
  double sum = 0.0, count = 0.0;
  for (std::size_t n = 0; n < f.size(); ++n) {
    const auto x = g.point(n);
    double d2 = 0.0;
    for (int a = 0; a < g.dimension; ++a) {
      double d = std::abs(x[a] - centre[a]);
      if (g.topology == Topology::periodic) {
        d = std::fmod(d, g.extents[a]);
        d = std::min(d, g.extents[a] - d);
      }
      d2 += d * d;
    }
    if (d2 <= r2) {
      sum += std::abs(f[n]);
      count += 1.0;
    }
  }
  require(count > 0.0, "ball contains no grid cell");
  return sum / count;
}

// ---------------------------------------------------------------------------
// Riesz potentials

namespace {

// Upper incomplete gamma for any real order (x > 0).
double upper_gamma(double a, double x) {
  if (a > 0.0) return boost::math::tgamma(a, x);
  if (a == 0.0) return boost::math::expint(1, x);
  return (upper_gamma(a + 1.0, x) - std::pow(x, a) * std::exp(-x)) / a;
}

}  // namespace

double lattice_zeta(double s, std::span<const double> spacing, int dimension) {
  require(dimension == 1 || dimension == 3, "lattice dimension must be 1 or 3");
  require(static_cast<int>(spacing.size()) >= dimension, "one spacing per axis required");
  require(s > 0.0 && std::abs(s - dimension) > 1e-12, "lattice zeta needs 0 < s != n");
  double href = 0.0;
  for (int a = 0; a < dimension; ++a) {
    require(spacing[a] > 0.0, "lattice spacing must be positive");
    href = std::max(href, spacing[a]);
  }
  std::array<double, 3> h{1.0, 1.0, 1.0};
  double volume = 1.0;
  for (int a = 0; a < dimension; ++a) {
    h[a] = spacing[a] / href;
    volume *= h[a];
  }

  // Terms decay like exp(-pi |y|^2); stop once that is below ~1e-20.
  constexpr double cutoff = 46.0;
  const double a_direct = 0.5 * s;
  const double a_dual = 0.5 * (dimension - s);
  auto shell_sum = [&](bool dual) {
    std::array<long, 3> reach{0, 0, 0};
    std::array<double, 3> step{};
    for (int a = 0; a < dimension; ++a) {
      step[a] = dual ? 1.0 / h[a] : h[a];
      reach[a] = static_cast<long>(std::ceil(std::sqrt(cutoff / pi) / step[a])) + 1;
    }
    const double expo = dual ? a_dual : a_direct;
    double total = 0.0;
    for (long i = -reach[0]; i <= reach[0]; ++i)
      for (long j = -reach[1]; j <= reach[1]; ++j)
        for (long k = -reach[2]; k <= reach[2]; ++k) {
          if (i == 0 && j == 0 && k == 0) continue;
          const double y2 = std::pow(i * step[0], 2) + std::pow(j * step[1], 2) +
                            std::pow(k * step[2], 2);
          const double x = pi * y2;
          if (x > cutoff) continue;
          total += upper_gamma(expo, x) * std::pow(x, -expo);
        }
    return total;
  };
  const double bracket = shell_sum(false) + shell_sum(true) / volume +
                         2.0 / (volume * (s - dimension)) - 2.0 / s;
  const double unit = std::pow(pi, 0.5 * s) / std::tgamma(0.5 * s) * bracket;
  return unit * std::pow(href, -s);
}

double diagonal_weight(const GridSpec& grid, double sigma, DiagonalRule rule) {
  const int n = grid.dimension;
  require(sigma > 0.0 && sigma < n, "sigma must lie in (0, dimension)");
  const double volume = grid.cell_weight();
  if (rule == DiagonalRule::lattice_corrected) {
    std::array<double, 3> h{grid.spacing(0), grid.spacing(1), grid.spacing(2)};
    return -volume * lattice_zeta(n - sigma, std::span<const double>(h.data(), n), n);
  }
  if (n == 1) return 2.0 * std::pow(0.5 * grid.spacing(0), sigma) / sigma;
  const double radius = std::cbrt(3.0 * volume / (4.0 * pi));
  return 4.0 * pi * std::pow(radius, sigma) / sigma;
}

namespace {

void require_potential_input(const ScalarField& f, double sigma) {
  const GridSpec& g = f.grid();
  require(g.topology == Topology::truncated,
          "Riesz potential quadrature needs a truncated grid", ErrorKind::grid_mismatch);
  require(sigma > 0.0 && sigma < g.dimension, "sigma must lie in (0, dimension)");
}

}  // namespace

ScalarField riesz_potential_direct(const ScalarField& f, double sigma, DiagonalRule rule) {
  require_potential_input(f, sigma);
  const GridSpec& g = f.grid();
  const int n = g.dimension;
  if (f.is_zero()) return ScalarField(g);

  // Discrete linear convolution of |f| with the kernel table, done on a
  // zero-padded periodic grid of twice the size per axis.
  GridSpec padded = g;
  padded.topology = Topology::periodic;
  for (int a = 0; a < n; ++a) {
    padded.resolution[a] = 2 * g.resolution[a];
    padded.extents[a] = 2.0 * g.extents[a];
    padded.origin[a] = 0.0;
  }
  const double volume = g.cell_weight();
  const double centre = diagonal_weight(g, sigma, rule) / volume;
  std::vector<double> kernel(padded.size(), 0.0), data(padded.size(), 0.0);
  const std::size_t P0 = padded.resolution[0], P1 = padded.resolution[1],
                    P2 = padded.resolution[2];
  auto offset = [&](std::size_t q, int a) -> long {
    if (a >= n) return 0;
    const long P = static_cast<long>(padded.resolution[a]);
    const long m = static_cast<long>(g.resolution[a]);
    const long o = static_cast<long>(q) < m ? static_cast<long>(q) : static_cast<long>(q) - P;
    return std::abs(o) < m ? o : m;  // m marks an unused slot
  };
  for (std::size_t i = 0; i < P0; ++i)
    for (std::size_t j = 0; j < P1; ++j)
      for (std::size_t k = 0; k < P2; ++k) {
        const long o[3] = {offset(i, 0), offset(j, 1), offset(k, 2)};
        bool used = true;
        double d2 = 0.0;
        for (int a = 0; a < n; ++a) {
          if (o[a] == static_cast<long>(g.resolution[a])) used = false;
          d2 += std::pow(o[a] * g.spacing(a), 2);
        }
        if (!used) continue;
        kernel[(i * P1 + j) * P2 + k] = d2 == 0.0 ? centre : std::pow(d2, 0.5 * (sigma - n));
      }
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    const auto idx = g.unflatten(flat);
    data[(idx[0] * P1 + idx[1]) * P2 + idx[2]] = std::abs(f[flat]);
  }

  SpectralWorkspace ws(padded);
  auto kh = ws.forward(kernel);
  auto dh = ws.forward(data);
  for (std::size_t m = 0; m < kh.size(); ++m) dh[m] *= kh[m];
  const auto conv = ws.inverse(dh);

  std::vector<double> out(g.size());
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    const auto idx = g.unflatten(flat);
    // The kernel is positive, so the exact sum is positive; clip FFT round-off.
    out[flat] = std::max(volume * conv[(idx[0] * P1 + idx[1]) * P2 + idx[2]], 0.0);
  }
  return ScalarField(g, std::move(out));
}

double riesz_potential_at(const ScalarField& f, double sigma, const std::array<double, 3>& x,
                          DiagonalRule rule) {
  require_potential_input(f, sigma);
  const GridSpec& g = f.grid();
  const int n = g.dimension;
  double hmin = g.spacing(0);
  for (int a = 1; a < n; ++a) hmin = std::min(hmin, g.spacing(a));
  const double volume = g.cell_weight();
  const double coincide2 = std::pow(1e-9 * hmin, 2);
  double total = 0.0;
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    const double v = std::abs(f[flat]);
    if (v == 0.0) continue;
    const auto y = g.point(flat);
    double d2 = 0.0;
    for (int a = 0; a < n; ++a) d2 += (x[a] - y[a]) * (x[a] - y[a]);
    if (d2 <= coincide2)
      total += diagonal_weight(g, sigma, rule) * v;
    else
      total += volume * v * std::pow(d2, 0.5 * (sigma - n));
  }
  return total;
}

ScalarField riesz_potential_1d(const ScalarField& psi, double sigma, DiagonalRule rule) {
  require(psi.grid().dimension == 1, "one-dimensional potential needs a 1D grid",
          ErrorKind::grid_mismatch);
  require(sigma > 0.0 && sigma < 1.0, "sigma must lie in (0, 1)");
  return riesz_potential_direct(psi, sigma, rule);
}

// ---------------------------------------------------------------------------
// Kernel estimates

double grad_heat_kernel_defect(double t, const std::array<double, 3>& x) {
  require(t > 0.0 && std::isfinite(t), "heat kernel time must be positive");
  const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  const double kernel = std::pow(4.0 * pi * t, -1.5) * std::exp(-r2 / (4.0 * t));
  const double grad = std::sqrt(r2) / (2.0 * t) * kernel;
  return grad * (t * t + r2 * r2);
}

namespace {

double periodic_distance_from_origin(const GridSpec& g, std::size_t flat) {
  const auto idx = g.unflatten(flat);
  double d2 = 0.0;
  for (int a = 0; a < g.dimension; ++a) {
    const std::size_t n = g.resolution[a];
    const std::size_t i = std::min(idx[a], n - idx[a]);
    d2 += std::pow(static_cast<double>(i) * g.spacing(a), 2);
  }
  return std::sqrt(d2);
}

}  // namespace

bool is_radially_nonincreasing(const ScalarField& phi, double slack) {
  const GridSpec& g = phi.grid();
  if (g.topology != Topology::periodic) return false;
  std::vector<std::pair<double, double>> samples(phi.size());
  for (std::size_t n = 0; n < phi.size(); ++n) {
    if (phi[n] < 0.0) return false;
    samples[n] = {periodic_distance_from_origin(g, n), phi[n]};
  }
  std::sort(samples.begin(), samples.end());
  const double tol = slack * phi.max_abs();
  double previous_min = std::numeric_limits<double>::infinity();
  std::size_t s = 0;
  while (s < samples.size()) {
    const double radius = samples[s].first;
    double group_min = samples[s].second, group_max = samples[s].second;
    std::size_t e = s + 1;
    while (e < samples.size() && samples[e].first <= radius * (1.0 + 1e-12) + 1e-300) {
      group_min = std::min(group_min, samples[e].second);
      group_max = std::max(group_max, samples[e].second);
      ++e;
    }
    if (group_max > previous_min + tol) return false;
    previous_min = std::min(previous_min, group_min);
    s = e;
  }
  return true;
}

double radial_majorant_defect(const ScalarField& phi, const ScalarField& f) {
  const GridSpec& g = f.grid();
  require(phi.grid() == g, "phi and f must share a grid", ErrorKind::grid_mismatch);
  require(g.topology == Topology::periodic, "radial majorant check needs a periodic grid",
          ErrorKind::grid_mismatch);
  require(is_radially_nonincreasing(phi), "phi must be nonnegative and radially nonincreasing");
  const double volume = g.cell_weight();
  double l1 = 0.0;
  for (double v : phi.values()) l1 += v * volume;
  require(l1 > 0.0, "phi must not vanish");

  SpectralWorkspace ws(g);
  auto ph = ws.forward(phi.values());
  auto fh = ws.forward(f.values());
  for (std::size_t m = 0; m < fh.size(); ++m) fh[m] *= ph[m];
  const auto conv = ws.inverse(fh);
  const auto radii = default_radius_ladder(g);
  const ScalarField mf = maximal_function(f, radii);

  double worst = 0.0;
  for (std::size_t n = 0; n < f.size(); ++n) {
    if (mf[n] == 0.0) continue;
    worst = std::max(worst, std::abs(volume * conv[n]) / (l1 * mf[n]));
  }
  return worst;
}

}  // namespace varns
