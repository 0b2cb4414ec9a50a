#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "varns/error.hpp"
#include "varns/harness.hpp"

namespace varns {

namespace {

std::mt19937_64 element_rng(std::uint64_t seed, std::size_t index, CorpusKind kind) {
  std::seed_seq seq{seed, static_cast<std::uint64_t>(index),
                    static_cast<std::uint64_t>(kind) + 1};
  return std::mt19937_64(seq);
}

struct Bump {
  std::array<double, 3> centre{};
  double radius = 1.0;
  double amplitude = 1.0;
};

ScalarField smooth_decaying(const GridSpec& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0), frac(0.0, 1.0);
  double min_extent = grid.extents[0];
  for (int a = 1; a < grid.dimension; ++a) min_extent = std::min(min_extent, grid.extents[a]);
  const int count = 1 + static_cast<int>(rng() % 3);
  std::vector<Bump> bumps(count);
  for (auto& b : bumps) {
    for (int a = 0; a < grid.dimension; ++a)
      b.centre[a] = grid.origin[a] + grid.extents[a] * (0.5 + 0.15 * unit(rng));
    // centre offset <= 0.15 and radius <= 0.3 of the extent: support ends 5% short of the edge
    b.radius = min_extent * (0.15 + 0.15 * frac(rng));
    b.amplitude = (0.5 + 1.5 * frac(rng)) * (frac(rng) < 0.25 ? -1.0 : 1.0);
  }
  return ScalarField::from_function(grid, [&](const std::array<double, 3>& x) {
    double v = 0.0;
    for (const auto& b : bumps) {
      double r2 = 0.0;
      for (int a = 0; a < grid.dimension; ++a) r2 += (x[a] - b.centre[a]) * (x[a] - b.centre[a]);
      const double s = r2 / (b.radius * b.radius);
      if (s < 1.0) v += b.amplitude * std::exp(1.0 - 1.0 / (1.0 - s));
    }
    return v;
  });
}

ScalarField plane_wave_mix(const GridSpec& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> amp(0.2, 1.0), phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<int> wave(-3, 3);
  struct Wave {
    std::array<double, 3> k{};
    double a = 0.0, phi = 0.0;
  };
  const int count = 1 + static_cast<int>(rng() % 4);
  std::vector<Wave> waves(count);
  for (auto& w : waves) {
    bool nonzero = false;
    while (!nonzero) {
      for (int a = 0; a < grid.dimension; ++a) {
        const int m = wave(rng);
        nonzero = nonzero || m != 0;
        w.k[a] = 2.0 * std::numbers::pi * m / grid.extents[a];
      }
    }
    w.a = amp(rng);
    w.phi = phase(rng);
  }
  return ScalarField::from_function(grid, [&](const std::array<double, 3>& x) {
    double v = 0.0;
    for (const auto& w : waves) {
      double arg = w.phi;
      for (int a = 0; a < grid.dimension; ++a) arg += w.k[a] * (x[a] - grid.origin[a]);
      v += w.a * std::cos(arg);
    }
    return v;
  });
}

ScalarField indicator_union(const GridSpec& grid, std::mt19937_64& rng) {
  struct Box {
    std::array<double, 3> lo{}, hi{};
  };
  std::uniform_int_distribution<int> start(0, 12), width(2, 6);
  const int count = 1 + static_cast<int>(rng() % 3);
  std::vector<Box> boxes(count);
  for (auto& b : boxes)
    for (int a = 0; a < grid.dimension; ++a) {
      const int s = start(rng);
      const int e = std::min(16, s + width(rng));
      b.lo[a] = grid.origin[a] + grid.extents[a] * s / 16.0;
      b.hi[a] = grid.origin[a] + grid.extents[a] * e / 16.0;
    }
  return ScalarField::from_function(grid, [&](const std::array<double, 3>& x) {
    for (const auto& b : boxes) {
      bool inside = true;
      for (int a = 0; a < grid.dimension; ++a) inside = inside && x[a] >= b.lo[a] && x[a] < b.hi[a];
      if (inside) return 1.0;
    }
    return 0.0;
  });
}

}  // namespace

std::string to_string(CorpusKind k) {
  switch (k) {
    case CorpusKind::smooth_decaying: return "smooth-decaying";
    case CorpusKind::plane_wave_mix: return "plane-wave-mix";
    case CorpusKind::indicator_union: return "indicator-union";
    case CorpusKind::divergence_free: return "divergence-free";
  }
  return "smooth-decaying";
}

CorpusKind corpus_kind_from_string(const std::string& s) {
  for (auto k : {CorpusKind::smooth_decaying, CorpusKind::plane_wave_mix,
                 CorpusKind::indicator_union, CorpusKind::divergence_free})
    if (to_string(k) == s) return k;
  throw Error(ErrorKind::invalid_argument, "unknown corpus kind '" + s + "'");
}

VectorField div_free_element(const GridSpec& grid, std::uint64_t seed, std::size_t index) {
  auto rng = element_rng(seed, index, CorpusKind::divergence_free);
  return random_div_free(grid, rng(), 2, 1.0);
}

ScalarField corpus_element(CorpusKind kind, const GridSpec& grid, std::uint64_t seed,
                           std::size_t index) {
  auto rng = element_rng(seed, index, kind);
  switch (kind) {
    case CorpusKind::smooth_decaying: return smooth_decaying(grid, rng);
    case CorpusKind::plane_wave_mix: return plane_wave_mix(grid, rng);
    case CorpusKind::indicator_union: return indicator_union(grid, rng);
    case CorpusKind::divergence_free: return div_free_element(grid, seed, index).magnitude();
  }
  return ScalarField(grid);
}

std::vector<ScalarField> generate_corpus(CorpusKind kind, std::size_t size, const GridSpec& grid,
                                         std::uint64_t seed) {
  require(size >= 1, "corpus size must be at least 1");
  grid.validate();
  std::vector<ScalarField> out;
  out.reserve(size);
  for (std::size_t i = 0; i < size; ++i) out.push_back(corpus_element(kind, grid, seed, i));
  return out;
}

std::vector<VectorField> generate_div_free_corpus(std::size_t size, const GridSpec& grid,
                                                  std::uint64_t seed) {
  require(size >= 1, "corpus size must be at least 1");
  std::vector<VectorField> out;
  out.reserve(size);
  for (std::size_t i = 0; i < size; ++i) out.push_back(div_free_element(grid, seed, i));
  return out;
}

double boundary_shell_max(const ScalarField& f) {
  const GridSpec& g = f.grid();
  double m = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    const auto idx = g.unflatten(n);
    bool edge = false;
    for (int a = 0; a < g.dimension; ++a)
      edge = edge || idx[a] == 0 || idx[a] + 1 == g.resolution[a];
    if (edge) m = std::max(m, std::abs(f[n]));
  }
  return m;
}

}  // namespace varns
