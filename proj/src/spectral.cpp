#include "fnls/spectral.hpp"

#include <cmath>
#include <list>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

#include "fft.hpp"
#include "fnls/error.hpp"

namespace fnls {

namespace {

std::vector<double> sign_mask(const Grid& g) {
  std::vector<double> mask(g.size());
  std::vector<int> idx(static_cast<std::size_t>(g.dim()));
  for (std::size_t n = 0; n < g.size(); ++n) {
    g.unravel(n, idx.data());
    int parity = 0;
    for (int v : idx) parity += v;
    mask[n] = (parity % 2) ? -1.0 : 1.0;
  }
  return mask;
}

using SymbolKey = std::tuple<int, int, double, double>;

struct SymbolCache {
  std::mutex mu;
  std::list<std::pair<SymbolKey, std::shared_ptr<const std::vector<double>>>> entries;
};

SymbolCache& symbol_cache() {
  static SymbolCache cache;
  return cache;
}

thread_local std::list<std::pair<SymbolKey, std::shared_ptr<const std::vector<double>>>> local_symbols;

Field apply_symbol(const Field& f, const std::vector<double>& symbol) {
  const Grid& g = f.grid();
  std::vector<cplx> buf(f.values());
  detail::fft_inplace(g.dim(), g.points_per_dim(), buf.data(), -1);
  const double scale = 1.0 / static_cast<double>(g.size());
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= symbol[i] * scale;
  detail::fft_inplace(g.dim(), g.points_per_dim(), buf.data(), +1);
  return Field(f.grid_ptr(), std::move(buf));
}

}  // namespace

const std::vector<double>& symbol_power(const Grid& grid, double t) {
  const SymbolKey key{grid.dim(), grid.points_per_dim(), grid.half_extent(), t};
  for (auto& e : local_symbols)
    if (e.first == key) return *e.second;

  std::shared_ptr<const std::vector<double>> table;
  {
    auto& cache = symbol_cache();
    std::lock_guard<std::mutex> lock(cache.mu);
    for (auto& e : cache.entries)
      if (e.first == key) table = e.second;
    if (!table) {
      auto v = std::make_shared<std::vector<double>>(grid.size());
      const auto& k2 = grid.k_squared();
      for (std::size_t i = 0; i < k2.size(); ++i) {
        if (t == 0.0)
          (*v)[i] = 1.0;
        else if (t == 1.0)
          (*v)[i] = k2[i];
        else
          (*v)[i] = k2[i] == 0.0 ? 0.0 : std::pow(k2[i], t);
      }
      table = v;
      cache.entries.emplace_front(key, table);
      if (cache.entries.size() > 32) cache.entries.pop_back();
    }
  }
  local_symbols.emplace_front(key, table);
  if (local_symbols.size() > 8) local_symbols.pop_back();
  return *table;
}

Spectrum transform_forward(const Field& f) {
  const Grid& g = f.grid();
  std::vector<cplx> buf(f.values());
  detail::fft_inplace(g.dim(), g.points_per_dim(), buf.data(), -1);
  const auto mask = sign_mask(g);
  const double h = g.cell_volume();
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= mask[i] * h;
  return Spectrum{f.grid_ptr(), std::move(buf)};
}

Field transform_inverse(const Spectrum& s) {
  const Grid& g = *s.grid;
  if (s.coeffs.size() != g.size()) throw Error(ErrorKind::GridMismatch, "spectrum size mismatch");
  std::vector<cplx> buf(s.coeffs);
  const auto mask = sign_mask(g);
  const double w = g.spectral_weight();
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= mask[i] * w;
  detail::fft_inplace(g.dim(), g.points_per_dim(), buf.data(), +1);
  return Field(s.grid, std::move(buf));
}

double spectral_energy(const Spectrum& s) {
  double acc = 0.0;
  for (const cplx& c : s.coeffs) acc += std::norm(c);
  return acc * s.grid->spectral_weight();
}

Field fractional_laplacian(const Field& f, double s) {
  if (!(s > 0.0 && s <= 1.0)) throw Error(ErrorKind::InvalidOrder, "s must lie in (0, 1]");
  return apply_symbol(f, symbol_power(f.grid(), s));
}

Field fractional_power(const Field& f, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorKind::InvalidOrder, "exponent must be >= 0");
  return apply_symbol(f, symbol_power(f.grid(), t));
}

Field resolvent(const Field& f, double s, double shift) {
  if (!(shift > 0.0)) throw Error(ErrorKind::InvalidParams, "resolvent shift must be positive");
  const auto& sym = symbol_power(f.grid(), s);
  std::vector<double> inv(sym.size());
  for (std::size_t i = 0; i < sym.size(); ++i) inv[i] = 1.0 / (sym[i] + shift);
  return apply_symbol(f, inv);
}

std::vector<Field> gradient(const Field& f) {
  const Grid& g = f.grid();
  const int dim = g.dim();
  const int M = g.points_per_dim();
  std::vector<cplx> hat(f.values());
  detail::fft_inplace(dim, M, hat.data(), -1);
  const double scale = 1.0 / static_cast<double>(g.size());
  std::vector<Field> out;
  out.reserve(static_cast<std::size_t>(dim));
  std::vector<int> idx(static_cast<std::size_t>(dim));
  for (int d = 0; d < dim; ++d) {
    std::vector<cplx> buf(hat.size());
    for (std::size_t n = 0; n < hat.size(); ++n) {
      g.unravel(n, idx.data());
      const int j = idx[static_cast<std::size_t>(d)];
      const double k = (j == M / 2) ? 0.0 : g.wavenumber(j);
      buf[n] = hat[n] * cplx(0.0, k * scale);
    }
    detail::fft_inplace(dim, M, buf.data(), +1);
    out.emplace_back(f.grid_ptr(), std::move(buf));
  }
  return out;
}

double hs_seminorm_sq(const Field& f, double s) {
  const Grid& g = f.grid();
  std::vector<cplx> buf(f.values());
  detail::fft_inplace(g.dim(), g.points_per_dim(), buf.data(), -1);
  const auto& sym = symbol_power(g, s);
  double acc = 0.0;
  for (std::size_t i = 0; i < buf.size(); ++i) acc += sym[i] * std::norm(buf[i]);
  // (1/(2L))^N h^{2N} = h^N / M^N
  return acc * g.cell_volume() / static_cast<double>(g.size());
}

Field dilate(const Field& f, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorKind::InvalidParams, "lambda must be positive");
  if (lambda == 1.0) return f;
  const Grid& g = f.grid();
  const int dim = g.dim();
  const int M = g.points_per_dim();
  const int P = 2 * M;
  const double pi = std::numbers::pi;

  // chirp tables shared by every line
  std::vector<cplx> pre(static_cast<std::size_t>(M + 1));
  for (int mp = 0; mp <= M; ++mp) {
    const double m = mp - M / 2;
    const double q = static_cast<double>(mp) * mp / M;
    pre[static_cast<std::size_t>(mp)] = std::polar(1.0, pi * m * (1.0 - lambda) + pi * lambda * q);
  }
  // an image lambda*x outside the box reads the periodic copy; keep it only when it lands in the
  // outer half of the box (tail), so central mass is never wrapped back in
  std::vector<cplx> post(static_cast<std::size_t>(M));
  for (int i = 0; i < M; ++i) {
    const double q = static_cast<double>(i) * i / M;
    const double image = lambda * (i - M / 2);
    const double wrapped = image - M * std::round(image / M);
    const bool inside = std::abs(image) <= M / 2 || std::abs(wrapped) >= M / 4;
    post[static_cast<std::size_t>(i)] =
        inside ? std::polar(1.0, -pi * lambda * i + pi * lambda * q) / static_cast<double>(M) : cplx(0.0);
  }
  std::vector<cplx> kernel(static_cast<std::size_t>(P));
  for (int d = -M; d < M; ++d) {
    const double q = static_cast<double>(d) * d / M;
    kernel[static_cast<std::size_t>((d + P) % P)] = std::polar(1.0, -pi * lambda * q) / static_cast<double>(P);
  }
  detail::fft_inplace(1, P, kernel.data(), -1);

  std::vector<cplx> data(f.values());
  std::vector<cplx> line(static_cast<std::size_t>(M));
  std::vector<cplx> work(static_cast<std::size_t>(P));
  std::size_t stride = 1;
  for (int d = dim - 1; d >= 0; --d) {
    const std::size_t block = stride * static_cast<std::size_t>(M);
    for (std::size_t outer = 0; outer < data.size(); outer += block) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        const std::size_t base = outer + inner;
        for (int j = 0; j < M; ++j) line[static_cast<std::size_t>(j)] = data[base + static_cast<std::size_t>(j) * stride];
        detail::fft_inplace(1, M, line.data(), -1);
        std::fill(work.begin(), work.end(), cplx(0.0));
        // m' = m + M/2, coefficients in FFT order: m >= 0 at index m, m < 0 at M + m
        for (int mp = 0; mp <= M; ++mp) {
          const int m = mp - M / 2;
          cplx c;
          if (m == -M / 2 || m == M / 2)
            c = 0.5 * line[static_cast<std::size_t>(M / 2)];
          else
            c = line[static_cast<std::size_t>(m >= 0 ? m : M + m)];
          work[static_cast<std::size_t>(mp)] = c * pre[static_cast<std::size_t>(mp)];
        }
        detail::fft_inplace(1, P, work.data(), -1);
        for (int n = 0; n < P; ++n) work[static_cast<std::size_t>(n)] *= kernel[static_cast<std::size_t>(n)];
        detail::fft_inplace(1, P, work.data(), +1);
        for (int i = 0; i < M; ++i)
          data[base + static_cast<std::size_t>(i) * stride] = work[static_cast<std::size_t>(i)] * post[static_cast<std::size_t>(i)];
      }
    }
    stride *= static_cast<std::size_t>(M);
  }
  return Field(f.grid_ptr(), std::move(data));
}

}  // namespace fnls
