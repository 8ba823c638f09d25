#include "fnls/riesz.hpp"

#include <boost/math/quadrature/gauss.hpp>
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

constexpr double kSeriesLimit = 2.0;

// t^{N/2-gamma} J_{N/2-1}(t)
double bessel_integrand(int dim, double gamma, double t) {
  if (dim == 1) return std::sqrt(2.0 / std::numbers::pi) * std::pow(t, -gamma) * std::cos(t);
  if (dim == 3) return std::sqrt(2.0 / std::numbers::pi) * std::pow(t, 1.0 - gamma) * std::sin(t);
  return std::pow(t, 0.5 * dim - gamma) * std::cyl_bessel_j(0.5 * dim - 1.0, t);
}

// int_0^X t^{N/2-gamma} J_{N/2-1}(t) dt by termwise integration of the Bessel series.
double bessel_series_integral(int dim, double gamma, double X) {
  const double nu = 0.5 * dim - 1.0;
  double acc = 0.0;
  for (int j = 0; j < 40; ++j) {
    const double e = 2.0 * j + dim - gamma;
    const double coef = (j % 2 ? -1.0 : 1.0) /
                        (std::tgamma(j + 1.0) * std::tgamma(j + nu + 1.0) * std::pow(2.0, 2.0 * j + nu));
    const double term = coef * std::pow(X, e) / e;
    acc += term;
    if (j > 2 && std::abs(term) < 1e-18 * std::abs(acc)) break;
  }
  return acc;
}

// Running evaluation of F(X) for nondecreasing X.
class BesselIntegral {
 public:
  BesselIntegral(int dim, double gamma) : dim_(dim), gamma_(gamma) {
    x_ = kSeriesLimit;
    value_ = bessel_series_integral(dim, gamma, kSeriesLimit);
  }
  double at(double X) {
    if (X <= kSeriesLimit) return bessel_series_integral(dim_, gamma_, X);
    while (x_ < X) {
      const double b = std::min(X, x_ + 1.0);
      auto f = [this](double t) { return bessel_integrand(dim_, gamma_, t); };
      const double piece = boost::math::quadrature::gauss<double, 15>::integrate(f, x_, b);
      // compensated sum
      const double y = piece - carry_;
      const double t = value_ + y;
      carry_ = (t - value_) - y;
      value_ = t;
      x_ = b;
    }
    return value_;
  }

 private:
  int dim_;
  double gamma_;
  double x_;
  double value_;
  double carry_ = 0.0;
};

double sphere_area(int dim) { return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim); }

double transform_at_zero(int dim, double gamma, double radius) {
  return sphere_area(dim) * std::pow(radius, dim - gamma) / (dim - gamma);
}

struct RieszOperator {
  int padded;  // 2M
  std::vector<cplx> ghat;
};

using Key = std::tuple<int, int, double, double>;

std::mutex op_mutex;
std::list<std::pair<Key, std::shared_ptr<const RieszOperator>>> op_cache;

std::shared_ptr<const RieszOperator> build_operator(const Grid& g, double gamma) {
  const int N = g.dim();
  const int M = g.points_per_dim();
  const double h = g.spacing();
  const double L = g.half_extent();
  const double diameter = 2.0 * std::sqrt(static_cast<double>(N)) * L;
  const int Q = detail::next_fast_size(static_cast<int>(std::ceil(M * (1.0 + std::sqrt(static_cast<double>(N))))) + 2);
  const double period = Q * h;
  const double dk = 2.0 * std::numbers::pi / period;

  const long half = Q / 2;
  const long m_max = static_cast<long>(N) * half * half;
  std::vector<double> khat(static_cast<std::size_t>(m_max + 1));
  const double pref = std::pow(2.0 * std::numbers::pi, 0.5 * N);
  khat[0] = transform_at_zero(N, gamma, diameter);
  BesselIntegral F(N, gamma);
  for (long m = 1; m <= m_max; ++m) {
    const double k = dk * std::sqrt(static_cast<double>(m));
    khat[static_cast<std::size_t>(m)] = pref * std::pow(k, gamma - N) * F.at(k * diameter);
  }

  std::size_t qsize = 1;
  for (int d = 0; d < N; ++d) qsize *= static_cast<std::size_t>(Q);
  std::vector<cplx> lattice(qsize);
  std::vector<int> idx(static_cast<std::size_t>(N));
  auto unravel = [&](std::size_t flat, int base) {
    for (int d = N - 1; d >= 0; --d) {
      idx[static_cast<std::size_t>(d)] = static_cast<int>(flat % static_cast<std::size_t>(base));
      flat /= static_cast<std::size_t>(base);
    }
  };
  for (std::size_t n = 0; n < qsize; ++n) {
    unravel(n, Q);
    long m = 0;
    for (int v : idx) {
      const long j = v < half ? v : v - Q;
      m += j * j;
    }
    lattice[n] = khat[static_cast<std::size_t>(m)];
  }
  detail::fft_inplace(N, Q, lattice.data(), +1);
  const double gscale = g.cell_volume() / std::pow(period, N);

  const int P = 2 * M;
  std::size_t psize = 1;
  for (int d = 0; d < N; ++d) psize *= static_cast<std::size_t>(P);
  auto op = std::make_shared<RieszOperator>();
  op->padded = P;
  op->ghat.resize(psize);
  for (std::size_t n = 0; n < psize; ++n) {
    unravel(n, P);
    std::size_t q = 0;
    for (int v : idx) {
      const int disp = v < M ? v : v - P;
      q = q * static_cast<std::size_t>(Q) + static_cast<std::size_t>((disp + Q) % Q);
    }
    op->ghat[n] = lattice[q].real() * gscale / static_cast<double>(psize);
  }
  detail::fft_inplace(N, P, op->ghat.data(), -1);
  return op;
}

std::shared_ptr<const RieszOperator> get_operator(const Grid& g, double gamma) {
  const Key key{g.dim(), g.points_per_dim(), g.half_extent(), gamma};
  {
    std::lock_guard<std::mutex> lock(op_mutex);
    for (auto& e : op_cache)
      if (e.first == key) return e.second;
  }
  auto op = build_operator(g, gamma);
  std::lock_guard<std::mutex> lock(op_mutex);
  for (auto& e : op_cache)
    if (e.first == key) return e.second;
  op_cache.emplace_front(key, op);
  if (op_cache.size() > 6) op_cache.pop_back();
  return op;
}

}  // namespace

double riesz_constant(int dim, double gamma) {
  return std::pow(std::numbers::pi, 0.5 * dim) * std::pow(2.0, dim - gamma) * std::tgamma(0.5 * (dim - gamma)) /
         std::tgamma(0.5 * gamma);
}

double truncated_riesz_transform(int dim, double gamma, double radius, double k) {
  if (!(gamma > 0.0 && gamma < dim)) throw Error(ErrorKind::InvalidExponent, "gamma must lie in (0, N)");
  if (k == 0.0) return transform_at_zero(dim, gamma, radius);
  BesselIntegral F(dim, gamma);
  return std::pow(2.0 * std::numbers::pi, 0.5 * dim) * std::pow(k, gamma - dim) * F.at(k * radius);
}

Field riesz_convolve(const Field& f_abs2, double gamma) {
  const Grid& g = f_abs2.grid();
  const int N = g.dim();
  if (!(gamma > 0.0 && gamma < N)) throw Error(ErrorKind::InvalidExponent, "gamma must lie in (0, N)");
  const double scale = max_abs(f_abs2);
  for (const cplx& v : f_abs2.values()) {
    if (std::abs(v.imag()) > 1e-12 * scale || v.real() < -1e-12 * scale)
      throw Error(ErrorKind::InvalidInput, "riesz_convolve expects a real nonnegative density");
  }
  if (scale == 0.0) return Field::zeros(f_abs2.grid_ptr());

  auto op = get_operator(g, gamma);
  const int P = op->padded;
  std::vector<cplx> buf(op->ghat.size());
  std::vector<int> idx(static_cast<std::size_t>(N));
  auto padded_index = [&](std::size_t n) {
    g.unravel(n, idx.data());
    std::size_t q = 0;
    for (int v : idx) q = q * static_cast<std::size_t>(P) + static_cast<std::size_t>(v);
    return q;
  };
  for (std::size_t n = 0; n < g.size(); ++n) buf[padded_index(n)] = f_abs2[n].real();
  detail::fft_inplace(N, P, buf.data(), -1);
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= op->ghat[i];
  detail::fft_inplace(N, P, buf.data(), +1);
  std::vector<cplx> out(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) out[n] = buf[padded_index(n)].real();
  return Field(f_abs2.grid_ptr(), std::move(out));
}

}  // namespace fnls
