#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace fnls::detail {

namespace {

std::mutex plan_mutex;
std::map<std::pair<std::vector<int>, int>, fftw_plan> plans;

fftw_plan get_plan(const std::vector<int>& dims, int sign) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_pair(dims, sign);
  auto it = plans.find(key);
  if (it != plans.end()) return it->second;
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  auto* scratch = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  fftw_plan plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), scratch, scratch,
                                 sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(scratch);
  if (!plan) throw std::runtime_error("fftw planning failed");
  plans.emplace(std::move(key), plan);
  return plan;
}

}  // namespace

void fft_inplace(const std::vector<int>& dims, cplx* data, int sign) {
  fftw_plan plan = get_plan(dims, sign);
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, p, p);
}

int next_fast_size(int target) {
  for (int n = std::max(target, 2);; ++n) {
    if (n % 2) continue;
    int r = n;
    for (int f : {2, 3, 5, 7})
      while (r % f == 0) r /= f;
    if (r == 1) return n;
  }
}

}  // namespace fnls::detail
