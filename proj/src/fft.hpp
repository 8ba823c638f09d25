#pragma once

#include <complex>
#include <vector>

namespace fnls::detail {

using cplx = std::complex<double>;

// Unnormalized in-place DFT over a row-major array of shape dims.
// sign = -1 computes sum f_j e^{-2 pi i jk/M}, sign = +1 the conjugate kernel.
void fft_inplace(const std::vector<int>& dims, cplx* data, int sign);

inline void fft_inplace(int dim, int points, cplx* data, int sign) {
  fft_inplace(std::vector<int>(static_cast<std::size_t>(dim), points), data, sign);
}

// Smallest n >= target, even, whose prime factors are 2, 3, 5, 7.
int next_fast_size(int target);

}  // namespace fnls::detail
