#pragma once

#include <complex>

namespace nsnudge {
namespace fft {

// In-place 2D complex transforms on an N x N row-major array, backed by
// cached FFTW plans (FFTW_ESTIMATE: deterministic plan choice, so repeated
// runs are bit-identical). Plan creation is serialized; execution is
// thread-safe across concurrent callers on distinct buffers.
//
// forward: X_k = sum_n x_n e^{-2*pi*i*k.n/N}   (no scaling)
// backward: x_n = sum_k X_k e^{+2*pi*i*k.n/N}  (no scaling)
void forward(int N, std::complex<double>* data);
void backward(int N, std::complex<double>* data);

}  // namespace fft
}  // namespace nsnudge
