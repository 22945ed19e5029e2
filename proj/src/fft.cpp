#include "nsnudge/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace nsnudge {
namespace fft {

namespace {

std::mutex plan_mutex;
std::map<std::pair<int, int>, fftw_plan> plan_cache;

fftw_plan get_plan(int N, int sign) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_pair(N, sign);
    auto it = plan_cache.find(key);
    if (it != plan_cache.end()) return it->second;
    // Plan on a scratch buffer; FFTW_UNALIGNED lets us execute on any
    // caller buffer via the new-array interface.
    fftw_complex* scratch = fftw_alloc_complex(static_cast<std::size_t>(N) * N);
    fftw_plan p = fftw_plan_dft_2d(N, N, scratch, scratch, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    plan_cache.emplace(key, p);
    return p;
}

}  // namespace

void forward(int N, std::complex<double>* data) {
    fftw_plan p = get_plan(N, FFTW_FORWARD);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data), reinterpret_cast<fftw_complex*>(data));
}

void backward(int N, std::complex<double>* data) {
    fftw_plan p = get_plan(N, FFTW_BACKWARD);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data), reinterpret_cast<fftw_complex*>(data));
}

}  // namespace fft
}  // namespace nsnudge
