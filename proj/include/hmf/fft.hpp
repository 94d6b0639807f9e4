#pragma once

#include <complex>
#include <map>
#include <mutex>

#include <fftw3.h>

namespace hmf::fft {

// Cached FFTW plans, one per (size, direction).  Plan creation is serialized
// behind a mutex (FFTW planning is not thread safe); execution through
// fftw_execute_dft on caller-owned arrays is.  Plans are created with
// FFTW_ESTIMATE | FFTW_UNALIGNED so they accept any std::vector storage.
class PlanCache {
public:
    static PlanCache &instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(int n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<std::complex<double>> buf(static_cast<std::size_t>(n));
        auto *p = reinterpret_cast<fftw_complex *>(buf.data());
        fftw_plan plan = fftw_plan_dft_1d(n, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

// In-place unnormalized DFT: out[k] = sum_j in[j] e^{-2pi i jk/n} (forward).
inline void dft(std::complex<double> *data, int n, int sign) {
    fftw_plan plan = PlanCache::instance().get(n, sign);
    auto *p = reinterpret_cast<fftw_complex *>(data);
    fftw_execute_dft(plan, p, p);
}

inline void forward(std::complex<double> *data, int n) { dft(data, n, FFTW_FORWARD); }
inline void backward(std::complex<double> *data, int n) { dft(data, n, FFTW_BACKWARD); }

} // namespace hmf::fft
