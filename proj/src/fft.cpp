#include "snls/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace snls {

namespace {

std::mutex planner_mutex;  // FFTW planner is not thread-safe

class PlanPair {
  public:
    explicit PlanPair(int n) : n_(n) {
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        if (!buf_) throw std::bad_alloc();
        std::lock_guard<std::mutex> lock(planner_mutex);
        fwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~PlanPair() {
        std::lock_guard<std::mutex> lock(planner_mutex);
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }
    PlanPair(const PlanPair&) = delete;
    PlanPair& operator=(const PlanPair&) = delete;

    void run(std::vector<cdouble>& data, bool forward) {
        for (int j = 0; j < n_; ++j) {
            buf_[j][0] = data[j].real();
            buf_[j][1] = data[j].imag();
        }
        fftw_execute(forward ? fwd_ : bwd_);
        const double scale = forward ? 1.0 : 1.0 / n_;
        for (int j = 0; j < n_; ++j) {
            data[j] = cdouble(buf_[j][0] * scale, buf_[j][1] * scale);
        }
    }

  private:
    int n_;
    fftw_complex* buf_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

PlanPair& plans_for(int n) {
    thread_local std::map<int, std::unique_ptr<PlanPair>> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, std::make_unique<PlanPair>(n)).first;
    }
    return *it->second;
}

}  // namespace

void fft_forward_inplace(std::vector<cdouble>& data) {
    plans_for(static_cast<int>(data.size())).run(data, true);
}

void fft_inverse_inplace(std::vector<cdouble>& data) {
    plans_for(static_cast<int>(data.size())).run(data, false);
}

std::vector<cdouble> fft_forward(const std::vector<cdouble>& in) {
    std::vector<cdouble> out = in;
    fft_forward_inplace(out);
    return out;
}

std::vector<cdouble> fft_inverse(const std::vector<cdouble>& in) {
    std::vector<cdouble> out = in;
    fft_inverse_inplace(out);
    return out;
}

}  // namespace snls
