#include "ztransform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace hallmhd::detail {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class BatchedPlan {
 public:
  BatchedPlan(int nr, int nz) : nr_(nr), nz_(nz), nmodes_(nz / 2 + 1) {
    real_ = fftw_alloc_real(static_cast<std::size_t>(nr) * nz);
    spec_ = fftw_alloc_complex(static_cast<std::size_t>(nr) * nmodes_);
    std::lock_guard lock(planner_mutex());
    int n[] = {nz};
    fwd_ = fftw_plan_many_dft_r2c(1, n, nr, real_, nullptr, 1, nz, spec_, nullptr, 1, nmodes_, FFTW_ESTIMATE);
    bwd_ = fftw_plan_many_dft_c2r(1, n, nr, spec_, nullptr, 1, nmodes_, real_, nullptr, 1, nz, FFTW_ESTIMATE);
  }
  ~BatchedPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(real_);
    fftw_free(spec_);
  }
  BatchedPlan(const BatchedPlan&) = delete;
  BatchedPlan& operator=(const BatchedPlan&) = delete;

  ZSpectrum forward(const ScalarField& f) {
    auto v = f.values();
    std::copy(v.begin(), v.end(), real_);
    fftw_execute(fwd_);
    ZSpectrum s{nr_, nmodes_, {}};
    s.data.resize(static_cast<std::size_t>(nr_) * nmodes_);
    for (std::size_t k = 0; k < s.data.size(); ++k) s.data[k] = {spec_[k][0], spec_[k][1]};
    return s;
  }

  ScalarField inverse(const ZSpectrum& s, const GridSpec& grid, Parity parity) {
    for (std::size_t k = 0; k < s.data.size(); ++k) {
      spec_[k][0] = s.data[k].real();
      spec_[k][1] = s.data[k].imag();
    }
    fftw_execute(bwd_);
    ScalarField out(grid, parity);
    auto v = out.values();
    const double norm = 1.0 / nz_;
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = real_[k] * norm;
    return out;
  }

 private:
  int nr_;
  int nz_;
  int nmodes_;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

BatchedPlan& plan_for(int nr, int nz) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<BatchedPlan>> cache;
  auto& slot = cache[{nr, nz}];
  if (!slot) slot = std::make_unique<BatchedPlan>(nr, nz);
  return *slot;
}

}  // namespace

ZSpectrum forward_z(const ScalarField& f) { return plan_for(f.grid().nr, f.grid().nz).forward(f); }

ScalarField inverse_z(const ZSpectrum& s, const GridSpec& grid, Parity parity) {
  return plan_for(grid.nr, grid.nz).inverse(s, grid, parity);
}

}  // namespace hallmhd::detail
