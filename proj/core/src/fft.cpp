#include "detail/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace ridk::detail {

namespace {

// Plans are created once per (d, M, direction) and reused.  FFTW's planner is
// not thread-safe, so creation is serialised; execution through the new-array
// interface is.
class PlanRegistry {
 public:
  ~PlanRegistry() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(const TorusGrid& grid, int sign) {
    const auto key = std::make_tuple(grid.dim(), grid.points(), sign);
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    std::vector<int> n(static_cast<std::size_t>(grid.dim()), grid.points());
    auto* a = fftw_alloc_complex(grid.size());
    auto* b = fftw_alloc_complex(grid.size());
    fftw_plan plan = fftw_plan_dft(grid.dim(), n.data(), a, b, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(a);
    fftw_free(b);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanRegistry& registry() {
  static PlanRegistry instance;
  return instance;
}

void execute(const TorusGrid& grid, int sign, const std::complex<double>* in,
             std::complex<double>* out) {
  fftw_plan plan = registry().get(grid, sign);
  // FFTW never writes to the input of an out-of-place complex transform.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in));
  fftw_execute_dft(plan, src, reinterpret_cast<fftw_complex*>(out));
}

}  // namespace

void fft_forward(const TorusGrid& grid, const std::complex<double>* in, std::complex<double>* out) {
  execute(grid, FFTW_FORWARD, in, out);
}

void fft_backward(const TorusGrid& grid, const std::complex<double>* in, std::complex<double>* out) {
  execute(grid, FFTW_BACKWARD, in, out);
}

}  // namespace ridk::detail
