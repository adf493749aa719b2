#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#include "shearstab/profiles.hpp"
#include "shearstab/spectral.hpp"

namespace shearstab {

// Runs f(i) for i in [0, n), across OpenMP threads when parallel is set.
// The first exception thrown by any iteration is rethrown after the loop.
template <class F>
void parallel_for(std::size_t n, bool parallel, F&& f) {
  std::exception_ptr error;
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long i = 0; i < count; ++i) {
    try {
      f(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(shearstab_parallel_for)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

int worker_threads();

// max Im(c) of the Orr-Sommerfeld spectrum over a list of (alpha, Re)
// points. The serial path is the reference for the parallel one.
std::vector<double> os_growth_sweep(const ShearProfile& profile, const std::vector<double>& alphas,
                                    const std::vector<double>& Res, const SpectralDiscretization& grid,
                                    bool parallel);

}  // namespace shearstab
