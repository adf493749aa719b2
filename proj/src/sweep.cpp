#include "shearstab/sweep.hpp"

#include <omp.h>

#include "shearstab/errors.hpp"
#include "shearstab/stability.hpp"

namespace shearstab {

int worker_threads() { return omp_get_max_threads(); }

std::vector<double> os_growth_sweep(const ShearProfile& profile, const std::vector<double>& alphas,
                                    const std::vector<double>& Res, const SpectralDiscretization& grid,
                                    bool parallel) {
  if (alphas.size() != Res.size()) fail(ErrorKind::Input, "alpha and Re lists differ in length");
  std::vector<double> out(alphas.size());
  parallel_for(alphas.size(), parallel,
               [&](std::size_t i) { out[i] = os_max_growth(profile, alphas[i], Res[i], grid); });
  return out;
}

}  // namespace shearstab
