#pragma once

#include "config.hpp"

namespace shearstab::cli {

Table run_spectrum(const Params& p);
Table run_neutral_curve(const Params& p);
Table run_resolvent(const Params& p);
Table run_heat_kernel(const Params& p);
Table run_semigroup(const Params& p);
Table run_genfunc_check(const Params& p);
Table run_instability(const Params& p);

}  // namespace shearstab::cli
