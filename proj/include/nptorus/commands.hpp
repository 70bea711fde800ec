#pragma once

#include "nptorus/run_config.hpp"

namespace nptorus::cli {

int cmd_geometry_check(const RunConfig& cfg);
int cmd_numrange(const RunConfig& cfg);
int cmd_spectrum(const RunConfig& cfg);
int cmd_asymptotics(const RunConfig& cfg);
int cmd_convergence(const RunConfig& cfg);

}  // namespace nptorus::cli
