#pragma once

#include "poisson_fields/errors.hpp"
#include "poisson_fields/model.hpp"
#include "poisson_fields/partitions.hpp"
#include "poisson_fields/sim.hpp"
#include "poisson_fields/specfun.hpp"
#include "poisson_fields/types.hpp"
#include "poisson_fields/verify.hpp"

namespace poisson_fields {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace poisson_fields
