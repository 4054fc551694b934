#pragma once

// Umbrella header for the numerical library. Serialization lives in
// report.hpp, which additionally needs the vendored json.hpp.

#include "sharpent/constants.hpp"
#include "sharpent/error.hpp"
#include "sharpent/euclidean.hpp"
#include "sharpent/gn_estimator.hpp"
#include "sharpent/hypercontractivity.hpp"
#include "sharpent/manifold.hpp"
#include "sharpent/minimizer.hpp"
#include "sharpent/profiles.hpp"
#include "sharpent/random.hpp"
#include "sharpent/special_fn.hpp"

namespace sharpent {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sharpent
