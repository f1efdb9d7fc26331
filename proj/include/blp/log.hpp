#pragma once

#include <spdlog/spdlog.h>

namespace blp {

// Library logger writing to stderr. Level comes from BLP_LOG
// (trace, debug, info, warn, error, off); default is warn.
spdlog::logger& logger();

}  // namespace blp
