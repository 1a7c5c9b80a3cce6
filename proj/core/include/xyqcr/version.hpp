#pragma once

#define XYQCR_VERSION_MAJOR 1
#define XYQCR_VERSION_MINOR 0
#define XYQCR_VERSION_PATCH 0
#define XYQCR_VERSION_STRING "1.0.0"

namespace xyqcr {
inline constexpr const char* version() { return XYQCR_VERSION_STRING; }
}
