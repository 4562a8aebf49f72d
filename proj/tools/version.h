#ifndef LORENZ5_TOOLS_VERSION_H
#define LORENZ5_TOOLS_VERSION_H

#ifndef LORENZ5_VERSION
#define LORENZ5_VERSION "0.0.0"
#endif

namespace lorenz5::cli {
inline constexpr const char* kVersion = LORENZ5_VERSION;
}

#endif // LORENZ5_TOOLS_VERSION_H
