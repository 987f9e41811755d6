#pragma once

namespace funque {

// Recorded in feature-cache sidecars so stale caches can be detected.
inline constexpr const char* kCodeVersion = "0.1.0";

}  // namespace funque
