#pragma once

#include <cstdlib>
#include <string>

namespace pflab {

// Resource limits for ring construction and lattice enumeration.
// Exhaustive scans are quadratic (or worse) in ring size, so everything
// that can blow up is gated by one of these.
struct Caps {
    int size_cap = 4096;           // max elements per constructed ring
    int ideal_cap = 512;           // max ideals enumerated per lattice
    int table_cap = 1024;          // rings up to this size get cached op tables
    int witness_cap = 64;          // success witness maps kept for rings <= this
};

inline const Caps& default_caps() {
    static const Caps caps{};
    return caps;
}

// Honors PFLAB_SIZE_CAP when set; everything else stays at defaults.
inline Caps caps_from_env() {
    Caps caps;
    if (const char* env = std::getenv("PFLAB_SIZE_CAP")) {
        try {
            int v = std::stoi(env);
            if (v > 0) caps.size_cap = v;
        } catch (...) {
            // unparsable value: keep default
        }
    }
    return caps;
}

} // namespace pflab
