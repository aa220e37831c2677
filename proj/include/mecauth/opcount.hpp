#pragma once

#include <cstdint>

namespace mecauth {

// Live tallies for one handshake side. mask/kdf-tagged H2 calls are tracked
// separately so the plain-token hash count lines up with the symbolic model.
struct OpCounter {
    uint32_t scalar_muls = 0;
    uint32_t point_adds = 0;
    uint32_t h1_calls = 0;
    uint32_t h2_plain = 0;
    uint32_t h2_mask = 0;
    uint32_t h2_kdf = 0;

    void reset() { *this = OpCounter{}; }
};

}  // namespace mecauth
