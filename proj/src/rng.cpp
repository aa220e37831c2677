#include "mecauth/rng.hpp"

namespace mecauth {

void SeededRng::fill(std::span<uint8_t> out) {
    for (auto& b : out)
        b = static_cast<uint8_t>(engine_());
}

void SystemRng::fill(std::span<uint8_t> out) {
    for (auto& b : out)
        b = static_cast<uint8_t>(dev_());
}

mpz_class random_scalar(const CurveParams& curve, RandomSource& rng) {
    Bytes buf(curve.scalar_width());
    for (;;) {
        rng.fill(buf);
        mpz_class v;
        mpz_import(v.get_mpz_t(), buf.size(), 1, 1, 1, 0, buf.data());
        if (v != 0 && v < curve.order()) return v;
    }
}

}  // namespace mecauth
