#pragma once

#include <memory>
#include <random>

#include "mecauth/curve.hpp"

namespace mecauth {

class RandomSource {
  public:
    virtual ~RandomSource() = default;
    virtual void fill(std::span<uint8_t> out) = 0;
};

// Deterministic stream for tests and reproducible simulations.
class SeededRng : public RandomSource {
  public:
    explicit SeededRng(uint64_t seed) : engine_(seed) {}
    void fill(std::span<uint8_t> out) override;

  private:
    std::mt19937_64 engine_;
};

// OS entropy.
class SystemRng : public RandomSource {
  public:
    void fill(std::span<uint8_t> out) override;

  private:
    std::random_device dev_;
};

// Uniform scalar in [1, q-1] by rejection sampling; never zero.
mpz_class random_scalar(const CurveParams& curve, RandomSource& rng);

}  // namespace mecauth
