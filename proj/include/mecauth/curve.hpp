#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

#include "mecauth/bytes.hpp"

namespace mecauth {

class MalformedPointError : public std::runtime_error {
  public:
    explicit MalformedPointError(const std::string& what) : std::runtime_error(what) {}
};

// Affine point; x/y are meaningless when infinity is set.
struct CurvePoint {
    mpz_class x;
    mpz_class y;
    bool infinity = true;

    static CurvePoint identity() { return CurvePoint{}; }
    static CurvePoint affine(mpz_class px, mpz_class py) {
        return CurvePoint{std::move(px), std::move(py), false};
    }

    bool operator==(const CurvePoint& o) const {
        if (infinity || o.infinity) return infinity == o.infinity;
        return x == o.x && y == o.y;
    }
};

// Short Weierstrass curve y^2 = x^3 + ax + b over F_p with prime group order q.
class CurveParams {
  public:
    CurveParams(std::string name, const mpz_class& p, const mpz_class& a, const mpz_class& b,
                const mpz_class& gx, const mpz_class& gy, const mpz_class& q);

    const std::string& name() const { return name_; }
    const mpz_class& p() const { return p_; }
    const mpz_class& a() const { return a_; }
    const mpz_class& b() const { return b_; }
    const mpz_class& order() const { return q_; }
    const CurvePoint& generator() const { return gen_; }

    size_t scalar_width() const { return scalar_width_; }   // bytes of canonical scalar
    size_t coord_width() const { return coord_width_; }     // bytes of an x coordinate
    size_t point_width() const { return coord_width_ + 1; } // compressed encoding size

    bool on_curve(const CurvePoint& pt) const;

    CurvePoint add(const CurvePoint& p1, const CurvePoint& p2) const;
    CurvePoint mul(const mpz_class& k, const CurvePoint& pt) const;
    CurvePoint negate(const CurvePoint& pt) const;

    // Compressed encoding: 0x00 for identity, else 02/03 parity prefix + big-endian x.
    Bytes encode_point(const CurvePoint& pt) const;
    CurvePoint decode_point(std::span<const uint8_t> bytes) const;

    // Fixed-width big-endian scalar encoding; value must be in [0, q).
    Bytes encode_scalar(const mpz_class& s) const;
    mpz_class decode_scalar(std::span<const uint8_t> bytes) const;

    // Scalar left-padded into the 32-byte XOR lane used by the handshake token.
    Digest32 scalar32(const mpz_class& s) const;
    // Inverse of scalar32; rejects values >= q.
    mpz_class unscalar32(const Digest32& lane) const;

    static const CurveParams& secp256r1();
    static const CurveParams& toy17();
    static const CurveParams& by_name(const std::string& name);

  private:
    std::string name_;
    mpz_class p_, a_, b_, q_;
    CurvePoint gen_;
    size_t scalar_width_;
    size_t coord_width_;
};

}  // namespace mecauth
