#pragma once

#include "mecauth/bytes.hpp"
#include "mecauth/curve.hpp"

namespace mecauth {

// Raw SHA-256, no domain tag. Building block for h1/h2.
Digest32 sha256(std::span<const uint8_t> data);

// Hash into Z_q: SHA-256 over "H1" || data, reduced mod the curve order.
mpz_class h1(const CurveParams& curve, std::span<const uint8_t> data);

// 32-byte digest, domain-separated from h1: SHA-256 over "H2" || data.
Digest32 h2(std::span<const uint8_t> data);

// Uniform 32-byte mask derived from a group element; stands in for the
// protocol's XOR-with-a-point so all XOR operands share one width.
Digest32 mask32(const CurveParams& curve, const CurvePoint& pt);

}  // namespace mecauth
