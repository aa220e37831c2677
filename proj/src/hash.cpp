#include "mecauth/hash.hpp"

#include <openssl/sha.h>

namespace mecauth {

Digest32 sha256(std::span<const uint8_t> data) {
    Digest32 out;
    SHA256(data.data(), data.size(), out.data());
    return out;
}

namespace {
Digest32 tagged_sha256(std::string_view tag, std::span<const uint8_t> data) {
    Bytes buf;
    buf.reserve(tag.size() + data.size());
    buf.insert(buf.end(), tag.begin(), tag.end());
    append(buf, data);
    return sha256(buf);
}
}  // namespace

mpz_class h1(const CurveParams& curve, std::span<const uint8_t> data) {
    Digest32 d = tagged_sha256("H1", data);
    mpz_class v;
    mpz_import(v.get_mpz_t(), d.size(), 1, 1, 1, 0, d.data());
    mpz_class r;
    mpz_mod(r.get_mpz_t(), v.get_mpz_t(), curve.order().get_mpz_t());
    return r;
}

Digest32 h2(std::span<const uint8_t> data) {
    return tagged_sha256("H2", data);
}

Digest32 mask32(const CurveParams& curve, const CurvePoint& pt) {
    Bytes buf{'M', 'A', 'S', 'K'};
    append(buf, curve.encode_point(pt));
    return h2(buf);
}

}  // namespace mecauth
