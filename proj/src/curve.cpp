#include "mecauth/curve.hpp"

#include <cassert>

namespace mecauth {

namespace {

size_t byte_width(const mpz_class& v) {
    size_t bits = mpz_sizeinbase(v.get_mpz_t(), 2);
    return (bits + 7) / 8;
}

Bytes to_be_fixed(const mpz_class& v, size_t width) {
    Bytes out(width, 0);
    if (v == 0) return out;
    size_t bytes = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
    assert(bytes <= width);
    size_t count = 0;
    mpz_export(out.data() + (width - bytes), &count, 1, 1, 1, 0, v.get_mpz_t());
    assert(count == bytes);
    return out;
}

mpz_class from_be(std::span<const uint8_t> bytes) {
    mpz_class v;
    if (!bytes.empty())
        mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
    return v;
}

// Jacobian coordinates (X, Y, Z): x = X/Z^2, y = Y/Z^3. Used only inside mul.
struct Jac {
    mpz_class X, Y, Z;  // Z == 0 encodes the identity
};

struct Fp {
    const mpz_class& p;
    mpz_class mul(const mpz_class& a, const mpz_class& b) const {
        mpz_class r = a * b;
        mpz_mod(r.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t());
        return r;
    }
    mpz_class sq(const mpz_class& a) const { return mul(a, a); }
    mpz_class sub(const mpz_class& a, const mpz_class& b) const {
        mpz_class r = a - b;
        mpz_mod(r.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t());
        return r;
    }
    mpz_class add(const mpz_class& a, const mpz_class& b) const {
        mpz_class r = a + b;
        mpz_mod(r.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t());
        return r;
    }
};

Jac jac_double(const Jac& pt, const Fp& f, const mpz_class& a) {
    if (pt.Z == 0 || pt.Y == 0) return {0, 1, 0};
    mpz_class XX = f.sq(pt.X);
    mpz_class YY = f.sq(pt.Y);
    mpz_class YYYY = f.sq(YY);
    mpz_class ZZ = f.sq(pt.Z);
    mpz_class S = f.mul(4, f.mul(pt.X, YY));
    mpz_class M = f.add(f.mul(3, XX), f.mul(a, f.sq(ZZ)));
    mpz_class X3 = f.sub(f.sq(M), f.mul(2, S));
    mpz_class Y3 = f.sub(f.mul(M, f.sub(S, X3)), f.mul(8, YYYY));
    mpz_class Z3 = f.mul(2, f.mul(pt.Y, pt.Z));
    return {X3, Y3, Z3};
}

// Mixed addition: q2 is affine (Z = 1).
Jac jac_add_affine(const Jac& p1, const CurvePoint& p2, const Fp& f, const mpz_class& a) {
    if (p2.infinity) return p1;
    if (p1.Z == 0) return {p2.x, p2.y, 1};
    mpz_class Z1Z1 = f.sq(p1.Z);
    mpz_class U2 = f.mul(p2.x, Z1Z1);
    mpz_class S2 = f.mul(p2.y, f.mul(p1.Z, Z1Z1));
    if (U2 == p1.X) {
        if (S2 == p1.Y) return jac_double(p1, f, a);
        return {0, 1, 0};
    }
    mpz_class H = f.sub(U2, p1.X);
    mpz_class HH = f.sq(H);
    mpz_class HHH = f.mul(H, HH);
    mpz_class R = f.sub(S2, p1.Y);
    mpz_class V = f.mul(p1.X, HH);
    mpz_class X3 = f.sub(f.sub(f.sq(R), HHH), f.mul(2, V));
    mpz_class Y3 = f.sub(f.mul(R, f.sub(V, X3)), f.mul(p1.Y, HHH));
    mpz_class Z3 = f.mul(p1.Z, H);
    return {X3, Y3, Z3};
}

// Square root mod an odd prime: (p+1)/4 shortcut when p = 3 (mod 4),
// Tonelli-Shanks otherwise. nullopt when n is a non-residue.
std::optional<mpz_class> sqrt_mod(const mpz_class& n, const mpz_class& p) {
    if (n == 0) return mpz_class(0);
    if (mpz_legendre(n.get_mpz_t(), p.get_mpz_t()) != 1) return std::nullopt;
    mpz_class r;
    if (p % 4 == 3) {
        mpz_class exp = (p + 1) / 4;
        mpz_powm(r.get_mpz_t(), n.get_mpz_t(), exp.get_mpz_t(), p.get_mpz_t());
        return r;
    }
    mpz_class q = p - 1;
    unsigned long s = 0;
    while (mpz_even_p(q.get_mpz_t())) {
        q >>= 1;
        ++s;
    }
    mpz_class z = 2;
    while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) ++z;
    mpz_class c, t;
    mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    mpz_powm(t.get_mpz_t(), n.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    mpz_class exp = (q + 1) / 2;
    mpz_powm(r.get_mpz_t(), n.get_mpz_t(), exp.get_mpz_t(), p.get_mpz_t());
    unsigned long m = s;
    while (t != 1) {
        mpz_class t2 = t;
        unsigned long i = 0;
        while (t2 != 1) {
            t2 = t2 * t2 % p;
            ++i;
        }
        mpz_class b = c;
        for (unsigned long j = 0; j + i + 1 < m; ++j) b = b * b % p;
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    return r;
}

CurvePoint jac_to_affine(const Jac& pt, const mpz_class& p) {
    if (pt.Z == 0) return CurvePoint::identity();
    Fp f{p};
    mpz_class zinv;
    mpz_invert(zinv.get_mpz_t(), pt.Z.get_mpz_t(), p.get_mpz_t());
    mpz_class zinv2 = f.sq(zinv);
    return CurvePoint::affine(f.mul(pt.X, zinv2), f.mul(pt.Y, f.mul(zinv2, zinv)));
}

}  // namespace

CurveParams::CurveParams(std::string name, const mpz_class& p, const mpz_class& a,
                         const mpz_class& b, const mpz_class& gx, const mpz_class& gy,
                         const mpz_class& q)
    : name_(std::move(name)), p_(p), a_(a), b_(b), q_(q),
      gen_(CurvePoint::affine(gx, gy)),
      scalar_width_(byte_width(q)),
      coord_width_(byte_width(p)) {
    mpz_class disc = 4 * a * a * a + 27 * b * b;
    mpz_mod(disc.get_mpz_t(), disc.get_mpz_t(), p_.get_mpz_t());
    if (disc == 0) throw std::invalid_argument("singular curve");
    if (!on_curve(gen_)) throw std::invalid_argument("generator not on curve");
    if (mpz_probab_prime_p(q_.get_mpz_t(), 30) == 0)
        throw std::invalid_argument("group order not prime");
    if (!mul(q_, gen_).infinity) throw std::invalid_argument("generator order mismatch");
}

bool CurveParams::on_curve(const CurvePoint& pt) const {
    if (pt.infinity) return true;
    if (pt.x < 0 || pt.x >= p_ || pt.y < 0 || pt.y >= p_) return false;
    Fp f{p_};
    mpz_class lhs = f.sq(pt.y);
    mpz_class rhs = f.add(f.add(f.mul(f.sq(pt.x), pt.x), f.mul(a_, pt.x)), b_);
    return lhs == rhs;
}

CurvePoint CurveParams::negate(const CurvePoint& pt) const {
    if (pt.infinity) return pt;
    mpz_class ny = (p_ - pt.y) % p_;
    return CurvePoint::affine(pt.x, ny);
}

CurvePoint CurveParams::add(const CurvePoint& p1, const CurvePoint& p2) const {
    if (p1.infinity) return p2;
    if (p2.infinity) return p1;
    Fp f{p_};
    mpz_class lam;
    if (p1.x == p2.x) {
        if (f.add(p1.y, p2.y) == 0) return CurvePoint::identity();
        // doubling
        mpz_class denom_inv;
        mpz_class denom = f.mul(2, p1.y);
        mpz_invert(denom_inv.get_mpz_t(), denom.get_mpz_t(), p_.get_mpz_t());
        lam = f.mul(f.add(f.mul(3, f.sq(p1.x)), a_), denom_inv);
    } else {
        mpz_class denom_inv;
        mpz_class denom = f.sub(p2.x, p1.x);
        mpz_invert(denom_inv.get_mpz_t(), denom.get_mpz_t(), p_.get_mpz_t());
        lam = f.mul(f.sub(p2.y, p1.y), denom_inv);
    }
    mpz_class x3 = f.sub(f.sub(f.sq(lam), p1.x), p2.x);
    mpz_class y3 = f.sub(f.mul(lam, f.sub(p1.x, x3)), p1.y);
    return CurvePoint::affine(x3, y3);
}

CurvePoint CurveParams::mul(const mpz_class& k, const CurvePoint& pt) const {
    if (k < 0) throw std::invalid_argument("negative scalar");
    const mpz_class& e = k;
    if (e == 0 || pt.infinity) return CurvePoint::identity();
    Fp f{p_};
    Jac acc{0, 1, 0};
    long bits = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2));
    for (long i = bits - 1; i >= 0; --i) {
        acc = jac_double(acc, f, a_);
        if (mpz_tstbit(e.get_mpz_t(), i))
            acc = jac_add_affine(acc, pt, f, a_);
    }
    return jac_to_affine(acc, p_);
}

Bytes CurveParams::encode_point(const CurvePoint& pt) const {
    if (pt.infinity) return Bytes{0x00};
    Bytes out;
    out.reserve(point_width());
    out.push_back(mpz_odd_p(pt.y.get_mpz_t()) ? 0x03 : 0x02);
    Bytes xb = to_be_fixed(pt.x, coord_width_);
    append(out, xb);
    return out;
}

CurvePoint CurveParams::decode_point(std::span<const uint8_t> bytes) const {
    if (bytes.size() == 1 && bytes[0] == 0x00) return CurvePoint::identity();
    if (bytes.size() != point_width())
        throw MalformedPointError("bad point encoding length");
    if (bytes[0] != 0x02 && bytes[0] != 0x03)
        throw MalformedPointError("bad point prefix");
    mpz_class x = from_be(bytes.subspan(1));
    if (x >= p_) throw MalformedPointError("x out of field range");
    Fp f{p_};
    mpz_class rhs = f.add(f.add(f.mul(f.sq(x), x), f.mul(a_, x)), b_);
    std::optional<mpz_class> y = sqrt_mod(rhs, p_);
    if (!y) throw MalformedPointError("x not on curve");
    bool want_odd = (bytes[0] == 0x03);
    if ((mpz_odd_p(y->get_mpz_t()) != 0) != want_odd)
        *y = (p_ - *y) % p_;
    return CurvePoint::affine(x, *y);
}

Bytes CurveParams::encode_scalar(const mpz_class& s) const {
    if (s < 0 || s >= q_) throw std::invalid_argument("scalar out of range");
    return to_be_fixed(s, scalar_width_);
}

mpz_class CurveParams::decode_scalar(std::span<const uint8_t> bytes) const {
    if (bytes.size() != scalar_width_)
        throw std::invalid_argument("bad scalar encoding length");
    mpz_class v = from_be(bytes);
    if (v >= q_) throw std::invalid_argument("scalar out of range");
    return v;
}

Digest32 CurveParams::scalar32(const mpz_class& s) const {
    if (s < 0 || s >= q_) throw std::invalid_argument("scalar out of range");
    Bytes be = to_be_fixed(s, 32);
    Digest32 out;
    std::copy(be.begin(), be.end(), out.begin());
    return out;
}

mpz_class CurveParams::unscalar32(const Digest32& lane) const {
    mpz_class v = from_be(lane);
    if (v >= q_) throw std::invalid_argument("scalar out of range");
    return v;
}

const CurveParams& CurveParams::secp256r1() {
    static const CurveParams curve(
        "secp256r1",
        mpz_class("0xffffffff00000001000000000000000000000000ffffffffffffffffffffffff"),
        mpz_class("0xffffffff00000001000000000000000000000000fffffffffffffffffffffffc"),
        mpz_class("0x5ac635d8aa3a93e7b3ebbd55769886bc651d06b0cc53b0f63bce3c3e27d2604b"),
        mpz_class("0x6b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296"),
        mpz_class("0x4fe342e2fe1a7f9b8ee7eb4a7c0f9e162bce33576b315ececbb6406837bf51f5"),
        mpz_class("0xffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551"));
    return curve;
}

const CurveParams& CurveParams::toy17() {
    static const CurveParams curve("toy17", 17, 2, 2, 5, 1, 19);
    return curve;
}

const CurveParams& CurveParams::by_name(const std::string& name) {
    if (name == "secp256r1") return secp256r1();
    if (name == "toy17") return toy17();
    throw std::invalid_argument("unknown curve: " + name);
}

}  // namespace mecauth
