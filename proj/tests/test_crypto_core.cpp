#include <doctest.h>

#include <map>
#include <set>

#include "mecauth/curve.hpp"
#include "mecauth/hash.hpp"
#include "mecauth/rng.hpp"
#include "toy_oracle.hpp"

using namespace mecauth;

namespace {

CurvePoint from_oracle(const toy_oracle::Point& p) {
    if (!p) return CurvePoint::identity();
    return CurvePoint::affine(p->first, p->second);
}

}  // namespace

TEST_CASE("toy curve group law matches brute-force table for all pairs") {
    const CurveParams& curve = CurveParams::toy17();
    auto pts = toy_oracle::enumerate_group();
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = 0; j < pts.size(); ++j) {
            CurvePoint sum = curve.add(from_oracle(pts[i]), from_oracle(pts[j]));
            CHECK(sum == from_oracle(toy_oracle::add(pts[i], pts[j])));
        }
}

TEST_CASE("toy curve scalar multiplication matches repeated addition") {
    const CurveParams& curve = CurveParams::toy17();
    auto pts = toy_oracle::enumerate_group();
    for (int64_t k = 0; k < toy_oracle::kOrder; ++k)
        for (const auto& p : pts)
            CHECK(curve.mul(k, from_oracle(p)) == from_oracle(toy_oracle::mul(k, p)));
}

TEST_CASE("point_mul spec vectors") {
    const CurveParams& curve = CurveParams::toy17();
    CHECK(curve.mul(0, curve.generator()).infinity);
    CHECK(curve.mul(2, curve.generator()) == CurvePoint::affine(6, 3));
    CHECK(curve.mul(19, curve.generator()).infinity);
}

TEST_CASE("point_add spec vectors") {
    const CurveParams& curve = CurveParams::toy17();
    CurvePoint g = curve.generator();
    CHECK(curve.add(g, CurvePoint::identity()) == g);
    CHECK(curve.add(g, g) == CurvePoint::affine(6, 3));
    CHECK(curve.add(g, CurvePoint::affine(5, 16)).infinity);
}

TEST_CASE("production curve group properties on random points") {
    const CurveParams& curve = CurveParams::secp256r1();
    SeededRng rng(7);
    for (int i = 0; i < 8; ++i) {
        mpz_class a = random_scalar(curve, rng);
        mpz_class b = random_scalar(curve, rng);
        CurvePoint pa = curve.mul(a, curve.generator());
        CurvePoint pb = curve.mul(b, curve.generator());
        CHECK(curve.on_curve(pa));
        // commutativity
        CHECK(curve.add(pa, pb) == curve.add(pb, pa));
        // associativity spot check with G
        CHECK(curve.add(curve.add(pa, pb), curve.generator()) ==
              curve.add(pa, curve.add(pb, curve.generator())));
        // (a+b)G = aG + bG
        mpz_class ab = (a + b) % curve.order();
        CHECK(curve.mul(ab, curve.generator()) == curve.add(pa, pb));
    }
}

TEST_CASE("h1 determinism, range, and pinned vectors") {
    const CurveParams& toy = CurveParams::toy17();
    const CurveParams& prod = CurveParams::secp256r1();
    Bytes abc{'a', 'b', 'c'};
    CHECK(h1(toy, abc) == h1(toy, abc));
    // pinned with an independent SHA-256 oracle (python hashlib)
    CHECK(h1(toy, abc) == 9);
    CHECK(h1(prod, abc) ==
          mpz_class("0x8d89def9bffb893465c5dc6c41aa7a7fc00d00054c6dab3ac7da0654fb254cf3"));
    SeededRng rng(3);
    for (int i = 0; i < 200; ++i) {
        Bytes data(16);
        rng.fill(data);
        CHECK(h1(prod, data) < prod.order());
        CHECK(h1(toy, data) < toy.order());
    }
}

TEST_CASE("h2 determinism, width, domain separation, pinned empty-input vector") {
    Bytes empty;
    CHECK(h2(empty) == h2(empty));
    CHECK(to_hex(h2(empty)) ==
          "ae1a64d34d1c58553d436923cc6eb2386a63892c0bdd3f1a924eb7f7a30ae975");
    // same payload under the h1 tag gives a different digest
    const CurveParams& prod = CurveParams::secp256r1();
    Bytes payload{'x'};
    Digest32 d2 = h2(payload);
    mpz_class v1 = h1(prod, payload);
    mpz_class v2;
    mpz_import(v2.get_mpz_t(), d2.size(), 1, 1, 1, 0, d2.data());
    mpz_class v2_mod;
    mpz_mod(v2_mod.get_mpz_t(), v2.get_mpz_t(), prod.order().get_mpz_t());
    CHECK(v1 != v2_mod);
}

TEST_CASE("mask32 vectors") {
    const CurveParams& curve = CurveParams::toy17();
    CHECK(mask32(curve, curve.generator()) == mask32(curve, curve.generator()));
    CHECK(mask32(curve, curve.generator()) !=
          mask32(curve, curve.mul(2, curve.generator())));
    CHECK(to_hex(mask32(curve, CurvePoint::identity())) ==
          "f59a3227c7f5bf271cf896b046ddd34e25a37b61959e4020673da4c9b437fcf4");
    // independent oracle values for G and 2G
    CHECK(to_hex(mask32(curve, curve.generator())) ==
          "9d798269505cf91e1704fef7f051c12e4b614cc1a6ea0edb6b43eeea778749aa");
    CHECK(to_hex(mask32(curve, curve.mul(2, curve.generator()))) ==
          "989499dd6df5c8c9dce960a6da0bb6d21453ddf9b1c9e7fd79ba8b6011d47574");
}

TEST_CASE("point encoding round-trips and rejects malformed input") {
    const CurveParams& toy = CurveParams::toy17();
    CHECK(toy.encode_point(CurvePoint::identity()) == Bytes{0x00});
    CHECK(toy.encode_point(toy.generator()) == Bytes{0x03, 0x05});
    CHECK(toy.decode_point(toy.encode_point(toy.generator())) == toy.generator());

    const CurveParams& prod = CurveParams::secp256r1();
    SeededRng rng(11);
    for (int i = 0; i < 1000; ++i) {
        CurvePoint pt = prod.mul(random_scalar(prod, rng), prod.generator());
        Bytes enc = prod.encode_point(pt);
        CHECK(enc.size() == prod.point_width());
        CHECK(prod.decode_point(enc) == pt);
    }
    // decoder never crashes on noise
    size_t rejected = 0;
    for (int i = 0; i < 1000; ++i) {
        Bytes noise(i % 40);
        rng.fill(noise);
        try {
            CurvePoint pt = prod.decode_point(noise);
            CHECK(prod.on_curve(pt));
        } catch (const MalformedPointError&) {
            ++rejected;
        }
    }
    CHECK(rejected > 900);  // nearly all random strings are invalid
    CHECK_THROWS_AS(prod.decode_point(Bytes{0x02}), MalformedPointError);
    Bytes big(prod.point_width(), 0xff);
    big[0] = 0x02;
    CHECK_THROWS_AS(prod.decode_point(big), MalformedPointError);
}

TEST_CASE("random_scalar determinism and distribution") {
    const CurveParams& toy = CurveParams::toy17();
    SeededRng a(1), b(1), c(2);
    CHECK(random_scalar(toy, a) == random_scalar(toy, b));
    bool differ = false;
    for (int i = 0; i < 4; ++i) {
        SeededRng a2(1), c2(2 + i);
        if (random_scalar(toy, a2) != random_scalar(toy, c2)) differ = true;
    }
    CHECK(differ);

    // chi-square over q-1 = 18 bins, 10^4 draws
    SeededRng rng(99);
    std::map<long, long> counts;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        mpz_class v = random_scalar(toy, rng);
        CHECK(v >= 1);
        CHECK(v <= 18);
        counts[v.get_si()]++;
    }
    double expected = draws / 18.0;
    double chi2 = 0;
    for (long bin = 1; bin <= 18; ++bin) {
        double d = counts[bin] - expected;
        chi2 += d * d / expected;
    }
    // 17 degrees of freedom; mean 17, sd sqrt(34) ~ 5.8; 5 sigma ~ 46
    CHECK(chi2 < 46.0);
}

TEST_CASE("scalar canonical encoding widths") {
    const CurveParams& toy = CurveParams::toy17();
    const CurveParams& prod = CurveParams::secp256r1();
    CHECK(toy.scalar_width() == 1);
    CHECK(prod.scalar_width() == 32);
    CHECK(toy.encode_scalar(5) == Bytes{0x05});
    CHECK(prod.decode_scalar(prod.encode_scalar(12345)) == 12345);
    CHECK_THROWS(prod.decode_scalar(Bytes(31, 0)));
    // scalar32 lane round-trip and range rejection
    CHECK(toy.unscalar32(toy.scalar32(13)) == 13);
    Digest32 lane{};
    lane[31] = 19;  // == q on the toy curve
    CHECK_THROWS(toy.unscalar32(lane));
}

TEST_CASE("curve parameter validation") {
    // singular curve: 4a^3 + 27b^2 == 0 mod p
    CHECK_THROWS(CurveParams("bad", 17, 0, 0, 5, 1, 19));
    // generator off curve
    CHECK_THROWS(CurveParams("bad", 17, 2, 2, 5, 2, 19));
    // composite order
    CHECK_THROWS(CurveParams("bad", 17, 2, 2, 5, 1, 18));
}
