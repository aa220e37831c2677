#pragma once

// Independent brute-force oracle for the 19-element group of
// y^2 = x^3 + 2x + 2 over F_17, generator (5,1). Plain int64 arithmetic,
// no dependency on the library's field or group code.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace toy_oracle {

constexpr int64_t kP = 17;
constexpr int64_t kA = 2;
constexpr int64_t kOrder = 19;

using Point = std::optional<std::pair<int64_t, int64_t>>;  // nullopt = identity

inline int64_t mod(int64_t v) { return ((v % kP) + kP) % kP; }

inline int64_t inv(int64_t v) {
    // Fermat, kP prime
    int64_t result = 1, base = mod(v), exp = kP - 2;
    while (exp) {
        if (exp & 1) result = mod(result * base);
        base = mod(base * base);
        exp >>= 1;
    }
    return result;
}

inline Point add(const Point& p, const Point& q) {
    if (!p) return q;
    if (!q) return p;
    auto [x1, y1] = *p;
    auto [x2, y2] = *q;
    if (x1 == x2 && mod(y1 + y2) == 0) return std::nullopt;
    int64_t lam;
    if (x1 == x2 && y1 == y2)
        lam = mod((3 * x1 * x1 + kA) * inv(2 * y1));
    else
        lam = mod((y2 - y1) * inv(x2 - x1));
    int64_t x3 = mod(lam * lam - x1 - x2);
    int64_t y3 = mod(lam * (x1 - x3) - y1);
    return {{x3, y3}};
}

inline Point mul(int64_t k, const Point& p) {
    Point acc = std::nullopt;
    for (int64_t i = 0; i < k; ++i) acc = add(acc, p);
    return acc;
}

// all group elements: index i holds i*(5,1)
inline std::vector<Point> enumerate_group() {
    std::vector<Point> pts{std::nullopt};
    Point g{{5, 1}};
    Point acc = g;
    for (int64_t i = 1; i < kOrder; ++i) {
        pts.push_back(acc);
        acc = add(acc, g);
    }
    return pts;
}

}  // namespace toy_oracle
