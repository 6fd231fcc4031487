#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kkalg {

// All scalar arithmetic is overflow-checked; a result outside the exactly
// representable range must fail loudly rather than corrupt a certificate.
struct OverflowError : std::runtime_error {
    OverflowError() : std::runtime_error("integer overflow in exact arithmetic") {}
};

struct RingError : std::runtime_error {
    explicit RingError(const std::string& what) : std::runtime_error(what) {}
};

inline long long checked_add(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError();
    return r;
}

inline long long checked_sub(long long a, long long b) {
    long long r;
    if (__builtin_sub_overflow(a, b, &r)) throw OverflowError();
    return r;
}

inline long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError();
    return r;
}

inline long long checked_neg(long long a) { return checked_sub(0, a); }

long long gcd_ll(long long a, long long b);

// Normalized rational scalar: den > 0, gcd(|num|, den) = 1, zero stored as 0/1.
struct Rat {
    long long num = 0;
    long long den = 1;

    Rat() = default;
    Rat(long long n) : num(n) {}
    Rat(long long n, long long d);

    bool is_zero() const { return num == 0; }
    bool is_one() const { return num == 1 && den == 1; }
    bool is_integer() const { return den == 1; }

    bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rat& o) const { return !(*this == o); }
    bool operator<(const Rat& o) const;

    std::string str() const;
};

Rat operator+(const Rat& a, const Rat& b);
Rat operator-(const Rat& a, const Rat& b);
Rat operator*(const Rat& a, const Rat& b);
Rat operator-(const Rat& a);
Rat rat_div(const Rat& a, const Rat& b);
Rat rat_inv(const Rat& a);

enum class RingKind { integers, rationals, mod };

// Scalar ring of coefficients: Z, Q, or Z/m.  Elements are carried as Rat
// values kept in canonical form by normalize(): Z/m stores the residue in
// [0, m) with denominator 1, Z insists on denominator 1.
struct BaseRing {
    RingKind kind = RingKind::integers;
    long long mod = 0;

    static BaseRing Z() { return BaseRing{RingKind::integers, 0}; }
    static BaseRing Q() { return BaseRing{RingKind::rationals, 0}; }
    static BaseRing Zmod(long long m);

    bool operator==(const BaseRing& o) const { return kind == o.kind && mod == o.mod; }
    bool operator!=(const BaseRing& o) const { return !(*this == o); }

    bool contains(const Rat& x) const;
    Rat normalize(const Rat& x) const;

    Rat add(const Rat& a, const Rat& b) const { return normalize(a + b); }
    Rat sub(const Rat& a, const Rat& b) const { return normalize(a - b); }
    Rat mul(const Rat& a, const Rat& b) const { return normalize(a * b); }
    Rat neg(const Rat& a) const { return normalize(-a); }

    bool invertible(const Rat& x) const;
    Rat inv(const Rat& x) const;

    bool is_field() const;
    std::string str() const;
};

} // namespace kkalg
