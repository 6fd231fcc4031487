#include "kkalg/base.hpp"

namespace kkalg {

long long gcd_ll(long long a, long long b) {
    if (a < 0) a = checked_neg(a);
    if (b < 0) b = checked_neg(b);
    while (b != 0) {
        long long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Rat::Rat(long long n, long long d) {
    if (d == 0) throw RingError("rational with zero denominator");
    if (d < 0) {
        n = checked_neg(n);
        d = checked_neg(d);
    }
    long long g = gcd_ll(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num = n;
    den = d == 0 ? 1 : d;
    if (num == 0) den = 1;
}

bool Rat::operator<(const Rat& o) const {
    // Cross multiplication in 128 bits cannot overflow for 64-bit operands.
    __int128 lhs = static_cast<__int128>(num) * o.den;
    __int128 rhs = static_cast<__int128>(o.num) * den;
    return lhs < rhs;
}

std::string Rat::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

Rat operator+(const Rat& a, const Rat& b) {
    long long g = gcd_ll(a.den, b.den);
    long long bd = b.den / g;
    long long n = checked_add(checked_mul(a.num, bd), checked_mul(b.num, a.den / g));
    long long d = checked_mul(a.den, bd);
    return Rat(n, d);
}

Rat operator-(const Rat& a, const Rat& b) { return a + (-b); }

Rat operator*(const Rat& a, const Rat& b) {
    long long g1 = gcd_ll(a.num, b.den);
    long long g2 = gcd_ll(b.num, a.den);
    long long n = checked_mul(a.num / g1, b.num / g2);
    long long d = checked_mul(a.den / g2, b.den / g1);
    return Rat(n, d);
}

Rat operator-(const Rat& a) {
    Rat r = a;
    r.num = checked_neg(r.num);
    return r;
}

Rat rat_inv(const Rat& a) {
    if (a.is_zero()) throw RingError("inverse of zero");
    return Rat(a.den, a.num);
}

Rat rat_div(const Rat& a, const Rat& b) { return a * rat_inv(b); }

BaseRing BaseRing::Zmod(long long m) {
    if (m < 2) throw RingError("modulus must be at least 2");
    return BaseRing{RingKind::mod, m};
}

namespace {

long long mod_reduce(long long n, long long m) {
    long long r = n % m;
    if (r < 0) r += m;
    return r;
}

// Extended gcd returning (g, x) with a*x = g mod m; used for modular inverses.
long long mod_inverse(long long a, long long m) {
    long long old_r = mod_reduce(a, m), r = m;
    long long old_s = 1, s = 0;
    while (r != 0) {
        long long q = old_r / r;
        long long t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1) throw RingError("element not invertible mod " + std::to_string(m));
    return mod_reduce(old_s, m);
}

bool is_prime_ll(long long m) {
    if (m < 2) return false;
    for (long long p = 2; p * p <= m; ++p)
        if (m % p == 0) return false;
    return true;
}

} // namespace

bool BaseRing::contains(const Rat& x) const {
    switch (kind) {
        case RingKind::rationals: return true;
        case RingKind::integers: return x.den == 1;
        case RingKind::mod: return gcd_ll(x.den, mod) == 1;
    }
    return false;
}

Rat BaseRing::normalize(const Rat& x) const {
    switch (kind) {
        case RingKind::rationals:
            return x;
        case RingKind::integers:
            if (x.den != 1) throw RingError("non-integer scalar over Z: " + x.str());
            return x;
        case RingKind::mod: {
            if (gcd_ll(x.den, mod) != 1)
                throw RingError("denominator " + std::to_string(x.den) +
                                " not invertible mod " + std::to_string(mod));
            long long n = mod_reduce(x.num, mod);
            if (x.den != 1) n = mod_reduce(checked_mul(n, mod_inverse(x.den, mod)), mod);
            return Rat(n, 1);
        }
    }
    throw RingError("unknown ring kind");
}

bool BaseRing::invertible(const Rat& x) const {
    Rat v = normalize(x);
    switch (kind) {
        case RingKind::rationals: return !v.is_zero();
        case RingKind::integers: return v.num == 1 || v.num == -1;
        case RingKind::mod: return gcd_ll(v.num, mod) == 1;
    }
    return false;
}

Rat BaseRing::inv(const Rat& x) const {
    if (!invertible(x)) throw RingError("scalar not invertible: " + x.str());
    Rat v = normalize(x);
    if (kind == RingKind::mod) return Rat(mod_inverse(v.num, mod), 1);
    return rat_inv(v);
}

bool BaseRing::is_field() const {
    switch (kind) {
        case RingKind::rationals: return true;
        case RingKind::integers: return false;
        case RingKind::mod: return is_prime_ll(mod);
    }
    return false;
}

std::string BaseRing::str() const {
    switch (kind) {
        case RingKind::rationals: return "Q";
        case RingKind::integers: return "Z";
        case RingKind::mod: return "Z/" + std::to_string(mod);
    }
    return "?";
}

} // namespace kkalg
