// Copyright 2026 The quboform Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include "quboform/detail/num.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

namespace quboform::detail {

namespace {

using u128 = unsigned __int128;

constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();

u128 uabs(__int128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

u128 gcd128(u128 a, u128 b) {
    if ((a >> 64) == 0 && (b >> 64) == 0) {
        return std::gcd(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
    }
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::uint64_t gcd64(std::int64_t a, std::int64_t b) {
    return std::gcd(static_cast<std::uint64_t>(a < 0 ? -static_cast<__int128>(a) : a),
                    static_cast<std::uint64_t>(b < 0 ? -static_cast<__int128>(b) : b));
}

Rational wide_to_rational(__int128 v) {
    // |v| < 2^127; split into two 64-bit halves for GMP.
    bool neg = v < 0;
    u128 u = uabs(v);
    mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
    mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
    mpz_class z = (hi << 64) + lo;
    return Rational(neg ? mpz_class(-z) : z);
}

}  // namespace

Num::Num(const Rational& r) {
    if (r.get_num().fits_slong_p() && r.get_den().fits_slong_p()) {
        n_ = r.get_num().get_si();
        d_ = r.get_den().get_si();
    } else {
        big_ = std::make_unique<Rational>(r);
    }
}

Rational Num::to_rational() const {
    if (big_) return *big_;
    Rational r(static_cast<long>(n_), static_cast<unsigned long>(d_));
    r.canonicalize();
    return r;
}

Num Num::from_big(Rational r) {
    r.canonicalize();
    return Num(r);
}

Num Num::from_wide(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("division by zero");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    u128 g = gcd128(uabs(n), static_cast<u128>(d));
    if (g > 1) {
        n /= static_cast<__int128>(g);
        d /= static_cast<__int128>(g);
    }
    if (n == 0) return Num(0);
    if (n <= kMax && n >= -kMax && d <= kMax) {
        Num out;
        out.n_ = static_cast<std::int64_t>(n);
        out.d_ = static_cast<std::int64_t>(d);
        return out;
    }
    Rational r = wide_to_rational(n) / wide_to_rational(d);
    Num out;
    out.big_ = std::make_unique<Rational>(std::move(r));
    return out;
}

Num operator+(const Num& a, const Num& b) {
    if (a.big_ || b.big_) return Num::from_big(a.to_rational() + b.to_rational());
    if (a.n_ == 0) return b;
    if (b.n_ == 0) return a;
    if (a.d_ == b.d_) return Num::from_wide(static_cast<__int128>(a.n_) + b.n_, a.d_);
    std::int64_t g = static_cast<std::int64_t>(std::gcd(a.d_, b.d_));
    __int128 n = static_cast<__int128>(a.n_) * (b.d_ / g) + static_cast<__int128>(b.n_) * (a.d_ / g);
    __int128 d = static_cast<__int128>(a.d_) * (b.d_ / g);
    return Num::from_wide(n, d);
}

Num Num::operator-() const {
    if (big_) return from_big(-*big_);
    Num out;
    if (n_ == std::numeric_limits<std::int64_t>::min()) return from_wide(-static_cast<__int128>(n_), d_);
    out.n_ = -n_;
    out.d_ = d_;
    return out;
}

Num operator-(const Num& a, const Num& b) { return a + (-b); }

Num operator*(const Num& a, const Num& b) {
    if (a.big_ || b.big_) return Num::from_big(a.to_rational() * b.to_rational());
    if (a.n_ == 0 || b.n_ == 0) return Num(0);
    std::int64_t g1 = static_cast<std::int64_t>(gcd64(a.n_, b.d_));
    std::int64_t g2 = static_cast<std::int64_t>(gcd64(b.n_, a.d_));
    __int128 n = static_cast<__int128>(a.n_ / g1) * (b.n_ / g2);
    __int128 d = static_cast<__int128>(a.d_ / g2) * (b.d_ / g1);
    if (n <= kMax && n >= -kMax && d <= kMax) {
        Num out;
        out.n_ = static_cast<std::int64_t>(n);
        out.d_ = static_cast<std::int64_t>(d);
        return out;
    }
    return Num::from_wide(n, d);
}

Num operator/(const Num& a, const Num& b) {
    if (b.sign() == 0) throw std::domain_error("division by zero");
    if (a.big_ || b.big_) return Num::from_big(a.to_rational() / b.to_rational());
    Num inv;
    if (b.n_ < 0) {
        inv.n_ = -b.d_;
        inv.d_ = -b.n_;
    } else {
        inv.n_ = b.d_;
        inv.d_ = b.n_;
    }
    if (b.n_ == std::numeric_limits<std::int64_t>::min()) return Num::from_big(a.to_rational() / b.to_rational());
    return a * inv;
}

int compare(const Num& a, const Num& b) {
    if (a.big_ || b.big_) return cmp(a.to_rational(), b.to_rational());
    __int128 l = static_cast<__int128>(a.n_) * b.d_;
    __int128 r = static_cast<__int128>(b.n_) * a.d_;
    return (l > r) - (l < r);
}

}  // namespace quboform::detail
