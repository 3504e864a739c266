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

#pragma once

#include <cstdint>
#include <memory>
#include <utility>

#include "quboform/rational.hpp"

namespace quboform::detail {

/// Exact rational that stays in 64-bit numerator/denominator form while the
/// values are small and switches to GMP when they are not. The LP kernel
/// spends nearly all its time on such small fractions.
class Num {
 public:
    Num() = default;
    Num(std::int64_t v) : n_(v), d_(1) {}  // NOLINT(google-explicit-constructor)
    explicit Num(const Rational& r);
    Num(const Num& o) : n_(o.n_), d_(o.d_), big_(o.big_ ? std::make_unique<Rational>(*o.big_) : nullptr) {}
    Num(Num&&) noexcept = default;
    Num& operator=(const Num& o) {
        if (this != &o) {
            n_ = o.n_;
            d_ = o.d_;
            big_ = o.big_ ? std::make_unique<Rational>(*o.big_) : nullptr;
        }
        return *this;
    }
    Num& operator=(Num&&) noexcept = default;

    int sign() const {
        if (big_) return sgn(*big_);
        return (n_ > 0) - (n_ < 0);
    }
    bool is_zero() const { return !big_ && n_ == 0; }
    Rational to_rational() const;

    friend Num operator+(const Num& a, const Num& b);
    friend Num operator-(const Num& a, const Num& b);
    friend Num operator*(const Num& a, const Num& b);
    friend Num operator/(const Num& a, const Num& b);
    Num operator-() const;
    Num& operator+=(const Num& b) { return *this = *this + b; }
    Num& operator-=(const Num& b) { return *this = *this - b; }

    friend int compare(const Num& a, const Num& b);
    friend bool operator<(const Num& a, const Num& b) { return compare(a, b) < 0; }
    friend bool operator>(const Num& a, const Num& b) { return compare(a, b) > 0; }
    friend bool operator==(const Num& a, const Num& b) { return compare(a, b) == 0; }
    friend bool operator<=(const Num& a, const Num& b) { return compare(a, b) <= 0; }
    friend bool operator>=(const Num& a, const Num& b) { return compare(a, b) >= 0; }

 private:
    static Num from_wide(__int128 n, __int128 d);
    static Num from_big(Rational r);

    std::int64_t n_ = 0;
    std::int64_t d_ = 1;  // > 0
    std::unique_ptr<Rational> big_;
};

}  // namespace quboform::detail
