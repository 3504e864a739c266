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

#include "quboform/rational.hpp"

#include <cctype>

namespace quboform {

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational");
    std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    bool slash = false;
    bool digit_before = false, digit_after = false;
    for (std::size_t i = start; i < text.size(); ++i) {
        char c = text[i];
        if (c == '/') {
            if (slash) throw std::invalid_argument("bad rational '" + text + "'");
            slash = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            (slash ? digit_after : digit_before) = true;
        } else {
            throw std::invalid_argument("bad rational '" + text + "'");
        }
    }
    if (!digit_before || (slash && !digit_after)) {
        throw std::invalid_argument("bad rational '" + text + "'");
    }
    std::string body = text[0] == '+' ? text.substr(1) : text;
    Rational r;
    if (r.set_str(body, 10) != 0) throw std::invalid_argument("bad rational '" + text + "'");
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

bool is_integer(const Rational& r) { return r.get_den() == 1; }

Bits bits_from_index(std::uint64_t index, int width) {
    Bits b(width);
    for (int k = 0; k < width; ++k) b[k] = (index >> (width - 1 - k)) & 1u;
    return b;
}

std::uint64_t index_from_bits(const Bits& bits) {
    std::uint64_t v = 0;
    for (auto b : bits) v = (v << 1) | (b & 1u);
    return v;
}

std::string bits_string(const Bits& bits) {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

Bits parse_bits(const std::string& text) {
    Bits b;
    b.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') throw std::invalid_argument("bad bit string '" + text + "'");
        b.push_back(c == '1');
    }
    return b;
}

}  // namespace quboform
