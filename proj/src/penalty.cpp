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

#include "quboform/penalty.hpp"

#include <cctype>
#include <sstream>
#include <vector>

namespace quboform {

QuadraticPenalty::QuadraticPenalty(int m_logical, int m_slack)
        : m_logical_(m_logical), m_slack_(m_slack), a0_(0) {
    if (m_logical < 0 || m_slack < 0) throw Error("negative variable count");
}

void QuadraticPenalty::add(int i, int j, const Rational& value) {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= size()) throw Error("penalty index out of range");
    Rational c = value;
    c.canonicalize();
    if (c == 0) return;
    auto [it, inserted] = coeffs_.try_emplace({i, j}, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) coeffs_.erase(it);
    }
}

Rational QuadraticPenalty::coeff(int i, int j) const {
    if (i > j) std::swap(i, j);
    auto it = coeffs_.find({i, j});
    return it == coeffs_.end() ? Rational(0) : it->second;
}

Rational QuadraticPenalty::eval_joint(const Bits& v) const {
    if (static_cast<int>(v.size()) != size()) throw Error("penalty argument length mismatch");
    Rational r = a0_;
    for (const auto& [k, c] : coeffs_) {
        if (v[k.first] && v[k.second]) r += c;
    }
    return r;
}

Rational QuadraticPenalty::eval(const Bits& y, const Bits& s) const {
    if (static_cast<int>(y.size()) != m_logical_ || static_cast<int>(s.size()) != m_slack_) {
        throw Error("penalty argument length mismatch");
    }
    Bits v(y);
    v.insert(v.end(), s.begin(), s.end());
    return eval_joint(v);
}

QuadraticPenalty QuadraticPenalty::scaled(const Rational& c) const {
    QuadraticPenalty p(m_logical_, m_slack_);
    if (c == 0) return p;
    p.a0_ = a0_ * c;
    for (const auto& [k, v] : coeffs_) p.coeffs_.emplace(k, v * c);
    return p;
}

QuadraticPenalty& QuadraticPenalty::operator+=(const QuadraticPenalty& other) {
    if (other.m_logical_ != m_logical_ || other.m_slack_ != m_slack_) {
        throw Error("adding penalties of different shapes");
    }
    a0_ += other.a0_;
    for (const auto& [k, v] : other.coeffs_) add(k.first, k.second, v);
    return *this;
}

bool QuadraticPenalty::operator==(const QuadraticPenalty& other) const {
    return m_logical_ == other.m_logical_ && m_slack_ == other.m_slack_ && a0_ == other.a0_ &&
           coeffs_ == other.coeffs_;
}

std::string QuadraticPenalty::to_string() const {
    auto name = [&](int k) {
        return k < m_logical_ ? "x" + std::to_string(k + 1) : "s" + std::to_string(k - m_logical_ + 1);
    };
    std::ostringstream out;
    bool first = true;
    auto emit = [&](const Rational& c, const std::string& mono) {
        Rational mag = abs(c);
        if (c < 0) {
            out << (first ? "-" : " - ");
        } else if (!first) {
            out << " + ";
        }
        if (mono.empty() || mag != 1) out << mag.get_str();
        out << mono;
        first = false;
    };
    if (a0_ != 0) emit(a0_, "");
    for (const auto& [k, c] : coeffs_) {
        emit(c, k.first == k.second ? name(k.first) : name(k.first) + name(k.second));
    }
    if (first) out << "0";
    return out.str();
}

QuadraticPenalty QuadraticPenalty::parse(const std::string& text, int m_logical, int m_slack) {
    QuadraticPenalty p(m_logical, m_slack);
    std::string t;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    }
    std::size_t pos = 0;
    auto fail = [&](const std::string& why) {
        throw Error("cannot parse polynomial '" + text + "': " + why);
    };
    if (t.empty() || t == "0") return p;
    while (pos < t.size()) {
        int sign = 1;
        if (t[pos] == '+' || t[pos] == '-') {
            sign = t[pos] == '-' ? -1 : 1;
            ++pos;
        } else if (pos != 0) {
            fail("expected sign");
        }
        std::size_t start = pos;
        while (pos < t.size() && (std::isdigit(static_cast<unsigned char>(t[pos])) || t[pos] == '/')) ++pos;
        Rational c = start == pos ? Rational(1) : parse_rational(t.substr(start, pos - start));
        std::vector<int> vars;
        while (pos < t.size() && (t[pos] == 'x' || t[pos] == 's')) {
            char kind = t[pos++];
            std::size_t d = pos;
            while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) ++pos;
            if (d == pos) fail("variable without index");
            int k = std::stoi(t.substr(d, pos - d));
            int limit = kind == 'x' ? m_logical : m_slack;
            if (k < 1 || k > limit) fail("variable index out of range");
            vars.push_back(kind == 'x' ? k - 1 : m_logical + k - 1);
        }
        if (start == pos) fail("empty term");
        c *= sign;
        if (vars.empty()) {
            p.add_constant(c);
        } else if (vars.size() == 1) {
            p.add(vars[0], vars[0], c);
        } else if (vars.size() == 2) {
            p.add(vars[0], vars[1], c);
        } else {
            fail("term of degree > 2");
        }
    }
    return p;
}

Rational eval_penalty(const QuadraticPenalty& p, const Bits& y, const Bits& s) { return p.eval(y, s); }

Rational max_over_slack(const QuadraticPenalty& p, const Bits& y) {
    if (static_cast<int>(y.size()) != p.m_logical()) throw Error("penalty argument length mismatch");
    Bits v(y);
    v.resize(p.size(), 0);
    Rational best = p.eval_joint(v);
    const std::uint64_t total = std::uint64_t{1} << p.m_slack();
    for (std::uint64_t s = 1; s < total; ++s) {
        Bits sb = bits_from_index(s, p.m_slack());
        std::copy(sb.begin(), sb.end(), v.begin() + p.m_logical());
        Rational val = p.eval_joint(v);
        if (val > best) best = val;
    }
    return best;
}

Rational max_value(const QuadraticPenalty& p) {
    Rational best;
    const std::uint64_t total = std::uint64_t{1} << p.size();
    for (std::uint64_t i = 0; i < total; ++i) {
        Rational val = p.eval_joint(bits_from_index(i, p.size()));
        if (i == 0 || val > best) best = val;
    }
    return best;
}

}  // namespace quboform
