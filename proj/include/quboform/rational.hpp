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
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace quboform {

using Rational = mpq_class;

/// Binary assignment. Position 0 is the first variable (x1 in the usual
/// one-based notation) and the most significant bit of the row index.
using Bits = std::vector<std::uint8_t>;

class Error : public std::runtime_error {
 public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an enumeration would exceed its configured size cap.
class CapExceeded : public Error {
 public:
    explicit CapExceeded(const std::string& what) : Error(what) {}
};

/// Raised when a search runs out of its node or slack budget.
class BudgetExhausted : public Error {
 public:
    BudgetExhausted(const std::string& what, int last_slack)
            : Error(what), last_slack_(last_slack) {}
    int last_slack() const { return last_slack_; }

 private:
    int last_slack_;
};

/// Malformed input text. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
    ParseError(const std::string& what, int line)
            : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const { return line_; }

 private:
    int line_;
};

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);
bool is_integer(const Rational& r);

Bits bits_from_index(std::uint64_t index, int width);
std::uint64_t index_from_bits(const Bits& bits);
std::string bits_string(const Bits& bits);
Bits parse_bits(const std::string& text);

}  // namespace quboform
