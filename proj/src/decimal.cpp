// Copyright 2026 The lobsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lobsim/decimal.hpp"

#include <limits>
#include <string>

#include "lobsim/errors.hpp"

namespace lobsim {
namespace {

constexpr Int128 kMaxUnits = std::numeric_limits<std::int64_t>::max();
constexpr Int128 kMinUnits = std::numeric_limits<std::int64_t>::min();

std::int64_t Narrow(Int128 v, const char* what) {
  if (v > kMaxUnits || v < kMinUnits) {
    throw InvalidArgument(std::string("decimal overflow in ") + what);
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

Int128 DivRound(Int128 num, Int128 den, RoundingMode mode) {
  if (den == 0) throw InvalidArgument("division by zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Int128 q = num / den;
  Int128 r = num % den;
  if (r == 0) return q;
  // C++ division truncates toward zero; fix up to floor first.
  if (r < 0) {
    q -= 1;
    r += den;
  }
  switch (mode) {
    case RoundingMode::kDown:
      return q;
    case RoundingMode::kUp:
      return q + 1;
    case RoundingMode::kNearest: {
      const Int128 twice = 2 * r;
      if (twice > den) return q + 1;
      if (twice < den) return q;
      // tie: away from zero
      return (q >= 0) ? q + 1 : q;
    }
  }
  return q;
}

Decimal Decimal::FromInt(std::int64_t value) {
  return FromUnits(Narrow(static_cast<Int128>(value) * kUnitsPerOne,
                          "FromInt"));
}

Decimal Decimal::Parse(std::string_view text) {
  if (text.empty()) throw InvalidArgument("empty decimal string");
  std::size_t i = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    ++i;
  }
  Int128 units = 0;
  int int_digits = 0;
  for (; i < text.size() && text[i] != '.'; ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') {
      throw InvalidArgument("malformed decimal '" + std::string(text) + "'");
    }
    units = units * 10 + (c - '0');
    if (units > kMaxUnits) {
      throw InvalidArgument("decimal out of range '" + std::string(text) + "'");
    }
    ++int_digits;
  }
  int frac_digits = 0;
  if (i < text.size()) {
    ++i;  // '.'
    for (; i < text.size(); ++i) {
      const char c = text[i];
      if (c < '0' || c > '9') {
        throw InvalidArgument("malformed decimal '" + std::string(text) + "'");
      }
      if (frac_digits < kScale) {
        units = units * 10 + (c - '0');
        ++frac_digits;
      } else if (c != '0') {
        throw InvalidArgument("more than 9 fractional digits in '" +
                              std::string(text) + "'");
      }
    }
    if (frac_digits == 0 && int_digits == 0) {
      throw InvalidArgument("malformed decimal '" + std::string(text) + "'");
    }
  }
  if (int_digits == 0 && frac_digits == 0) {
    throw InvalidArgument("malformed decimal '" + std::string(text) + "'");
  }
  for (; frac_digits < kScale; ++frac_digits) units *= 10;
  if (negative) units = -units;
  return FromUnits(Narrow(units, "Parse"));
}

std::string Decimal::ToString() const {
  const bool negative = units_ < 0;
  // Magnitude in unsigned space so INT64_MIN round-trips.
  std::uint64_t mag = negative ? (~static_cast<std::uint64_t>(units_) + 1)
                               : static_cast<std::uint64_t>(units_);
  const std::uint64_t whole = mag / kUnitsPerOne;
  std::uint64_t frac = mag % kUnitsPerOne;
  std::string out = negative ? "-" : "";
  out += std::to_string(whole);
  if (frac != 0) {
    std::string digits(kScale, '0');
    for (int k = kScale - 1; k >= 0; --k) {
      digits[static_cast<std::size_t>(k)] = static_cast<char>('0' + frac % 10);
      frac /= 10;
    }
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    out += '.';
    out += digits;
  }
  return out;
}

bool Decimal::IsMultipleOf(Decimal increment) const {
  if (increment.units_ == 0) return units_ == 0;
  return units_ % increment.units_ == 0;
}

Decimal& Decimal::operator+=(Decimal o) {
  units_ = Narrow(static_cast<Int128>(units_) + o.units_, "addition");
  return *this;
}

Decimal& Decimal::operator-=(Decimal o) {
  units_ = Narrow(static_cast<Int128>(units_) - o.units_, "subtraction");
  return *this;
}

Decimal operator*(Decimal a, std::int64_t k) {
  return Decimal::FromUnits(
      Narrow(static_cast<Int128>(a.units_) * k, "multiplication"));
}

Decimal RoundToIncrement(Decimal x, Decimal increment, RoundingMode mode) {
  if (!increment.is_positive()) {
    throw InvalidArgument("rounding increment must be positive, got " +
                          increment.ToString());
  }
  const Int128 steps = DivRound(x.units(), increment.units(), mode);
  return Decimal::FromUnits(Narrow(steps * increment.units(), "rounding"));
}

Decimal MultiplyToIncrement(Decimal a, Decimal b, Decimal increment,
                            RoundingMode mode) {
  if (!increment.is_positive()) {
    throw InvalidArgument("rounding increment must be positive, got " +
                          increment.ToString());
  }
  // a*b in units is (a.u * b.u) / 1e9; onto the increment grid that is
  // (a.u * b.u) / (1e9 * inc.u) steps.
  const Int128 num = static_cast<Int128>(a.units()) * b.units();
  const Int128 den =
      static_cast<Int128>(Decimal::kUnitsPerOne) * increment.units();
  const Int128 steps = DivRound(num, den, mode);
  return Decimal::FromUnits(Narrow(steps * increment.units(), "product"));
}

Decimal Divide(Decimal a, Decimal b, RoundingMode mode) {
  if (b.is_zero()) throw InvalidArgument("division by zero");
  const Int128 num =
      static_cast<Int128>(a.units()) * Decimal::kUnitsPerOne;
  return Decimal::FromUnits(Narrow(DivRound(num, b.units(), mode), "division"));
}

}  // namespace lobsim
