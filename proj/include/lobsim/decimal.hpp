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

#ifndef LOBSIM_DECIMAL_HPP_
#define LOBSIM_DECIMAL_HPP_

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace lobsim {

// Wide intermediate for exact products of two 64-bit unit counts.
__extension__ using Int128 = __int128;

enum class RoundingMode { kDown, kUp, kNearest };

// Signed fixed-point decimal with nine fractional digits. All market
// arithmetic (prices, quantities, VWAPs, rewards) goes through this type so
// that no binary floating point ever touches a traded value.
class Decimal {
 public:
  static constexpr int kScale = 9;
  static constexpr std::int64_t kUnitsPerOne = 1'000'000'000;

  constexpr Decimal() = default;

  static constexpr Decimal FromUnits(std::int64_t units) {
    Decimal d;
    d.units_ = units;
    return d;
  }
  static Decimal FromInt(std::int64_t value);

  // Plain decimal ("-12.345"); no exponent, at most nine significant
  // fractional digits. Throws InvalidArgument on malformed input.
  static Decimal Parse(std::string_view text);
  // Shortest plain-decimal form; Parse(ToString()) is the identity.
  std::string ToString() const;

  constexpr std::int64_t units() const { return units_; }
  double ToDouble() const {
    return static_cast<double>(units_) / static_cast<double>(kUnitsPerOne);
  }
  constexpr bool is_zero() const { return units_ == 0; }
  constexpr bool is_positive() const { return units_ > 0; }
  constexpr bool is_negative() const { return units_ < 0; }

  // True when this value is an exact integer multiple of `increment`.
  bool IsMultipleOf(Decimal increment) const;

  Decimal operator-() const { return FromUnits(-units_); }
  Decimal& operator+=(Decimal o);
  Decimal& operator-=(Decimal o);
  friend Decimal operator+(Decimal a, Decimal b) { return a += b; }
  friend Decimal operator-(Decimal a, Decimal b) { return a -= b; }
  friend Decimal operator*(Decimal a, std::int64_t k);

  friend constexpr auto operator<=>(Decimal, Decimal) = default;
  friend constexpr bool operator==(Decimal, Decimal) = default;

 private:
  std::int64_t units_ = 0;
};

// Rounds `x` onto the grid of `increment` (> 0). kNearest breaks ties away
// from zero.
Decimal RoundToIncrement(Decimal x, Decimal increment, RoundingMode mode);

// Exact product a*b, rounded once onto the grid of `increment`.
Decimal MultiplyToIncrement(Decimal a, Decimal b, Decimal increment,
                            RoundingMode mode);

// a / b rounded once onto the 1e-9 grid.
Decimal Divide(Decimal a, Decimal b, RoundingMode mode = RoundingMode::kNearest);

// Integer quotient num/den rounded per `mode`; den must be non-zero.
Int128 DivRound(Int128 num, Int128 den, RoundingMode mode);

}  // namespace lobsim

#endif  // LOBSIM_DECIMAL_HPP_
