#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace mapperloss {

// A natural number or infinity. Arithmetic saturates at infinity.
class ExtendedNat {
 public:
  constexpr ExtendedNat() = default;
  constexpr ExtendedNat(std::uint64_t v) : value_(v) {}  // NOLINT(implicit)

  static constexpr ExtendedNat infinite() {
    ExtendedNat r;
    r.value_ = kInf;
    return r;
  }

  constexpr bool is_infinite() const { return value_ == kInf; }
  constexpr bool is_finite() const { return value_ != kInf; }

  std::uint64_t value() const {
    if (is_infinite()) throw std::logic_error("ExtendedNat::value on infinity");
    return value_;
  }

  friend constexpr ExtendedNat operator+(ExtendedNat a, ExtendedNat b) {
    if (a.is_infinite() || b.is_infinite()) return infinite();
    if (a.value_ > kInf - 1 - b.value_) return infinite();
    return ExtendedNat(a.value_ + b.value_);
  }

  friend constexpr auto operator<=>(ExtendedNat, ExtendedNat) = default;
  friend constexpr bool operator==(ExtendedNat, ExtendedNat) = default;

  std::string to_string() const { return is_infinite() ? "inf" : std::to_string(value_); }

  friend std::ostream& operator<<(std::ostream& os, ExtendedNat v) { return os << v.to_string(); }

 private:
  static constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t value_ = 0;
};

inline constexpr ExtendedNat max(ExtendedNat a, ExtendedNat b) { return a < b ? b : a; }

}  // namespace mapperloss
