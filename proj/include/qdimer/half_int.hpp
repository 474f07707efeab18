#pragma once

#include <compare>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qdimer {

// Half-integer angular momentum quantum number, stored as twice its value so
// that j = 0, 1/2, 1, 3/2, ... are all exact.
class HalfInt {
public:
    constexpr HalfInt() = default;
    constexpr explicit HalfInt(int whole) : twice_(2 * whole) {}

    static constexpr HalfInt from_twice(int twice) {
        HalfInt h;
        h.twice_ = twice;
        return h;
    }

    constexpr int twice() const { return twice_; }
    constexpr bool is_integer() const { return twice_ % 2 == 0; }
    constexpr double value() const { return 0.5 * twice_; }

    // m runs over {-j, -j+1, ..., j}; it must carry the same parity as j.
    constexpr bool same_parity(HalfInt other) const {
        return ((twice_ - other.twice_) % 2) == 0;
    }

    constexpr HalfInt operator-() const { return from_twice(-twice_); }
    constexpr HalfInt operator+(HalfInt o) const { return from_twice(twice_ + o.twice_); }
    constexpr HalfInt operator-(HalfInt o) const { return from_twice(twice_ - o.twice_); }
    constexpr auto operator<=>(const HalfInt&) const = default;

    constexpr HalfInt abs() const { return from_twice(twice_ < 0 ? -twice_ : twice_); }

    // j(j+1) is always an exact multiple of 1/4.
    constexpr double j_squared() const { return 0.25 * twice_ * (twice_ + 2); }

    std::string str() const {
        if (is_integer()) return std::to_string(twice_ / 2);
        return std::to_string(twice_) + "/2";
    }

private:
    int twice_ = 0;
};

inline constexpr HalfInt kHalf = HalfInt::from_twice(1);
inline constexpr HalfInt kOne = HalfInt::from_twice(2);

// Step by one quantum (twice-value += 2) when iterating m from -j to j.
inline constexpr HalfInt next(HalfInt m) { return HalfInt::from_twice(m.twice() + 2); }

}  // namespace qdimer
