// Arbitrary-precision signed integer, sized for exact rational arithmetic at
// desk scale (a few thousand bits). Sign-magnitude over 32-bit limbs.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace chflow {

class BigInt {
public:
    BigInt() = default;
    BigInt(int64_t v);

    static BigInt from_limbs(int sign, std::vector<uint32_t> mag);
    static BigInt pow2(unsigned k);

    bool is_zero() const { return sign_ == 0; }
    int sign() const { return sign_; }
    bool is_one() const;

    BigInt operator-() const;
    BigInt abs() const;

    friend BigInt operator+(const BigInt& a, const BigInt& b);
    friend BigInt operator-(const BigInt& a, const BigInt& b);
    friend BigInt operator*(const BigInt& a, const BigInt& b);
    // Truncated division (C semantics): q = a/b rounds toward zero.
    friend BigInt operator/(const BigInt& a, const BigInt& b);
    friend BigInt operator%(const BigInt& a, const BigInt& b);
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);

    BigInt& operator+=(const BigInt& o) { *this = *this + o; return *this; }
    BigInt& operator-=(const BigInt& o) { *this = *this - o; return *this; }
    BigInt& operator*=(const BigInt& o) { *this = *this * o; return *this; }

    friend bool operator==(const BigInt& a, const BigInt& b);
    friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
    friend bool operator<(const BigInt& a, const BigInt& b);
    friend bool operator>(const BigInt& a, const BigInt& b) { return b < a; }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return !(b < a); }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return !(a < b); }

    static BigInt gcd(BigInt a, BigInt b);

    BigInt shifted_left(unsigned bits) const;
    BigInt shifted_right(unsigned bits) const;
    size_t bit_length() const;
    bool is_even() const;

    // Value as mantissa*2^exp with mantissa in [0.5, 1); exact for small ints.
    double to_double() const;
    void frexp_approx(double& mantissa, long& exp2) const;

    bool fits_int64() const;
    int64_t to_int64() const;  // valid only when fits_int64()

    std::string to_string() const;

private:
    int sign_ = 0;                 // -1, 0, +1
    std::vector<uint32_t> mag_;    // little-endian limbs, no leading zeros, empty iff zero

    void normalize();
    static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static std::vector<uint32_t> mul_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static void divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                           std::vector<uint32_t>& q, std::vector<uint32_t>& r);
};

}  // namespace chflow
