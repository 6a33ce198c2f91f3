#include "chflow/bigint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chflow {

namespace {
constexpr uint64_t kBase = 1ull << 32;
}

BigInt::BigInt(int64_t v) {
    if (v == 0) return;
    sign_ = v < 0 ? -1 : 1;
    uint64_t m = v < 0 ? ~static_cast<uint64_t>(v) + 1 : static_cast<uint64_t>(v);
    mag_.push_back(static_cast<uint32_t>(m & 0xffffffffu));
    if (m >> 32) mag_.push_back(static_cast<uint32_t>(m >> 32));
}

BigInt BigInt::from_limbs(int sign, std::vector<uint32_t> mag) {
    BigInt r;
    r.sign_ = sign;
    r.mag_ = std::move(mag);
    r.normalize();
    return r;
}

BigInt BigInt::pow2(unsigned k) {
    BigInt r;
    r.sign_ = 1;
    r.mag_.assign(k / 32 + 1, 0);
    r.mag_.back() = 1u << (k % 32);
    return r;
}

bool BigInt::is_one() const { return sign_ == 1 && mag_.size() == 1 && mag_[0] == 1; }

void BigInt::normalize() {
    while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
    if (mag_.empty()) sign_ = 0;
    else if (sign_ == 0) sign_ = 1;
}

BigInt BigInt::operator-() const {
    BigInt r = *this;
    r.sign_ = -r.sign_;
    return r;
}

BigInt BigInt::abs() const {
    BigInt r = *this;
    if (r.sign_ < 0) r.sign_ = 1;
    return r;
}

int BigInt::cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
}

std::vector<uint32_t> BigInt::add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    const auto &big = a.size() >= b.size() ? a : b, &small = a.size() >= b.size() ? b : a;
    std::vector<uint32_t> r(big.size() + 1, 0);
    uint64_t carry = 0;
    for (size_t i = 0; i < big.size(); ++i) {
        uint64_t s = carry + big[i] + (i < small.size() ? small[i] : 0u);
        r[i] = static_cast<uint32_t>(s);
        carry = s >> 32;
    }
    r.back() = static_cast<uint32_t>(carry);
    return r;
}

// requires |a| >= |b|
std::vector<uint32_t> BigInt::sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    std::vector<uint32_t> r(a.size(), 0);
    int64_t borrow = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        int64_t d = static_cast<int64_t>(a[i]) - (i < b.size() ? b[i] : 0u) - borrow;
        if (d < 0) { d += kBase; borrow = 1; } else borrow = 0;
        r[i] = static_cast<uint32_t>(d);
    }
    return r;
}

std::vector<uint32_t> BigInt::mul_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<uint32_t> r(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        uint64_t carry = 0;
        uint64_t ai = a[i];
        if (ai == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            uint64_t cur = r[i + j] + ai * b[j] + carry;
            r[i + j] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
        }
        size_t k = i + b.size();
        while (carry) {
            uint64_t cur = r[k] + carry;
            r[k] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
            ++k;
        }
    }
    return r;
}

// Knuth algorithm D on 32-bit limbs.
void BigInt::divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                        std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
    if (b.empty()) throw std::domain_error("BigInt: division by zero");
    if (cmp_mag(a, b) < 0) { q.clear(); r = a; return; }
    if (b.size() == 1) {
        uint64_t d = b[0], rem = 0;
        q.assign(a.size(), 0);
        for (size_t i = a.size(); i-- > 0;) {
            uint64_t cur = (rem << 32) | a[i];
            q[i] = static_cast<uint32_t>(cur / d);
            rem = cur % d;
        }
        while (!q.empty() && q.back() == 0) q.pop_back();
        r.clear();
        if (rem) r.push_back(static_cast<uint32_t>(rem));
        return;
    }
    // normalize so that the top limb of the divisor has its high bit set
    int shift = 0;
    for (uint32_t top = b.back(); !(top & 0x80000000u); top <<= 1) ++shift;
    auto shl = [&](const std::vector<uint32_t>& v) {
        if (shift == 0) return v;
        std::vector<uint32_t> out(v.size() + 1, 0);
        for (size_t i = 0; i < v.size(); ++i) {
            out[i] |= v[i] << shift;
            out[i + 1] = static_cast<uint32_t>(static_cast<uint64_t>(v[i]) >> (32 - shift));
        }
        while (!out.empty() && out.back() == 0) out.pop_back();
        return out;
    };
    std::vector<uint32_t> u = shl(a), v = shl(b);
    size_t n = v.size(), m = u.size() - n;
    u.push_back(0);
    q.assign(m + 1, 0);
    const uint64_t vtop = v[n - 1], vnext = v[n - 2];
    for (size_t j = m + 1; j-- > 0;) {
        uint64_t num = (static_cast<uint64_t>(u[j + n]) << 32) | u[j + n - 1];
        uint64_t qhat = num / vtop, rhat = num % vtop;
        while (qhat >= kBase || qhat * vnext > ((rhat << 32) | u[j + n - 2])) {
            --qhat;
            rhat += vtop;
            if (rhat >= kBase) break;
        }
        // multiply-subtract
        int64_t borrow = 0;
        uint64_t carry = 0;
        for (size_t i = 0; i < n; ++i) {
            uint64_t p = qhat * v[i] + carry;
            carry = p >> 32;
            int64_t d = static_cast<int64_t>(u[j + i]) - static_cast<int64_t>(p & 0xffffffffu) - borrow;
            if (d < 0) { d += kBase; borrow = 1; } else borrow = 0;
            u[j + i] = static_cast<uint32_t>(d);
        }
        int64_t d = static_cast<int64_t>(u[j + n]) - static_cast<int64_t>(carry) - borrow;
        if (d < 0) {
            // qhat was one too large: add back
            d += kBase;
            --qhat;
            uint64_t c2 = 0;
            for (size_t i = 0; i < n; ++i) {
                uint64_t s = static_cast<uint64_t>(u[j + i]) + v[i] + c2;
                u[j + i] = static_cast<uint32_t>(s);
                c2 = s >> 32;
            }
            d += static_cast<int64_t>(c2);
            d &= 0xffffffff;
        }
        u[j + n] = static_cast<uint32_t>(d);
        q[j] = static_cast<uint32_t>(qhat);
    }
    // denormalize the remainder
    u.resize(n);
    if (shift) {
        for (size_t i = 0; i < n; ++i) {
            uint64_t lo = u[i] >> shift;
            uint64_t hi = i + 1 < n ? (static_cast<uint64_t>(u[i + 1]) << (32 - shift)) : 0;
            u[i] = static_cast<uint32_t>(lo | hi);
        }
    }
    r = std::move(u);
    while (!q.empty() && q.back() == 0) q.pop_back();
    while (!r.empty() && r.back() == 0) r.pop_back();
}

BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    BigInt r;
    if (a.sign_ == b.sign_) {
        r.sign_ = a.sign_;
        r.mag_ = BigInt::add_mag(a.mag_, b.mag_);
    } else {
        int c = BigInt::cmp_mag(a.mag_, b.mag_);
        if (c == 0) return BigInt();
        if (c > 0) { r.sign_ = a.sign_; r.mag_ = BigInt::sub_mag(a.mag_, b.mag_); }
        else       { r.sign_ = b.sign_; r.mag_ = BigInt::sub_mag(b.mag_, a.mag_); }
    }
    r.normalize();
    return r;
}

BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

BigInt operator*(const BigInt& a, const BigInt& b) {
    if (a.sign_ == 0 || b.sign_ == 0) return BigInt();
    BigInt r;
    r.sign_ = a.sign_ * b.sign_;
    r.mag_ = BigInt::mul_mag(a.mag_, b.mag_);
    r.normalize();
    return r;
}

void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    std::vector<uint32_t> qm, rm;
    divmod_mag(a.mag_, b.mag_, qm, rm);
    q = BigInt();
    r = BigInt();
    q.mag_ = std::move(qm);
    r.mag_ = std::move(rm);
    q.sign_ = q.mag_.empty() ? 0 : a.sign_ * b.sign_;
    r.sign_ = r.mag_.empty() ? 0 : a.sign_;
}

BigInt operator/(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    return q;
}

BigInt operator%(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    return r;
}

bool operator==(const BigInt& a, const BigInt& b) {
    return a.sign_ == b.sign_ && a.mag_ == b.mag_;
}

bool operator<(const BigInt& a, const BigInt& b) {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
    int c = BigInt::cmp_mag(a.mag_, b.mag_);
    return a.sign_ >= 0 ? c < 0 : c > 0;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
    a.sign_ = a.mag_.empty() ? 0 : 1;
    b.sign_ = b.mag_.empty() ? 0 : 1;
    // Euclid; the limb-level division keeps iteration counts low
    while (!b.is_zero()) {
        BigInt q, r;
        divmod(a, b, q, r);
        r.sign_ = r.mag_.empty() ? 0 : 1;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

BigInt BigInt::shifted_left(unsigned bits) const {
    if (is_zero() || bits == 0) return *this;
    unsigned limbs = bits / 32, rem = bits % 32;
    BigInt r;
    r.sign_ = sign_;
    r.mag_.assign(mag_.size() + limbs + 1, 0);
    for (size_t i = 0; i < mag_.size(); ++i) {
        r.mag_[i + limbs] |= mag_[i] << rem;
        if (rem) r.mag_[i + limbs + 1] = static_cast<uint32_t>(static_cast<uint64_t>(mag_[i]) >> (32 - rem));
    }
    r.normalize();
    return r;
}

BigInt BigInt::shifted_right(unsigned bits) const {
    unsigned limbs = bits / 32, rem = bits % 32;
    if (limbs >= mag_.size()) return BigInt();
    BigInt r;
    r.sign_ = sign_;
    r.mag_.assign(mag_.begin() + limbs, mag_.end());
    if (rem) {
        for (size_t i = 0; i < r.mag_.size(); ++i) {
            uint64_t lo = r.mag_[i] >> rem;
            uint64_t hi = i + 1 < r.mag_.size() ? (static_cast<uint64_t>(r.mag_[i + 1]) << (32 - rem)) : 0;
            r.mag_[i] = static_cast<uint32_t>(lo | hi);
        }
    }
    r.normalize();
    return r;
}

size_t BigInt::bit_length() const {
    if (mag_.empty()) return 0;
    size_t bits = (mag_.size() - 1) * 32;
    uint32_t top = mag_.back();
    while (top) { ++bits; top >>= 1; }
    return bits;
}

bool BigInt::is_even() const { return mag_.empty() || (mag_[0] & 1u) == 0; }

void BigInt::frexp_approx(double& mantissa, long& exp2) const {
    if (is_zero()) { mantissa = 0.0; exp2 = 0; return; }
    size_t bits = bit_length();
    // take the top <= 64 bits
    uint64_t top = 0;
    size_t take = bits < 64 ? bits : 64;
    for (size_t k = 0; k < take; ++k) {
        size_t bit = bits - 1 - k;
        uint32_t limb = mag_[bit / 32];
        top = (top << 1) | ((limb >> (bit % 32)) & 1u);
    }
    mantissa = std::ldexp(static_cast<double>(top), -static_cast<int>(take)) * sign_;
    exp2 = static_cast<long>(bits);
}

double BigInt::to_double() const {
    double m;
    long e;
    frexp_approx(m, e);
    return std::ldexp(m, static_cast<int>(e));
}

bool BigInt::fits_int64() const {
    if (mag_.size() > 2) return false;
    if (mag_.size() < 2) return true;
    uint64_t v = (static_cast<uint64_t>(mag_[1]) << 32) | mag_[0];
    return sign_ > 0 ? v <= static_cast<uint64_t>(INT64_MAX)
                     : v <= static_cast<uint64_t>(INT64_MAX) + 1;
}

int64_t BigInt::to_int64() const {
    uint64_t v = 0;
    if (!mag_.empty()) v = mag_[0];
    if (mag_.size() > 1) v |= static_cast<uint64_t>(mag_[1]) << 32;
    return sign_ < 0 ? -static_cast<int64_t>(v) : static_cast<int64_t>(v);
}

std::string BigInt::to_string() const {
    if (is_zero()) return "0";
    std::vector<uint32_t> chunks;  // base 1e9, little-endian
    std::vector<uint32_t> cur = mag_;
    while (!cur.empty()) {
        uint64_t rem = 0;
        for (size_t i = cur.size(); i-- > 0;) {
            uint64_t v = (rem << 32) | cur[i];
            cur[i] = static_cast<uint32_t>(v / 1000000000u);
            rem = v % 1000000000u;
        }
        chunks.push_back(static_cast<uint32_t>(rem));
        while (!cur.empty() && cur.back() == 0) cur.pop_back();
    }
    std::string s = sign_ < 0 ? "-" : "";
    s += std::to_string(chunks.back());
    for (size_t i = chunks.size() - 1; i-- > 0;) {
        std::string part = std::to_string(chunks[i]);
        s += std::string(9 - part.size(), '0') + part;
    }
    return s;
}

}  // namespace chflow
