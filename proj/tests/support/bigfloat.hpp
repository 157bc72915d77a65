#ifndef RFSO_TESTS_BIGFLOAT_HPP
#define RFSO_TESTS_BIGFLOAT_HPP

// Minimal arbitrary-precision binary float for the series oracles:
// 384-bit mantissa, sign-magnitude, power-of-two exponent. Supports exactly
// the operations a hypergeometric partial sum needs: +, -, multiply by a
// double, divide by a double (including exact (x + k) coefficient pairs via
// Newton-corrected division). Truncating arithmetic; ~60 spare digits over
// the worst cancellation the oracle grids can produce.

#include <cmath>
#include <cstdint>
#include <cstring>

namespace testsupport {

class BigFloat {
public:
    static constexpr int kWords = 6;

    BigFloat() = default;

    explicit BigFloat(double d) {
        if (d == 0.0 || !std::isfinite(d)) return;
        sign_ = d < 0 ? -1 : 1;
        int e = 0;
        double f = std::frexp(std::abs(d), &e); // f in [0.5, 1)
        uint64_t m53 = static_cast<uint64_t>(std::ldexp(f, 53));
        w_[kWords - 1] = m53 << 11;
        exp_ = e;
        normalize();
    }

    bool is_zero() const { return sign_ == 0; }

    double to_double() const {
        if (sign_ == 0) return 0.0;
        double v = std::ldexp(static_cast<double>(w_[kWords - 1]), -64) +
                   std::ldexp(static_cast<double>(w_[kWords - 2]), -128) +
                   std::ldexp(static_cast<double>(w_[kWords - 3]), -192);
        return sign_ * std::ldexp(v, static_cast<int>(exp_));
    }

    BigFloat& operator+=(const BigFloat& o) {
        *this = add(*this, o);
        return *this;
    }

    friend BigFloat add(const BigFloat& a, const BigFloat& b) {
        if (a.sign_ == 0) return b;
        if (b.sign_ == 0) return a;
        const BigFloat* hi = &a;
        const BigFloat* lo = &b;
        if (mag_less(a, b)) std::swap(hi, lo);
        uint64_t ext[kWords + 1] = {};
        std::memcpy(ext, hi->w_, sizeof(hi->w_));
        uint64_t lw[kWords + 1] = {};
        std::memcpy(lw, lo->w_, sizeof(lo->w_));
        shift_right(lw, kWords + 1, hi->exp_ - lo->exp_);
        BigFloat r;
        r.sign_ = hi->sign_;
        if (a.sign_ == b.sign_) {
            unsigned __int128 carry = 0;
            for (int i = 0; i <= kWords; ++i) {
                unsigned __int128 s = static_cast<unsigned __int128>(ext[i]) + lw[i] + carry;
                ext[i] = static_cast<uint64_t>(s);
                carry = s >> 64;
            }
        } else {
            unsigned __int128 borrow = 0;
            for (int i = 0; i <= kWords; ++i) {
                unsigned __int128 d = static_cast<unsigned __int128>(ext[i]) - lw[i] - borrow;
                ext[i] = static_cast<uint64_t>(d);
                borrow = (d >> 64) ? 1 : 0;
            }
        }
        r.set_from_extended(ext, hi->exp_ + 64);
        return r;
    }

    friend BigFloat sub(const BigFloat& a, const BigFloat& b) {
        BigFloat nb = b;
        nb.sign_ = -nb.sign_;
        return add(a, nb);
    }

    BigFloat mul_double(double d) const {
        if (sign_ == 0 || d == 0.0) return BigFloat();
        int sd;
        uint64_t m53;
        long ed;
        split(d, sd, m53, ed);
        uint64_t ext[kWords + 1] = {};
        unsigned __int128 carry = 0;
        for (int i = 0; i < kWords; ++i) {
            unsigned __int128 p = static_cast<unsigned __int128>(w_[i]) * m53 + carry;
            ext[i] = static_cast<uint64_t>(p);
            carry = p >> 64;
        }
        ext[kWords] = static_cast<uint64_t>(carry);
        BigFloat r;
        r.sign_ = sign_ * sd;
        r.set_from_extended(ext, exp_ + ed - 53 + 64);
        return r;
    }

    BigFloat div_double(double d) const {
        if (sign_ == 0) return BigFloat();
        int sd;
        uint64_t m53;
        long ed;
        split(d, sd, m53, ed);
        // one extra low word of dividend for precision, short division
        uint64_t ext[kWords + 1] = {};
        unsigned __int128 rem = 0;
        for (int i = kWords; i >= 1; --i) {
            unsigned __int128 cur = (rem << 64) | w_[i - 1];
            ext[i] = static_cast<uint64_t>(cur / m53);
            rem = cur % m53;
        }
        ext[0] = static_cast<uint64_t>((rem << 64) / m53);
        BigFloat r;
        r.sign_ = sign_ * sd;
        r.set_from_extended(ext, exp_ + 53 - ed);
        return r;
    }

    /// multiply by the exact real (x + k)
    BigFloat mul_sum(double x, double k) const {
        double s = x + k;
        double bb = s - x;
        double err = (x - (s - bb)) + (k - bb);
        BigFloat r = mul_double(s);
        if (err != 0.0) r += mul_double(err);
        return r;
    }

    /// divide by the exact real (x + k); two Newton corrections push the
    /// relative error to ~2^-212, well under the mantissa width after the
    /// driving double-rounding of s alone
    BigFloat div_sum(double x, double k) const {
        double s = x + k;
        double bb = s - x;
        double err = (x - (s - bb)) + (k - bb);
        BigFloat q = div_double(s);
        if (err == 0.0) return q;
        for (int it = 0; it < 3; ++it) {
            BigFloat r = sub(*this, add(q.mul_double(s), q.mul_double(err)));
            q += r.div_double(s);
        }
        return q;
    }

private:
    uint64_t w_[kWords] = {}; // little-endian mantissa, value = m / 2^384 * 2^exp
    long exp_ = 0;
    int sign_ = 0;

    static void split(double d, int& sd, uint64_t& m53, long& ed) {
        sd = d < 0 ? -1 : 1;
        int e = 0;
        double f = std::frexp(std::abs(d), &e);
        m53 = static_cast<uint64_t>(std::ldexp(f, 53));
        ed = e;
    }

    static bool mag_less(const BigFloat& a, const BigFloat& b) {
        if (a.exp_ != b.exp_) return a.exp_ < b.exp_;
        for (int i = kWords - 1; i >= 0; --i)
            if (a.w_[i] != b.w_[i]) return a.w_[i] < b.w_[i];
        return false;
    }

    static void shift_right(uint64_t* w, int n, long bits) {
        if (bits <= 0) return;
        if (bits >= 64L * n) {
            std::memset(w, 0, sizeof(uint64_t) * n);
            return;
        }
        long words = bits / 64, rem = bits % 64;
        if (words > 0) {
            for (int i = 0; i + words < n; ++i) w[i] = w[i + words];
            for (int i = n - static_cast<int>(words); i < n; ++i) w[i] = 0;
        }
        if (rem > 0) {
            for (int i = 0; i < n; ++i) {
                uint64_t high = (i + 1 < n) ? w[i + 1] : 0;
                w[i] = (w[i] >> rem) | (high << (64 - rem));
            }
        }
    }

    // value = (sum ext[i] 2^(64 i) / 2^(64*(kWords+1))) * 2^base_exp
    void set_from_extended(const uint64_t* ext, long base_exp) {
        int top = kWords;
        while (top >= 0 && ext[top] == 0) --top;
        if (top < 0) {
            sign_ = 0;
            exp_ = 0;
            std::memset(w_, 0, sizeof(w_));
            return;
        }
        int lead = 63 - highest_bit(ext[top]);
        long t_bit = 64L * top + (63 - lead);             // index of top set bit
        long shift_left_bits = 64L * (kWords + 1) - 1 - t_bit;
        uint64_t buf[kWords + 1];
        std::memcpy(buf, ext, sizeof(buf));
        long words = shift_left_bits / 64, rem = shift_left_bits % 64;
        if (words > 0) {
            for (int i = kWords; i >= 0; --i)
                buf[i] = (i - words >= 0) ? buf[i - words] : 0;
        }
        if (rem > 0) {
            for (int i = kWords; i >= 0; --i) {
                uint64_t low = (i > 0) ? buf[i - 1] : 0;
                buf[i] = (buf[i] << rem) | (low >> (64 - rem));
            }
        }
        std::memcpy(w_, buf + 1, sizeof(w_)); // drop lowest word (truncate)
        exp_ = base_exp - shift_left_bits;
        if (sign_ == 0) sign_ = 1;
    }

    static int highest_bit(uint64_t v) {
        int b = 0;
        while (v >>= 1) ++b;
        return b;
    }

    void normalize() {
        uint64_t ext[kWords + 1] = {};
        std::memcpy(ext, w_, sizeof(w_));
        long e = exp_;
        int s = sign_;
        set_from_extended(ext, e + 64);
        sign_ = s;
    }
};

} // namespace testsupport

#endif
