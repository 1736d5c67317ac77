#pragma once
// numerics.hpp - decimal fixed-point numbers of arbitrary precision.
//
// A BigFixed is an integer mantissa scaled by 10^-D. All arithmetic that
// has to drop digits truncates toward zero; callers carry guard digits.

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "pifix/error.hpp"

namespace pifix {

/// Working precision: decimal digits after the point.
class Precision {
public:
    explicit Precision(std::size_t digits) : digits_(digits) {
        if (digits == 0) throw InvalidArgument("precision must be at least one digit");
    }
    std::size_t digits() const noexcept { return digits_; }
    friend bool operator==(Precision, Precision) = default;

private:
    std::size_t digits_;
};

namespace detail {

/// 10^n, memoized per thread. Ladder precisions repeat a lot.
inline const mpz_class& pow10(std::size_t n) {
    thread_local std::unordered_map<std::size_t, mpz_class> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (cache.size() > 64) cache.clear();
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, n);
    return cache.emplace(n, std::move(p)).first->second;
}

/// Exact number of decimal digits of |m|; 0 for m == 0.
inline std::size_t decimal_length(const mpz_class& m) {
    if (m == 0) return 0;
    std::size_t n = mpz_sizeinbase(m.get_mpz_t(), 10);
    // sizeinbase may overshoot by one
    if (n > 1 && mpz_cmpabs(m.get_mpz_t(), pow10(n - 1).get_mpz_t()) < 0) --n;
    return n;
}

inline mpz_class tdiv(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

/// Mantissa of a value moved from scale 10^-from to 10^-to, truncated.
inline mpz_class rescale(const mpz_class& m, std::size_t from, std::size_t to) {
    if (to == from) return m;
    if (to > from) return m * pow10(to - from);
    return tdiv(m, pow10(from - to));
}

} // namespace detail

class BigFixed {
public:
    BigFixed() = default;
    BigFixed(mpz_class mantissa, std::size_t frac_digits)
        : mantissa_(std::move(mantissa)), frac_digits_(frac_digits) {}

    static BigFixed from_integer(long v, std::size_t frac_digits = 0) {
        return {mpz_class(v) * detail::pow10(frac_digits), frac_digits};
    }

    const mpz_class& mantissa() const noexcept { return mantissa_; }
    std::size_t frac_digits() const noexcept { return frac_digits_; }
    int sign() const noexcept { return sgn(mantissa_); }
    bool is_zero() const noexcept { return mantissa_ == 0; }

    /// Mantissa expressed at scale 10^-d (truncated when d < frac_digits()).
    mpz_class mantissa_at(std::size_t d) const { return detail::rescale(mantissa_, frac_digits_, d); }

    BigFixed operator-() const { return {-mantissa_, frac_digits_}; }

    // Exact: the result keeps the larger of the two scales.
    friend BigFixed operator+(const BigFixed& a, const BigFixed& b) {
        std::size_t d = std::max(a.frac_digits_, b.frac_digits_);
        return {a.mantissa_at(d) + b.mantissa_at(d), d};
    }
    friend BigFixed operator-(const BigFixed& a, const BigFixed& b) { return a + (-b); }

    friend bool operator==(const BigFixed& a, const BigFixed& b) {
        std::size_t d = std::max(a.frac_digits_, b.frac_digits_);
        return a.mantissa_at(d) == b.mantissa_at(d);
    }
    friend std::strong_ordering operator<=>(const BigFixed& a, const BigFixed& b) {
        std::size_t d = std::max(a.frac_digits_, b.frac_digits_);
        int c = cmp(a.mantissa_at(d), b.mantissa_at(d));
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

private:
    mpz_class mantissa_{0};
    std::size_t frac_digits_ = 0;
};

inline BigFixed abs(const BigFixed& a) { return a.sign() < 0 ? -a : a; }

/// Truncates toward zero (or pads) to exactly d fractional digits.
inline BigFixed round_to(const BigFixed& x, std::size_t d) { return {x.mantissa_at(d), d}; }

/// Round to nearest at d fractional digits, ties to even.
inline BigFixed round_nearest(const BigFixed& x, std::size_t d) {
    if (d >= x.frac_digits()) return round_to(x, d);
    const mpz_class& unit = detail::pow10(x.frac_digits() - d);
    mpz_class mag = ::abs(x.mantissa());
    mpz_class q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), mag.get_mpz_t(), unit.get_mpz_t());
    int c = cmp(mpz_class(r * 2), unit);
    if (c > 0 || (c == 0 && mpz_odd_p(q.get_mpz_t()))) ++q;
    if (x.sign() < 0) q = -q;
    return {q, d};
}

/// floor(log10 |a|), or nullopt for zero.
inline std::optional<long> magnitude_exponent(const BigFixed& a) {
    if (a.is_zero()) return std::nullopt;
    return static_cast<long>(detail::decimal_length(a.mantissa())) - 1 - static_cast<long>(a.frac_digits());
}

/// Round to nearest keeping `digits` significant digits. Never produces a
/// negative scale: integers wider than `digits` are kept whole.
inline BigFixed round_significant(const BigFixed& x, std::size_t digits) {
    auto e = magnitude_exponent(x);
    if (!e) return round_to(x, digits);
    long frac = static_cast<long>(digits) - 1 - *e;
    return round_nearest(x, frac < 0 ? 0 : static_cast<std::size_t>(frac));
}

inline BigFixed add(const BigFixed& a, const BigFixed& b, Precision p) { return round_to(a + b, p.digits()); }
inline BigFixed sub(const BigFixed& a, const BigFixed& b, Precision p) { return round_to(a - b, p.digits()); }

/// |result - a*b| < 10^-p; exact integer product, then truncation.
inline BigFixed mul(const BigFixed& a, const BigFixed& b, Precision p) {
    BigFixed exact(a.mantissa() * b.mantissa(), a.frac_digits() + b.frac_digits());
    return round_to(exact, p.digits());
}

/// |result - a/m| < 10^-p.
inline BigFixed div(const BigFixed& a, long m, Precision p) {
    if (m == 0) throw ArithmeticError("division by zero");
    const std::size_t d = p.digits();
    mpz_class q = d >= a.frac_digits()
        ? detail::tdiv(a.mantissa() * detail::pow10(d - a.frac_digits()), mpz_class(m))
        : detail::tdiv(a.mantissa(), mpz_class(m) * detail::pow10(a.frac_digits() - d));
    return {q, d};
}

/// Parses [+-]digits[.digits][e[+-]digits], truncated toward zero at p.
inline BigFixed parse(std::string_view text, Precision p) {
    const std::string str(text);
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';

    std::string digits;
    std::size_t frac = 0;
    bool seen_point = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c >= '0' && c <= '9') {
            digits.push_back(c);
            if (seen_point) ++frac;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (digits.empty()) throw ParseError(str, i, "expected a digit");

    long exponent = 0;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool neg_exp = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg_exp = text[i++] == '-';
        std::size_t start = i;
        for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
            if (exponent > 100'000'000) throw ParseError(str, i, "exponent too large");
            exponent = exponent * 10 + (text[i] - '0');
        }
        if (i == start) throw ParseError(str, i, "expected exponent digits");
        if (neg_exp) exponent = -exponent;
    }
    if (i != text.size()) throw ParseError(str, i, std::string("unexpected character '") + text[i] + "'");

    // value = digits * 10^-(frac - exponent)
    mpz_class m(digits, 10);
    if (negative) m = -m;
    long scale = static_cast<long>(frac) - exponent;
    if (scale < 0) {
        m *= detail::pow10(static_cast<std::size_t>(-scale));
        scale = 0;
    }
    return round_to(BigFixed(m, static_cast<std::size_t>(scale)), p.digits());
}

namespace detail {

/// First n significant digits of |a| (truncated, zero padded) and the
/// magnitude exponent. Requires a != 0.
inline std::pair<std::string, long> significant_digits(const BigFixed& a, std::size_t n) {
    std::string all = mpz_class(::abs(a.mantissa())).get_str();
    long e = static_cast<long>(all.size()) - 1 - static_cast<long>(a.frac_digits());
    all.resize(n, '0');
    return {all, e};
}

} // namespace detail

/// "d.ddd" holding the first n significant digits of |a|, truncated; "0" for zero.
inline std::string leading_digits(const BigFixed& a, std::size_t n) {
    if (a.is_zero()) return "0";
    auto [d, e] = detail::significant_digits(a, n);
    return n > 1 ? d.substr(0, 1) + "." + d.substr(1) : d;
}

/// Renders with exactly sig significant digits, truncated. Positional when
/// the magnitude exponent lies in [0, sig), scientific ("4.726e-4") otherwise.
inline std::string to_decimal_string(const BigFixed& a, std::size_t sig) {
    if (a.is_zero()) return "0";
    if (sig == 0) sig = 1;
    auto [d, e] = detail::significant_digits(a, sig);
    std::string out = a.sign() < 0 ? "-" : "";
    if (e >= 0 && e < static_cast<long>(sig)) {
        auto int_len = static_cast<std::size_t>(e + 1);
        out += d.substr(0, int_len);
        if (int_len < d.size()) out += "." + d.substr(int_len);
        return out;
    }
    out += d.substr(0, 1);
    if (sig > 1) out += "." + d.substr(1);
    return out + "e" + std::to_string(e);
}

/// Positional rendering truncated at exactly `frac` fractional digits.
inline std::string to_fixed_string(const BigFixed& a, std::size_t frac) {
    mpz_class m = ::abs(a.mantissa_at(frac));
    std::string s = m.get_str();
    if (s.size() <= frac) s.insert(0, frac + 1 - s.size(), '0');
    std::string out = (a.sign() < 0 && m != 0) ? "-" : "";
    out += s.substr(0, s.size() - frac);
    if (frac > 0) out += "." + s.substr(s.size() - frac);
    return out;
}

} // namespace pifix
