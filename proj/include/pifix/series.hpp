#pragma once
// series.hpp - arcsin-derived coefficients, the sine kernel, the fixed-point
// map S(x) = x + sum_k c_k sin(x)^(2k-1), and exact formal power series used
// to check the Taylor expansion of S about pi.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "pifix/error.hpp"
#include "pifix/numerics.hpp"
#include "pifix/rational.hpp"

namespace pifix {

/// c_k = (prod_{l<k} (2l-1)/(2l)) / (2k-1) for k = 1..P.
class CoefficientTable {
public:
    explicit CoefficientTable(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw InvalidArgument("coefficient table needs order >= 1");
    }

    std::size_t order() const noexcept { return coeffs_.size(); }
    /// c_k for k in [1, order()].
    const Rational& operator[](std::size_t k) const { return coeffs_.at(k - 1); }
    const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }

private:
    std::vector<Rational> coeffs_;
};

/// Exact coefficients via the running product of (2l-1)/(2l).
inline CoefficientTable make_coefficients(std::size_t order) {
    if (order == 0) throw InvalidArgument("order P must be >= 1");
    std::vector<Rational> c;
    c.reserve(order);
    Rational prod(1);
    for (std::size_t k = 1; k <= order; ++k) {
        if (k > 1) prod *= Rational(static_cast<long>(2 * k - 3), static_cast<long>(2 * k - 2));
        c.push_back(prod / Rational(static_cast<long>(2 * k - 1)));
    }
    return CoefficientTable(std::move(c));
}

/// C = (prod_{l=1}^{P} (2l-1))^2 / (2P+1)!, returned as separate numerator
/// and denominator before reduction.
struct ErrorConstantTerms {
    mpz_class odd_product_squared;
    mpz_class factorial;
};

inline ErrorConstantTerms error_constant_terms(std::size_t order) {
    if (order == 0) throw InvalidArgument("order P must be >= 1");
    mpz_class odd = 1;
    for (std::size_t l = 1; l <= order; ++l) odd *= static_cast<unsigned long>(2 * l - 1);
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), 2 * order + 1);
    return {odd * odd, fact};
}

/// Asymptotic error constant of the order-(2P+1) iteration.
inline Rational error_constant(std::size_t order) {
    auto t = error_constant_terms(order);
    return Rational(t.odd_product_squared, t.factorial);
}

namespace detail {

/// Terms (j = 0..n-1) of the Maclaurin sine series needed so the first
/// omitted term's worst-case bound 4^(2j+1)/(2j+1)! drops below 10^-(digits+2).
inline std::size_t sine_term_count(std::size_t digits) {
    const double target = -(static_cast<double>(digits) + 2.0);
    double log_bound = std::log10(4.0);  // j = 0
    std::size_t j = 0;
    while (log_bound >= target) {
        ++j;
        log_bound += 2 * std::log10(4.0) - std::log10(double(2 * j)) - std::log10(double(2 * j + 1));
    }
    return j;
}

inline std::size_t bit_length(std::size_t v) {
    std::size_t n = 0;
    while (v) { ++n; v >>= 1; }
    return n;
}

/// sin(x) on binary fixed point: x_bin, result scaled by 2^bits.
///
/// The series sin(x)/x = sum_j (-1)^j y^j / (2j+1)!, y = x^2, is split into
/// blocks of m terms. Within a block only precomputed powers y^0..y^(m-1)
/// and small-integer divisions are used; blocks are combined by Horner in
/// y^m. Full-width multiplications drop from n to about 2*sqrt(n).
inline mpz_class sine_binary(const mpz_class& x, std::size_t bits, std::size_t terms) {
    auto fix_mul = [bits](const mpz_class& a, const mpz_class& b) {
        mpz_class r = a * b;
        mpz_tdiv_q_2exp(r.get_mpz_t(), r.get_mpz_t(), bits);
        return r;
    };

    const mpz_class y = fix_mul(x, x);
    const std::size_t m = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(double(terms))));
    std::vector<mpz_class> powers(m + 1);
    powers[0] = mpz_class(1) << bits;
    for (std::size_t r = 1; r <= m; ++r) powers[r] = fix_mul(powers[r - 1], y);

    // D_k = (2k+2)(2k+3): ratio between consecutive series coefficients.
    auto divisor = [](std::size_t k) { return static_cast<unsigned long>((2 * k + 2) * (2 * k + 3)); };

    const std::size_t blocks = (terms + m - 1) / m;
    mpz_class acc = 0;
    for (std::size_t i = blocks; i-- > 0;) {
        const std::size_t first = i * m;
        const std::size_t len = std::min(m, terms - first);
        // Block value sum_r (-1)^r y^r / prod_{t<r} D_(first+t), inner Horner.
        mpz_class block = 0;
        for (std::size_t r = len; r-- > 0;) {
            if (r + 1 < len) mpz_tdiv_q_ui(block.get_mpz_t(), block.get_mpz_t(), divisor(first + r));
            if (r % 2 == 0) block += powers[r]; else block -= powers[r];
        }
        if (i + 1 < blocks) {
            // acc carries block i+1 onward relative to y^((i+1)m)/(2(i+1)m+1)!
            mpz_class tail = fix_mul(acc, powers[m]);
            mpz_class den = 1;
            for (std::size_t t = 0; t < m; ++t) den *= divisor(first + t);
            mpz_tdiv_q(tail.get_mpz_t(), tail.get_mpz_t(), den.get_mpz_t());
            if (m % 2 == 1) tail = -tail;
            block += tail;
        }
        acc = std::move(block);
    }
    return fix_mul(acc, x);
}

} // namespace detail

/// sin(x) with |result - sin(x)| <= 10^-prec, for |x| <= 4.
inline BigFixed sin_eval(const BigFixed& x, Precision prec) {
    if (abs(x) > BigFixed::from_integer(4)) throw DomainError("sin_eval requires |x| <= 4");
    const std::size_t digits = prec.digits();
    if (x.is_zero()) return {mpz_class(0), digits};

    const std::size_t terms = detail::sine_term_count(digits);
    // log2(10) < 3.3220; guard bits cover truncation in O(terms) operations.
    const std::size_t bits = static_cast<std::size_t>(std::ceil(double(digits + 2) * 3.3220))
        + 32 + 2 * detail::bit_length(terms);

    mpz_class xb = x.mantissa() << bits;
    mpz_tdiv_q(xb.get_mpz_t(), xb.get_mpz_t(), detail::pow10(x.frac_digits()).get_mpz_t());

    mpz_class s = detail::sine_binary(xb, bits, terms) * detail::pow10(digits);
    mpz_tdiv_q_2exp(s.get_mpz_t(), s.get_mpz_t(), bits);
    return {s, digits};
}

/// sin(x) for |x| <= 12: triple-angle reduction into sin_eval's domain.
inline BigFixed sin_eval_wide(const BigFixed& x, Precision prec) {
    if (abs(x) <= BigFixed::from_integer(4)) return sin_eval(x, prec);
    if (abs(x) > BigFixed::from_integer(12)) throw DomainError("sin_eval_wide requires |x| <= 12");
    const Precision inner(prec.digits() + 4);
    BigFixed third = div(x, 3, inner);
    BigFixed s = sin_eval(third, inner);
    BigFixed cube = mul(mul(s, s, inner), s, inner);
    BigFixed r = BigFixed(s.mantissa() * 3, inner.digits()) - BigFixed(cube.mantissa() * 4, inner.digits());
    return round_to(r, prec.digits());
}

/// x + sum_k c_k s^(2k-1) given s = sin(x), with s at or above the
/// working precision. Terms under 10^-(prec+2) are dropped.
inline BigFixed s_eval_with_sine(const BigFixed& x, const BigFixed& s, const CoefficientTable& table,
                                 Precision prec) {
    const std::size_t work = prec.digits() + 2;
    const Precision wp(work);
    BigFixed sw = round_to(s, work);
    BigFixed s2 = mul(sw, sw, wp);
    BigFixed power = sw;  // s^(2k-1)
    BigFixed sum = round_to(x, work);
    auto s_exp = magnitude_exponent(sw);
    for (std::size_t k = 1; k <= table.order(); ++k) {
        if (k > 1) {
            // c_k <= 1, so |c_k s^(2k-1)| < 10^((2k-1)(e+1)).
            if (!s_exp || (static_cast<long>(2 * k - 1) * (*s_exp + 1) < -static_cast<long>(work))) break;
            power = mul(power, s2, wp);
        }
        const Rational& c = table[k];
        mpz_class term = power.mantissa() * c.numerator();
        mpz_tdiv_q(term.get_mpz_t(), term.get_mpz_t(), c.denominator().get_mpz_t());
        sum = sum + BigFixed(term, work);
    }
    return round_to(sum, prec.digits());
}

/// The fixed-point map S(x) with total error <= 3*10^-prec, |x| <= 4.
inline BigFixed s_eval(const BigFixed& x, const CoefficientTable& table, Precision prec) {
    return s_eval_with_sine(x, sin_eval(x, Precision(prec.digits() + 2)), table, prec);
}

/// Dense truncated power series a_0 + a_1 t + ... + a_K t^K over Q.
class FormalSeries {
public:
    explicit FormalSeries(std::size_t truncation_order) : coeffs_(truncation_order + 1) {}
    FormalSeries(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) coeffs_.resize(1);
    }

    std::size_t truncation_order() const noexcept { return coeffs_.size() - 1; }
    const Rational& operator[](std::size_t i) const { return coeffs_.at(i); }
    Rational& operator[](std::size_t i) { return coeffs_.at(i); }
    const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }

    friend FormalSeries operator+(const FormalSeries& a, const FormalSeries& b) {
        FormalSeries r(std::min(a.truncation_order(), b.truncation_order()));
        for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] = a[i] + b[i];
        return r;
    }
    friend FormalSeries operator-(const FormalSeries& a, const FormalSeries& b) {
        FormalSeries r(std::min(a.truncation_order(), b.truncation_order()));
        for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] = a[i] - b[i];
        return r;
    }
    /// Product truncated at the smaller order.
    friend FormalSeries operator*(const FormalSeries& a, const FormalSeries& b) {
        FormalSeries r(std::min(a.truncation_order(), b.truncation_order()));
        const std::size_t k = r.truncation_order();
        for (std::size_t i = 0; i <= k; ++i) {
            if (a[i].is_zero()) continue;
            for (std::size_t j = 0; i + j <= k; ++j)
                if (!b[j].is_zero()) r.coeffs_[i + j] += a[i] * b[j];
        }
        return r;
    }
    friend FormalSeries operator*(const Rational& c, const FormalSeries& a) {
        FormalSeries r = a;
        for (auto& v : r.coeffs_) v *= c;
        return r;
    }
    friend bool operator==(const FormalSeries&, const FormalSeries&) = default;

private:
    std::vector<Rational> coeffs_;
};

/// sin t = sum (-1)^j t^(2j+1)/(2j+1)! to order K.
inline FormalSeries sine_series(std::size_t order) {
    FormalSeries s(order);
    mpz_class fact = 1;
    for (std::size_t n = 1; n <= order; ++n) {
        fact *= static_cast<unsigned long>(n);
        if (n % 2 == 1) s[n] = Rational(mpz_class((n / 2) % 2 == 0 ? 1 : -1), fact);
    }
    return s;
}

/// Exact expansion of S(pi + t) - pi = t - sum_k c_k (sin t)^(2k-1), using
/// sin(pi + t) = -sin t.
inline FormalSeries taylor_of_S(std::size_t order, std::size_t truncation) {
    if (truncation < 2 * order + 1) throw InvalidArgument("truncation order must be >= 2P+1");
    const CoefficientTable table = make_coefficients(order);
    const FormalSeries sin_t = sine_series(truncation);
    const FormalSeries sin_sq = sin_t * sin_t;

    FormalSeries result(truncation);
    result[1] = Rational(1);
    FormalSeries power = sin_t;
    for (std::size_t k = 1; k <= order; ++k) {
        if (k > 1) power = power * sin_sq;
        result = result - table[k] * power;
    }
    return result;
}

} // namespace pifix
