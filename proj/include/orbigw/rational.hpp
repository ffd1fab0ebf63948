#ifndef ORBIGW_RATIONAL_HPP
#define ORBIGW_RATIONAL_HPP

#include <gmp.h>

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "orbigw/errors.hpp"

namespace orbigw {

// Exact rational number on top of GMP's mpq layer. Always canonical:
// lowest terms, denominator > 0. No floating point anywhere.
class Rational {
public:
    Rational() { mpq_init(q_); }

    Rational(long n) { // NOLINT(google-explicit-constructor) - numeric literal ergonomics
        mpq_init(q_);
        mpq_set_si(q_, n, 1);
    }

    Rational(int n) : Rational(static_cast<long>(n)) {} // NOLINT(google-explicit-constructor)

    Rational(long num, long den) {
        if (den == 0) throw DomainError("rational with zero denominator");
        mpq_init(q_);
        mpq_set_si(q_, num, 1);
        mpq_t d;
        mpq_init(d);
        mpq_set_si(d, den, 1);
        mpq_div(q_, q_, d);
        mpq_clear(d);
    }

    Rational(const Rational& o) {
        mpq_init(q_);
        mpq_set(q_, o.q_);
    }

    Rational(Rational&& o) noexcept {
        mpq_init(q_);
        mpq_swap(q_, o.q_);
    }

    Rational& operator=(const Rational& o) {
        if (this != &o) mpq_set(q_, o.q_);
        return *this;
    }

    Rational& operator=(Rational&& o) noexcept {
        if (this != &o) mpq_swap(q_, o.q_);
        return *this;
    }

    ~Rational() { mpq_clear(q_); }

    // Accepts "p", "-p" or "p/q" in base 10.
    static Rational from_string(const std::string& s) {
        Rational r;
        if (s.empty() || mpq_set_str(r.q_, s.c_str(), 10) != 0)
            throw StructuralError("cannot parse rational: '" + s + "'");
        if (mpz_sgn(mpq_denref(r.q_)) == 0)
            throw DomainError("rational with zero denominator: '" + s + "'");
        mpq_canonicalize(r.q_);
        return r;
    }

    static Rational factorial(unsigned long n) {
        Rational r;
        mpz_fac_ui(mpq_numref(r.q_), n);
        return r;
    }

    bool is_zero() const { return mpq_sgn(q_) == 0; }
    bool is_one() const { return mpq_cmp_si(q_, 1, 1) == 0; }
    bool is_integer() const { return mpz_cmp_ui(mpq_denref(q_), 1) == 0; }
    int sign() const { return mpq_sgn(q_); }

    // Largest integer <= *this. The values we floor (α·w etc.) are small.
    long floor_long() const {
        mpz_t f;
        mpz_init(f);
        mpz_fdiv_q(f, mpq_numref(q_), mpq_denref(q_));
        if (!mpz_fits_slong_p(f)) {
            mpz_clear(f);
            throw DomainError("floor does not fit a machine integer");
        }
        long v = mpz_get_si(f);
        mpz_clear(f);
        return v;
    }

    // Fractional part <x> = x - floor(x), in [0,1).
    Rational frac() const { return *this - Rational(floor_long()); }

    long num_long() const {
        if (!mpz_fits_slong_p(mpq_numref(q_))) throw DomainError("numerator too large");
        return mpz_get_si(mpq_numref(q_));
    }

    long den_long() const {
        if (!mpz_fits_slong_p(mpq_denref(q_))) throw DomainError("denominator too large");
        return mpz_get_si(mpq_denref(q_));
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        Rational r;
        mpq_add(r.q_, a.q_, b.q_);
        return r;
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        Rational r;
        mpq_sub(r.q_, a.q_, b.q_);
        return r;
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        Rational r;
        mpq_mul(r.q_, a.q_, b.q_);
        return r;
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw DomainError("division by zero");
        Rational r;
        mpq_div(r.q_, a.q_, b.q_);
        return r;
    }
    Rational operator-() const {
        Rational r;
        mpq_neg(r.q_, q_);
        return r;
    }

    Rational& operator+=(const Rational& b) {
        mpq_add(q_, q_, b.q_);
        return *this;
    }
    Rational& operator-=(const Rational& b) {
        mpq_sub(q_, q_, b.q_);
        return *this;
    }
    Rational& operator*=(const Rational& b) {
        mpq_mul(q_, q_, b.q_);
        return *this;
    }
    Rational& operator/=(const Rational& b) {
        if (b.is_zero()) throw DomainError("division by zero");
        mpq_div(q_, q_, b.q_);
        return *this;
    }

    // *this += a*b without a named temporary at the call site.
    void add_mul(const Rational& a, const Rational& b) {
        mpq_t t;
        mpq_init(t);
        mpq_mul(t, a.q_, b.q_);
        mpq_add(q_, q_, t);
        mpq_clear(t);
    }

    Rational inverse() const {
        if (is_zero()) throw DomainError("inverse of zero");
        Rational r;
        mpq_inv(r.q_, q_);
        return r;
    }

    Rational pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        Rational r(1);
        Rational base(*this);
        while (e > 0) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    friend bool operator==(const Rational& a, const Rational& b) { return mpq_equal(a.q_, b.q_) != 0; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) < 0; }
    friend bool operator<=(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) <= 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) > 0; }
    friend bool operator>=(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) >= 0; }

    // Canonical "p" / "p/q" form, the serialization used in all outputs.
    std::string to_string() const {
        std::string n = mpz_to_string(mpq_numref(q_));
        if (is_integer()) return n;
        return n + "/" + mpz_to_string(mpq_denref(q_));
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

    std::size_t hash() const {
        const unsigned long m = 0x7fffffffull;
        std::size_t h = mpz_fdiv_ui(mpq_numref(q_), m);
        h = h * 1000003u + mpz_fdiv_ui(mpq_denref(q_), m);
        if (sign() < 0) h = ~h;
        return h;
    }

    // Series-coefficient interface shared with AlgebraElement.
    Rational scaled(const Rational& c) const { return *this * c; }
    Rational make_one() const { return Rational(1); }
    Rational invert() const { return inverse(); }

private:
    static std::string mpz_to_string(mpz_srcptr z) {
        std::vector<char> buf(mpz_sizeinbase(z, 10) + 2);
        mpz_get_str(buf.data(), 10, z);
        return std::string(buf.data());
    }

    mpq_t q_;
};

inline Rational gcd_rational_free(long, long) = delete; // weights use machine gcd

inline long gcd_long(long a, long b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline long lcm_long(long a, long b) { return a / gcd_long(a, b) * b; }

} // namespace orbigw

#endif
