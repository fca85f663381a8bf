// Minimal exact rational on int64, enough for the bound formulas: values stay
// tiny (subsymbol counts), so overflow is not a practical concern here.

#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace convcode {

struct Rat {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rat() = default;
    Rat(std::int64_t n) : num(n), den(1) {}  // NOLINT: implicit by design
    Rat(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (den == 0) {
            throw std::invalid_argument("rational with zero denominator");
        }
        normalize();
    }

    void normalize() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num == 0) {
            den = 1;
        }
    }

    bool is_integer() const { return den == 1; }
    std::int64_t as_integer() const {
        if (!is_integer()) {
            throw std::domain_error("rational is not an integer");
        }
        return num;
    }
    double as_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend Rat operator+(Rat a, Rat b) { return Rat(a.num * b.den + b.num * a.den, a.den * b.den); }
    friend Rat operator-(Rat a, Rat b) { return Rat(a.num * b.den - b.num * a.den, a.den * b.den); }
    friend Rat operator*(Rat a, Rat b) { return Rat(a.num * b.num, a.den * b.den); }
    friend Rat operator/(Rat a, Rat b) {
        if (b.num == 0) {
            throw std::domain_error("rational division by zero");
        }
        return Rat(a.num * b.den, a.den * b.num);
    }
    friend bool operator==(Rat a, Rat b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(Rat a, Rat b) { return !(a == b); }
    friend bool operator<(Rat a, Rat b) { return a.num * b.den < b.num * a.den; }
    friend bool operator<=(Rat a, Rat b) { return a.num * b.den <= b.num * a.den; }
    friend bool operator>(Rat a, Rat b) { return b < a; }
    friend bool operator>=(Rat a, Rat b) { return b <= a; }

    friend std::ostream& operator<<(std::ostream& os, Rat r) {
        os << r.num;
        if (r.den != 1) {
            os << '/' << r.den;
        }
        return os;
    }
};

inline Rat min(Rat a, Rat b) { return a < b ? a : b; }
inline Rat max(Rat a, Rat b) { return a < b ? b : a; }

}  // namespace convcode
