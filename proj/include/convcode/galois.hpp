// Finite-field arithmetic over GF(2^w), w in {4, 8, 16}.
//
// Elements are polynomials over GF(2) stored as unsigned bitmasks, reduced
// modulo an irreducible polynomial of degree w. Addition is XOR. For w <= 8
// multiplication goes through log/antilog tables built from a generator of
// the multiplicative group; for w = 16 it is a carry-less multiply followed
// by polynomial reduction (tables of that size are not worth the cache).

#pragma once

#include <bit>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace convcode {

using felem = std::uint16_t;

struct field_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace gf2poly {

// Polynomials over GF(2) packed into bitmasks, bit i = coefficient of x^i.

inline int degree(std::uint64_t p) {
    return p == 0 ? -1 : 63 - std::countl_zero(p);
}

inline std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t acc = 0;
    while (b != 0) {
        acc ^= a << std::countr_zero(b);
        b &= b - 1;
    }
    return acc;
}

inline std::uint64_t mod(std::uint64_t a, std::uint64_t m) {
    const int dm = degree(m);
    for (int d = degree(a); d >= dm; d = degree(a)) {
        a ^= m << (d - dm);
    }
    return a;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return mod(mul(a, b), m);
}

inline std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
    while (b != 0) {
        a = mod(a, b);
        std::swap(a, b);
    }
    return a;
}

// Rabin's test specialized to degrees whose only prime factor is 2
// (true for 4, 8 and 16): f is irreducible iff x^(2^w) == x (mod f)
// and gcd(x^(2^(w/2)) - x, f) = 1.
inline bool irreducible(std::uint64_t f) {
    const int w = degree(f);
    if (w < 2) {
        return false;
    }
    std::uint64_t t = 2;  // the polynomial x
    for (int i = 0; i < w / 2; ++i) {
        t = mulmod(t, t, f);
    }
    if (gcd(t ^ 2u, f) != 1) {
        return false;
    }
    for (int i = w / 2; i < w; ++i) {
        t = mulmod(t, t, f);
    }
    return t == 2;
}

}  // namespace gf2poly

// Standard erasure-coding moduli, fixed so tables and test vectors are
// reproducible across builds.
inline std::uint32_t default_modulus(unsigned width) {
    switch (width) {
        case 4: return 0x13;      // x^4 + x + 1
        case 8: return 0x11D;     // x^8 + x^4 + x^3 + x^2 + 1
        case 16: return 0x1100B;  // x^16 + x^12 + x^3 + x + 1
        default: throw field_error("unsupported field width " + std::to_string(width));
    }
}

class Field {
public:
    explicit Field(unsigned width) : Field(width, default_modulus(width)) {}

    Field(unsigned width, std::uint32_t modulus) : width_(width), modulus_(modulus) {
        if (width != 4 && width != 8 && width != 16) {
            throw field_error("field width must be 4, 8 or 16");
        }
        if (gf2poly::degree(modulus) != static_cast<int>(width)) {
            throw field_error("modulus degree does not match field width");
        }
        if (!gf2poly::irreducible(modulus)) {
            throw field_error("modulus is not irreducible over GF(2)");
        }
        if (width <= 8) {
            tables_ = build_tables(width, modulus);
        }
    }

    unsigned width() const { return width_; }
    std::uint32_t modulus() const { return modulus_; }
    std::uint32_t order() const { return 1u << width_; }
    felem max_element() const { return static_cast<felem>(order() - 1); }

    static felem add(felem a, felem b) { return a ^ b; }
    static felem sub(felem a, felem b) { return a ^ b; }  // characteristic 2

    felem mul(felem a, felem b) const {
        if (tables_) {
            if (a == 0 || b == 0) {
                return 0;
            }
            return tables_->exp[tables_->log[a] + tables_->log[b]];
        }
        return static_cast<felem>(gf2poly::mulmod(a, b, modulus_));
    }

    felem inv(felem a) const {
        if (a == 0) {
            throw field_error("zero has no multiplicative inverse");
        }
        if (tables_) {
            return tables_->exp[(order() - 1) - tables_->log[a]];
        }
        return pow(a, order() - 2);  // a^(q-2) = a^-1
    }

    felem div(felem a, felem b) const { return mul(a, inv(b)); }

    felem pow(felem a, std::uint64_t e) const {
        felem acc = 1;
        felem base = a;
        while (e != 0) {
            if (e & 1) {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        return acc;
    }

    bool operator==(const Field& other) const {
        return width_ == other.width_ && modulus_ == other.modulus_;
    }
    bool operator!=(const Field& other) const { return !(*this == other); }

private:
    struct Tables {
        std::vector<felem> log;  // index by element, log[0] unused
        std::vector<felem> exp;  // doubled so log sums need no modular fold
    };

    static std::shared_ptr<const Tables> build_tables(unsigned width, std::uint32_t modulus) {
        const std::uint32_t q = 1u << width;
        const felem g = find_generator(width, modulus);
        auto t = std::make_shared<Tables>();
        t->log.assign(q, 0);
        t->exp.assign(2 * (q - 1), 0);
        felem x = 1;
        for (std::uint32_t i = 0; i < q - 1; ++i) {
            t->exp[i] = x;
            t->exp[i + (q - 1)] = x;
            t->log[x] = static_cast<felem>(i);
            x = static_cast<felem>(gf2poly::mulmod(x, g, modulus));
        }
        return t;
    }

    static felem find_generator(unsigned width, std::uint32_t modulus) {
        const std::uint32_t group = (1u << width) - 1;
        // prime factors of 2^4 - 1 and 2^8 - 1
        const std::uint32_t factors[] = {3, 5, 17};
        for (felem g = 2; g < (1u << width); ++g) {
            bool primitive = true;
            for (std::uint32_t p : factors) {
                if (group % p != 0) {
                    continue;
                }
                std::uint64_t t = 1;
                for (std::uint32_t i = 0; i < group / p; ++i) {
                    t = gf2poly::mulmod(t, g, modulus);
                }
                if (t == 1) {
                    primitive = false;
                    break;
                }
            }
            if (primitive) {
                return g;
            }
        }
        throw field_error("no generator found (modulus not irreducible?)");
    }

    unsigned width_;
    std::uint32_t modulus_;
    std::shared_ptr<const Tables> tables_;  // null for w = 16
};

}  // namespace convcode
