#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace cspforge {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Thrown on precondition violations throughout the library. `kind` is a
// stable machine-readable tag ("vocabulary_mismatch", "size_limit", ...).
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& msg) {
    throw Error(kind, msg);
}

bool is_prime(uint64_t p);

// Scalar domain for polynomial arithmetic: the rationals or GF(p), p prime.
class FieldSpec {
public:
    static FieldSpec rationals() { return FieldSpec(0); }
    static FieldSpec gf(uint64_t p) {
        if (!is_prime(p)) fail("field", "GF(p) requires prime p, got " + std::to_string(p));
        return FieldSpec(p);
    }
    static FieldSpec parse(const std::string& s);

    bool is_rational() const { return p_ == 0; }
    bool is_prime_field() const { return p_ != 0; }
    uint64_t prime() const { return p_; }
    // Characteristic pairs the twin-variable axioms with the right arithmetic.
    uint64_t characteristic() const { return p_; }

    bool operator==(const FieldSpec& o) const { return p_ == o.p_; }
    bool operator!=(const FieldSpec& o) const { return p_ != o.p_; }

    std::string to_string() const { return p_ == 0 ? "Q" : "gf:" + std::to_string(p_); }

    // Canonicalizes v into the field: mod-p residue in [0,p) for GF(p),
    // identity for Q. Denominators in GF(p) are cleared via modular inverse.
    BigRat reduce(const BigRat& v) const;
    BigRat add(const BigRat& a, const BigRat& b) const { return reduce(a + b); }
    BigRat sub(const BigRat& a, const BigRat& b) const { return reduce(a - b); }
    BigRat mul(const BigRat& a, const BigRat& b) const { return reduce(a * b); }
    BigRat neg(const BigRat& a) const { return reduce(-a); }
    BigRat inv(const BigRat& a) const;
    BigRat div(const BigRat& a, const BigRat& b) const { return mul(a, inv(b)); }
    bool is_zero(const BigRat& a) const { return reduce(a) == 0; }

private:
    explicit FieldSpec(uint64_t p) : p_(p) {}
    uint64_t p_ = 0;  // 0 means Q
};

// "p/q" or "p"; exact, no decimals.
BigRat parse_fraction(const std::string& s);
std::string fraction_to_string(const BigRat& v);

}  // namespace cspforge
