#include "cspforge/field.hpp"

namespace cspforge {

bool is_prime(uint64_t p) {
    if (p < 2) return false;
    for (uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

FieldSpec FieldSpec::parse(const std::string& s) {
    if (s == "q" || s == "Q" || s == "rationals") return rationals();
    if (s.rfind("gf:", 0) == 0) return gf(std::stoull(s.substr(3)));
    fail("field", "unrecognized field spec '" + s + "' (expected q or gf:p)");
}

namespace {

BigInt mod_pos(const BigInt& a, uint64_t p) {
    BigInt r = a % p;
    if (r < 0) r += p;
    return r;
}

// Extended Euclid over the integers, used for inverses mod p.
BigInt mod_inverse(const BigInt& a, uint64_t p) {
    BigInt old_r = mod_pos(a, p), r = p;
    BigInt old_s = 1, s = 0;
    while (r != 0) {
        BigInt q = old_r / r;
        BigInt tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) fail("field", "element not invertible mod " + std::to_string(p));
    return mod_pos(old_s, p);
}

}  // namespace

BigRat FieldSpec::reduce(const BigRat& v) const {
    if (p_ == 0) return v;
    BigInt num = boost::multiprecision::numerator(v);
    BigInt den = boost::multiprecision::denominator(v);
    BigInt dm = mod_pos(den, p_);
    if (dm == 0) fail("field", "denominator divisible by characteristic");
    BigInt res = mod_pos(mod_pos(num, p_) * mod_inverse(dm, p_), p_);
    return BigRat(res);
}

BigRat FieldSpec::inv(const BigRat& a) const {
    if (p_ == 0) {
        if (a == 0) fail("field", "division by zero");
        return 1 / a;
    }
    BigRat r = reduce(a);
    if (r == 0) fail("field", "division by zero in GF(p)");
    return BigRat(mod_inverse(boost::multiprecision::numerator(r), p_));
}

BigRat parse_fraction(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return BigRat(BigInt(s));
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) fail("parse", "fraction with zero denominator: " + s);
        return BigRat(num, den);
    } catch (const std::exception& e) {
        fail("parse", "bad fraction '" + s + "': " + e.what());
    }
}

std::string fraction_to_string(const BigRat& v) {
    BigInt num = boost::multiprecision::numerator(v);
    BigInt den = boost::multiprecision::denominator(v);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

}  // namespace cspforge
