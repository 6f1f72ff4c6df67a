#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace flagkit {

/// Exact arbitrary-precision rational scalar.
using Rational = boost::multiprecision::cpp_rational;

/// Runtime tag identifying a coefficient field: F_p (p prime) or Q.
/// p == 0 encodes the rationals.
struct FieldId {
    std::uint32_t p = 0;

    bool is_rational() const { return p == 0; }
    bool operator==(const FieldId&) const = default;

    std::string name() const { return is_rational() ? "Q" : "F_" + std::to_string(p); }
};

constexpr std::uint32_t kMaxPrime = 97;

inline bool is_small_prime(std::uint32_t p) {
    if (p < 2 || p > kMaxPrime) return false;
    for (std::uint32_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

/// Arithmetic in F_p for a runtime prime modulus p <= 97.
/// Elements are canonical residues in [0, p).
class PrimeField {
public:
    using Element = std::uint32_t;

    explicit PrimeField(std::uint32_t p) : p_(p) {
        if (!is_small_prime(p))
            throw std::invalid_argument("PrimeField: modulus must be a prime <= " +
                                        std::to_string(kMaxPrime));
    }

    std::uint32_t modulus() const { return p_; }
    FieldId id() const { return FieldId{p_}; }
    std::uint32_t characteristic() const { return p_; }

    Element zero() const { return 0; }
    Element one() const { return 1; }
    bool is_zero(Element a) const { return a == 0; }

    Element from_int(long long x) const {
        long long r = x % static_cast<long long>(p_);
        if (r < 0) r += p_;
        return static_cast<Element>(r);
    }

    Element add(Element a, Element b) const { return (a + b) % p_; }
    Element sub(Element a, Element b) const { return (a + p_ - b) % p_; }
    Element neg(Element a) const { return a == 0 ? 0 : p_ - a; }
    Element mul(Element a, Element b) const {
        return static_cast<Element>((static_cast<std::uint64_t>(a) * b) % p_);
    }

    Element inv(Element a) const {
        if (a == 0) throw std::domain_error("PrimeField: inverse of zero");
        // extended Euclid on (a, p)
        long long t = 0, new_t = 1;
        long long r = p_, new_r = a;
        while (new_r != 0) {
            long long q = r / new_r;
            long long tmp = t - q * new_t;
            t = new_t;
            new_t = tmp;
            tmp = r - q * new_r;
            r = new_r;
            new_r = tmp;
        }
        if (t < 0) t += p_;
        return static_cast<Element>(t);
    }

    Element div(Element a, Element b) const { return mul(a, inv(b)); }

    /// Number of field elements; enumeration visits from_index(0..p-1).
    static constexpr bool enumerable = true;
    std::uint64_t size() const { return p_; }
    Element from_index(std::uint64_t i) const { return static_cast<Element>(i % p_); }

    std::string to_string(Element a) const { return std::to_string(a); }

    bool operator==(const PrimeField&) const = default;

private:
    std::uint32_t p_;
};

/// Arithmetic in Q with arbitrary-precision exact fractions.
class RationalField {
public:
    using Element = Rational;

    RationalField() = default;

    FieldId id() const { return FieldId{0}; }
    std::uint32_t characteristic() const { return 0; }

    Element zero() const { return Rational(0); }
    Element one() const { return Rational(1); }
    bool is_zero(const Element& a) const { return a == 0; }

    Element from_int(long long x) const { return Rational(x); }

    Element add(const Element& a, const Element& b) const { return a + b; }
    Element sub(const Element& a, const Element& b) const { return a - b; }
    Element neg(const Element& a) const { return -a; }
    Element mul(const Element& a, const Element& b) const { return a * b; }

    Element inv(const Element& a) const {
        if (a == 0) throw std::domain_error("RationalField: inverse of zero");
        return 1 / a;
    }

    Element div(const Element& a, const Element& b) const { return a / b; }

    static constexpr bool enumerable = false;
    std::uint64_t size() const { throw std::domain_error("RationalField: not finite"); }
    Element from_index(std::uint64_t) const {
        throw std::domain_error("RationalField: not enumerable");
    }

    std::string to_string(const Element& a) const {
        return numerator(a).str() + "/" + denominator(a).str();
    }

    bool operator==(const RationalField&) const { return true; }
};

template <class F>
concept FieldType = requires(const F f, typename F::Element a) {
    { f.zero() } -> std::convertible_to<typename F::Element>;
    { f.one() } -> std::convertible_to<typename F::Element>;
    { f.add(a, a) } -> std::convertible_to<typename F::Element>;
    { f.sub(a, a) } -> std::convertible_to<typename F::Element>;
    { f.mul(a, a) } -> std::convertible_to<typename F::Element>;
    { f.neg(a) } -> std::convertible_to<typename F::Element>;
    { f.inv(a) } -> std::convertible_to<typename F::Element>;
    { f.is_zero(a) } -> std::convertible_to<bool>;
    { f.id() } -> std::convertible_to<FieldId>;
    { f.characteristic() } -> std::convertible_to<std::uint32_t>;
};

}  // namespace flagkit
