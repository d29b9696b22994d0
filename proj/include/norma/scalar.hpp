#ifndef NORMA_SCALAR_HPP
#define NORMA_SCALAR_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "norma/errors.hpp"
#include "norma/rational.hpp"

namespace norma {

enum class DomainKind { Rationals, PrimeField, Integers, SimpleExtension };

namespace detail {

struct DomainData {
    DomainKind kind = DomainKind::Rationals;
    long p = 0;                     // PrimeField modulus
    std::vector<Rational> minpoly;  // SimpleExtension: monic, minpoly[i] = coeff of x^i
    std::string gen = "x";
    bool irreducibility_asserted = false;
};

inline bool is_prime(long n) {
    if (n < 2) return false;
    for (long q = 2; q * q <= n; ++q)
        if (n % q == 0) return false;
    return true;
}

inline BigInt c_times(const Rational& r, const BigInt& m) {
    return r.num() * (m / r.den());
}

// Rational-root probe for a monic rational polynomial (used for deg <= 3).
inline bool has_rational_root(const std::vector<Rational>& f) {
    // Clear denominators to an integer polynomial.
    BigInt lcm_den = 1;
    for (const auto& c : f) lcm_den = lcm_den / gcd(lcm_den, c.den()) * c.den();
    std::vector<BigInt> g(f.size());
    for (size_t i = 0; i < f.size(); ++i) g[i] = c_times(f[i], lcm_den);
    while (g.size() > 1 && g.back() == 0) g.pop_back();
    if (g.front() == 0) return true;  // root at 0
    auto divisors = [](BigInt n) {
        std::vector<BigInt> out;
        n = abs(n);
        for (BigInt k = 1; k * k <= n; ++k)
            if (n % k == 0) { out.push_back(k); if (k * k != n) out.push_back(n / k); }
        return out;
    };
    for (const BigInt& pn : divisors(g.front()))
        for (const BigInt& qn : divisors(g.back()))
            for (int sign : {1, -1}) {
                Rational cand(sign * pn, qn);
                Rational acc(0);
                for (size_t i = g.size(); i-- > 0;) acc = acc * cand + Rational(g[i]);
                if (acc.is_zero()) return true;
            }
    return false;
}

} // namespace detail

// An exact base ring: Q, F_p, Z, or Q[x]/(f). Cheap to copy.
class ScalarDomain {
public:
    ScalarDomain() : data_(shared(detail::DomainData{})) {}

    static ScalarDomain rationals() { return ScalarDomain(); }

    static ScalarDomain integers() {
        detail::DomainData d;
        d.kind = DomainKind::Integers;
        return ScalarDomain(shared(std::move(d)));
    }

    static ScalarDomain prime_field(long p) {
        if (!detail::is_prime(p)) throw validation_error("prime field modulus " + std::to_string(p) + " is not prime");
        detail::DomainData d;
        d.kind = DomainKind::PrimeField;
        d.p = p;
        return ScalarDomain(shared(std::move(d)));
    }

    // Q[x]/(f) for monic f given low-degree-first. Irreducibility is asserted
    // by the caller; a rational-root probe runs for degree <= 3.
    static ScalarDomain simple_extension(std::vector<Rational> minpoly, std::string gen = "x") {
        if (minpoly.size() < 2) throw validation_error("extension minimal polynomial must have degree >= 1");
        if (!minpoly.back().is_one()) throw validation_error("extension minimal polynomial must be monic");
        detail::DomainData d;
        d.kind = DomainKind::SimpleExtension;
        d.minpoly = std::move(minpoly);
        d.gen = std::move(gen);
        size_t deg = d.minpoly.size() - 1;
        if (deg >= 2 && deg <= 3 && detail::has_rational_root(d.minpoly))
            throw validation_error("extension minimal polynomial has a rational root (reducible)");
        d.irreducibility_asserted = deg > 3;
        return ScalarDomain(shared(std::move(d)));
    }

    DomainKind kind() const { return data_->kind; }
    long modulus() const { return data_->p; }
    const std::vector<Rational>& minpoly() const { return data_->minpoly; }
    const std::string& generator_name() const { return data_->gen; }
    bool irreducibility_asserted() const { return data_->irreducibility_asserted; }
    size_t extension_degree() const { return data_->minpoly.size() - 1; }

    bool is_field() const { return data_->kind != DomainKind::Integers; }
    long characteristic() const { return data_->kind == DomainKind::PrimeField ? data_->p : 0; }

    friend bool operator==(const ScalarDomain& a, const ScalarDomain& b) {
        if (a.data_ == b.data_) return true;
        if (a.kind() != b.kind()) return false;
        switch (a.kind()) {
            case DomainKind::Rationals:
            case DomainKind::Integers: return true;
            case DomainKind::PrimeField: return a.modulus() == b.modulus();
            case DomainKind::SimpleExtension: return a.minpoly() == b.minpoly();
        }
        return false;
    }
    friend bool operator!=(const ScalarDomain& a, const ScalarDomain& b) { return !(a == b); }

    std::string str() const {
        switch (kind()) {
            case DomainKind::Rationals: return "QQ";
            case DomainKind::Integers: return "ZZ";
            case DomainKind::PrimeField: return "GF(" + std::to_string(modulus()) + ")";
            case DomainKind::SimpleExtension: {
                std::string s = "QQ[" + generator_name() + "]/(";
                for (size_t i = minpoly().size(); i-- > 0;) {
                    const Rational& c = minpoly()[i];
                    if (c.is_zero()) continue;
                    if (s.back() != '(') s += c.num() < 0 ? " - " : " + ";
                    else if (c.num() < 0) s += "-";
                    Rational a = c.num() < 0 ? -c : c;
                    if (i == 0 || !a.is_one()) s += a.str();
                    if (i > 0 && !a.is_one()) s += "*";
                    if (i > 0) s += generator_name();
                    if (i > 1) s += "^" + std::to_string(i);
                }
                return s + ")";
            }
        }
        return "?";
    }

private:
    explicit ScalarDomain(std::shared_ptr<const detail::DomainData> d) : data_(std::move(d)) {}
    static std::shared_ptr<const detail::DomainData> shared(detail::DomainData d) {
        return std::make_shared<const detail::DomainData>(std::move(d));
    }
    std::shared_ptr<const detail::DomainData> data_;
};

// One element of a ScalarDomain.
class Scalar {
public:
    Scalar() : dom_(ScalarDomain::rationals()), val_(Rational(0)) {}

    static Scalar zero(const ScalarDomain& dom) { return from_integer(dom, 0); }
    static Scalar one(const ScalarDomain& dom) { return from_integer(dom, 1); }

    static Scalar from_integer(const ScalarDomain& dom, BigInt n) {
        switch (dom.kind()) {
            case DomainKind::Rationals: return Scalar(dom, Rational(std::move(n)));
            case DomainKind::Integers: return Scalar(dom, std::move(n));
            case DomainKind::PrimeField: {
                long p = dom.modulus();
                long v = mpz_fdiv_ui(n.get_mpz_t(), static_cast<unsigned long>(p));
                return Scalar(dom, v);
            }
            case DomainKind::SimpleExtension: {
                std::vector<Rational> c(dom.extension_degree(), Rational(0));
                c[0] = Rational(std::move(n));
                return Scalar(dom, std::move(c));
            }
        }
        throw error("unreachable");
    }

    static Scalar from_rational(const ScalarDomain& dom, const Rational& r) {
        switch (dom.kind()) {
            case DomainKind::Rationals: return Scalar(dom, r);
            case DomainKind::Integers:
                if (!r.is_integer()) throw domain_error("non-integer rational in ZZ");
                return Scalar(dom, r.num());
            case DomainKind::PrimeField: {
                Scalar n = from_integer(dom, r.num());
                Scalar d = from_integer(dom, r.den());
                return n / d;
            }
            case DomainKind::SimpleExtension: {
                std::vector<Rational> c(dom.extension_degree(), Rational(0));
                c[0] = r;
                return Scalar(dom, std::move(c));
            }
        }
        throw error("unreachable");
    }

    // Generator x of a simple extension.
    static Scalar generator(const ScalarDomain& dom) {
        if (dom.kind() != DomainKind::SimpleExtension) throw domain_error("generator: not an extension domain");
        std::vector<Rational> c(dom.extension_degree(), Rational(0));
        if (c.size() == 1) {
            // degree-1 extension: x = -f[0]
            c[0] = -dom.minpoly()[0];
        } else {
            c[1] = Rational(1);
        }
        return Scalar(dom, std::move(c));
    }

    static Scalar from_ext_coords(const ScalarDomain& dom, std::vector<Rational> c) {
        if (dom.kind() != DomainKind::SimpleExtension || c.size() != dom.extension_degree())
            throw shape_error("bad extension coordinate vector");
        return Scalar(dom, std::move(c));
    }

    const ScalarDomain& domain() const { return dom_; }

    bool is_zero() const {
        switch (dom_.kind()) {
            case DomainKind::Rationals: return rat().is_zero();
            case DomainKind::Integers: return zint() == 0;
            case DomainKind::PrimeField: return fp() == 0;
            case DomainKind::SimpleExtension:
                for (const auto& c : ext()) if (!c.is_zero()) return false;
                return true;
        }
        return false;
    }
    bool is_one() const { return *this == one(dom_); }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        a.check_same(b);
        return a.val_ == b.val_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        a.check_same(b);
        switch (a.dom_.kind()) {
            case DomainKind::Rationals: return Scalar(a.dom_, a.rat() + b.rat());
            case DomainKind::Integers: return Scalar(a.dom_, BigInt(a.zint() + b.zint()));
            case DomainKind::PrimeField: return Scalar(a.dom_, (a.fp() + b.fp()) % a.dom_.modulus());
            case DomainKind::SimpleExtension: {
                std::vector<Rational> c(a.ext());
                for (size_t i = 0; i < c.size(); ++i) c[i] += b.ext()[i];
                return Scalar(a.dom_, std::move(c));
            }
        }
        throw error("unreachable");
    }

    Scalar operator-() const {
        switch (dom_.kind()) {
            case DomainKind::Rationals: return Scalar(dom_, -rat());
            case DomainKind::Integers: return Scalar(dom_, BigInt(-zint()));
            case DomainKind::PrimeField: return Scalar(dom_, (dom_.modulus() - fp()) % dom_.modulus());
            case DomainKind::SimpleExtension: {
                std::vector<Rational> c(ext());
                for (auto& x : c) x = -x;
                return Scalar(dom_, std::move(c));
            }
        }
        throw error("unreachable");
    }

    friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        a.check_same(b);
        switch (a.dom_.kind()) {
            case DomainKind::Rationals: return Scalar(a.dom_, a.rat() * b.rat());
            case DomainKind::Integers: return Scalar(a.dom_, BigInt(a.zint() * b.zint()));
            case DomainKind::PrimeField: {
                unsigned __int128 prod = static_cast<unsigned __int128>(a.fp()) * b.fp();
                return Scalar(a.dom_, static_cast<long>(prod % a.dom_.modulus()));
            }
            case DomainKind::SimpleExtension: {
                size_t deg = a.dom_.extension_degree();
                std::vector<Rational> prod(2 * deg - 1, Rational(0));
                for (size_t i = 0; i < deg; ++i) {
                    if (a.ext()[i].is_zero()) continue;
                    for (size_t j = 0; j < deg; ++j)
                        if (!b.ext()[j].is_zero()) prod[i + j] += a.ext()[i] * b.ext()[j];
                }
                reduce_mod_minpoly(a.dom_, prod);
                prod.resize(deg, Rational(0));
                return Scalar(a.dom_, std::move(prod));
            }
        }
        throw error("unreachable");
    }

    Scalar inverse() const {
        if (is_zero()) throw precondition_error("inverse of zero scalar");
        switch (dom_.kind()) {
            case DomainKind::Rationals: return Scalar(dom_, rat().inverse());
            case DomainKind::Integers:
                if (zint() == 1 || zint() == -1) return *this;
                throw domain_error("non-unit integer has no inverse in ZZ");
            case DomainKind::PrimeField: {
                long p = dom_.modulus();
                long t = 0, newt = 1, r = p, newr = fp();
                while (newr != 0) {
                    long q = r / newr;
                    long tmp = t - q * newt; t = newt; newt = tmp;
                    tmp = r - q * newr; r = newr; newr = tmp;
                }
                return Scalar(dom_, ((t % p) + p) % p);
            }
            case DomainKind::SimpleExtension: {
                // extended Euclid in QQ[x] against the minimal polynomial
                std::vector<Rational> r0 = dom_.minpoly();
                std::vector<Rational> r1 = ext();
                std::vector<Rational> s0{}, s1{Rational(1)};
                auto deg_of = [](const std::vector<Rational>& v) {
                    for (size_t i = v.size(); i-- > 0;) if (!v[i].is_zero()) return static_cast<long>(i);
                    return -1L;
                };
                while (deg_of(r1) > 0) {
                    // divide r0 by r1
                    std::vector<Rational> q(std::max<size_t>(r0.size(), 1), Rational(0));
                    std::vector<Rational> rem = r0;
                    long dr1 = deg_of(r1);
                    for (long k = deg_of(rem); k >= dr1; k = deg_of(rem)) {
                        Rational c = rem[k] / r1[dr1];
                        q[k - dr1] += c;
                        for (long i = 0; i <= dr1; ++i) rem[k - dr1 + i] -= c * r1[i];
                    }
                    std::vector<Rational> s2(std::max(s0.size(), q.size() + s1.size()), Rational(0));
                    for (size_t i = 0; i < s0.size(); ++i) s2[i] += s0[i];
                    for (size_t i = 0; i < q.size(); ++i)
                        if (!q[i].is_zero())
                            for (size_t j = 0; j < s1.size(); ++j) s2[i + j] -= q[i] * s1[j];
                    r0 = r1; r1 = rem;
                    s0 = s1; s1 = std::move(s2);
                }
                long d1 = deg_of(r1);
                if (d1 < 0) throw validation_error("zero divisor in extension (minimal polynomial reducible?)");
                Rational lead = r1[d1];
                std::vector<Rational> inv(dom_.extension_degree(), Rational(0));
                reduce_mod_minpoly(dom_, s1);
                for (size_t i = 0; i < s1.size() && i < inv.size(); ++i) inv[i] = s1[i] / lead;
                return Scalar(dom_, std::move(inv));
            }
        }
        throw error("unreachable");
    }

    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        if (a.dom_.kind() == DomainKind::Integers) {
            a.check_same(b);
            if (b.zint() == 0) throw precondition_error("division by zero");
            BigInt q, r;
            mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.zint().get_mpz_t(), b.zint().get_mpz_t());
            if (r != 0) throw domain_error("inexact integer division");
            return Scalar(a.dom_, std::move(q));
        }
        return a * b.inverse();
    }

    // Exact divisibility test; over fields true for every nonzero divisor.
    friend bool divides(const Scalar& b, const Scalar& a) {
        b.check_same(a);
        if (b.is_zero()) return a.is_zero();
        if (b.dom_.kind() != DomainKind::Integers) return true;
        return mpz_divisible_p(a.zint().get_mpz_t(), b.zint().get_mpz_t()) != 0;
    }

    Scalar pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        Scalar acc = one(dom_);
        Scalar base = *this;
        while (e) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    // Accessors for domain-specific payloads.
    const Rational& rat() const { return std::get<Rational>(val_); }
    long fp() const { return std::get<long>(val_); }
    const BigInt& zint() const { return std::get<BigInt>(val_); }
    const std::vector<Rational>& ext() const { return std::get<std::vector<Rational>>(val_); }

    std::string str() const {
        switch (dom_.kind()) {
            case DomainKind::Rationals: return rat().str();
            case DomainKind::Integers: return zint().get_str();
            case DomainKind::PrimeField: return std::to_string(fp());
            case DomainKind::SimpleExtension: {
                std::string s;
                const auto& g = dom_.generator_name();
                for (size_t i = ext().size(); i-- > 0;) {
                    const Rational& c = ext()[i];
                    if (c.is_zero()) continue;
                    if (!s.empty()) s += c.num() < 0 ? " - " : " + ";
                    else if (c.num() < 0) s += "-";
                    Rational a = c.num() < 0 ? -c : c;
                    if (i == 0 || !a.is_one()) s += a.str();
                    if (i > 0 && !a.is_one()) s += "*";
                    if (i > 0) s += g;
                    if (i > 1) s += "^" + std::to_string(i);
                }
                return s.empty() ? "0" : s;
            }
        }
        return "?";
    }

private:
    using Payload = std::variant<Rational, long, BigInt, std::vector<Rational>>;
    Scalar(ScalarDomain dom, Payload v) : dom_(std::move(dom)), val_(std::move(v)) {}

    void check_same(const Scalar& o) const {
        if (dom_ != o.dom_) throw domain_error("scalar domain mismatch: " + dom_.str() + " vs " + o.dom_.str());
    }

    static void reduce_mod_minpoly(const ScalarDomain& dom, std::vector<Rational>& c) {
        const auto& f = dom.minpoly();
        size_t deg = f.size() - 1;
        for (size_t k = c.size(); k-- > deg;) {
            if (c[k].is_zero()) continue;
            Rational lead = c[k];
            c[k] = Rational(0);
            for (size_t i = 0; i < deg; ++i) c[k - deg + i] -= lead * f[i];
        }
        c.resize(deg, Rational(0));
    }

    ScalarDomain dom_;
    Payload val_;
};

// Canonical embeddings between domains; throws domain_error when none exists.
inline Scalar convert(const Scalar& s, const ScalarDomain& target) {
    if (s.domain() == target) return s;
    switch (s.domain().kind()) {
        case DomainKind::Integers:
            return Scalar::from_integer(target, s.zint());
        case DomainKind::Rationals:
            if (target.kind() == DomainKind::Integers) {
                if (!s.rat().is_integer()) throw domain_error("cannot convert non-integer rational to ZZ");
                return Scalar::from_integer(target, s.rat().num());
            }
            if (target.kind() == DomainKind::PrimeField)
                throw domain_error("mixed characteristics: no embedding QQ -> " + target.str());
            return Scalar::from_rational(target, s.rat());
        default:
            throw domain_error("no canonical embedding " + s.domain().str() + " -> " + target.str());
    }
}

} // namespace norma

#endif
