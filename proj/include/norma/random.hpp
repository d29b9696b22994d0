#ifndef NORMA_RANDOM_HPP
#define NORMA_RANDOM_HPP

#include <cstdint>
#include <vector>

#include "norma/scalar.hpp"

namespace norma {

// Seeded deterministic sampler (splitmix64). Every probabilistic check in the
// library draws from one of these so runs are reproducible byte for byte.
class Sampler {
public:
    explicit Sampler(uint64_t seed = 0) : state_(seed + 0x9e3779b97f4a7c15ULL) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [lo, hi] inclusive.
    long next_int(long lo, long hi) {
        return lo + static_cast<long>(next_u64() % static_cast<uint64_t>(hi - lo + 1));
    }

    // Small element of the domain; denominators stay tiny so products remain
    // cheap through deep tensor expansions.
    Scalar scalar(const ScalarDomain& dom) {
        switch (dom.kind()) {
            case DomainKind::Rationals: {
                long num = next_int(-9, 9);
                long den = next_int(1, 3);
                return Scalar::from_rational(dom, Rational(num, den));
            }
            case DomainKind::Integers:
                return Scalar::from_integer(dom, next_int(-9, 9));
            case DomainKind::PrimeField:
                return Scalar::from_integer(dom, next_int(0, dom.modulus() - 1));
            case DomainKind::SimpleExtension: {
                std::vector<Rational> c(dom.extension_degree());
                for (auto& x : c) x = Rational(next_int(-5, 5));
                return Scalar::from_ext_coords(dom, std::move(c));
            }
        }
        throw error("unreachable");
    }

    Scalar nonzero_scalar(const ScalarDomain& dom) {
        for (;;) {
            Scalar s = scalar(dom);
            if (!s.is_zero()) return s;
        }
    }

    std::vector<Scalar> vector(const ScalarDomain& dom, size_t n) {
        std::vector<Scalar> v;
        v.reserve(n);
        for (size_t i = 0; i < n; ++i) v.push_back(scalar(dom));
        return v;
    }

private:
    uint64_t state_;
};

} // namespace norma

#endif
