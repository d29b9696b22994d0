#ifndef NORMA_PARSE_HPP
#define NORMA_PARSE_HPP

#include <cctype>
#include <string>
#include <vector>

#include "norma/errors.hpp"
#include "norma/rational.hpp"
#include "norma/scalar.hpp"

namespace norma {

// Parse a polynomial like "x^2 - 2", "2*x + 1/3", "-x^3" into coefficients
// (low degree first). Terms are [sign] [rational] ['*'] [var ['^' k]].
inline std::vector<Rational> parse_poly(const std::string& text, const std::string& var = "x") {
    std::vector<Rational> coeffs;
    auto bump = [&](size_t deg, const Rational& c) {
        if (coeffs.size() <= deg) coeffs.resize(deg + 1, Rational(0));
        coeffs[deg] += c;
    };
    size_t i = 0;
    auto skip_ws = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
    skip_ws();
    if (i == text.size()) throw parse_error("empty polynomial");
    bool first = true;
    while (i < text.size()) {
        skip_ws();
        int sign = 1;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
        } else if (!first) {
            throw parse_error("expected '+' or '-' in polynomial: " + text);
        }
        skip_ws();
        // optional numeric part
        std::string num;
        while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '/')) num += text[i++];
        skip_ws();
        if (i < text.size() && text[i] == '*') { ++i; skip_ws(); }
        Rational coef = num.empty() ? Rational(1) : Rational::parse(num);
        if (sign < 0) coef = -coef;
        size_t deg = 0;
        if (i + var.size() <= text.size() && text.compare(i, var.size(), var) == 0) {
            i += var.size();
            deg = 1;
            skip_ws();
            if (i < text.size() && text[i] == '^') {
                ++i;
                skip_ws();
                std::string e;
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) e += text[i++];
                if (e.empty()) throw parse_error("missing exponent in polynomial: " + text);
                deg = std::stoul(e);
            }
        } else if (num.empty()) {
            throw parse_error("expected term in polynomial: " + text);
        }
        bump(deg, coef);
        first = false;
        skip_ws();
    }
    if (coeffs.empty()) throw parse_error("empty polynomial");
    return coeffs;
}

// Parse one scalar literal in the given domain. Rationals/integers use plain
// fraction syntax; extension elements are polynomials in the generator.
inline Scalar parse_scalar(const ScalarDomain& dom, const std::string& text) {
    switch (dom.kind()) {
        case DomainKind::Rationals:
            return Scalar::from_rational(dom, Rational::parse(text));
        case DomainKind::Integers: {
            Rational r = Rational::parse(text);
            if (!r.is_integer()) throw parse_error("integer literal expected: " + text);
            return Scalar::from_integer(dom, r.num());
        }
        case DomainKind::PrimeField:
            return Scalar::from_rational(dom, Rational::parse(text));
        case DomainKind::SimpleExtension: {
            auto coeffs = parse_poly(text, dom.generator_name());
            if (coeffs.size() > dom.extension_degree()) {
                // reduce through the algebra: evaluate the polynomial at the generator
                Scalar x = Scalar::generator(dom);
                Scalar acc = Scalar::zero(dom);
                for (size_t k = coeffs.size(); k-- > 0;)
                    acc = acc * x + Scalar::from_rational(dom, coeffs[k]);
                return acc;
            }
            std::vector<Rational> c(dom.extension_degree(), Rational(0));
            for (size_t k = 0; k < coeffs.size(); ++k) c[k] = coeffs[k];
            return Scalar::from_ext_coords(dom, std::move(c));
        }
    }
    throw error("unreachable");
}

} // namespace norma

#endif
