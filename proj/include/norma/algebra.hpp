#ifndef NORMA_ALGEBRA_HPP
#define NORMA_ALGEBRA_HPP

#include <memory>
#include <string>
#include <vector>

#include "norma/errors.hpp"
#include "norma/matrix.hpp"
#include "norma/multipoly.hpp"
#include "norma/scalar.hpp"

namespace norma {

namespace detail {

struct FiniteAlgebraData {
    ScalarDomain base;
    size_t rank = 0;
    std::vector<Scalar> c;     // c[(i*rank + j)*rank + k]: e_i e_j = sum_k c e_k
    std::vector<Scalar> unit;  // coordinates of 1
    std::vector<Rational> minpoly;  // nonempty when presented as base[x]/(f)
};

} // namespace detail

// Finite free commutative algebra over a ScalarDomain, given by structure
// constants. Validates commutativity, associativity and the unit law on
// construction.
class FiniteAlgebra {
public:
    FiniteAlgebra() = default;

    FiniteAlgebra(ScalarDomain base, size_t rank, std::vector<Scalar> constants,
                  std::vector<Scalar> unit) {
        auto d = std::make_shared<detail::FiniteAlgebraData>();
        d->base = std::move(base);
        d->rank = rank;
        d->c = std::move(constants);
        d->unit = std::move(unit);
        validate(*d);
        data_ = std::move(d);
    }

    // R^d with componentwise product.
    static FiniteAlgebra split(const ScalarDomain& base, size_t d) {
        if (d == 0) throw precondition_error("split algebra needs rank >= 1");
        std::vector<Scalar> c(d * d * d, Scalar::zero(base));
        for (size_t i = 0; i < d; ++i) c[(i * d + i) * d + i] = Scalar::one(base);
        std::vector<Scalar> unit(d, Scalar::one(base));
        return FiniteAlgebra(base, d, std::move(c), std::move(unit));
    }

    // base[x]/(f) for monic f, basis 1, x, ..., x^{deg-1}.
    static FiniteAlgebra poly_quotient(const ScalarDomain& base, const std::vector<Scalar>& f) {
        size_t deg = f.size() - 1;
        if (f.size() < 2 || !f.back().is_one()) throw validation_error("poly_quotient needs a monic polynomial of degree >= 1");
        for (const auto& x : f)
            if (x.domain() != base) throw domain_error("poly_quotient coefficient domain mismatch");
        // powers[k] = coordinates of x^k, k = 0..2deg-2
        std::vector<std::vector<Scalar>> powers;
        std::vector<Scalar> cur(deg, Scalar::zero(base));
        cur[0] = Scalar::one(base);
        powers.push_back(cur);
        for (size_t k = 1; k <= 2 * deg - 2; ++k) {
            std::vector<Scalar> nxt(deg, Scalar::zero(base));
            Scalar lead = cur[deg - 1];
            for (size_t i = deg - 1; i > 0; --i) nxt[i] = cur[i - 1];
            nxt[0] = Scalar::zero(base);
            if (!lead.is_zero())
                for (size_t i = 0; i < deg; ++i) nxt[i] = nxt[i] - lead * f[i];
            powers.push_back(nxt);
            cur = powers.back();
        }
        std::vector<Scalar> c(deg * deg * deg, Scalar::zero(base));
        for (size_t i = 0; i < deg; ++i)
            for (size_t j = 0; j < deg; ++j)
                for (size_t k = 0; k < deg; ++k) c[(i * deg + j) * deg + k] = powers[i + j][k];
        std::vector<Scalar> unit(deg, Scalar::zero(base));
        unit[0] = Scalar::one(base);
        FiniteAlgebra a(base, deg, std::move(c), std::move(unit));
        if (base.kind() == DomainKind::Rationals) {
            auto d2 = std::make_shared<detail::FiniteAlgebraData>(*a.data_);
            d2->minpoly.resize(f.size());
            for (size_t i = 0; i < f.size(); ++i) d2->minpoly[i] = f[i].rat();
            a.data_ = std::move(d2);
        }
        return a;
    }

    // base[x]/(x^2 - c)
    static FiniteAlgebra quadratic(const ScalarDomain& base, const Scalar& c) {
        return poly_quotient(base, {-c, Scalar::zero(base), Scalar::one(base)});
    }

    // base[x]/(x^2), the standard non-etale fixture
    static FiniteAlgebra artinian_dual_numbers(const ScalarDomain& base) {
        return poly_quotient(base, {Scalar::zero(base), Scalar::zero(base), Scalar::one(base)});
    }

    const ScalarDomain& base() const { return data_->base; }
    size_t rank() const { return data_->rank; }
    const std::vector<Scalar>& unit() const { return data_->unit; }
    const Scalar& sc(size_t i, size_t j, size_t k) const {
        return data_->c[(i * rank() + j) * rank() + k];
    }
    bool has_minpoly() const { return !data_->minpoly.empty(); }
    const std::vector<Rational>& minpoly() const { return data_->minpoly; }

    friend bool operator==(const FiniteAlgebra& a, const FiniteAlgebra& b) {
        return a.data_ == b.data_ ||
               (a.base() == b.base() && a.rank() == b.rank() && a.data_->c == b.data_->c &&
                a.unit() == b.unit());
    }
    friend bool operator!=(const FiniteAlgebra& a, const FiniteAlgebra& b) { return !(a == b); }

    std::vector<Scalar> basis_element(size_t i) const {
        std::vector<Scalar> v(rank(), Scalar::zero(base()));
        v[i] = Scalar::one(base());
        return v;
    }

    std::vector<Scalar> multiply(const std::vector<Scalar>& a, const std::vector<Scalar>& b) const {
        size_t d = rank();
        if (a.size() != d || b.size() != d) throw shape_error("algebra element length mismatch");
        std::vector<Scalar> r(d, Scalar::zero(base()));
        for (size_t i = 0; i < d; ++i) {
            if (a[i].is_zero()) continue;
            for (size_t j = 0; j < d; ++j) {
                if (b[j].is_zero()) continue;
                Scalar f = a[i] * b[j];
                for (size_t k = 0; k < d; ++k)
                    if (!sc(i, j, k).is_zero()) r[k] = r[k] + f * sc(i, j, k);
            }
        }
        return r;
    }

    // Matrix of left multiplication by a; column j = a * e_j.
    Matrix regular_rep(const std::vector<Scalar>& a) const {
        size_t d = rank();
        Matrix m(d, d, base());
        for (size_t j = 0; j < d; ++j) {
            auto col = multiply(a, basis_element(j));
            for (size_t k = 0; k < d; ++k) m.at(k, j) = col[k];
        }
        return m;
    }

    Scalar norm_element(const std::vector<Scalar>& a) const { return det(regular_rep(a)); }

    Scalar trace_element(const std::vector<Scalar>& a) const {
        Matrix m = regular_rep(a);
        Scalar t = Scalar::zero(base());
        for (size_t i = 0; i < rank(); ++i) t = t + m.at(i, i);
        return t;
    }

    // Trace-form Gram matrix G[i][j] = Tr(e_i e_j).
    Matrix trace_gram() const {
        size_t d = rank();
        Matrix g(d, d, base());
        for (size_t i = 0; i < d; ++i)
            for (size_t j = 0; j < d; ++j)
                g.at(i, j) = trace_element(multiply(basis_element(i), basis_element(j)));
        return g;
    }

    bool is_etale() const {
        if (!base().is_field()) throw domain_error("is_etale requires a field base");
        return !det(trace_gram()).is_zero();
    }

    // Same structure constants over a new field domain Q; entries embed via
    // the canonical map base -> Q.
    FiniteAlgebra base_change(const ScalarDomain& q) const {
        if (!q.is_field()) throw domain_error("base change target must be a field");
        std::vector<Scalar> c;
        c.reserve(data_->c.size());
        for (const auto& x : data_->c) c.push_back(convert(x, q));
        std::vector<Scalar> unit;
        for (const auto& x : data_->unit) unit.push_back(convert(x, q));
        return FiniteAlgebra(q, rank(), std::move(c), std::move(unit));
    }

    // The element norm as a polynomial in coordinates: det(sum_i t_i L_i).
    MultiPoly norm_form() const {
        size_t d = rank();
        PolyMatrix m(d, d, d, base());
        for (size_t i = 0; i < d; ++i) {
            Matrix li = regular_rep(basis_element(i));
            for (size_t r = 0; r < d; ++r)
                for (size_t cc = 0; cc < d; ++cc)
                    if (!li.at(r, cc).is_zero())
                        m.at(r, cc) = m.at(r, cc) + li.at(r, cc) * MultiPoly::variable(d, i, base());
        }
        return poly_det(m);
    }

private:
    static void validate(const detail::FiniteAlgebraData& d) {
        size_t n = d.rank;
        if (n == 0 || d.c.size() != n * n * n || d.unit.size() != n)
            throw shape_error("structure constant table has wrong shape");
        for (const auto& x : d.c)
            if (x.domain() != d.base) throw domain_error("structure constant domain mismatch");
        auto cref = [&](size_t i, size_t j, size_t k) -> const Scalar& {
            return d.c[(i * n + j) * n + k];
        };
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j)
                for (size_t k = 0; k < n; ++k)
                    if (cref(i, j, k) != cref(j, i, k))
                        throw validation_error("structure constants are not commutative");
        auto mul = [&](const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
            std::vector<Scalar> r(n, Scalar::zero(d.base));
            for (size_t i = 0; i < n; ++i) {
                if (a[i].is_zero()) continue;
                for (size_t j = 0; j < n; ++j) {
                    if (b[j].is_zero()) continue;
                    Scalar f = a[i] * b[j];
                    for (size_t k = 0; k < n; ++k)
                        if (!cref(i, j, k).is_zero()) r[k] = r[k] + f * cref(i, j, k);
                }
            }
            return r;
        };
        auto basis = [&](size_t i) {
            std::vector<Scalar> v(n, Scalar::zero(d.base));
            v[i] = Scalar::one(d.base);
            return v;
        };
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                for (size_t k = 0; k < n; ++k)
                    if (mul(mul(basis(i), basis(j)), basis(k)) != mul(basis(i), mul(basis(j), basis(k))))
                        throw validation_error("structure constants are not associative");
        for (size_t j = 0; j < n; ++j) {
            if (mul(d.unit, basis(j)) != basis(j) || mul(basis(j), d.unit) != basis(j))
                throw validation_error("unit vector does not act as identity");
        }
    }

    std::shared_ptr<const detail::FiniteAlgebraData> data_;
};

// a (x) b on the product basis e_i (x) f_j, index i * rank(b) + j.
inline FiniteAlgebra tensor_algebras(const FiniteAlgebra& a, const FiniteAlgebra& b) {
    if (a.base() != b.base()) throw domain_error("tensor_algebras base mismatch");
    size_t na = a.rank(), nb = b.rank(), n = na * nb;
    const ScalarDomain& dom = a.base();
    std::vector<Scalar> c(n * n * n, Scalar::zero(dom));
    for (size_t i1 = 0; i1 < na; ++i1)
        for (size_t j1 = 0; j1 < nb; ++j1)
            for (size_t i2 = 0; i2 < na; ++i2)
                for (size_t j2 = 0; j2 < nb; ++j2) {
                    size_t u = i1 * nb + j1, v = i2 * nb + j2;
                    for (size_t k1 = 0; k1 < na; ++k1) {
                        if (a.sc(i1, i2, k1).is_zero()) continue;
                        for (size_t k2 = 0; k2 < nb; ++k2) {
                            const Scalar& s2 = b.sc(j1, j2, k2);
                            if (s2.is_zero()) continue;
                            c[(u * n + v) * n + (k1 * nb + k2)] = a.sc(i1, i2, k1) * s2;
                        }
                    }
                }
    std::vector<Scalar> unit(n, Scalar::zero(dom));
    for (size_t i = 0; i < na; ++i)
        for (size_t j = 0; j < nb; ++j) unit[i * nb + j] = a.unit()[i] * b.unit()[j];
    return FiniteAlgebra(dom, n, std::move(c), std::move(unit));
}

// Promote a field presented as QQ[x]/(f) to a ScalarDomain. Ring nesting
// stops here: the promoted domain is an ordinary SimpleExtension.
inline ScalarDomain promote_to_domain(const FiniteAlgebra& a) {
    if (a.base().kind() != DomainKind::Rationals)
        throw domain_error("only QQ[x]/(f) algebras can be promoted to a scalar domain");
    if (!a.has_minpoly())
        throw domain_error("promotion requires a polynomial-quotient presentation");
    return ScalarDomain::simple_extension(a.minpoly());
}

// The FiniteAlgebra presentation of a SimpleExtension domain, over QQ.
inline FiniteAlgebra algebra_from_extension(const ScalarDomain& ext) {
    if (ext.kind() != DomainKind::SimpleExtension) throw domain_error("not an extension domain");
    ScalarDomain q = ScalarDomain::rationals();
    std::vector<Scalar> f;
    for (const auto& c : ext.minpoly()) f.push_back(Scalar::from_rational(q, c));
    return FiniteAlgebra::poly_quotient(q, f);
}

// Coordinates of an extension scalar in the basis 1, x, ..., x^{deg-1} of the
// corresponding FiniteAlgebra over QQ.
inline std::vector<Scalar> extension_coords(const Scalar& s) {
    if (s.domain().kind() != DomainKind::SimpleExtension) throw domain_error("not an extension scalar");
    ScalarDomain q = ScalarDomain::rationals();
    std::vector<Scalar> out;
    for (const auto& c : s.ext()) out.push_back(Scalar::from_rational(q, c));
    return out;
}

} // namespace norma

#endif
