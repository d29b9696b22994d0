#ifndef NORMA_ASSOC_HPP
#define NORMA_ASSOC_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "norma/errors.hpp"
#include "norma/matrix.hpp"
#include "norma/scalar.hpp"

namespace norma {

// The reduced trace has no single finite presentation, so algebras carry a
// family tag saying where theirs comes from: the matrix trace, the quaternion
// conjugation formula, a product of factor traces, or (1/deg) * regular trace.
enum class AlgebraFamily { Matrix, Quaternion, Tensor, Generic };

namespace detail {

struct AssocAlgebraData {
    ScalarDomain base;
    size_t rank = 0;
    std::vector<Scalar> c;  // e_i e_j = sum_k c[(i*rank+j)*rank+k] e_k
    std::vector<Scalar> unit;
    std::optional<std::vector<Scalar>> trd;  // reduced-trace functional
    AlgebraFamily family = AlgebraFamily::Generic;
    long degree = -1;
};

} // namespace detail

// Finite free associative (not necessarily commutative) algebra given by
// structure constants.
class AssocAlgebra {
public:
    AssocAlgebra() = default;

    // Tables produced by a closed formula (matrix units, tensor products of
    // validated tables) skip the cubic associativity sweep.
    struct trusted_tag {};

    AssocAlgebra(ScalarDomain base, size_t rank, std::vector<Scalar> constants,
                 std::vector<Scalar> unit, AlgebraFamily family = AlgebraFamily::Generic,
                 long degree = -1, std::optional<std::vector<Scalar>> trd = std::nullopt) {
        auto d = std::make_shared<detail::AssocAlgebraData>();
        d->base = std::move(base);
        d->rank = rank;
        d->c = std::move(constants);
        d->unit = std::move(unit);
        d->trd = std::move(trd);
        d->family = family;
        d->degree = degree;
        validate(*d, false);
        data_ = std::move(d);
    }

    AssocAlgebra(trusted_tag, ScalarDomain base, size_t rank, std::vector<Scalar> constants,
                 std::vector<Scalar> unit, AlgebraFamily family = AlgebraFamily::Generic,
                 long degree = -1, std::optional<std::vector<Scalar>> trd = std::nullopt) {
        auto d = std::make_shared<detail::AssocAlgebraData>();
        d->base = std::move(base);
        d->rank = rank;
        d->c = std::move(constants);
        d->unit = std::move(unit);
        d->trd = std::move(trd);
        d->family = family;
        d->degree = degree;
        validate(*d, true);
        data_ = std::move(d);
    }

    // M_k over the domain; basis E_{ij} with index i*k + j.
    static AssocAlgebra matrix_algebra(const ScalarDomain& dom, size_t k) {
        size_t n = k * k;
        std::vector<Scalar> c(n * n * n, Scalar::zero(dom));
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < k; ++j)
                for (size_t l = 0; l < k; ++l) {
                    size_t u = i * k + j, v = j * k + l, w = i * k + l;
                    c[(u * n + v) * n + w] = Scalar::one(dom);
                }
        std::vector<Scalar> unit(n, Scalar::zero(dom));
        std::vector<Scalar> trd(n, Scalar::zero(dom));
        for (size_t i = 0; i < k; ++i) {
            unit[i * k + i] = Scalar::one(dom);
            trd[i * k + i] = Scalar::one(dom);
        }
        return AssocAlgebra(trusted_tag{}, dom, n, std::move(c), std::move(unit),
                            AlgebraFamily::Matrix, static_cast<long>(k), std::move(trd));
    }

    const ScalarDomain& base() const { return data_->base; }
    size_t rank() const { return data_->rank; }
    const std::vector<Scalar>& unit() const { return data_->unit; }
    AlgebraFamily family() const { return data_->family; }
    long degree() const { return data_->degree; }
    bool has_trd() const { return data_->trd.has_value(); }
    const Scalar& sc(size_t i, size_t j, size_t k) const {
        return data_->c[(i * rank() + j) * rank() + k];
    }

    std::vector<Scalar> basis_element(size_t i) const {
        std::vector<Scalar> v(rank(), Scalar::zero(base()));
        v[i] = Scalar::one(base());
        return v;
    }

    std::vector<Scalar> multiply(const std::vector<Scalar>& a, const std::vector<Scalar>& b) const {
        size_t n = rank();
        if (a.size() != n || b.size() != n) throw shape_error("algebra element length mismatch");
        std::vector<Scalar> r(n, Scalar::zero(base()));
        for (size_t i = 0; i < n; ++i) {
            if (a[i].is_zero()) continue;
            for (size_t j = 0; j < n; ++j) {
                if (b[j].is_zero()) continue;
                Scalar f = a[i] * b[j];
                for (size_t k = 0; k < n; ++k)
                    if (!sc(i, j, k).is_zero()) r[k] = r[k] + f * sc(i, j, k);
            }
        }
        return r;
    }

    Matrix left_mult(const std::vector<Scalar>& a) const {
        size_t n = rank();
        Matrix m(n, n, base());
        for (size_t j = 0; j < n; ++j) {
            auto col = multiply(a, basis_element(j));
            for (size_t k = 0; k < n; ++k) m.at(k, j) = col[k];
        }
        return m;
    }

    Matrix right_mult(const std::vector<Scalar>& a) const {
        size_t n = rank();
        Matrix m(n, n, base());
        for (size_t j = 0; j < n; ++j) {
            auto col = multiply(basis_element(j), a);
            for (size_t k = 0; k < n; ++k) m.at(k, j) = col[k];
        }
        return m;
    }

    std::vector<Matrix> left_mult_basis() const {
        std::vector<Matrix> t;
        for (size_t i = 0; i < rank(); ++i) t.push_back(left_mult(basis_element(i)));
        return t;
    }

    Scalar regular_trace(const std::vector<Scalar>& a) const {
        Matrix m = left_mult(a);
        Scalar t = Scalar::zero(base());
        for (size_t i = 0; i < rank(); ++i) t = t + m.at(i, i);
        return t;
    }

    Scalar trd(const std::vector<Scalar>& a) const {
        if (!data_->trd) throw precondition_error("algebra has no reduced trace attached");
        Scalar t = Scalar::zero(base());
        for (size_t i = 0; i < rank(); ++i)
            if (!a[i].is_zero()) t = t + (*data_->trd)[i] * a[i];
        return t;
    }

    const std::vector<Scalar>& trd_coords() const {
        if (!data_->trd) throw precondition_error("algebra has no reduced trace attached");
        return *data_->trd;
    }

private:
    static void validate(const detail::AssocAlgebraData& d, bool trusted) {
        size_t n = d.rank;
        if (n == 0 || d.c.size() != n * n * n || d.unit.size() != n)
            throw shape_error("structure constant table has wrong shape");
        for (const auto& x : d.c)
            if (x.domain() != d.base) throw domain_error("structure constant domain mismatch");
        auto cref = [&](size_t i, size_t j, size_t k) -> const Scalar& {
            return d.c[(i * n + j) * n + k];
        };
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
        if (!trusted) {
            // sparse triple sweep over the basis-pair product table
            std::vector<std::vector<std::pair<size_t, Scalar>>> bp(n * n);
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j)
                    for (size_t k = 0; k < n; ++k)
                        if (!cref(i, j, k).is_zero()) bp[i * n + j].emplace_back(k, cref(i, j, k));
            auto expand = [&](const std::vector<std::pair<size_t, Scalar>>& sparse, size_t other,
                              bool left) {
                std::vector<Scalar> r(n, Scalar::zero(d.base));
                for (const auto& [t, coef] : sparse)
                    for (const auto& [k, v] : bp[left ? t * n + other : other * n + t])
                        r[k] = r[k] + coef * v;
                return r;
            };
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j)
                    for (size_t k = 0; k < n; ++k)
                        if (expand(bp[i * n + j], k, true) != expand(bp[j * n + k], i, false))
                            throw validation_error("structure constants are not associative");
        }
        for (size_t j = 0; j < n; ++j)
            if (mul(d.unit, basis(j)) != basis(j) || mul(basis(j), d.unit) != basis(j))
                throw validation_error("unit vector does not act as identity");
        if (d.trd) {
            if (d.trd->size() != n) throw shape_error("reduced trace has wrong length");
            if (d.degree < 0) throw precondition_error("reduced trace requires a known degree");
            Scalar tr1 = Scalar::zero(d.base);
            for (size_t i = 0; i < n; ++i) tr1 = tr1 + (*d.trd)[i] * d.unit[i];
            if (tr1 != Scalar::from_integer(d.base, d.degree))
                throw validation_error("Trd(1) != degree");
            auto trd_of = [&](const std::vector<Scalar>& a) {
                Scalar t = Scalar::zero(d.base);
                for (size_t i = 0; i < n; ++i) t = t + (*d.trd)[i] * a[i];
                return t;
            };
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j)
                    if (trd_of(mul(basis(i), basis(j))) != trd_of(mul(basis(j), basis(i))))
                        throw validation_error("Trd(ab) != Trd(ba)");
        }
    }

    std::shared_ptr<const detail::AssocAlgebraData> data_;
};

// Linear anti-automorphism of order 2, stored as its matrix on the basis.
struct Involution {
    Matrix m;

    std::vector<Scalar> apply(const std::vector<Scalar>& x) const { return m.apply(x); }
};

// Validates sigma^2 = id, sigma(1) = 1, sigma(ab) = sigma(b) sigma(a).
inline Involution make_involution(const AssocAlgebra& a, const Matrix& sigma) {
    size_t n = a.rank();
    if (sigma.rows() != n || sigma.cols() != n) throw shape_error("involution matrix shape mismatch");
    if (sigma * sigma != Matrix::identity(n, a.base()))
        throw validation_error("involution is not of order 2");
    if (sigma.apply(a.unit()) != a.unit()) throw validation_error("involution does not fix 1");
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            auto lhs = sigma.apply(a.multiply(a.basis_element(i), a.basis_element(j)));
            auto rhs = a.multiply(sigma.apply(a.basis_element(j)), sigma.apply(a.basis_element(i)));
            if (lhs != rhs) throw validation_error("involution is not anti-multiplicative");
        }
    return Involution{sigma};
}

// a (x) b ordered by index i * rank(b) + j; reduced traces multiply.
inline AssocAlgebra tensor_assoc(const AssocAlgebra& a, const AssocAlgebra& b) {
    if (a.base() != b.base()) throw domain_error("tensor_assoc base mismatch");
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
    std::optional<std::vector<Scalar>> trd;
    long degree = -1;
    if (a.has_trd() && b.has_trd() && a.degree() > 0 && b.degree() > 0) {
        trd.emplace(n, Scalar::zero(dom));
        for (size_t i = 0; i < na; ++i)
            for (size_t j = 0; j < nb; ++j)
                (*trd)[i * nb + j] = a.trd_coords()[i] * b.trd_coords()[j];
        degree = a.degree() * b.degree();
    }
    return AssocAlgebra(AssocAlgebra::trusted_tag{}, dom, n, std::move(c), std::move(unit),
                        AlgebraFamily::Tensor, degree, std::move(trd));
}

// The sandwich map A (x) A^op -> End(A), a (x) b -> (x -> a x b), as an
// n^2 x n^2 matrix. Column (i*n + j) is the row-major vectorization of
// L_{e_i} R_{e_j}; invertibility over a field is the Azumaya condition.
inline Matrix enveloping_map(const AssocAlgebra& a) {
    size_t n = a.rank();
    Matrix out(n * n, n * n, a.base());
    for (size_t i = 0; i < n; ++i) {
        Matrix li = a.left_mult(a.basis_element(i));
        for (size_t j = 0; j < n; ++j) {
            Matrix m = li * a.right_mult(a.basis_element(j));
            for (size_t r = 0; r < n; ++r)
                for (size_t c = 0; c < n; ++c) out.at(r * n + c, i * n + j) = m.at(r, c);
        }
    }
    return out;
}

inline bool is_azumaya(const AssocAlgebra& a) {
    if (!a.base().is_field()) throw domain_error("is_azumaya requires a field base");
    return rank(enveloping_map(a)) == a.rank() * a.rank();
}

// Basis of Sym(A, sigma) = ker(x - sigma(x)); in characteristic 2 this is
// ker(x + sigma(x)), matching the same formula.
inline std::vector<std::vector<Scalar>> symmetric_elements(const AssocAlgebra& a,
                                                           const Involution& sigma) {
    Matrix diff = Matrix::identity(a.rank(), a.base()) - sigma.m;
    return rank_and_kernel(diff).kernel;
}

struct InvolutionTypeReport {
    bool orthogonal = false;
    bool symplectic = false;
    bool weakly_symplectic = false;
    size_t sym_dim = 0;
};

// Involution type from the dimension of Sym (char != 2) or from the
// membership 1 in im(x + sigma(x)) (char 2, where orthogonal and
// weakly-symplectic coincide).
inline InvolutionTypeReport involution_type(const AssocAlgebra& a, const Involution& sigma) {
    if (!a.base().is_field()) throw domain_error("involution_type requires a field base");
    long m = a.degree();
    if (m <= 0) {
        // Azumaya rank is a perfect square; fall back to isqrt.
        size_t r = a.rank();
        size_t s = 0;
        while (s * s < r) ++s;
        if (s * s != r) throw precondition_error("involution_type: unknown degree");
        m = static_cast<long>(s);
    }
    InvolutionTypeReport rep;
    rep.sym_dim = symmetric_elements(a, sigma).size();
    if (a.base().characteristic() != 2) {
        size_t plus = static_cast<size_t>(m * (m + 1) / 2);
        size_t minus = static_cast<size_t>(m * (m - 1) / 2);
        if (rep.sym_dim == plus) rep.orthogonal = true;
        else if (rep.sym_dim == minus) { rep.symplectic = true; rep.weakly_symplectic = true; }
        return rep;
    }
    // char 2: solve (1 + sigma)(y) = 1
    Matrix plus = Matrix::identity(a.rank(), a.base()) + sigma.m;
    bool one_in_image = true;
    try {
        solve(plus, a.unit());
    } catch (const precondition_error&) {
        one_in_image = false;
    }
    rep.weakly_symplectic = true;
    rep.orthogonal = true;
    rep.symplectic = one_in_image;
    return rep;
}

// sigma(a) = G^{-1} a^T G on the matrix algebra of the same size as G.
inline Involution adjoint_involution(const AssocAlgebra& mat_alg, const Matrix& gram) {
    if (mat_alg.family() != AlgebraFamily::Matrix)
        throw precondition_error("adjoint_involution expects a matrix algebra");
    size_t k = static_cast<size_t>(mat_alg.degree());
    if (gram.rows() != k || gram.cols() != k) throw shape_error("gram matrix shape mismatch");
    Matrix ginv = inverse(gram);  // throws on singular input
    size_t n = k * k;
    Matrix sigma(n, n, mat_alg.base());
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) {
            // E_ij -> G^{-1} E_ji G
            Matrix e(k, k, mat_alg.base());
            e.at(j, i) = Scalar::one(mat_alg.base());
            Matrix img = ginv * e * gram;
            for (size_t r = 0; r < k; ++r)
                for (size_t c = 0; c < k; ++c) sigma.at(r * k + c, i * k + j) = img.at(r, c);
        }
    return make_involution(mat_alg, sigma);
}

struct QuaternionAlgebra {
    AssocAlgebra alg;
    Involution conjugation;  // the canonical symplectic involution
};

// (a,b) over a field of characteristic != 2: basis 1, i, j, ij with i^2 = a,
// j^2 = b, ji = -ij. In characteristic 2, [a,b): u^2 + u = a, v^2 = b,
// vu = uv + v, basis 1, u, v, uv.
inline QuaternionAlgebra quaternion(const Scalar& a, const Scalar& b) {
    const ScalarDomain& dom = a.domain();
    if (dom != b.domain()) throw domain_error("quaternion parameter domain mismatch");
    if (!dom.is_field()) throw domain_error("quaternion algebras need a field base");
    if (a.is_zero() || b.is_zero()) throw precondition_error("degenerate quaternion algebra (a or b is 0)");
    size_t n = 4;
    std::vector<Scalar> c(n * n * n, Scalar::zero(dom));
    auto set = [&](size_t i, size_t j, size_t k, const Scalar& v) { c[(i * n + j) * n + k] = v; };
    auto one = Scalar::one(dom);
    for (size_t j = 0; j < 4; ++j) { set(0, j, j, one); if (j) set(j, 0, j, one); }
    Matrix sigma(4, 4, dom);
    std::vector<Scalar> trd(4, Scalar::zero(dom));
    if (dom.characteristic() != 2) {
        // 1, i, j, k = ij
        set(1, 1, 0, a);
        set(2, 2, 0, b);
        set(1, 2, 3, one);
        set(2, 1, 3, -one);
        set(1, 3, 2, a);            // i(ij) = (ii)j = a j
        set(3, 1, 2, -a);           // (ij)i = -i(ij)... = -a j
        set(2, 3, 1, -b);           // j(ij) = -i j^2 = -b i
        set(3, 2, 1, b);            // (ij)j = b i
        set(3, 3, 0, -(a * b));     // (ij)(ij) = -ab
        sigma.at(0, 0) = one;
        for (size_t i = 1; i < 4; ++i) sigma.at(i, i) = -one;
        trd[0] = Scalar::from_integer(dom, 2);
    } else {
        // 1, u, v, w = uv
        set(1, 1, 0, a); set(1, 1, 1, one);   // u^2 = a + u
        set(2, 2, 0, b);                      // v^2 = b
        set(1, 2, 3, one);                    // uv = w
        set(2, 1, 2, one); set(2, 1, 3, one); // vu = v + w
        set(1, 3, 2, a); set(1, 3, 3, one);   // uw = av + w
        set(3, 1, 2, a);                      // wu = av
        set(2, 3, 1, b); set(2, 3, 0, b);     // vw = b + bu
        set(3, 2, 1, b);                      // wv = bu
        set(3, 3, 0, a * b);                  // w^2 = ab
        // conjugation: 1 -> 1, u -> 1 + u, v -> v, w -> w
        sigma.at(0, 0) = one;
        sigma.at(0, 1) = one; sigma.at(1, 1) = one;
        sigma.at(2, 2) = one;
        sigma.at(3, 3) = one;
        trd[1] = one;
    }
    AssocAlgebra alg(dom, 4, std::move(c), {one, Scalar::zero(dom), Scalar::zero(dom), Scalar::zero(dom)},
                     AlgebraFamily::Quaternion, 2, std::move(trd));
    Involution conj = make_involution(alg, sigma);
    return QuaternionAlgebra{alg, conj};
}

} // namespace norma

#endif
