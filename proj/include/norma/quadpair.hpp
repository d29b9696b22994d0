#ifndef NORMA_QUADPAIR_HPP
#define NORMA_QUADPAIR_HPP

#include <string>
#include <vector>

#include "norma/assoc.hpp"
#include "norma/errors.hpp"
#include "norma/norm.hpp"
#include "norma/segre.hpp"

namespace norma {

// (A, sigma, f): orthogonal involution plus a semitrace on symmetric
// elements with f(x + sigma(x)) = Trd(x). The functional is stored through
// its values on a computed basis of Sym(A, sigma).
struct QuadraticTriple {
    AssocAlgebra alg;
    Involution sigma;
    std::vector<std::vector<Scalar>> sym_basis;
    std::vector<Scalar> f_values;
    std::vector<size_t> pivot_rows;  // rows that make the Sym basis square
    Matrix coord_solver;             // inverse of the pivot-row submatrix

    size_t sym_dim() const { return sym_basis.size(); }

    // Express s in the Sym basis and evaluate f; rejects non-symmetric input.
    Scalar f(const std::vector<Scalar>& s) const {
        const ScalarDomain& dom = alg.base();
        std::vector<Scalar> rhs;
        rhs.reserve(pivot_rows.size());
        for (size_t r : pivot_rows) rhs.push_back(s[r]);
        auto coords = coord_solver.apply(rhs);
        std::vector<Scalar> rebuilt(alg.rank(), Scalar::zero(dom));
        for (size_t j = 0; j < coords.size(); ++j) {
            if (coords[j].is_zero()) continue;
            for (size_t i = 0; i < alg.rank(); ++i)
                rebuilt[i] = rebuilt[i] + coords[j] * sym_basis[j][i];
        }
        if (rebuilt != s) throw precondition_error("f evaluated outside Sym(A, sigma)");
        Scalar acc = Scalar::zero(dom);
        for (size_t j = 0; j < coords.size(); ++j)
            if (!coords[j].is_zero()) acc = acc + coords[j] * f_values[j];
        return acc;
    }
};

// Validates the triple axioms and returns the assembled triple.
inline QuadraticTriple make_quadratic_triple(const AssocAlgebra& alg, const Involution& sigma,
                                             std::vector<std::vector<Scalar>> sym_basis,
                                             std::vector<Scalar> f_values) {
    if (sym_basis.size() != f_values.size()) throw shape_error("semitrace values length mismatch");
    auto type = involution_type(alg, sigma);
    if (!type.orthogonal)
        throw precondition_error("quadratic triple requires an orthogonal involution");
    const ScalarDomain& dom = alg.base();
    size_t n = alg.rank(), s = sym_basis.size();
    Matrix sys(n, s, dom);
    for (size_t j = 0; j < s; ++j) {
        if (sym_basis[j].size() != n) throw shape_error("sym basis vector length mismatch");
        for (size_t i = 0; i < n; ++i) sys.at(i, j) = sym_basis[j][i];
    }
    Rref rr = row_reduce(sys.transpose());
    if (rr.rank() != s) throw validation_error("sym basis vectors are dependent");
    std::vector<size_t> pivot_rows = rr.pivots;
    Matrix sub(s, s, dom);
    for (size_t a = 0; a < s; ++a)
        for (size_t j = 0; j < s; ++j) sub.at(a, j) = sys.at(pivot_rows[a], j);
    Matrix solver = inverse(sub);

    QuadraticTriple t{alg, sigma, std::move(sym_basis), std::move(f_values),
                      std::move(pivot_rows), std::move(solver)};
    for (size_t i = 0; i < n; ++i) {
        auto x = alg.basis_element(i);
        auto sx = sigma.apply(x);
        std::vector<Scalar> sum(n);
        for (size_t k = 0; k < n; ++k) sum[k] = x[k] + sx[k];
        if (t.f(sum) != alg.trd(x))
            throw validation_error("semitrace axiom f(x + sigma(x)) = Trd(x) fails");
    }
    return t;
}

// The unique triple when 2 is invertible: f = (1/2) Trd on Sym.
inline QuadraticTriple half_trace_triple(const AssocAlgebra& alg, const Involution& sigma) {
    const ScalarDomain& dom = alg.base();
    if (dom.characteristic() == 2)
        throw precondition_error("half-trace semitrace needs 2 invertible");
    Scalar half = Scalar::from_integer(dom, 2).inverse();
    auto sym = symmetric_elements(alg, sigma);
    std::vector<Scalar> f_values;
    f_values.reserve(sym.size());
    for (const auto& s : sym) f_values.push_back(half * alg.trd(s));
    return make_quadratic_triple(alg, sigma, std::move(sym), std::move(f_values));
}

// Tensor product of two symplectic involutions is an orthogonal involution;
// with 2 invertible it carries the unique quadratic pair (1/2) Trd.
inline QuadraticTriple tensor_quadratic_pair(const AssocAlgebra& a1, const Involution& s1,
                                             const AssocAlgebra& a2, const Involution& s2) {
    if (a1.base().characteristic() == 2)
        throw precondition_error("tensor quadratic pair needs 2 invertible");
    if (!involution_type(a1, s1).symplectic || !involution_type(a2, s2).symplectic)
        throw precondition_error("tensor quadratic pair needs symplectic factors");
    AssocAlgebra a = tensor_assoc(a1, a2);
    Involution sigma = make_involution(a, kron(s1.m, s2.m));
    return half_trace_triple(a, sigma);
}

// The integral split quadratic triple on M_{2n}(ZZ), 2n = (2n_1)...(2n_d):
// b(v_1 (x) ... (x) v_d, v'_1 (x) ...) = psi_{n_1}(v_1, v'_1) ... and
// q(x) = b(x,x)/2, with sigma_q adjoint to the Gram matrix and
// f_q(s) = Tr(s)/2 on symmetric elements.
struct IntegralSplitTriple {
    std::vector<size_t> half_sizes;  // n_1..n_d
    size_t size = 0;                 // 2n
    Matrix gram;                     // B over ZZ (Kronecker of the J_{n_i})
    Matrix q_upper;                  // upper-triangular coefficients of q
    Matrix gram_inv;                 // integer inverse (B is unimodular)
    Matrix sigma;                    // sigma_q on the matrix-unit basis, over ZZ
    std::vector<std::vector<Scalar>> sym_basis;  // ZZ-basis of Sym
    std::vector<Scalar> f_values;    // f_q on the Sym basis (integers)

    QuadraticFormData form_data(const ScalarDomain& dom) const {
        return QuadraticFormData{convert_matrix(gram, dom), convert_matrix(q_upper, dom)};
    }
};

inline IntegralSplitTriple split_triple_Z(const std::vector<size_t>& half_sizes) {
    if (half_sizes.size() % 2 != 0)
        throw precondition_error("split triple needs an even number of factors (b would be skew)");
    for (size_t m : half_sizes)
        if (m == 0) throw precondition_error("factor sizes must be >= 1");
    ScalarDomain z = ScalarDomain::integers();

    Matrix gram = standard_symplectic_gram(half_sizes[0], z);
    for (size_t i = 1; i < half_sizes.size(); ++i)
        gram = kron(gram, standard_symplectic_gram(half_sizes[i], z));
    size_t n = gram.rows();

    IntegralSplitTriple t;
    t.half_sizes = half_sizes;
    t.size = n;
    t.gram = gram;

    if (gram != gram.transpose()) throw validation_error("split triple: gram not symmetric");
    Scalar dz = det(gram);
    if (dz != Scalar::one(z) && dz != -Scalar::one(z))
        throw validation_error("split triple: gram not unimodular");
    for (size_t i = 0; i < n; ++i) {
        Scalar two = Scalar::from_integer(z, 2);
        if (!divides(two, gram.at(i, i)))
            throw validation_error("split triple: gram diagonal not even");
    }

    t.q_upper = Matrix(n, n, z);
    Scalar two = Scalar::from_integer(z, 2);
    for (size_t i = 0; i < n; ++i) {
        t.q_upper.at(i, i) = gram.at(i, i) / two;
        for (size_t j = i + 1; j < n; ++j) t.q_upper.at(i, j) = gram.at(i, j);
    }

    // integer inverse through the rational inverse of a unimodular matrix
    ScalarDomain q = ScalarDomain::rationals();
    Matrix inv_q = inverse(convert_matrix(gram, q));
    t.gram_inv = Matrix(n, n, z);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (!inv_q.at(i, j).rat().is_integer())
                throw validation_error("split triple: gram inverse not integral");
            t.gram_inv.at(i, j) = Scalar::from_integer(z, inv_q.at(i, j).rat().num());
        }

    // sigma_q(E_ij) = B^{-1} E_ji B on the matrix-unit basis
    t.sigma = Matrix(n * n, n * n, z);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            Matrix e(n, n, z);
            e.at(j, i) = Scalar::one(z);
            Matrix img = t.gram_inv * e * gram;
            for (size_t r = 0; r < n; ++r)
                for (size_t c = 0; c < n; ++c) t.sigma.at(r * n + c, i * n + j) = img.at(r, c);
        }
    if (t.sigma * t.sigma != Matrix::identity(n * n, z))
        throw validation_error("split triple: sigma_q is not an involution");

    // ZZ-basis of Sym(M_{2n}(ZZ), sigma_q): B^{-1} S for S in the symmetric
    // matrix-unit basis (a lattice isomorphism since B is unimodular)
    auto push_sym = [&](const Matrix& s) {
        Matrix bs = t.gram_inv * s;
        std::vector<Scalar> v(n * n, Scalar::zero(z));
        for (size_t r = 0; r < n; ++r)
            for (size_t c = 0; c < n; ++c) v[r * n + c] = bs.at(r, c);
        // f_q = Tr/2, required to be integral on the basis
        Scalar tr = Scalar::zero(z);
        for (size_t r = 0; r < n; ++r) tr = tr + bs.at(r, r);
        if (!divides(two, tr)) throw validation_error("split triple: Tr(s) odd on a Sym basis vector");
        t.sym_basis.push_back(std::move(v));
        t.f_values.push_back(tr / two);
    };
    for (size_t i = 0; i < n; ++i) {
        Matrix s(n, n, z);
        s.at(i, i) = Scalar::one(z);
        push_sym(s);
        for (size_t j = i + 1; j < n; ++j) {
            Matrix s2(n, n, z);
            s2.at(i, j) = Scalar::one(z);
            s2.at(j, i) = Scalar::one(z);
            push_sym(s2);
        }
    }

    // sigma_q equals the Kronecker tensor of the standard symplectic
    // involutions (exact matrix identity on the algebra basis)
    {
        size_t d = half_sizes.size();
        std::vector<Matrix> sig_i;
        for (size_t m : half_sizes) {
            Matrix jm = standard_symplectic_gram(m, z);
            Matrix jm_inv = -Scalar::one(z) * jm;  // J^{-1} = -J
            size_t k = 2 * m;
            Matrix s(k * k, k * k, z);
            for (size_t i = 0; i < k; ++i)
                for (size_t j = 0; j < k; ++j) {
                    Matrix e(k, k, z);
                    e.at(j, i) = Scalar::one(z);
                    Matrix img = jm_inv * e * jm;
                    for (size_t r = 0; r < k; ++r)
                        for (size_t c = 0; c < k; ++c) s.at(r * k + c, i * k + j) = img.at(r, c);
                }
            sig_i.push_back(std::move(s));
        }
        // identify M_{2n} with the tensor of the factors: E_{(k),(l)} maps to
        // the Kronecker product of matrix units, which is exactly how the
        // big sigma acts columnwise; compare through the index bijection
        Matrix expect(n * n, n * n, z);
        std::vector<size_t> dims;
        for (size_t m : half_sizes) dims.push_back(2 * m);
        // column of E_{ij}: decompose i, j into factor indices
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                std::vector<size_t> iparts(d), jparts(d);
                size_t ii = i, jj = j;
                for (size_t f = d; f-- > 0;) {
                    iparts[f] = ii % dims[f]; ii /= dims[f];
                    jparts[f] = jj % dims[f]; jj /= dims[f];
                }
                // sigma_f(E_{i_f j_f}) as a matrix, then Kronecker together
                Matrix acc(0, 0, z);
                for (size_t f = 0; f < d; ++f) {
                    size_t k = dims[f];
                    Matrix img(k, k, z);
                    for (size_t r = 0; r < k; ++r)
                        for (size_t c = 0; c < k; ++c)
                            img.at(r, c) = sig_i[f].at(r * k + c, iparts[f] * k + jparts[f]);
                    acc = f == 0 ? img : kron(acc, img);
                }
                for (size_t r = 0; r < n; ++r)
                    for (size_t c = 0; c < n; ++c) expect.at(r * n + c, i * n + j) = acc.at(r, c);
            }
        if (t.sigma != expect)
            throw validation_error("split triple: sigma_q != tensor of symplectic involutions");
    }
    return t;
}

// Reduction of the integral triple modulo p (including p = 2), as a
// quadratic triple over GF(p) with Trd the matrix trace.
inline QuadraticTriple reduce_split_triple(const IntegralSplitTriple& t, long p) {
    ScalarDomain f = ScalarDomain::prime_field(p);
    AssocAlgebra alg = AssocAlgebra::matrix_algebra(f, t.size);
    Involution sigma = make_involution(alg, convert_matrix(t.sigma, f));
    std::vector<std::vector<Scalar>> sym;
    std::vector<Scalar> fv;
    for (size_t k = 0; k < t.sym_basis.size(); ++k) {
        std::vector<Scalar> v;
        for (const auto& x : t.sym_basis[k]) v.push_back(convert(x, f));
        sym.push_back(std::move(v));
        fv.push_back(convert(t.f_values[k], f));
    }
    return make_quadratic_triple(alg, sigma, std::move(sym), std::move(fv));
}

inline QuadraticTriple rational_split_triple(const IntegralSplitTriple& t) {
    ScalarDomain q = ScalarDomain::rationals();
    AssocAlgebra alg = AssocAlgebra::matrix_algebra(q, t.size);
    Involution sigma = make_involution(alg, convert_matrix(t.sigma, q));
    return half_trace_triple(alg, sigma);
}

// Validation data for ExtAlgebra involutions (R-linear anti-automorphisms).
inline void check_ext_involution(const ExtAlgebra& b, const Matrix& sigma) {
    size_t m = b.mod.rank_r;
    const ScalarDomain& dom = b.mod.ext.base();
    if (sigma.rows() != m || sigma.cols() != m) throw shape_error("involution matrix shape mismatch");
    if (sigma * sigma != Matrix::identity(m, dom))
        throw validation_error("involution is not of order 2");
    if (sigma.apply(b.unit) != b.unit) throw validation_error("involution does not fix 1");
    auto basis = [&](size_t i) {
        std::vector<Scalar> v(m, Scalar::zero(dom));
        v[i] = Scalar::one(dom);
        return v;
    };
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) {
            auto lhs = sigma.apply(b.multiply(basis(i), basis(j)));
            auto rhs = b.multiply(sigma.apply(basis(j)), sigma.apply(basis(i)));
            if (lhs != rhs) throw validation_error("involution is not anti-multiplicative");
        }
}

// The A_1^2 -> D_2 construction: a quaternion algebra B over a quadratic
// etale extension R', with its canonical symplectic involution, goes to the
// degree-4 norm algebra with involution N(sigma) and semitrace (1/2) Trd.
struct NormTriple {
    NormAlgebra na;
    QuadraticTriple triple;
    Matrix sigma_n;  // the descended involution, for transport checks
};

inline NormTriple a1d2_norm(const FiniteAlgebra& ext, const ExtAlgebra& b, const Matrix& sigma_b) {
    const ScalarDomain& dom = ext.base();
    if (dom.characteristic() == 2) throw precondition_error("a1d2_norm needs 2 invertible");
    if (ext.rank() != 2) throw precondition_error("a1d2_norm needs a quadratic extension");
    if (!ext.is_etale()) throw precondition_error("a1d2_norm needs an etale extension");
    if (b.mod.free_rank != 4) throw precondition_error("a1d2_norm needs a degree-2 (rank 4) algebra");
    check_ext_involution(b, sigma_b);

    NormAlgebra na = build_norm_algebra(ext, b);
    Matrix sigma_n = norm_matrix(na.module(), na.module(), sigma_b);
    Involution sig = make_involution(na.algebra(), sigma_n);
    QuadraticTriple triple = half_trace_triple(na.algebra(), sig);
    if (!is_azumaya(na.algebra()))
        throw validation_error("a1d2_norm: norm algebra is not Azumaya");
    return NormTriple{std::move(na), std::move(triple), std::move(sigma_n)};
}

// Degree-2 Brauer shadow: N_{F^2/F}(A x A) -> End_F(A) through the split
// oracle, id (x) conjugation, and the sandwich map. Returns the explicit
// algebra isomorphism (16 x 16 over F).
struct BrauerShadow {
    NormAlgebra na;
    Matrix iso;  // dim N -> row-major End(A) coordinates
};

inline BrauerShadow brauer_shadow_split(const QuaternionAlgebra& a) {
    if (a.alg.family() != AlgebraFamily::Quaternion)
        throw precondition_error("brauer_shadow_split expects a quaternion algebra");
    const ScalarDomain& dom = a.alg.base();
    ExtAlgebra b = split_algebra_product({a.alg, a.alg});
    FiniteAlgebra ext = FiniteAlgebra::split(dom, 2);
    NormAlgebra na = build_norm_algebra(ext, b);
    SplitOracle oracle = split_oracle(na.module());

    // A (x) A -> End(A): a (x) b -> (x -> a x sigma(b))
    size_t n = a.alg.rank();
    Matrix sandwich(n * n, n * n, dom);
    for (size_t i = 0; i < n; ++i) {
        Matrix li = a.alg.left_mult(a.alg.basis_element(i));
        for (size_t j = 0; j < n; ++j) {
            Matrix m = li * a.alg.right_mult(a.conjugation.apply(a.alg.basis_element(j)));
            for (size_t r = 0; r < n; ++r)
                for (size_t c = 0; c < n; ++c) sandwich.at(r * n + c, i * n + j) = m.at(r, c);
        }
    }
    Matrix iso = sandwich * oracle.to_tensor;
    if (det(iso).is_zero()) throw validation_error("brauer shadow: map is not bijective");
    return BrauerShadow{std::move(na), std::move(iso)};
}

} // namespace norma

#endif
