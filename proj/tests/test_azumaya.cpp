#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "norma/parse.hpp"
#include "norma/quadpair.hpp"

using namespace norma;

namespace {

const ScalarDomain Q = ScalarDomain::rationals();

std::vector<Scalar> vec(const ScalarDomain& dom, std::vector<long> xs) {
    std::vector<Scalar> v;
    for (long x : xs) v.push_back(Scalar::from_integer(dom, x));
    return v;
}

QuaternionAlgebra hamilton(const ScalarDomain& dom) {
    return quaternion(Scalar::from_integer(dom, -1), Scalar::from_integer(dom, -1));
}

AssocAlgebra dual_numbers_assoc() {
    auto c = FiniteAlgebra::artinian_dual_numbers(Q);
    std::vector<Scalar> table(8, Scalar::zero(Q));
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j)
            for (size_t k = 0; k < 2; ++k) table[(i * 2 + j) * 2 + k] = c.sc(i, j, k);
    return AssocAlgebra(Q, 2, std::move(table), vec(Q, {1, 0}));
}

} // namespace

TEST_CASE("enveloping map detects Azumaya algebras") {
    auto m2 = AssocAlgebra::matrix_algebra(Q, 2);
    CHECK(rank(enveloping_map(m2)) == 16);
    CHECK(is_azumaya(m2));

    auto ham = hamilton(Q);
    CHECK(rank(enveloping_map(ham.alg)) == 16);
    CHECK(is_azumaya(ham.alg));

    auto dual = dual_numbers_assoc();
    CHECK(rank(enveloping_map(dual)) < 4);
    CHECK(!is_azumaya(dual));
}

TEST_CASE("involution types on M2 and the quaternions") {
    auto m2 = AssocAlgebra::matrix_algebra(Q, 2);
    auto transpose = adjoint_involution(m2, Matrix::identity(2, Q));
    auto t = involution_type(m2, transpose);
    CHECK(t.orthogonal);
    CHECK(t.sym_dim == 3);

    auto sympl = adjoint_involution(m2, standard_symplectic_gram(1, Q));
    t = involution_type(m2, sympl);
    CHECK(t.symplectic);
    CHECK(t.sym_dim == 1);

    auto ham = hamilton(Q);
    t = involution_type(ham.alg, ham.conjugation);
    CHECK(t.symplectic);
    CHECK(t.sym_dim == 1);  // only the center is fixed

    CHECK_THROWS_AS(adjoint_involution(m2, Matrix(2, 2, Q)), precondition_error);
}

TEST_CASE("adjoint involution fixed forms") {
    auto m2 = AssocAlgebra::matrix_algebra(Q, 2);
    auto transpose = adjoint_involution(m2, Matrix::identity(2, Q));
    // sigma(E_01) = E_10
    std::vector<Scalar> e01(4, Scalar::zero(Q));
    e01[1] = Scalar::one(Q);
    std::vector<Scalar> e10(4, Scalar::zero(Q));
    e10[2] = Scalar::one(Q);
    CHECK(transpose.apply(e01) == e10);

    // the d=2, m=1 split Gram is antidiag(1,-1,-1,1) and its adjoint
    // involution matches sigma_q of the integral split triple
    auto t = split_triple_Z({1, 1});
    Matrix expect(4, 4, ScalarDomain::integers());
    expect.at(0, 3) = Scalar::from_integer(ScalarDomain::integers(), 1);
    expect.at(1, 2) = Scalar::from_integer(ScalarDomain::integers(), -1);
    expect.at(2, 1) = Scalar::from_integer(ScalarDomain::integers(), -1);
    expect.at(3, 0) = Scalar::from_integer(ScalarDomain::integers(), 1);
    CHECK(t.gram == expect);

    auto m4 = AssocAlgebra::matrix_algebra(Q, 4);
    auto sq = adjoint_involution(m4, convert_matrix(t.gram, Q));
    CHECK(sq.m == convert_matrix(t.sigma, Q));
}

TEST_CASE("integral split triple fixed values") {
    auto t = split_triple_Z({1, 1});
    auto z = ScalarDomain::integers();

    // q(e1 (x) e2 + e2 (x) e1) = -1
    QuadraticFormData qd = t.form_data(z);
    qd.validate();
    CHECK(qd.q(vec(z, {0, 1, 1, 0})) == Scalar::from_integer(z, -1));
    // pure tensors are isotropic
    CHECK(qd.q(vec(z, {1, 0, 0, 0})).is_zero());

    // f_q(I_4) = 2
    auto rt = rational_split_triple(t);
    std::vector<Scalar> id(16, Scalar::zero(Q));
    for (size_t i = 0; i < 4; ++i) id[i * 4 + i] = Scalar::one(Q);
    CHECK(rt.f(id) == Scalar::from_integer(Q, 2));
    CHECK(rt.sym_dim() == 10);

    CHECK_THROWS_AS(split_triple_Z({1}), precondition_error);
    CHECK_THROWS_AS(split_triple_Z({1, 1, 1}), precondition_error);
}

TEST_CASE("split triple: b(v,v) is even and reductions are valid triples") {
    for (auto sizes : {std::vector<size_t>{1, 1}, std::vector<size_t>{1, 2}}) {
        auto t = split_triple_Z(sizes);
        auto z = ScalarDomain::integers();
        QuadraticFormData qd = t.form_data(z);
        Sampler rng(71);
        Scalar two = Scalar::from_integer(z, 2);
        for (int trial = 0; trial < 100; ++trial) {
            auto v = rng.vector(z, t.size);
            CHECK(divides(two, qd.b(v, v)));
            // q polarizes to b
            auto w = rng.vector(z, t.size);
            std::vector<Scalar> sum(t.size);
            for (size_t i = 0; i < t.size; ++i) sum[i] = v[i] + w[i];
            CHECK(qd.q(sum) - qd.q(v) - qd.q(w) == qd.b(v, w));
        }
        // reductions at 2, 3, 5 all satisfy the triple axioms
        for (long p : {2L, 3L, 5L}) {
            auto triple = reduce_split_triple(t, p);
            CHECK(triple.sym_dim() == t.size * (t.size + 1) / 2);
        }
        // and the rational triple is the half-trace one
        auto rt = rational_split_triple(t);
        CHECK(rt.sym_dim() == t.size * (t.size + 1) / 2);
    }
}

TEST_CASE("quaternion algebras") {
    // (1,1) is split: Azumaya with Trd(1) = 2
    auto split = quaternion(Scalar::one(Q), Scalar::one(Q));
    CHECK(is_azumaya(split.alg));
    CHECK(split.alg.trd(split.alg.unit()) == Scalar::from_integer(Q, 2));

    // Hamilton: Trd(i) = 0, x sigma(x) = sum of squares
    auto ham = hamilton(Q);
    CHECK(ham.alg.trd(ham.alg.basis_element(1)).is_zero());
    Sampler rng(73);
    for (int trial = 0; trial < 25; ++trial) {
        auto x = rng.vector(Q, 4);
        auto prod = ham.alg.multiply(x, ham.conjugation.apply(x));
        Scalar expect = Scalar::zero(Q);
        for (const auto& c : x) expect = expect + c * c;
        CHECK(prod[0] == expect);
        CHECK(prod[1].is_zero());
        CHECK(prod[2].is_zero());
        CHECK(prod[3].is_zero());
    }

    // characteristic 2: [1,1) is Azumaya with Trd(u) = 1
    auto f2 = ScalarDomain::prime_field(2);
    auto q2 = quaternion(Scalar::one(f2), Scalar::one(f2));
    CHECK(is_azumaya(q2.alg));
    CHECK(q2.alg.trd(q2.alg.basis_element(1)).is_one());
    auto ty = involution_type(q2.alg, q2.conjugation);
    CHECK(ty.symplectic);

    CHECK_THROWS_AS(quaternion(Scalar::zero(Q), Scalar::one(Q)), precondition_error);
}

TEST_CASE("tensor quadratic pair") {
    auto ham = hamilton(Q);
    auto triple = tensor_quadratic_pair(ham.alg, ham.conjugation, ham.alg, ham.conjugation);
    CHECK(triple.sym_dim() == 10);  // 1*1 + 3*3
    auto ty = involution_type(triple.alg, triple.sigma);
    CHECK(ty.orthogonal);

    // f(1 (x) 1) = 2
    CHECK(triple.f(triple.alg.unit()) == Scalar::from_integer(Q, 2));

    // M2 (x) M2 with both sigma_J matches the integral split triple under the
    // Kronecker identification E_ij (x) E_kl -> E_(ik),(jl)
    auto m2 = AssocAlgebra::matrix_algebra(Q, 2);
    auto sj = adjoint_involution(m2, standard_symplectic_gram(1, Q));
    auto tt = tensor_quadratic_pair(m2, sj, m2, sj);
    auto zt = split_triple_Z({1, 1});
    Matrix ident(16, 16, Q);
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j)
            for (size_t k = 0; k < 2; ++k)
                for (size_t l = 0; l < 2; ++l)
                    ident.at((i * 2 + k) * 4 + (j * 2 + l), (i * 2 + j) * 4 + (k * 2 + l)) =
                        Scalar::one(Q);
    CHECK(ident * tt.sigma.m == convert_matrix(zt.sigma, Q) * ident);
    auto m4triple = rational_split_triple(zt);
    for (const auto& s : tt.sym_basis)
        CHECK(tt.f(s) == m4triple.f(ident.apply(s)));

    // non-symplectic factors are rejected
    auto transpose = adjoint_involution(m2, Matrix::identity(2, Q));
    CHECK_THROWS_AS(tensor_quadratic_pair(m2, transpose, m2, sj), precondition_error);
    // 2 must be invertible
    auto f2 = ScalarDomain::prime_field(2);
    auto q2 = quaternion(Scalar::one(f2), Scalar::one(f2));
    CHECK_THROWS_AS(tensor_quadratic_pair(q2.alg, q2.conjugation, q2.alg, q2.conjugation),
                    precondition_error);
}

TEST_CASE("a1d2 norm triple over the split extension matches the tensor pair") {
    auto h1 = hamilton(Q);
    auto h2 = quaternion(Scalar::one(Q), Scalar::from_integer(Q, -1));
    ExtAlgebra b = split_algebra_product({h1.alg, h2.alg});
    auto s2 = FiniteAlgebra::split(Q, 2);
    Matrix sigma_b(8, 8, Q);
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = 0; j < 4; ++j) {
            sigma_b.at(i, j) = h1.conjugation.m.at(i, j);
            sigma_b.at(4 + i, 4 + j) = h2.conjugation.m.at(i, j);
        }
    NormTriple nt = a1d2_norm(s2, b, sigma_b);
    CHECK(nt.triple.sym_dim() == 10);

    SplitOracle oracle = split_oracle(nt.na.module());
    auto tensor_triple = tensor_quadratic_pair(h1.alg, h1.conjugation, h2.alg, h2.conjugation);
    // transported involution agrees
    CHECK(oracle.to_tensor * nt.sigma_n == tensor_triple.sigma.m * oracle.to_tensor);
    // transported semitrace agrees on the Sym basis
    for (const auto& s : nt.triple.sym_basis)
        CHECK(nt.triple.f(s) == tensor_triple.f(oracle.to_tensor.apply(s)));
    // and the algebras have the same structure through the oracle
    Sampler rng(79);
    auto tensor_alg = tensor_assoc(h1.alg, h2.alg);
    for (int trial = 0; trial < 25; ++trial) {
        auto x = rng.vector(Q, 16);
        auto y = rng.vector(Q, 16);
        auto lhs = oracle.to_tensor.apply(nt.na.algebra().multiply(x, y));
        auto rhs = tensor_alg.multiply(oracle.to_tensor.apply(x), oracle.to_tensor.apply(y));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("a1d2 norm triple over QQ(sqrt 2)") {
    auto k = FiniteAlgebra::quadratic(Q, Scalar::from_integer(Q, 2));
    auto kd = promote_to_domain(k);

    // B = M_2(K) with the standard symplectic involution
    {
        auto m2k = AssocAlgebra::matrix_algebra(kd, 2);
        auto sj = adjoint_involution(m2k, standard_symplectic_gram(1, kd));
        ExtAlgebra b = restrict_scalars(m2k);
        Matrix sigma_b = restrict_linear_map(m2k, sj.m);
        NormTriple nt = a1d2_norm(k, b, sigma_b);
        CHECK(nt.na.algebra().rank() == 16);
        CHECK(nt.triple.sym_dim() == 10);
        CHECK(nt.triple.f(nt.na.algebra().unit()) == Scalar::from_integer(Q, 2));
    }

    // B = (-1,-1) over K
    {
        auto ham = hamilton(kd);
        ExtAlgebra b = restrict_scalars(ham.alg);
        Matrix sigma_b = restrict_linear_map(ham.alg, ham.conjugation.m);
        NormTriple nt = a1d2_norm(k, b, sigma_b);
        CHECK(nt.na.algebra().rank() == 16);
        CHECK(nt.triple.sym_dim() == 10);
        auto ty = involution_type(nt.na.algebra(), nt.triple.sigma);
        CHECK(ty.orthogonal);
    }

    // preconditions
    auto dual = FiniteAlgebra::artinian_dual_numbers(Q);
    auto h = hamilton(Q);
    ExtAlgebra bq = split_algebra_product({h.alg, h.alg});
    Matrix sig(8, 8, Q);
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = 0; j < 4; ++j) {
            sig.at(i, j) = h.conjugation.m.at(i, j);
            sig.at(4 + i, 4 + j) = h.conjugation.m.at(i, j);
        }
    CHECK_THROWS_AS(a1d2_norm(dual, bq, sig), precondition_error);
}

TEST_CASE("brauer shadow: N(A x A) = End(A)") {
    auto run = [&](const QuaternionAlgebra& a, uint64_t seed) {
        const ScalarDomain& dom = a.alg.base();
        BrauerShadow bs = brauer_shadow_split(a);
        size_t n = a.alg.rank();
        auto to_end = [&](const std::vector<Scalar>& x) {
            Matrix m(n, n, dom);
            auto v = bs.iso.apply(x);
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) m.at(i, j) = v[i * n + j];
            return m;
        };
        CHECK(to_end(bs.na.algebra().unit()) == Matrix::identity(n, dom));
        Sampler rng(seed);
        for (int trial = 0; trial < 100; ++trial) {
            auto x = rng.vector(dom, 16);
            auto y = rng.vector(dom, 16);
            CHECK(to_end(bs.na.algebra().multiply(x, y)) == to_end(x) * to_end(y));
        }
    };
    run(quaternion(Scalar::one(Q), Scalar::one(Q)), 83);    // already split
    run(hamilton(Q), 89);                                   // division algebra
    auto f5 = ScalarDomain::prime_field(5);
    run(hamilton(f5), 97);                                  // (-1,-1) over GF(5) = M_2

    // non-quaternion input is rejected
    auto m2 = AssocAlgebra::matrix_algebra(Q, 2);
    auto transpose = adjoint_involution(m2, Matrix::identity(2, Q));
    CHECK_THROWS_AS(brauer_shadow_split(QuaternionAlgebra{m2, transpose}), precondition_error);
}

TEST_CASE("quadratic triples reject non-orthogonal involutions") {
    auto m2 = AssocAlgebra::matrix_algebra(Q, 2);
    auto sj = adjoint_involution(m2, standard_symplectic_gram(1, Q));
    CHECK_THROWS_AS(half_trace_triple(m2, sj), precondition_error);
}
