#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "norma/quadpair.hpp"
#include "norma/segre.hpp"

using namespace norma;

namespace {

const ScalarDomain Q = ScalarDomain::rationals();

Matrix mat(const ScalarDomain& dom, std::vector<std::vector<long>> rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size(), dom);
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j)
            m.at(i, j) = Scalar::from_integer(dom, rows[i][j]);
    return m;
}

Matrix random_invertible(Sampler& rng, const ScalarDomain& dom, size_t n) {
    for (;;) {
        Matrix m(n, n, dom);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) m.at(i, j) = rng.scalar(dom);
        if (!det(m).is_zero()) return m;
    }
}

SemidirectElement random_semidirect(Sampler& rng, const ScalarDomain& dom, size_t r, size_t d) {
    std::vector<Matrix> factors;
    for (size_t i = 0; i < d; ++i) factors.push_back(random_invertible(rng, dom, r));
    Perm p = identity_perm(d);
    for (size_t i = d; i-- > 1;) std::swap(p[i], p[rng.next_int(0, static_cast<long>(i))]);
    return SemidirectElement::make(std::move(factors), std::move(p));
}

QuadraticFormData split_form(const ScalarDomain& dom, std::vector<size_t> halves) {
    return split_triple_Z(halves).form_data(dom);
}

} // namespace

TEST_CASE("kron fixed cases") {
    CHECK(kron(Matrix::identity(2, Q), Matrix::identity(2, Q)) == Matrix::identity(4, Q));
    Matrix a = mat(Q, {{1, 2}, {3, 4}});
    Matrix expect = mat(Q, {{1, 0, 2, 0}, {0, 1, 0, 2}, {3, 0, 4, 0}, {0, 3, 0, 4}});
    CHECK(kron(a, Matrix::identity(2, Q)) == expect);

    Sampler rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        Matrix x = random_invertible(rng, Q, 2);
        Matrix y = random_invertible(rng, Q, 3);
        CHECK(det(kron(x, y)) == det(x).pow(3) * det(y).pow(2));
    }
}

TEST_CASE("permutation matrices and the parity lemma") {
    CHECK(perm_matrix(identity_perm(2), 3, 2, Q) == Matrix::identity(9, Q));

    // det j((1 2)) = -1 for r = 2 (m = 1) and +1 for r = 4 (m = 2)
    Perm swap{1, 0};
    for (const auto& dom : {Q, ScalarDomain::prime_field(3)}) {
        CHECK(det(perm_matrix(swap, 2, 2, dom)) == -Scalar::one(dom));
        CHECK(det(perm_matrix(swap, 4, 2, dom)) == Scalar::one(dom));
    }

    // j is a group homomorphism
    Sampler rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        Perm s = identity_perm(3), t = identity_perm(3);
        for (size_t i = 3; i-- > 1;) {
            std::swap(s[i], s[rng.next_int(0, static_cast<long>(i))]);
            std::swap(t[i], t[rng.next_int(0, static_cast<long>(i))]);
        }
        CHECK(perm_matrix(compose_perm(s, t), 2, 3, Q) ==
              perm_matrix(s, 2, 3, Q) * perm_matrix(t, 2, 3, Q));
    }
}

TEST_CASE("seg_prime: identity and the intertwining identity") {
    SemidirectElement id = SemidirectElement::pure({Matrix::identity(2, Q), Matrix::identity(2, Q)});
    CHECK(seg_prime(id) == Matrix::identity(4, Q));

    Sampler rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        size_t d = 2 + rng.next_int(0, 1);
        SemidirectElement g = random_semidirect(rng, Q, 2, d);
        Matrix p = perm_matrix(g.perm, 2, d, Q);
        std::vector<Matrix> permuted;
        for (size_t k = 0; k < d; ++k) permuted.push_back(g.factors[g.perm[k]]);
        CHECK(kron_all(g.factors) * p == p * kron_all(permuted));
    }
}

TEST_CASE("semidirect group law") {
    Sampler rng(11);
    auto f5 = ScalarDomain::prime_field(5);
    for (const auto& dom : {Q, f5}) {
        for (int trial = 0; trial < 100; ++trial) {
            SemidirectElement g = random_semidirect(rng, dom, 2, 2);
            SemidirectElement h = random_semidirect(rng, dom, 2, 2);
            // homomorphism
            CHECK(seg_prime(semidirect_mul(g, h)) == seg_prime(g) * seg_prime(h));
            // inverse
            SemidirectElement e = semidirect_mul(g, semidirect_inv(g));
            CHECK(seg_prime(e) == Matrix::identity(4, dom));
        }
        // associativity
        for (int trial = 0; trial < 50; ++trial) {
            auto g = random_semidirect(rng, dom, 2, 2);
            auto h = random_semidirect(rng, dom, 2, 2);
            auto k = random_semidirect(rng, dom, 2, 2);
            auto lhs = semidirect_mul(semidirect_mul(g, h), k);
            auto rhs = semidirect_mul(g, semidirect_mul(h, k));
            CHECK(lhs.perm == rhs.perm);
            for (size_t i = 0; i < 2; ++i) CHECK(lhs.factors[i] == rhs.factors[i]);
        }
    }
}

TEST_CASE("center tuples map to scalars") {
    Sampler rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        Scalar c1 = rng.nonzero_scalar(Q), c2 = rng.nonzero_scalar(Q);
        Matrix img = kron_all({c1 * Matrix::identity(2, Q), c2 * Matrix::identity(2, Q)});
        CHECK(img == (c1 * c2) * Matrix::identity(4, Q));

        // PSeg' shadow: scalar-multiple tuples give scalar-multiple images
        SemidirectElement g = random_semidirect(rng, Q, 2, 2);
        SemidirectElement gc = SemidirectElement::make({c1 * g.factors[0], c2 * g.factors[1]}, g.perm);
        CHECK(seg_prime(gc) == (c1 * c2) * seg_prime(g));
    }
}

TEST_CASE("symplectic and orthogonal membership") {
    Matrix j1 = standard_symplectic_gram(1, Q);
    CHECK(is_symplectic(Matrix::identity(2, Q), j1));
    CHECK(is_symplectic(j1, j1));  // J itself is symplectic

    auto qd = split_form(Q, {1, 1});
    qd.validate();
    CHECK(is_orthogonal(Matrix::identity(4, Q), qd));

    // a generic invertible matrix is not orthogonal
    Matrix bad = Matrix::identity(4, Q);
    bad.at(0, 0) = Scalar::from_integer(Q, 2);
    CHECK(!is_orthogonal(bad, qd));

    // products of random symplectic transvections stay symplectic
    Sampler rng(17);
    for (int trial = 0; trial < 25; ++trial) {
        Matrix g = random_symplectic(rng, j1);
        CHECK(is_symplectic(g, j1));
    }
    Matrix j2 = standard_symplectic_gram(2, ScalarDomain::prime_field(5));
    for (int trial = 0; trial < 25; ++trial) {
        Matrix g = random_symplectic(rng, j2);
        CHECK(is_symplectic(g, j2));
    }
}

TEST_CASE("dickson invariant") {
    auto f3 = ScalarDomain::prime_field(3);
    auto qd = split_form(f3, {1, 1});
    CHECK(dickson(Matrix::identity(4, f3), qd) == 0);

    // j((1 2)) has Dickson 1 for m = 1 ...
    Perm swap{1, 0};
    Matrix p2 = perm_matrix(swap, 2, 2, f3);
    CHECK(dickson(p2, qd) == 1);

    // ... and Dickson 0 for m = 2
    auto qd4 = split_form(f3, {2, 2});
    Matrix p4 = perm_matrix(swap, 4, 2, f3);
    CHECK(dickson(p4, qd4) == 0);

    // non-orthogonal input is rejected
    Matrix bad = Matrix::identity(4, f3);
    bad.at(0, 0) = Scalar::from_integer(f3, 2);
    CHECK_THROWS_AS(dickson(bad, qd), precondition_error);

    // characteristic 2: rank formula on the reduction of the split form
    auto f2 = ScalarDomain::prime_field(2);
    auto qd2 = split_form(f2, {1, 1});
    qd2.validate();
    CHECK(dickson(Matrix::identity(4, f2), qd2) == 0);
    Matrix pswap2 = perm_matrix(swap, 2, 2, f2);
    CHECK(dickson(pswap2, qd2) == 1);
}

TEST_CASE("dickson is a homomorphism on products") {
    auto f3 = ScalarDomain::prime_field(3);
    auto qd = split_form(f3, {1, 1});
    Matrix j1 = standard_symplectic_gram(1, f3);
    Perm swap{1, 0};
    Matrix pswap = perm_matrix(swap, 2, 2, f3);

    Sampler rng(19);
    std::vector<Matrix> pool;
    for (int i = 0; i < 8; ++i) {
        Matrix g = kron(random_symplectic(rng, j1), random_symplectic(rng, j1));
        if (rng.next_int(0, 1)) g = g * pswap;
        pool.push_back(std::move(g));
    }
    for (int trial = 0; trial < 30; ++trial) {
        Matrix acc = Matrix::identity(4, f3);
        int expect = 0;
        size_t len = 1 + rng.next_int(0, 3);
        for (size_t t = 0; t < len; ++t) {
            const Matrix& g = pool[rng.next_int(0, static_cast<long>(pool.size() - 1))];
            expect = (expect + dickson(g, qd)) % 2;
            acc = acc * g;
        }
        CHECK(dickson(acc, qd) == expect);
    }
}

TEST_CASE("segre restriction lands in O_q^+ with the right scalar kernel") {
    auto f5 = ScalarDomain::prime_field(5);
    auto qd = split_form(f5, {1, 1});
    Sampler rng(23);
    auto rep = check_segre_restriction({1, 1}, qd, rng, 100);
    CHECK(rep.passed());

    // explicit kernel points
    Matrix mi = -Scalar::one(f5) * Matrix::identity(2, f5);
    CHECK(kron(mi, mi) == Matrix::identity(4, f5));
    CHECK(kron(mi, Matrix::identity(2, f5)) == -Scalar::one(f5) * Matrix::identity(4, f5));

    CHECK_THROWS_AS(check_segre_restriction({1}, qd, rng, 1), precondition_error);
}

TEST_CASE("lie algebra dimensions: sp2 + sp2 = o4") {
    CHECK(lie_algebra_dim(standard_symplectic_gram(1, Q)) == 3);
    auto qd = split_form(Q, {1, 1});
    CHECK(lie_algebra_dim(qd.gram) == 6);

    auto f2 = ScalarDomain::prime_field(2);
    CHECK_THROWS_AS(lie_algebra_dim(standard_symplectic_gram(1, f2)), domain_error);
}

TEST_CASE("exceptional isomorphism evidence over GF(3) and GF(5)") {
    {
        auto f3 = ScalarDomain::prime_field(3);
        auto rep = exceptional_iso_evidence(3, split_form(f3, {1, 1}));
        CHECK(rep.sp2_order == 24);
        CHECK(rep.quotient_order == 576);
        CHECK(rep.image_count == 576);
        CHECK(rep.injective);
        CHECK(rep.all_orthogonal);
        CHECK(rep.dickson_matches_swap);
    }
    {
        auto f5 = ScalarDomain::prime_field(5);
        auto rep = exceptional_iso_evidence(5, split_form(f5, {1, 1}));
        CHECK(rep.sp2_order == 120);
        CHECK(rep.quotient_order == 14400);
        CHECK(rep.image_count == 14400);
        CHECK(rep.injective);
        CHECK(rep.all_orthogonal);
        CHECK(rep.dickson_matches_swap);
    }
}
