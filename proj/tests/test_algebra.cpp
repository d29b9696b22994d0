#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "norma/algebra.hpp"
#include "norma/parse.hpp"
#include "norma/random.hpp"

using namespace norma;

namespace {

const ScalarDomain Q = ScalarDomain::rationals();

std::vector<Scalar> vec(const ScalarDomain& dom, std::vector<long> xs) {
    std::vector<Scalar> v;
    for (long x : xs) v.push_back(Scalar::from_integer(dom, x));
    return v;
}

FiniteAlgebra sqrt2_algebra() { return FiniteAlgebra::quadratic(Q, Scalar::from_integer(Q, 2)); }

} // namespace

TEST_CASE("regular representation fixed cases") {
    auto a = sqrt2_algebra();
    CHECK(a.regular_rep(a.unit()) == Matrix::identity(2, Q));

    // x acts as [[0,2],[1,0]] on the basis {1, x}
    Matrix rx = a.regular_rep(vec(Q, {0, 1}));
    Matrix expect(2, 2, Q);
    expect.at(0, 1) = Scalar::from_integer(Q, 2);
    expect.at(1, 0) = Scalar::one(Q);
    CHECK(rx == expect);

    auto s = FiniteAlgebra::split(Q, 2);
    Matrix r = s.regular_rep(vec(Q, {5, -3}));
    CHECK(r.at(0, 0) == Scalar::from_integer(Q, 5));
    CHECK(r.at(1, 1) == Scalar::from_integer(Q, -3));
    CHECK(r.at(0, 1).is_zero());
    CHECK(r.at(1, 0).is_zero());
}

TEST_CASE("norm fixed cases") {
    auto a = sqrt2_algebra();
    CHECK(a.norm_element(a.unit()).is_one());
    // norm(a + b x) = a^2 - 2 b^2 at a=3, b=1
    CHECK(a.norm_element(vec(Q, {3, 1})) == Scalar::from_integer(Q, 7));

    auto s = FiniteAlgebra::split(Q, 2);
    CHECK(s.norm_element(vec(Q, {4, -5})) == Scalar::from_integer(Q, -20));

    // norm form as a polynomial: t1^2 - 2 t2^2
    MultiPoly nf = a.norm_form();
    CHECK(nf.coefficient({2, 0}) == Scalar::one(Q));
    CHECK(nf.coefficient({0, 2}) == Scalar::from_integer(Q, -2));
    CHECK(nf.coefficient({1, 1}).is_zero());
}

TEST_CASE("regular_rep is a ring homomorphism") {
    Sampler rng(3);
    for (const auto& a : {sqrt2_algebra(), FiniteAlgebra::split(Q, 3)}) {
        for (int trial = 0; trial < 100; ++trial) {
            auto x = rng.vector(Q, a.rank());
            auto y = rng.vector(Q, a.rank());
            CHECK(a.regular_rep(a.multiply(x, y)) == a.regular_rep(x) * a.regular_rep(y));
            std::vector<Scalar> sum(a.rank(), Scalar::zero(Q));
            for (size_t i = 0; i < a.rank(); ++i) sum[i] = x[i] + y[i];
            CHECK(a.regular_rep(sum) == a.regular_rep(x) + a.regular_rep(y));
        }
    }
}

TEST_CASE("norm is multiplicative") {
    Sampler rng(5);
    auto a = sqrt2_algebra();
    for (int trial = 0; trial < 100; ++trial) {
        auto x = rng.vector(Q, 2);
        auto y = rng.vector(Q, 2);
        CHECK(a.norm_element(a.multiply(x, y)) == a.norm_element(x) * a.norm_element(y));
    }
}

TEST_CASE("etale test fixed cases") {
    CHECK(FiniteAlgebra::split(Q, 2).is_etale());
    CHECK(sqrt2_algebra().is_etale());

    auto dual = FiniteAlgebra::artinian_dual_numbers(Q);
    Matrix g = dual.trace_gram();
    CHECK(g.at(0, 0) == Scalar::from_integer(Q, 2));
    CHECK(g.at(0, 1).is_zero());
    CHECK(g.at(1, 1).is_zero());
    CHECK(!dual.is_etale());

    // GF(4) = GF(2)[x]/(x^2+x+1): Gram [[0,1],[1,1]], invertible
    auto f2 = ScalarDomain::prime_field(2);
    auto f4 = FiniteAlgebra::poly_quotient(f2, vec(f2, {1, 1, 1}));
    Matrix g4 = f4.trace_gram();
    CHECK(g4.at(0, 0).is_zero());
    CHECK(g4.at(0, 1).is_one());
    CHECK(g4.at(1, 1).is_one());
    CHECK(f4.is_etale());

    auto z = ScalarDomain::integers();
    auto az = FiniteAlgebra::split(z, 2);
    CHECK_THROWS_AS(az.is_etale(), domain_error);
}

TEST_CASE("base change") {
    auto a = sqrt2_algebra();
    CHECK(a.base_change(Q) == a);

    auto qi = ScalarDomain::simple_extension(parse_poly("x^2+1"));
    auto ai = a.base_change(qi);
    CHECK(ai.rank() == 2);
    CHECK(ai.base() == qi);
    // x^2 = 2 still holds after extension
    auto x2 = ai.multiply(ai.basis_element(1), ai.basis_element(1));
    CHECK(x2[0] == Scalar::from_integer(qi, 2));
    CHECK(x2[1].is_zero());

    auto f5 = ScalarDomain::prime_field(5);
    CHECK_THROWS_AS(FiniteAlgebra::split(Q, 2).base_change(f5), domain_error);
}

TEST_CASE("tensor products of algebras") {
    auto a = sqrt2_algebra();
    auto triv = tensor_algebras(FiniteAlgebra::split(Q, 1), a);
    CHECK(triv.rank() == 2);
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j)
            for (size_t k = 0; k < 2; ++k) CHECK(triv.sc(i, j, k) == a.sc(i, j, k));

    auto s2 = FiniteAlgebra::split(Q, 2);
    auto s4 = tensor_algebras(s2, s2);
    CHECK(s4 == FiniteAlgebra::split(Q, 4));

    // sqrt2 (x) sqrt2 has the zero divisor (x (x) 1 - 1 (x) x)
    auto t = tensor_algebras(a, a);
    auto u = vec(Q, {0, -1, 1, 0});  // basis 1(x)1, 1(x)x, x(x)1, x(x)x
    auto v = vec(Q, {0, 1, 1, 0});
    auto prod = t.multiply(u, v);
    for (const auto& c : prod) CHECK(c.is_zero());
    CHECK(!t.norm_element(u).is_one());

    auto f5 = ScalarDomain::prime_field(5);
    CHECK_THROWS_AS(tensor_algebras(a, FiniteAlgebra::split(f5, 2)), domain_error);
}

TEST_CASE("constructor rejects bad structure constants") {
    // commutativity violation
    {
        auto s = FiniteAlgebra::split(Q, 2);
        std::vector<Scalar> c(8, Scalar::zero(Q));
        auto set = [&](size_t i, size_t j, size_t k, long v) { c[(i * 2 + j) * 2 + k] = Scalar::from_integer(Q, v); };
        set(0, 0, 0, 1); set(0, 1, 1, 1); set(1, 0, 1, 1); set(1, 1, 0, 1);
        set(1, 0, 0, 1);  // break e1 e0 != e0 e1
        CHECK_THROWS_AS(FiniteAlgebra(Q, 2, c, vec(Q, {1, 0})), validation_error);
        (void)s;
    }
    // associativity violation: a*a = b, a*b = 1, b*b = 0
    {
        std::vector<Scalar> c(27, Scalar::zero(Q));
        auto set = [&](size_t i, size_t j, size_t k, long v) { c[(i * 3 + j) * 3 + k] = Scalar::from_integer(Q, v); };
        for (size_t j = 0; j < 3; ++j) { set(0, j, j, 1); if (j) set(j, 0, j, 1); }
        set(1, 1, 2, 1);
        set(1, 2, 0, 1); set(2, 1, 0, 1);
        CHECK_THROWS_AS(FiniteAlgebra(Q, 3, c, vec(Q, {1, 0, 0})), validation_error);
    }
    // unit violation: all products zero
    {
        std::vector<Scalar> c(8, Scalar::zero(Q));
        CHECK_THROWS_AS(FiniteAlgebra(Q, 2, c, vec(Q, {1, 0})), validation_error);
    }
}

TEST_CASE("promotion of a quadratic field to a scalar domain") {
    auto a = sqrt2_algebra();
    auto k = promote_to_domain(a);
    CHECK(k.kind() == DomainKind::SimpleExtension);
    CHECK(Scalar::generator(k) * Scalar::generator(k) == Scalar::from_integer(k, 2));

    auto back = algebra_from_extension(k);
    CHECK(back == a);

    // extension_coords round-trips the generator
    auto coords = extension_coords(parse_scalar(k, "3 - x"));
    CHECK(coords[0] == Scalar::from_integer(Q, 3));
    CHECK(coords[1] == Scalar::from_integer(Q, -1));

    // no presentation, no promotion
    CHECK_THROWS_AS(promote_to_domain(FiniteAlgebra::split(Q, 2)), domain_error);
}
