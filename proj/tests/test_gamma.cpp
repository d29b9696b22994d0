#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "norma/gamma.hpp"
#include "norma/parse.hpp"

using namespace norma;

namespace {

const ScalarDomain Q = ScalarDomain::rationals();

std::vector<Scalar> vec(const ScalarDomain& dom, std::vector<long> xs) {
    std::vector<Scalar> v;
    for (long x : xs) v.push_back(Scalar::from_integer(dom, x));
    return v;
}

GammaElement unit_vec(const GammaSpace& gs, const ExpVec& a) {
    auto e = GammaElement::zero(gs);
    e.coords[gs.index_of(a)] = Scalar::one(gs.domain());
    return e;
}

// Independent count of multisets of size d over n symbols.
size_t count_multisets(size_t n, size_t d) {
    if (d == 0) return 1;
    if (n == 1) return 1;
    size_t total = 0;
    for (size_t k = 0; k <= d; ++k) total += count_multisets(n - 1, d - k);
    return total;
}

} // namespace

TEST_CASE("gamma space dimension equals multiset count") {
    for (size_t n = 1; n <= 4; ++n)
        for (size_t d = 0; d <= 4; ++d) {
            GammaSpace gs(Q, n, d);
            CHECK(gs.dim() == count_multisets(n, d));
            CHECK(integer_in(Q, binomial(n + d - 1, d)) == Scalar::from_integer(Q, gs.dim()));
        }
}

TEST_CASE("basis order is lexicographic and orbits enumerate distinct words") {
    GammaSpace gs(Q, 2, 2);
    REQUIRE(gs.dim() == 3);
    CHECK(gs.exponents(0) == ExpVec{0, 2});
    CHECK(gs.exponents(1) == ExpVec{1, 1});
    CHECK(gs.exponents(2) == ExpVec{2, 0});
    CHECK(gs.orbit(1).size() == 2);
    CHECK(gs.orbit(0).size() == 1);
    GammaSpace g3(Q, 3, 3);
    CHECK(g3.orbit(g3.index_of({1, 1, 1})).size() == 6);
}

TEST_CASE("gamma_pure fixed cases") {
    GammaSpace gs(Q, 2, 2);
    CHECK(gamma_pure(gs, vec(Q, {1, 0})) == unit_vec(gs, {2, 0}));

    auto g = gamma_pure(gs, vec(Q, {1, 1}));
    CHECK(g == unit_vec(gs, {2, 0}) + unit_vec(gs, {1, 1}) + unit_vec(gs, {0, 2}));

    CHECK(gamma_pure(gs, vec(Q, {2, 0})) == Scalar::from_integer(Q, 4) * unit_vec(gs, {2, 0}));

    CHECK_THROWS_AS(gamma_pure(gs, vec(Q, {1, 2, 3})), shape_error);
}

TEST_CASE("divided product fixed cases") {
    GammaSpace g1(Q, 2, 1);
    GammaSpace g2(Q, 2, 2);
    auto e1 = gamma_pure(g1, vec(Q, {1, 0}));
    auto e2 = gamma_pure(g1, vec(Q, {0, 1}));

    CHECK(divided_product(e1, e1) == Scalar::from_integer(Q, 2) * unit_vec(g2, {2, 0}));
    CHECK(divided_product(e1, e2) == unit_vec(g2, {1, 1}));

    auto sq = gamma_pure(g2, vec(Q, {1, 0}));
    GammaSpace g3(Q, 2, 3);
    CHECK(divided_product(sq, e1) == Scalar::from_integer(Q, 3) * unit_vec(g3, {3, 0}));

    GammaSpace other(Q, 3, 1);
    CHECK_THROWS_AS(divided_product(e1, gamma_pure(other, vec(Q, {1, 0, 0}))), shape_error);
}

TEST_CASE("mu action: unit acts trivially and gamma is multiplicative") {
    auto a = FiniteAlgebra::quadratic(Q, Scalar::from_integer(Q, 2));
    auto act = left_mult_table(a);
    GammaSpace gs(Q, 2, 2);
    GammaElement gunit = gamma_pure(gs, a.unit());
    for (size_t i = 0; i < gs.dim(); ++i) {
        auto x = unit_vec(gs, gs.exponents(i));
        CHECK(mu_action(gs, act, gunit, x) == x);
    }

    Sampler rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        auto r = rng.vector(Q, 2);
        auto m = rng.vector(Q, 2);
        CHECK(mu_action(gs, act, gamma_pure(gs, r), gamma_pure(gs, m)) ==
              gamma_pure(gs, a.multiply(r, m)));
    }
}

TEST_CASE("mu action on the split algebra") {
    auto s = FiniteAlgebra::split(Q, 2);
    auto act = left_mult_table(s);
    GammaSpace gs(Q, 2, 2);
    auto mixed = unit_vec(gs, {1, 1});  // gamma^1(e1) gamma^1(e2)
    CHECK(mu_action(gs, act, mixed, mixed) == mixed);
}

TEST_CASE("pi fixed cases") {
    auto a = FiniteAlgebra::quadratic(Q, Scalar::from_integer(Q, 2));
    GammaSpace gs(Q, 2, 2);
    auto pi = pi_map(a);
    CHECK(pi[gs.index_of({0, 2})] == Scalar::from_integer(Q, -2));  // gamma^2(x)
    CHECK(pi[gs.index_of({1, 1})].is_zero());
    CHECK(pi[gs.index_of({2, 0})].is_one());                        // gamma^2(1)

    auto s = FiniteAlgebra::split(Q, 2);
    auto pis = pi_map(s);
    CHECK(pis[gs.index_of({1, 1})].is_one());
    CHECK(pis[gs.index_of({2, 0})].is_zero());
    CHECK(pis[gs.index_of({0, 2})].is_zero());
}

TEST_CASE("pi composed with gamma is the norm, and pi is multiplicative") {
    Sampler rng(29);
    for (const auto& a : {FiniteAlgebra::quadratic(Q, Scalar::from_integer(Q, 2)),
                          FiniteAlgebra::split(Q, 3),
                          FiniteAlgebra::poly_quotient(ScalarDomain::prime_field(5),
                                                       {Scalar::from_integer(ScalarDomain::prime_field(5), -2),
                                                        Scalar::zero(ScalarDomain::prime_field(5)),
                                                        Scalar::one(ScalarDomain::prime_field(5))})}) {
        size_t d = a.rank();
        GammaSpace gs(a.base(), d, d);
        auto pi = pi_map(a);
        auto act = left_mult_table(a);
        auto apply_pi = [&](const GammaElement& g) {
            Scalar acc = Scalar::zero(a.base());
            for (size_t i = 0; i < pi.size(); ++i)
                if (!g.coords[i].is_zero()) acc = acc + pi[i] * g.coords[i];
            return acc;
        };
        for (int trial = 0; trial < 40; ++trial) {
            auto r = rng.vector(a.base(), d);
            CHECK(apply_pi(gamma_pure(gs, r)) == a.norm_element(r));
            // multiplicativity on random combinations of gamma images
            auto u = gamma_pure(gs, rng.vector(a.base(), d)) + gamma_pure(gs, rng.vector(a.base(), d));
            auto v = gamma_pure(gs, rng.vector(a.base(), d));
            CHECK(apply_pi(mu_action(gs, act, u, v)) == apply_pi(u) * apply_pi(v));
        }
    }
}

TEST_CASE("law_eval fixed cases") {
    GammaSpace gs(Q, 2, 2);

    // one indeterminate: gamma^2(m t) = t^2 gamma^2(m)
    auto m = vec(Q, {3, -1});
    auto coords = law_eval_gamma(gs, {m});
    auto gm = gamma_pure(gs, m);
    for (size_t i = 0; i < gs.dim(); ++i) {
        CHECK(coords[i].coefficient({2}) == gm.coords[i]);
        CHECK(coords[i].coefficient({1}).is_zero());
        CHECK(coords[i].coefficient({0}).is_zero());
    }

    // two indeterminates at the basis vectors
    auto c2 = law_eval_gamma(gs, {vec(Q, {1, 0}), vec(Q, {0, 1})});
    CHECK(c2[gs.index_of({2, 0})].coefficient({2, 0}).is_one());
    CHECK(c2[gs.index_of({1, 1})].coefficient({1, 1}).is_one());
    CHECK(c2[gs.index_of({0, 2})].coefficient({0, 2}).is_one());
    CHECK(c2[gs.index_of({1, 1})].terms().size() == 1);

    // specialization at t = (1,1) is gamma_pure(e1 + e2)
    auto sum = gamma_pure(gs, vec(Q, {1, 1}));
    for (size_t i = 0; i < gs.dim(); ++i)
        CHECK(c2[i].eval({Scalar::one(Q), Scalar::one(Q)}) == sum.coords[i]);
}

TEST_CASE("law_eval expands as the sum of divided-power monomials") {
    // coefficient of t^a in gamma^d(sum t_i m_i) is gamma^{a_1}(m_1)...gamma^{a_k}(m_k)
    Sampler rng(43);
    GammaSpace gs(Q, 3, 3);
    std::vector<std::vector<Scalar>> gens = {rng.vector(Q, 3), rng.vector(Q, 3)};
    auto coords = law_eval_gamma(gs, gens);
    GammaSpace exps(Q, 2, 3);  // exponent patterns (a_1, a_2), |a| = 3
    for (const auto& a : exps.basis()) {
        GammaElement expect = divided_product(gamma_pure(GammaSpace(Q, 3, a[0]), gens[0]),
                                              gamma_pure(GammaSpace(Q, 3, a[1]), gens[1]));
        for (size_t i = 0; i < gs.dim(); ++i)
            CHECK(coords[i].coefficient(a) == expect.coords[i]);
    }
}

TEST_CASE("law_eval specializes to gamma_pure at random points") {
    Sampler rng(31);
    for (const auto& dom : {ScalarDomain::rationals(), ScalarDomain::prime_field(3)}) {
        GammaSpace gs(dom, 3, 2);
        std::vector<std::vector<Scalar>> gens = {rng.vector(dom, 3), rng.vector(dom, 3)};
        auto coords = law_eval_gamma(gs, gens);
        for (int trial = 0; trial < 25; ++trial) {
            auto t = rng.vector(dom, 2);
            std::vector<Scalar> point(3, Scalar::zero(dom));
            for (size_t j = 0; j < 3; ++j) point[j] = t[0] * gens[0][j] + t[1] * gens[1][j];
            auto direct = gamma_pure(gs, point);
            for (size_t i = 0; i < gs.dim(); ++i) CHECK(coords[i].eval(t) == direct.coords[i]);
        }
    }
}

TEST_CASE("functoriality of gamma on linear maps") {
    Sampler rng(37);
    GammaSpace src(Q, 2, 2), dst(Q, 3, 2);
    for (int trial = 0; trial < 50; ++trial) {
        Matrix phi(3, 2, Q);
        for (size_t i = 0; i < 3; ++i)
            for (size_t j = 0; j < 2; ++j) phi.at(i, j) = rng.scalar(Q);
        Matrix gphi = gamma_matrix(src, dst, phi);
        auto m = rng.vector(Q, 2);
        CHECK(gphi.apply(gamma_pure(src, m).coords) == gamma_pure(dst, phi.apply(m)).coords);
    }
    // composition law
    GammaSpace mid(Q, 2, 2);
    Matrix f(2, 2, Q), g(3, 2, Q);
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j) f.at(i, j) = rng.scalar(Q);
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = 0; j < 2; ++j) g.at(i, j) = rng.scalar(Q);
    CHECK(gamma_matrix(src, dst, g * f) == gamma_matrix(mid, dst, g) * gamma_matrix(src, mid, f));
}

TEST_CASE("gamma relations hold over QQ and small characteristic") {
    Sampler rng(41);
    auto f2 = ScalarDomain::prime_field(2);
    auto f3 = ScalarDomain::prime_field(3);

    CHECK(check_gamma_relations(GammaSpace(Q, 3, 2), rng).passed);
    CHECK(check_gamma_relations(GammaSpace(f2, 2, 2), rng).passed);  // d! not invertible
    CHECK(check_gamma_relations(GammaSpace(Q, 2, 3), rng).passed);
    CHECK(check_gamma_relations(GammaSpace(f3, 2, 3), rng).passed);  // d = p
}
