#ifndef NORMA_VERIFY_HPP
#define NORMA_VERIFY_HPP

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "norma/parse.hpp"
#include "norma/quadpair.hpp"
#include "norma/segre.hpp"

namespace norma {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

namespace verify_detail {

inline std::vector<Scalar> vscale(const Scalar& c, std::vector<Scalar> v) {
    for (auto& x : v) x = c * x;
    return v;
}

struct Check {
    bool ok = true;
    std::ostringstream log;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (log.tellp() > 0) log << "; ";
            log << what;
        }
    }
};

// The five etale degree-2 extensions used throughout, plus their base fields.
inline std::vector<std::pair<std::string, FiniteAlgebra>> etale_fixtures() {
    ScalarDomain q = ScalarDomain::rationals();
    ScalarDomain f5 = ScalarDomain::prime_field(5);
    ScalarDomain f2 = ScalarDomain::prime_field(2);
    auto sc = [](const ScalarDomain& d, long v) { return Scalar::from_integer(d, v); };
    return {
        {"QQ^2", FiniteAlgebra::split(q, 2)},
        {"QQ(sqrt2)", FiniteAlgebra::quadratic(q, sc(q, 2))},
        {"QQ(i)", FiniteAlgebra::quadratic(q, sc(q, -1))},
        {"GF(5)[x]/(x^2-2)", FiniteAlgebra::quadratic(f5, sc(f5, 2))},
        {"GF(4)", FiniteAlgebra::poly_quotient(f2, {sc(f2, 1), sc(f2, 1), sc(f2, 1)})},
    };
}

inline size_t count_multisets(size_t n, size_t d) {
    if (d == 0 || n == 1) return 1;
    size_t total = 0;
    for (size_t k = 0; k <= d; ++k) total += count_multisets(n - 1, d - k);
    return total;
}

} // namespace verify_detail

// Criterion 1: dim N(R'^n) = n^d over every etale fixture.
inline CriterionResult criterion_rank_law(uint64_t, size_t) {
    using namespace verify_detail;
    Check c;
    for (const auto& [name, ext] : etale_fixtures())
        for (size_t n = 1; n <= 3; ++n) {
            NormModule nm(ext, ExtModule::free_module(ext, n));
            c.require(nm.dim() == n * n, name + ": dim N(R'^" + std::to_string(n) + ") != n^2");
        }
    auto s3 = FiniteAlgebra::split(ScalarDomain::rationals(), 3);
    NormModule nm3(s3, ExtModule::free_module(s3, 2));
    c.require(nm3.dim() == 8, "QQ^3: dim N(R'^2) != 8");
    return {1, "rank law n^d", c.ok, c.log.str()};
}

// Criterion 2: N(R') is one-dimensional and nu recovers the determinant of
// left multiplication.
inline CriterionResult criterion_norm_of_extension(uint64_t seed, size_t samples) {
    using namespace verify_detail;
    Check c;
    for (const auto& [name, ext] : etale_fixtures()) {
        ExtModule mod = ExtModule::free_module(ext, 1);
        NormModule nm(ext, mod);
        c.require(nm.dim() == 1, name + ": dim N(R') != 1");
        if (nm.dim() != 1) continue;
        auto nu1 = nm.nu(mod.flatten({ext.unit()}));
        c.require(!nu1[0].is_zero(), name + ": nu(1) = 0");
        GammaSpace gs(ext.base(), ext.rank(), ext.rank());
        auto pi = pi_map(ext);
        Sampler rng(seed);
        for (size_t t = 0; t < samples; ++t) {
            auto rp = rng.vector(ext.base(), ext.rank());
            Scalar norm = det(ext.regular_rep(rp));
            // through the quotient
            auto val = nm.nu(mod.flatten({rp}));
            c.require(val[0] == norm * nu1[0], name + ": nu(r') != norm(r') nu(1)");
            // through pi directly
            auto g = gamma_pure(gs, rp);
            Scalar via_pi = Scalar::zero(ext.base());
            for (size_t i = 0; i < pi.size(); ++i)
                if (!g.coords[i].is_zero()) via_pi = via_pi + pi[i] * g.coords[i];
            c.require(via_pi == norm, name + ": pi(gamma(r')) != norm(r')");
            if (!c.ok) break;
        }
    }
    return {2, "norm of the extension itself", c.ok, c.log.str()};
}

// Criterion 3: the split oracle carries nu to the pure-tensor map on all
// basis tuples, exactly.
inline CriterionResult criterion_split_oracle(uint64_t, size_t) {
    using namespace verify_detail;
    Check c;
    ScalarDomain q = ScalarDomain::rationals();
    for (auto sizes : {std::vector<size_t>{1, 1}, std::vector<size_t>{2, 3}, std::vector<size_t>{2, 2}}) {
        auto ext = FiniteAlgebra::split(q, sizes.size());
        ExtModule mod = ExtModule::product_module(ext, sizes);
        NormModule nm(ext, mod);
        SplitOracle oracle = split_oracle(nm);
        size_t total = 1;
        for (size_t s : sizes) total *= s;
        // every tuple of basis vectors
        for (size_t code = 0; code < total; ++code) {
            size_t rem = code;
            std::vector<std::vector<Scalar>> ys;
            std::vector<Scalar> m;
            for (size_t b = sizes.size(); b-- > 0;) {
                std::vector<Scalar> y(sizes[b], Scalar::zero(q));
                y[rem % sizes[b]] = Scalar::one(q);
                rem /= sizes[b];
                ys.insert(ys.begin(), y);
            }
            for (const auto& y : ys) m.insert(m.end(), y.begin(), y.end());
            c.require(oracle.to_tensor.apply(nm.nu(m)) == oracle.pure_tensor(ys),
                      "basis tuple " + std::to_string(code) + " not sent to its pure tensor");
        }
    }
    return {3, "split oracle", c.ok, c.log.str()};
}

// Criterion 4: normic identity and multiplicativity of nu for the quaternion
// algebra over QQ(sqrt 2).
inline CriterionResult criterion_normic_multiplicative(uint64_t seed, size_t samples) {
    using namespace verify_detail;
    Check c;
    ScalarDomain q = ScalarDomain::rationals();
    auto ext = FiniteAlgebra::quadratic(q, Scalar::from_integer(q, 2));
    auto kd = promote_to_domain(ext);
    auto ham = quaternion(Scalar::from_integer(kd, -1), Scalar::from_integer(kd, -1));
    ExtAlgebra b = restrict_scalars(ham.alg);
    NormAlgebra na = build_norm_algebra(ext, b);
    Sampler rng(seed);
    for (size_t t = 0; t < samples && c.ok; ++t) {
        auto rp = rng.vector(q, 2);
        auto x = rng.vector(q, 8);
        auto y = rng.vector(q, 8);
        c.require(na.nu(b.mod.act_by(rp).apply(x)) ==
                      vscale(ext.norm_element(rp), na.nu(x)),
                  "normic identity fails");
        c.require(na.nu(b.multiply(x, y)) == na.algebra().multiply(na.nu(x), na.nu(y)),
                  "nu not multiplicative");
    }
    c.require(na.nu(b.unit) == na.algebra().unit(), "nu(1) != 1");
    return {4, "normic identity and multiplicativity", c.ok, c.log.str()};
}

// Criterion 5: base change naturality for R = QQ, R' = QQ(sqrt 2),
// Q = QQ(i), plus the coherence triangle and pentagon.
inline CriterionResult criterion_base_change(uint64_t seed, size_t samples) {
    using namespace verify_detail;
    Check c;
    ScalarDomain q = ScalarDomain::rationals();
    auto ext = FiniteAlgebra::quadratic(q, Scalar::from_integer(q, 2));
    auto qi = ScalarDomain::simple_extension(parse_poly("x^2+1"));
    ExtModule mod = ExtModule::free_module(ext, 2);
    NormModule nm(ext, mod);
    BaseChangeTheta bc = base_change_theta(nm, qi);

    // full Gamma^2 basis: naturality on representatives
    const GammaSpace& gs = nm.gamma_space();
    for (size_t a = 0; a < gs.dim(); ++a) {
        std::vector<Scalar> v(gs.dim(), Scalar::zero(q));
        v[a] = Scalar::one(q);
        std::vector<Scalar> lhs_in;
        for (const auto& x : nm.projection().apply(v)) lhs_in.push_back(convert(x, qi));
        std::vector<Scalar> v_q;
        for (const auto& x : v) v_q.push_back(convert(x, qi));
        c.require(bc.theta.apply(lhs_in) == bc.target.projection().apply(v_q),
                  "naturality fails on basis element " + std::to_string(a));
    }
    // random module points through nu
    Sampler rng(seed);
    for (size_t t = 0; t < samples; ++t) {
        auto m = rng.vector(q, 4);
        std::vector<Scalar> m_q, nu_q;
        for (const auto& x : m) m_q.push_back(convert(x, qi));
        for (const auto& x : nm.nu(m)) nu_q.push_back(convert(x, qi));
        c.require(bc.theta.apply(nu_q) == bc.target.nu(m_q), "nu naturality fails at a random point");
        if (!c.ok) break;
    }
    // naturality square against a random morphism
    for (size_t t = 0; t < 10; ++t) {
        std::vector<std::vector<std::vector<Scalar>>> entries(2);
        for (size_t s = 0; s < 2; ++s)
            for (size_t j = 0; j < 2; ++j) entries[s].push_back(rng.vector(q, 2));
        Matrix phi = free_module_map(ext, entries);
        Matrix n_r = norm_matrix(nm, nm, phi);
        Matrix n_q = norm_matrix(bc.target, bc.target, convert_matrix(phi, qi));
        c.require(bc.theta * convert_matrix(n_r, qi) == n_q * bc.theta,
                  "norm morphism naturality square fails");
    }
    // coherence
    auto rep1 = check_theta_coherence(nm, q, q);
    c.require(rep1.triangle && rep1.pentagon, "trivial chain coherence fails");
    auto rep2 = check_theta_coherence(nm, qi, qi);
    c.require(rep2.triangle && rep2.pentagon, "QQ -> QQ(i) -> QQ(i) coherence fails");
    return {5, "base change theta and coherence", c.ok, c.log.str()};
}

// Criterion 6: Psi: N(M_2(QQ(sqrt 2))) = M_4(QQ).
inline CriterionResult criterion_psi(uint64_t seed, size_t samples) {
    using namespace verify_detail;
    Check c;
    ScalarDomain q = ScalarDomain::rationals();
    auto ext = FiniteAlgebra::quadratic(q, Scalar::from_integer(q, 2));
    PsiIso iso = psi_endo_iso(ext, 2);  // bijectivity checked inside
    size_t nd = iso.nq.dim();
    c.require(nd == 4, "dim N(Q') != 4");
    c.require(iso.nb.algebra().rank() == 16, "dim N(End) != 16");
    auto to_end = [&](const std::vector<Scalar>& x) {
        Matrix m(nd, nd, q);
        auto v = iso.psi.apply(x);
        for (size_t i = 0; i < nd; ++i)
            for (size_t j = 0; j < nd; ++j) m.at(i, j) = v[i * nd + j];
        return m;
    };
    c.require(to_end(iso.nb.algebra().unit()) == Matrix::identity(nd, q), "Psi not unital");
    Sampler rng(seed);
    for (size_t t = 0; t < samples && c.ok; ++t) {
        auto x = rng.vector(q, 16);
        auto y = rng.vector(q, 16);
        c.require(to_end(iso.nb.algebra().multiply(x, y)) == to_end(x) * to_end(y),
                  "Psi not multiplicative");
    }
    return {6, "Psi to the endomorphism algebra", c.ok, c.log.str()};
}

// Criterion 7: the enveloping map of N(Hamilton over QQ(sqrt 2)) is a
// bijective 256 x 256 matrix.
inline CriterionResult criterion_azumaya_preserved(uint64_t, size_t) {
    using namespace verify_detail;
    Check c;
    ScalarDomain q = ScalarDomain::rationals();
    auto ext = FiniteAlgebra::quadratic(q, Scalar::from_integer(q, 2));
    auto kd = promote_to_domain(ext);
    auto ham = quaternion(Scalar::from_integer(kd, -1), Scalar::from_integer(kd, -1));
    NormAlgebra na = build_norm_algebra(ext, restrict_scalars(ham.alg));
    c.require(na.algebra().rank() == 16, "norm algebra rank != 16");
    Matrix env = enveloping_map(na.algebra());
    c.require(env.rows() == 256 && env.cols() == 256, "enveloping map is not 256 x 256");
    c.require(rank(env) == 256, "enveloping map not bijective");
    return {7, "Azumaya preservation (degree r^d)", c.ok, c.log.str()};
}

// Criterion 8: the integral split triple for (1,1) and (1,2).
inline CriterionResult criterion_integral_triple(uint64_t, size_t) {
    using namespace verify_detail;
    Check c;
    ScalarDomain z = ScalarDomain::integers();
    for (auto sizes : {std::vector<size_t>{1, 1}, std::vector<size_t>{1, 2}}) {
        std::string tag = "(" + std::to_string(sizes[0]) + "," + std::to_string(sizes[1]) + ")";
        // constructor validates: symmetric, unimodular, even diagonal,
        // integral f_q, sigma_q = tensor of symplectic involutions
        IntegralSplitTriple t = split_triple_Z(sizes);
        Scalar dz = det(t.gram);
        c.require(dz == Scalar::one(z) || dz == -Scalar::one(z), tag + ": gram not unimodular");
        for (size_t i = 0; i < t.size; ++i)
            c.require(divides(Scalar::from_integer(z, 2), t.gram.at(i, i)),
                      tag + ": gram diagonal not even");
        // mod-2 reduction is a valid quadratic triple (axioms in constructor)
        QuadraticTriple mod2 = reduce_split_triple(t, 2);
        c.require(mod2.sym_dim() == t.size * (t.size + 1) / 2, tag + ": mod-2 Sym dimension");
        // and so is the rational half-trace triple
        QuadraticTriple rt = rational_split_triple(t);
        c.require(rt.sym_dim() == t.size * (t.size + 1) / 2, tag + ": rational Sym dimension");
    }
    return {8, "integral split quadratic triple", c.ok, c.log.str()};
}

// Criterion 9: Segre parity of the swap.
inline CriterionResult criterion_segre_parity(uint64_t, size_t) {
    using namespace verify_detail;
    Check c;
    Perm swap{1, 0};
    for (const auto& dom : {ScalarDomain::rationals(), ScalarDomain::prime_field(3)}) {
        c.require(det(perm_matrix(swap, 2, 2, dom)) == -Scalar::one(dom),
                  "det j((1 2)) != -1 for m = 1 over " + dom.str());
        c.require(det(perm_matrix(swap, 4, 2, dom)) == Scalar::one(dom),
                  "det j((1 2)) != +1 for m = 2 over " + dom.str());
    }
    return {9, "Segre parity (signature lemma)", c.ok, c.log.str()};
}

// Criterion 10: random symplectic pairs land in O_q^+ over GF(5); the scalar
// kernel is mu_2 diagonal.
inline CriterionResult criterion_segre_restriction(uint64_t seed, size_t samples) {
    using namespace verify_detail;
    Check c;
    auto f5 = ScalarDomain::prime_field(5);
    QuadraticFormData qd = split_triple_Z({1, 1}).form_data(f5);
    qd.validate();
    Sampler rng(seed);
    auto rep = check_segre_restriction({1, 1}, qd, rng, samples);
    c.require(rep.in_orthogonal == rep.samples, "some image is not orthogonal");
    c.require(rep.dickson_zero == rep.samples, "some image has Dickson 1");
    c.require(rep.scalar_kernel_ok, "scalar kernel is not mu_2 diagonal");
    return {10, "Segre restriction into O_q^+", c.ok, c.log.str()};
}

// Criterion 11: the A_1^2 -> D_2 package.
inline CriterionResult criterion_a1d2(uint64_t seed, size_t) {
    using namespace verify_detail;
    Check c;
    ScalarDomain q = ScalarDomain::rationals();

    // split-etale norm triple equals the tensor quadratic pair
    {
        auto h1 = quaternion(Scalar::from_integer(q, -1), Scalar::from_integer(q, -1));
        auto h2 = quaternion(Scalar::from_integer(q, 1), Scalar::from_integer(q, -1));
        ExtAlgebra b = split_algebra_product({h1.alg, h2.alg});
        auto s2 = FiniteAlgebra::split(q, 2);
        Matrix sigma_b(8, 8, q);
        for (size_t i = 0; i < 4; ++i)
            for (size_t j = 0; j < 4; ++j) {
                sigma_b.at(i, j) = h1.conjugation.m.at(i, j);
                sigma_b.at(4 + i, 4 + j) = h2.conjugation.m.at(i, j);
            }
        NormTriple nt = a1d2_norm(s2, b, sigma_b);
        SplitOracle oracle = split_oracle(nt.na.module());
        auto tensor_triple = tensor_quadratic_pair(h1.alg, h1.conjugation, h2.alg, h2.conjugation);
        c.require(oracle.to_tensor * nt.sigma_n == tensor_triple.sigma.m * oracle.to_tensor,
                  "split: involution does not transport");
        bool fmatch = true;
        for (const auto& s : nt.triple.sym_basis)
            fmatch = fmatch && nt.triple.f(s) == tensor_triple.f(oracle.to_tensor.apply(s));
        c.require(fmatch, "split: semitrace does not transport");
        Sampler rng(seed);
        auto tensor_alg = tensor_assoc(h1.alg, h2.alg);
        for (size_t t = 0; t < 25; ++t) {
            auto x = rng.vector(q, 16);
            auto y = rng.vector(q, 16);
            c.require(oracle.to_tensor.apply(nt.na.algebra().multiply(x, y)) ==
                          tensor_alg.multiply(oracle.to_tensor.apply(x), oracle.to_tensor.apply(y)),
                      "split: products do not transport");
            if (!c.ok) break;
        }
    }

    // QQ(sqrt 2) fixtures
    auto ext = FiniteAlgebra::quadratic(q, Scalar::from_integer(q, 2));
    auto kd = promote_to_domain(ext);
    {
        auto m2k = AssocAlgebra::matrix_algebra(kd, 2);
        auto sj = adjoint_involution(m2k, standard_symplectic_gram(1, kd));
        NormTriple nt = a1d2_norm(ext, restrict_scalars(m2k), restrict_linear_map(m2k, sj.m));
        c.require(nt.triple.sym_dim() == 10, "M2(K): dim Sym != 10");
        c.require(nt.triple.f(nt.na.algebra().unit()) == Scalar::from_integer(q, 2),
                  "M2(K): f(1) != 2");
    }
    {
        auto ham = quaternion(Scalar::from_integer(kd, -1), Scalar::from_integer(kd, -1));
        NormTriple nt = a1d2_norm(ext, restrict_scalars(ham.alg),
                                  restrict_linear_map(ham.alg, ham.conjugation.m));
        c.require(nt.na.algebra().rank() == 16, "Hamilton/K: rank != 16");
        c.require(nt.triple.sym_dim() == 10, "Hamilton/K: dim Sym != 10");
        c.require(involution_type(nt.na.algebra(), nt.triple.sigma).orthogonal,
                  "Hamilton/K: sigma_N not orthogonal");
    }

    // Lie dimensions 3 + 3 = 6
    c.require(lie_algebra_dim(standard_symplectic_gram(1, q)) == 3, "dim sp_2 != 3");
    QuadraticFormData qd = split_triple_Z({1, 1}).form_data(q);
    c.require(lie_algebra_dim(qd.gram) == 6, "dim o_4 != 6");

    // exceptional isomorphism evidence over GF(3) and GF(5)
    for (long p : {3L, 5L}) {
        auto f = ScalarDomain::prime_field(p);
        auto rep = exceptional_iso_evidence(p, split_triple_Z({1, 1}).form_data(f));
        c.require(rep.injective, "h~ not injective over GF(" + std::to_string(p) + ")");
        c.require(rep.all_orthogonal, "h~ image outside O_q over GF(" + std::to_string(p) + ")");
        c.require(rep.dickson_matches_swap, "Dickson mismatch over GF(" + std::to_string(p) + ")");
    }
    return {11, "A_1^2 -> D_2 norm triple", c.ok, c.log.str()};
}

// Criterion 12: the Brauer shadow N(A, A) = End(A) for Hamilton over QQ.
inline CriterionResult criterion_brauer_shadow(uint64_t seed, size_t samples) {
    using namespace verify_detail;
    Check c;
    ScalarDomain q = ScalarDomain::rationals();
    auto ham = quaternion(Scalar::from_integer(q, -1), Scalar::from_integer(q, -1));
    BrauerShadow bs = brauer_shadow_split(ham);  // bijectivity checked inside
    auto to_end = [&](const std::vector<Scalar>& x) {
        Matrix m(4, 4, q);
        auto v = bs.iso.apply(x);
        for (size_t i = 0; i < 4; ++i)
            for (size_t j = 0; j < 4; ++j) m.at(i, j) = v[i * 4 + j];
        return m;
    };
    c.require(to_end(bs.na.algebra().unit()) == Matrix::identity(4, q), "not unital");
    Sampler rng(seed);
    for (size_t t = 0; t < samples && c.ok; ++t) {
        auto x = rng.vector(q, 16);
        auto y = rng.vector(q, 16);
        c.require(to_end(bs.na.algebra().multiply(x, y)) == to_end(x) * to_end(y),
                  "not multiplicative");
    }
    return {12, "Brauer shadow of the corestriction", c.ok, c.log.str()};
}

// Criterion 13: the divided-power relations and the dimension count.
inline CriterionResult criterion_gamma_relations(uint64_t seed, size_t samples) {
    using namespace verify_detail;
    Check c;
    std::vector<ScalarDomain> doms = {ScalarDomain::rationals(), ScalarDomain::prime_field(2),
                                      ScalarDomain::prime_field(3)};
    std::vector<std::pair<size_t, size_t>> shapes = {{2, 2}, {3, 2}, {2, 3}};
    Sampler rng(seed);
    for (const auto& dom : doms)
        for (auto [n, d] : shapes) {
            GammaSpace gs(dom, n, d);
            c.require(gs.dim() == count_multisets(n, d),
                      dom.str() + ": dimension mismatch at (" + std::to_string(n) + "," +
                          std::to_string(d) + ")");
            try {
                check_gamma_relations(gs, rng, samples);
            } catch (const validation_error& e) {
                c.require(false, dom.str() + ": " + e.what());
            }
        }
    return {13, "divided-power relations", c.ok, c.log.str()};
}

// The acceptance suite: every criterion, exact, seeded.
inline std::vector<CriterionResult> run_acceptance(uint64_t seed = 0, size_t samples = 100) {
    using Fn = std::function<CriterionResult(uint64_t, size_t)>;
    std::vector<Fn> criteria = {
        criterion_rank_law,       criterion_norm_of_extension, criterion_split_oracle,
        criterion_normic_multiplicative, criterion_base_change, criterion_psi,
        criterion_azumaya_preserved, criterion_integral_triple, criterion_segre_parity,
        criterion_segre_restriction, criterion_a1d2, criterion_brauer_shadow,
        criterion_gamma_relations,
    };
    std::vector<CriterionResult> out;
    int id = 1;
    for (const auto& fn : criteria) {
        try {
            out.push_back(fn(seed, samples));
        } catch (const std::exception& e) {
            out.push_back({id, "criterion " + std::to_string(id), false,
                           std::string("exception: ") + e.what()});
        }
        ++id;
    }
    return out;
}

} // namespace norma

#endif
