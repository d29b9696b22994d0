#ifndef NORMA_GAMMA_HPP
#define NORMA_GAMMA_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "norma/algebra.hpp"
#include "norma/errors.hpp"
#include "norma/matrix.hpp"
#include "norma/multipoly.hpp"
#include "norma/random.hpp"
#include "norma/scalar.hpp"

namespace norma {

// A word is a length-d tuple of basis indices of the source module; the
// degree-d divided power of a free rank-n module is realized as the module of
// symmetric tensors inside the d-th tensor power, with basis the orbit sums
// of words. Basis elements are indexed by exponent vectors a (|a| = d),
// ordered lexicographically; the orbit of a consists of all distinct words
// with content a, and gamma^d(m) = m^(x)d.
using Word = std::vector<int>;
using ExpVec = std::vector<int>;

namespace detail {

struct GammaSpaceData {
    ScalarDomain dom;
    size_t source_rank = 0;
    size_t degree = 0;
    std::vector<ExpVec> basis;                 // lexicographic
    std::map<ExpVec, size_t> index;
    std::vector<std::vector<Word>> orbits;     // distinct words per basis element
};

inline void enumerate_exponents(size_t n, size_t d, ExpVec& cur, size_t pos, long left,
                                std::vector<ExpVec>& out) {
    if (pos + 1 == n) {
        cur[pos] = static_cast<int>(left);
        out.push_back(cur);
        return;
    }
    for (long v = 0; v <= left; ++v) {
        cur[pos] = static_cast<int>(v);
        enumerate_exponents(n, d, cur, pos + 1, left - v, out);
    }
}

inline Word canonical_word(const ExpVec& a) {
    Word w;
    for (size_t i = 0; i < a.size(); ++i)
        for (int r = 0; r < a[i]; ++r) w.push_back(static_cast<int>(i));
    return w;
}

} // namespace detail

class GammaSpace {
public:
    GammaSpace() = default;

    GammaSpace(const ScalarDomain& dom, size_t source_rank, size_t degree) {
        if (source_rank == 0) throw precondition_error("gamma space needs source rank >= 1");
        auto d = std::make_shared<detail::GammaSpaceData>();
        d->dom = dom;
        d->source_rank = source_rank;
        d->degree = degree;
        if (degree == 0) {
            d->basis.push_back(ExpVec(source_rank, 0));
        } else {
            ExpVec cur(source_rank, 0);
            detail::enumerate_exponents(source_rank, degree, cur, 0, static_cast<long>(degree), d->basis);
        }
        for (size_t i = 0; i < d->basis.size(); ++i) d->index.emplace(d->basis[i], i);
        d->orbits.resize(d->basis.size());
        for (size_t i = 0; i < d->basis.size(); ++i) {
            Word w = detail::canonical_word(d->basis[i]);
            do d->orbits[i].push_back(w);
            while (std::next_permutation(w.begin(), w.end()));
        }
        data_ = std::move(d);
    }

    const ScalarDomain& domain() const { return data_->dom; }
    size_t source_rank() const { return data_->source_rank; }
    size_t degree() const { return data_->degree; }
    size_t dim() const { return data_->basis.size(); }
    const std::vector<ExpVec>& basis() const { return data_->basis; }
    const ExpVec& exponents(size_t i) const { return data_->basis[i]; }
    const std::vector<Word>& orbit(size_t i) const { return data_->orbits[i]; }
    Word canonical_word(size_t i) const { return detail::canonical_word(data_->basis[i]); }

    size_t index_of(const ExpVec& a) const {
        auto it = data_->index.find(a);
        if (it == data_->index.end()) throw shape_error("exponent vector not in gamma basis");
        return it->second;
    }

    friend bool operator==(const GammaSpace& a, const GammaSpace& b) {
        return a.data_ == b.data_ ||
               (a.domain() == b.domain() && a.source_rank() == b.source_rank() &&
                a.degree() == b.degree());
    }
    friend bool operator!=(const GammaSpace& a, const GammaSpace& b) { return !(a == b); }

private:
    std::shared_ptr<const detail::GammaSpaceData> data_;
};

struct GammaElement {
    GammaSpace space;
    std::vector<Scalar> coords;

    GammaElement() = default;
    GammaElement(GammaSpace s, std::vector<Scalar> c) : space(std::move(s)), coords(std::move(c)) {
        if (coords.size() != space.dim()) throw shape_error("gamma coordinate length mismatch");
    }

    static GammaElement zero(const GammaSpace& s) {
        return GammaElement(s, std::vector<Scalar>(s.dim(), Scalar::zero(s.domain())));
    }

    bool is_zero() const {
        for (const auto& c : coords) if (!c.is_zero()) return false;
        return true;
    }

    friend GammaElement operator+(const GammaElement& a, const GammaElement& b) {
        if (a.space != b.space) throw shape_error("gamma space mismatch");
        auto c = a.coords;
        for (size_t i = 0; i < c.size(); ++i) c[i] = c[i] + b.coords[i];
        return GammaElement(a.space, std::move(c));
    }
    friend GammaElement operator*(const Scalar& s, const GammaElement& a) {
        auto c = a.coords;
        for (auto& x : c) x = s * x;
        return GammaElement(a.space, std::move(c));
    }
    friend bool operator==(const GammaElement& a, const GammaElement& b) {
        return a.space == b.space && a.coords == b.coords;
    }
    friend bool operator!=(const GammaElement& a, const GammaElement& b) { return !(a == b); }
};

inline Scalar integer_in(const ScalarDomain& dom, const BigInt& n) {
    return Scalar::from_integer(dom, n);
}

inline BigInt binomial(unsigned long n, unsigned long k) {
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// gamma^d(m): coordinate at exponent a is prod_i m_i^{a_i}.
inline GammaElement gamma_pure(const GammaSpace& gs, const std::vector<Scalar>& m) {
    if (m.size() != gs.source_rank()) throw shape_error("module element length mismatch");
    std::vector<Scalar> coords;
    coords.reserve(gs.dim());
    for (const ExpVec& a : gs.basis()) {
        Scalar c = Scalar::one(gs.domain());
        for (size_t i = 0; i < m.size() && !c.is_zero(); ++i)
            if (a[i] > 0) c = c * m[i].pow(a[i]);
        coords.push_back(c);
    }
    return GammaElement(gs, std::move(coords));
}

// Symbolic gamma^d(sum_i m_i t_i): coordinates are polynomials in t_1..t_k.
inline std::vector<MultiPoly> law_eval_gamma(const GammaSpace& gs,
                                             const std::vector<std::vector<Scalar>>& generators) {
    size_t k = generators.size();
    std::vector<MultiPoly> formal(gs.source_rank(), MultiPoly(k, gs.domain()));
    for (size_t i = 0; i < k; ++i) {
        if (generators[i].size() != gs.source_rank()) throw shape_error("generator length mismatch");
        MultiPoly ti = MultiPoly::variable(k, i, gs.domain());
        for (size_t j = 0; j < gs.source_rank(); ++j)
            if (!generators[i][j].is_zero()) formal[j] = formal[j] + generators[i][j] * ti;
    }
    std::vector<MultiPoly> coords;
    coords.reserve(gs.dim());
    for (const ExpVec& a : gs.basis()) {
        MultiPoly c = MultiPoly::constant(k, Scalar::one(gs.domain()));
        for (size_t j = 0; j < formal.size(); ++j)
            for (int r = 0; r < a[j]; ++r) c = c * formal[j];
        coords.push_back(std::move(c));
    }
    return coords;
}

// Orbit-sum product Gamma^{d1} x Gamma^{d2} -> Gamma^{d1+d2}: on exponent
// vectors, basis(a) basis(b) = prod_i C(a_i + b_i, a_i) basis(a + b).
inline GammaElement divided_product(const GammaElement& u, const GammaElement& v) {
    const GammaSpace& su = u.space;
    const GammaSpace& sv = v.space;
    if (su.source_rank() != sv.source_rank() || su.domain() != sv.domain())
        throw shape_error("divided_product source mismatch");
    GammaSpace target(su.domain(), su.source_rank(), su.degree() + sv.degree());
    GammaElement out = GammaElement::zero(target);
    for (size_t i = 0; i < su.dim(); ++i) {
        if (u.coords[i].is_zero()) continue;
        for (size_t j = 0; j < sv.dim(); ++j) {
            if (v.coords[j].is_zero()) continue;
            const ExpVec& a = su.exponents(i);
            const ExpVec& b = sv.exponents(j);
            ExpVec sum(a.size());
            BigInt mult = 1;
            for (size_t t = 0; t < a.size(); ++t) {
                sum[t] = a[t] + b[t];
                if (a[t] && b[t]) mult *= binomial(static_cast<unsigned long>(a[t] + b[t]),
                                                   static_cast<unsigned long>(a[t]));
            }
            size_t k = target.index_of(sum);
            out.coords[k] = out.coords[k] + integer_in(su.domain(), mult) * (u.coords[i] * v.coords[j]);
        }
    }
    return out;
}

// Core kernel shared by the module action and the algebra product on
// symmetric tensors: interleave two orbit sums, apply the bilinear map
// componentwise, and read coefficients off canonical words. act[i] is the
// matrix of the map m -> e_i * m.
inline std::vector<Scalar> pairwise_product_basis(const GammaSpace& gsa, const GammaSpace& gsm,
                                                  const std::vector<Matrix>& act, size_t ai,
                                                  size_t mi) {
    if (gsa.degree() != gsm.degree()) throw shape_error("degree mismatch in pairwise product");
    if (act.size() != gsa.source_rank()) throw shape_error("action table size mismatch");
    const ScalarDomain& dom = gsm.domain();
    size_t d = gsm.degree();
    std::vector<Scalar> out(gsm.dim(), Scalar::zero(dom));
    for (const Word& wa : gsa.orbit(ai)) {
        for (const Word& wm : gsm.orbit(mi)) {
            // term: tensor_k (act[wa_k] column wm_k)
            for (size_t t = 0; t < gsm.dim(); ++t) {
                Word u = gsm.canonical_word(t);
                Scalar c = Scalar::one(dom);
                for (size_t k = 0; k < d && !c.is_zero(); ++k)
                    c = c * act[wa[k]].at(u[k], wm[k]);
                if (!c.is_zero()) out[t] = out[t] + c;
            }
        }
    }
    return out;
}

// Module action of Gamma^d(A) on Gamma^d(M): satisfies
// gamma^d(a) . gamma^d(m) = gamma^d(am).
inline GammaElement mu_action(const GammaSpace& gsa, const std::vector<Matrix>& act,
                              const GammaElement& ga, const GammaElement& gm) {
    if (ga.space != gsa) throw shape_error("mu_action: left operand space mismatch");
    GammaElement out = GammaElement::zero(gm.space);
    for (size_t i = 0; i < gsa.dim(); ++i) {
        if (ga.coords[i].is_zero()) continue;
        for (size_t j = 0; j < gm.space.dim(); ++j) {
            if (gm.coords[j].is_zero()) continue;
            Scalar f = ga.coords[i] * gm.coords[j];
            auto term = pairwise_product_basis(gsa, gm.space, act, i, j);
            for (size_t t = 0; t < term.size(); ++t)
                if (!term[t].is_zero()) out.coords[t] = out.coords[t] + f * term[t];
        }
    }
    return out;
}

// Gamma^d(phi) for a linear map phi: column at basis(a) collects, per target
// exponent, the coefficient of the canonical word in phi^(x)d (orbit sum a).
inline Matrix gamma_matrix(const GammaSpace& src, const GammaSpace& dst, const Matrix& phi) {
    if (src.degree() != dst.degree()) throw shape_error("gamma_matrix degree mismatch");
    if (phi.rows() != dst.source_rank() || phi.cols() != src.source_rank())
        throw shape_error("gamma_matrix shape mismatch");
    const ScalarDomain& dom = dst.domain();
    size_t d = src.degree();
    Matrix out(dst.dim(), src.dim(), dom);
    for (size_t j = 0; j < src.dim(); ++j)
        for (const Word& w : src.orbit(j))
            for (size_t t = 0; t < dst.dim(); ++t) {
                Word u = dst.canonical_word(t);
                Scalar c = Scalar::one(dom);
                for (size_t k = 0; k < d && !c.is_zero(); ++k) c = c * phi.at(u[k], w[k]);
                if (!c.is_zero()) out.at(t, j) = out.at(t, j) + c;
            }
    return out;
}

// Same with polynomial entries (used for coefficient extraction of normic
// laws on endomorphism algebras).
inline PolyMatrix gamma_matrix_poly(const GammaSpace& src, const GammaSpace& dst,
                                    const PolyMatrix& phi) {
    if (src.degree() != dst.degree()) throw shape_error("gamma_matrix degree mismatch");
    if (phi.rows() != dst.source_rank() || phi.cols() != src.source_rank())
        throw shape_error("gamma_matrix shape mismatch");
    size_t d = src.degree();
    size_t k_vars = phi.variable_count();
    PolyMatrix out(dst.dim(), src.dim(), k_vars, dst.domain());
    for (size_t j = 0; j < src.dim(); ++j)
        for (const Word& w : src.orbit(j))
            for (size_t t = 0; t < dst.dim(); ++t) {
                Word u = dst.canonical_word(t);
                MultiPoly c = MultiPoly::constant(k_vars, Scalar::one(dst.domain()));
                for (size_t k = 0; k < d && !c.is_zero(); ++k) c = c * phi.at(u[k], w[k]);
                if (!c.is_zero()) out.at(t, j) = out.at(t, j) + c;
            }
    return out;
}

// The algebra homomorphism pi: Gamma^d(A) -> R with pi(gamma^d(a)) = norm(a),
// for A of rank d, via coefficient extraction from the polarized determinant
// det(sum_i t_i L_{e_i}).
inline std::vector<Scalar> pi_map(const FiniteAlgebra& a) {
    size_t d = a.rank();
    GammaSpace gs(a.base(), d, d);
    MultiPoly nf = a.norm_form();
    std::vector<Scalar> pi;
    pi.reserve(gs.dim());
    for (const ExpVec& e : gs.basis()) pi.push_back(nf.coefficient(e));
    return pi;
}

// Left-multiplication matrices of a FiniteAlgebra, the action table for the
// Gamma^d(A)-algebra product.
inline std::vector<Matrix> left_mult_table(const FiniteAlgebra& a) {
    std::vector<Matrix> t;
    t.reserve(a.rank());
    for (size_t i = 0; i < a.rank(); ++i) t.push_back(a.regular_rep(a.basis_element(i)));
    return t;
}

struct GammaRelationReport {
    size_t trials = 0;
    bool passed = false;
};

// Verifies the defining divided-power relations as exact identities in the
// orbit-sum model, including in small characteristic:
//   gamma^0(m) = 1
//   gamma^d(rm) = r^d gamma^d(m)
//   gamma^d(m+n) = sum_r gamma^r(m) gamma^{d-r}(n)
//   gamma^{d1}(m) gamma^{d2}(m) = C(d1+d2, d1) gamma^{d1+d2}(m)
inline GammaRelationReport check_gamma_relations(const GammaSpace& gs, Sampler& rng,
                                                 size_t trials = 100) {
    const ScalarDomain& dom = gs.domain();
    size_t n = gs.source_rank(), d = gs.degree();
    std::vector<GammaSpace> spaces;
    for (size_t k = 0; k <= d; ++k) spaces.emplace_back(dom, n, k);
    for (size_t trial = 0; trial < trials; ++trial) {
        auto m = rng.vector(dom, n);
        auto mm = rng.vector(dom, n);
        Scalar r = rng.scalar(dom);

        GammaElement g0 = gamma_pure(spaces[0], m);
        if (!(g0.coords.size() == 1 && g0.coords[0].is_one()))
            throw validation_error("gamma relation violated: gamma^0(m) = 1");

        std::vector<Scalar> rm(n, Scalar::zero(dom));
        for (size_t i = 0; i < n; ++i) rm[i] = r * m[i];
        if (gamma_pure(gs, rm) != r.pow(static_cast<long>(d)) * gamma_pure(gs, m))
            throw validation_error("gamma relation violated: gamma^d(rm) = r^d gamma^d(m)");

        std::vector<Scalar> sum(n, Scalar::zero(dom));
        for (size_t i = 0; i < n; ++i) sum[i] = m[i] + mm[i];
        GammaElement lhs = gamma_pure(gs, sum);
        GammaElement rhs = GammaElement::zero(gs);
        for (size_t k = 0; k <= d; ++k)
            rhs = rhs + divided_product(gamma_pure(spaces[k], m), gamma_pure(spaces[d - k], mm));
        if (lhs != rhs)
            throw validation_error("gamma relation violated: addition formula");

        for (size_t d1 = 0; d1 <= d; ++d1) {
            size_t d2 = d - d1;
            GammaElement prod = divided_product(gamma_pure(spaces[d1], m), gamma_pure(spaces[d2], m));
            GammaElement expect =
                integer_in(dom, binomial(static_cast<unsigned long>(d), static_cast<unsigned long>(d1))) *
                gamma_pure(gs, m);
            if (prod != expect)
                throw validation_error("gamma relation violated: binomial product formula");
        }
    }
    return GammaRelationReport{trials, true};
}

} // namespace norma

#endif
