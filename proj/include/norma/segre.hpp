#ifndef NORMA_SEGRE_HPP
#define NORMA_SEGRE_HPP

#include <map>
#include <string>
#include <vector>

#include "norma/errors.hpp"
#include "norma/matrix.hpp"
#include "norma/random.hpp"

namespace norma {

// Permutation of {0..d-1} stored as images: perm[i] = sigma(i).
using Perm = std::vector<size_t>;

inline Perm identity_perm(size_t d) {
    Perm p(d);
    for (size_t i = 0; i < d; ++i) p[i] = i;
    return p;
}

inline Perm compose_perm(const Perm& s, const Perm& t) {  // (s o t)(i) = s(t(i))
    if (s.size() != t.size()) throw shape_error("permutation size mismatch");
    Perm r(s.size());
    for (size_t i = 0; i < s.size(); ++i) r[i] = s[t[i]];
    return r;
}

inline Perm invert_perm(const Perm& s) {
    Perm r(s.size());
    for (size_t i = 0; i < s.size(); ++i) r[s[i]] = i;
    return r;
}

inline int perm_sign(const Perm& s) {
    int sign = 1;
    std::vector<bool> seen(s.size(), false);
    for (size_t i = 0; i < s.size(); ++i) {
        if (seen[i]) continue;
        size_t len = 0, j = i;
        while (!seen[j]) { seen[j] = true; j = s[j]; ++len; }
        if (len % 2 == 0) sign = -sign;
    }
    return sign;
}

// j(sigma) on (F^r)^(x)d in the lexicographic word basis:
// x_1 (x) ... (x) x_d -> x_{sigma^{-1}(1)} (x) ... (x) x_{sigma^{-1}(d)}.
inline Matrix perm_matrix(const Perm& sigma, size_t r, size_t d, const ScalarDomain& dom) {
    if (sigma.size() != d) throw shape_error("permutation length != d");
    size_t n = 1;
    for (size_t k = 0; k < d; ++k) n *= r;
    Perm inv = invert_perm(sigma);
    Matrix p(n, n, dom);
    std::vector<size_t> w(d, 0);
    for (size_t idx = 0; idx < n; ++idx) {
        // destination word w'_k = w_{sigma^{-1}(k)}
        size_t dest = 0;
        for (size_t k = 0; k < d; ++k) dest = dest * r + w[inv[k]];
        p.at(dest, idx) = Scalar::one(dom);
        for (size_t k = d; k-- > 0;) {
            if (++w[k] < r) break;
            w[k] = 0;
        }
    }
    return p;
}

// ((A_1,...,A_d), sigma) in (GL_r)^d x| S_d.
struct SemidirectElement {
    std::vector<Matrix> factors;
    Perm perm;

    size_t r() const { return factors.empty() ? 0 : factors[0].rows(); }
    size_t d() const { return factors.size(); }
    const ScalarDomain& domain() const { return factors[0].domain(); }

    static SemidirectElement pure(std::vector<Matrix> factors) {
        SemidirectElement g{std::move(factors), {}};
        g.perm = identity_perm(g.factors.size());
        g.check();
        return g;
    }

    static SemidirectElement make(std::vector<Matrix> factors, Perm perm) {
        SemidirectElement g{std::move(factors), std::move(perm)};
        g.check();
        return g;
    }

    void check() const {
        if (factors.empty()) throw shape_error("semidirect element needs at least one factor");
        size_t rr = factors[0].rows();
        for (const auto& m : factors) {
            if (m.rows() != rr || m.cols() != rr) throw shape_error("factor shape mismatch");
            if (m.domain() != factors[0].domain()) throw domain_error("factor domain mismatch");
            if (det(m).is_zero()) throw precondition_error("semidirect factor is singular");
        }
        if (perm.size() != factors.size()) throw shape_error("permutation length mismatch");
    }
};

// Group law fixed by Seg' being a homomorphism:
// ((g), sigma) ((h), tau) = ((g_i h_{sigma^{-1}(i)}), sigma o tau).
inline SemidirectElement semidirect_mul(const SemidirectElement& a, const SemidirectElement& b) {
    if (a.d() != b.d() || a.r() != b.r() || a.domain() != b.domain())
        throw shape_error("semidirect element shape mismatch");
    Perm inv = invert_perm(a.perm);
    std::vector<Matrix> factors;
    factors.reserve(a.d());
    for (size_t i = 0; i < a.d(); ++i) factors.push_back(a.factors[i] * b.factors[inv[i]]);
    return SemidirectElement::make(std::move(factors), compose_perm(a.perm, b.perm));
}

inline SemidirectElement semidirect_inv(const SemidirectElement& a) {
    Perm pinv = invert_perm(a.perm);
    std::vector<Matrix> factors;
    factors.reserve(a.d());
    for (size_t j = 0; j < a.d(); ++j) factors.push_back(inverse(a.factors[a.perm[j]]));
    return SemidirectElement::make(std::move(factors), std::move(pinv));
}

inline Matrix kron_all(const std::vector<Matrix>& ms) {
    Matrix acc = ms.at(0);
    for (size_t i = 1; i < ms.size(); ++i) acc = kron(acc, ms[i]);
    return acc;
}

// Seg'((A_1..A_d), sigma) = (A_1 (x) ... (x) A_d) . j(sigma).
inline Matrix seg_prime(const SemidirectElement& g) {
    return kron_all(g.factors) * perm_matrix(g.perm, g.r(), g.d(), g.domain());
}

// Quadratic form data valid in every characteristic: the Gram matrix of the
// polar form b together with the upper-triangular coefficients of q itself,
// q(x) = sum_{i<=j} U_ij x_i x_j with b = U + U^T off the diagonal.
struct QuadraticFormData {
    Matrix gram;     // B with b(x, y) = x^T B y
    Matrix q_upper;  // U

    const ScalarDomain& domain() const { return gram.domain(); }
    size_t size() const { return gram.rows(); }

    Scalar q(const std::vector<Scalar>& x) const {
        Scalar acc = Scalar::zero(domain());
        for (size_t i = 0; i < size(); ++i) {
            if (x[i].is_zero()) continue;
            for (size_t j = i; j < size(); ++j)
                if (!q_upper.at(i, j).is_zero() && !x[j].is_zero())
                    acc = acc + q_upper.at(i, j) * x[i] * x[j];
        }
        return acc;
    }

    Scalar b(const std::vector<Scalar>& x, const std::vector<Scalar>& y) const {
        Scalar acc = Scalar::zero(domain());
        auto gy = gram.apply(y);
        for (size_t i = 0; i < size(); ++i)
            if (!x[i].is_zero() && !gy[i].is_zero()) acc = acc + x[i] * gy[i];
        return acc;
    }

    void validate() const {
        size_t n = size();
        if (q_upper.rows() != n || q_upper.cols() != n) throw shape_error("q/gram shape mismatch");
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                Scalar expect = i == j ? q_upper.at(i, i) + q_upper.at(i, i)
                                       : (i < j ? q_upper.at(i, j) : q_upper.at(j, i));
                if (gram.at(i, j) != expect)
                    throw validation_error("gram matrix is not the polarization of q");
            }
    }
};

inline bool is_symplectic(const Matrix& g, const Matrix& j) {
    if (g.rows() != j.rows() || g.cols() != j.cols() || g.rows() != g.cols())
        throw shape_error("is_symplectic shape mismatch");
    return g.transpose() * j * g == j;
}

// Orthogonality through the stored q data: preserves b on basis pairs and q
// on basis vectors (exact, valid in characteristic 2).
inline bool is_orthogonal(const Matrix& g, const QuadraticFormData& qd) {
    size_t n = qd.size();
    if (g.rows() != n || g.cols() != n) throw shape_error("is_orthogonal shape mismatch");
    if (g.transpose() * qd.gram * g != qd.gram) return false;
    for (size_t i = 0; i < n; ++i) {
        auto gi = g.col(i);
        std::vector<Scalar> ei(n, Scalar::zero(qd.domain()));
        ei[i] = Scalar::one(qd.domain());
        if (qd.q(gi) != qd.q(ei)) return false;
    }
    return true;
}

// Dickson invariant: det detection away from characteristic 2 and
// rank(g - 1) mod 2 in characteristic 2.
inline int dickson(const Matrix& g, const QuadraticFormData& qd) {
    if (!is_orthogonal(g, qd)) throw precondition_error("dickson: input is not orthogonal");
    const ScalarDomain& dom = qd.domain();
    if (dom.characteristic() != 2) {
        Scalar d = det(g);
        if (d.is_one()) return 0;
        if (d == -Scalar::one(dom)) return 1;
        throw validation_error("dickson: orthogonal matrix with det != +-1");
    }
    Matrix diff = g - Matrix::identity(g.rows(), dom);
    return static_cast<int>(rank(diff) % 2);
}

// Random element of Sp(J) as a product of symplectic transvections
// x -> x + c b(x, v) v.
inline Matrix random_symplectic(Sampler& rng, const Matrix& j) {
    size_t n = j.rows();
    const ScalarDomain& dom = j.domain();
    Matrix g = Matrix::identity(n, dom);
    size_t count = n + 2;
    for (size_t t = 0; t < count; ++t) {
        auto v = rng.vector(dom, n);
        Scalar c = rng.scalar(dom);
        auto jv = j.apply(v);
        Matrix trans = Matrix::identity(n, dom);
        for (size_t a = 0; a < n; ++a)
            for (size_t b = 0; b < n; ++b)
                trans.at(a, b) = trans.at(a, b) + c * v[a] * jv[b];
        g = g * trans;
    }
    return g;
}

// dim { X : X^T G + G X = 0 }, the Lie algebra of the isometry group of the
// bilinear form G (characteristic != 2).
inline size_t lie_algebra_dim(const Matrix& g) {
    if (g.domain().characteristic() == 2)
        throw domain_error("lie_algebra_dim unsupported in characteristic 2");
    size_t n = g.rows();
    Matrix sys(n * n, n * n, g.domain());
    // equation (i,j): sum_k X_ki G_kj + G_ik X_kj = 0
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t k = 0; k < n; ++k) {
                sys.at(i * n + j, k * n + i) = sys.at(i * n + j, k * n + i) + g.at(k, j);
                sys.at(i * n + j, k * n + j) = sys.at(i * n + j, k * n + j) + g.at(i, k);
            }
    return rank_and_kernel(sys).kernel.size();
}

struct SegreRestrictionReport {
    size_t samples = 0;
    size_t in_orthogonal = 0;
    size_t dickson_zero = 0;
    bool scalar_kernel_ok = false;
    bool passed() const {
        return samples == in_orthogonal && samples == dickson_zero && scalar_kernel_ok;
    }
};

// The standard symplectic Gram J_m (2m x 2m, [[0, -I],[I, 0]]).
inline Matrix standard_symplectic_gram(size_t m, const ScalarDomain& dom) {
    Matrix j(2 * m, 2 * m, dom);
    for (size_t i = 0; i < m; ++i) {
        j.at(i, m + i) = -Scalar::one(dom);
        j.at(m + i, i) = Scalar::one(dom);
    }
    return j;
}

// Random symplectic tuples land in O_q with Dickson 0; scalar tuples
// (e_1 I, ..., e_d I) with e_i = +-1 map to the identity iff prod e_i = 1.
inline SegreRestrictionReport check_segre_restriction(const std::vector<size_t>& half_sizes,
                                                      const QuadraticFormData& qd, Sampler& rng,
                                                      size_t samples = 100) {
    const ScalarDomain& dom = qd.domain();
    size_t d = half_sizes.size();
    if (d % 2 != 0) throw precondition_error("segre restriction needs an even number of factors");
    std::vector<Matrix> grams;
    for (size_t m : half_sizes) grams.push_back(standard_symplectic_gram(m, dom));

    SegreRestrictionReport rep;
    rep.samples = samples;
    for (size_t s = 0; s < samples; ++s) {
        std::vector<Matrix> tuple;
        for (size_t i = 0; i < d; ++i) tuple.push_back(random_symplectic(rng, grams[i]));
        Matrix img = kron_all(tuple);
        if (is_orthogonal(img, qd)) {
            ++rep.in_orthogonal;
            if (dickson(img, qd) == 0) ++rep.dickson_zero;
        }
    }

    rep.scalar_kernel_ok = true;
    size_t total = 1;
    for (size_t m : half_sizes) total *= 2 * m;
    for (size_t mask = 0; mask < (static_cast<size_t>(1) << d); ++mask) {
        std::vector<Matrix> tuple;
        int prod = 1;
        for (size_t i = 0; i < d; ++i) {
            Scalar e = (mask >> i) & 1 ? -Scalar::one(dom) : Scalar::one(dom);
            if ((mask >> i) & 1) prod = -prod;
            tuple.push_back(e * Matrix::identity(2 * half_sizes[i], dom));
        }
        Matrix img = kron_all(tuple);
        bool is_id = img == Matrix::identity(total, dom);
        if (is_id != (prod == 1)) rep.scalar_kernel_ok = false;
    }
    return rep;
}

struct ExceptionalIsoReport {
    size_t sp2_order = 0;       // |Sp_2(F)|
    size_t quotient_order = 0;  // |(Sp_2 x Sp_2)/mu_2 x| S_2|
    size_t image_count = 0;     // distinct images of h~
    bool injective = false;
    bool all_orthogonal = false;
    bool dickson_matches_swap = false;
};

// Enumerates Sp_2(F) x Sp_2(F) x| S_2 modulo the diagonal mu_2 over a small
// field and verifies h~ is injective there, lands in O_q, and sends the swap
// to Dickson 1.
inline ExceptionalIsoReport exceptional_iso_evidence(long p, const QuadraticFormData& qd) {
    ScalarDomain f = ScalarDomain::prime_field(p);
    if (qd.domain() != f) throw shape_error("form data must live over GF(p)");
    if (p == 2) throw domain_error("exceptional_iso_evidence expects odd characteristic");

    std::vector<Matrix> sp2;
    for (long a = 0; a < p; ++a)
        for (long b = 0; b < p; ++b)
            for (long c = 0; c < p; ++c)
                for (long dd = 0; dd < p; ++dd) {
                    if (((a * dd - b * c) % p + p) % p != 1) continue;
                    Matrix m(2, 2, f);
                    m.at(0, 0) = Scalar::from_integer(f, a);
                    m.at(0, 1) = Scalar::from_integer(f, b);
                    m.at(1, 0) = Scalar::from_integer(f, c);
                    m.at(1, 1) = Scalar::from_integer(f, dd);
                    sp2.push_back(std::move(m));
                }

    ExceptionalIsoReport rep;
    rep.sp2_order = sp2.size();
    rep.quotient_order = sp2.size() * sp2.size();  // /2 for mu_2, x2 for S_2
    Perm swap{1, 0};
    Matrix pswap = perm_matrix(swap, 2, 2, f);

    std::map<std::string, std::string> image_to_class;
    bool injective = true, all_orth = true, dickson_ok = true;
    auto class_key = [&](const Matrix& a, const Matrix& b, int s) {
        std::string k1 = a.str() + "|" + b.str() + "|" + std::to_string(s);
        Matrix na = -Scalar::one(f) * a, nb = -Scalar::one(f) * b;
        std::string k2 = na.str() + "|" + nb.str() + "|" + std::to_string(s);
        return std::min(k1, k2);
    };
    for (const auto& a : sp2)
        for (const auto& b : sp2)
            for (int s = 0; s < 2; ++s) {
                Matrix img = kron(a, b);
                if (s) img = img * pswap;
                if (!is_orthogonal(img, qd)) { all_orth = false; continue; }
                if (dickson(img, qd) != s) dickson_ok = false;
                auto [it, inserted] = image_to_class.emplace(img.str(), class_key(a, b, s));
                if (!inserted && it->second != class_key(a, b, s)) injective = false;
            }
    rep.image_count = image_to_class.size();
    rep.injective = injective && rep.image_count == rep.quotient_order;
    rep.all_orthogonal = all_orth;
    rep.dickson_matches_swap = dickson_ok;
    return rep;
}

} // namespace norma

#endif
