#ifndef NORMA_NORM_HPP
#define NORMA_NORM_HPP

#include <optional>
#include <string>
#include <vector>

#include "norma/assoc.hpp"
#include "norma/errors.hpp"
#include "norma/gamma.hpp"

namespace norma {

// An R-module of finite rank together with an action of the extension
// algebra R'. Free modules over R' and split products E_1 x ... x E_d are
// built through the named constructors; anything with a valid action table
// goes through the general one.
struct ExtModule {
    FiniteAlgebra ext;           // R' as an R-algebra of rank d
    size_t rank_r = 0;           // rank over R
    std::vector<Matrix> action;  // action[i] = matrix of e_i acting
    long free_rank = -1;                 // n when free over R'
    std::vector<size_t> block_sizes;     // split case: size of each factor
    std::vector<std::pair<size_t, size_t>> block_of;  // split case: basis index -> (block, local)

    ExtModule(FiniteAlgebra e, size_t m, std::vector<Matrix> act)
        : ext(std::move(e)), rank_r(m), action(std::move(act)) {
        validate();
    }

    // R'^n as an R-module with basis f_j e_i at index j*d + i.
    static ExtModule free_module(const FiniteAlgebra& ext, size_t n) {
        size_t d = ext.rank();
        size_t m = n * d;
        std::vector<Matrix> act(d, Matrix(m, m, ext.base()));
        for (size_t k = 0; k < d; ++k)
            for (size_t j = 0; j < n; ++j)
                for (size_t i = 0; i < d; ++i)
                    for (size_t l = 0; l < d; ++l)
                        if (!ext.sc(k, i, l).is_zero()) act[k].at(j * d + l, j * d + i) = ext.sc(k, i, l);
        ExtModule mod(ext, m, std::move(act));
        mod.free_rank = static_cast<long>(n);
        if (ext == FiniteAlgebra::split(ext.base(), d)) {
            // over the standard split extension, f_j e_i lives in block i
            mod.block_sizes.assign(d, n);
            mod.block_of.resize(m);
            for (size_t j = 0; j < n; ++j)
                for (size_t i = 0; i < d; ++i) mod.block_of[j * d + i] = {i, j};
        }
        return mod;
    }

    // E_1 x ... x E_d over the standard split extension R^d; e_k acts as the
    // projection onto block k.
    static ExtModule product_module(const FiniteAlgebra& ext, const std::vector<size_t>& sizes) {
        size_t d = ext.rank();
        if (sizes.size() != d) throw shape_error("product module needs one factor per split component");
        if (ext != FiniteAlgebra::split(ext.base(), d))
            throw precondition_error("product modules require the standard split extension");
        size_t m = 0;
        for (size_t s : sizes) m += s;
        std::vector<Matrix> act(d, Matrix(m, m, ext.base()));
        size_t off = 0;
        for (size_t k = 0; k < d; ++k) {
            for (size_t j = 0; j < sizes[k]; ++j) act[k].at(off + j, off + j) = Scalar::one(ext.base());
            off += sizes[k];
        }
        ExtModule mod(ext, m, std::move(act));
        mod.block_sizes = sizes;
        mod.block_of.resize(m);
        off = 0;
        for (size_t k = 0; k < d; ++k) {
            for (size_t j = 0; j < sizes[k]; ++j) mod.block_of[off + j] = {k, j};
            off += sizes[k];
        }
        bool constant = true;
        for (size_t s : sizes) constant = constant && s == sizes[0];
        if (constant && d > 0) mod.free_rank = static_cast<long>(sizes[0]);
        return mod;
    }

    // Matrix of the action of an R'-element (coordinates over the R'-basis).
    Matrix act_by(const std::vector<Scalar>& rp) const {
        if (rp.size() != ext.rank()) throw shape_error("extension element length mismatch");
        Matrix m(rank_r, rank_r, ext.base());
        for (size_t i = 0; i < rp.size(); ++i)
            if (!rp[i].is_zero()) m = m + rp[i] * action[i];
        return m;
    }

    // Flatten coordinates over R' (free modules only) to R-coordinates.
    std::vector<Scalar> flatten(const std::vector<std::vector<Scalar>>& coords_rp) const {
        if (free_rank < 0) throw precondition_error("flatten needs a free module");
        size_t n = static_cast<size_t>(free_rank), d = ext.rank();
        if (coords_rp.size() != n) throw shape_error("wrong number of R'-coordinates");
        std::vector<Scalar> out(rank_r, Scalar::zero(ext.base()));
        for (size_t j = 0; j < n; ++j) {
            if (coords_rp[j].size() != d) throw shape_error("extension coordinate length mismatch");
            for (size_t i = 0; i < d; ++i) out[j * d + i] = coords_rp[j][i];
        }
        return out;
    }

private:
    void validate() const {
        size_t d = ext.rank();
        if (action.size() != d) throw shape_error("action table needs one matrix per extension basis element");
        for (const auto& a : action)
            if (a.rows() != rank_r || a.cols() != rank_r) throw shape_error("action matrix shape mismatch");
        if (act_by(ext.unit()) != Matrix::identity(rank_r, ext.base()))
            throw validation_error("extension unit does not act as identity");
        for (size_t i = 0; i < d; ++i)
            for (size_t j = 0; j < d; ++j) {
                Matrix expect(rank_r, rank_r, ext.base());
                for (size_t k = 0; k < d; ++k)
                    if (!ext.sc(i, j, k).is_zero()) expect = expect + ext.sc(i, j, k) * action[k];
                if (action[i] * action[j] != expect)
                    throw validation_error("action table is not an algebra representation");
            }
    }
};

// N_{R'/R}(M') as an explicit quotient of Gamma^d_R(M') by the span of
// mu(g, x) - pi(g) x over basis pairs, with projection and section data.
class NormModule {
public:
    NormModule(FiniteAlgebra ext, ExtModule mod) : ext_(std::move(ext)), mod_(std::move(mod)) {
        const ScalarDomain& dom = ext_.base();
        if (!dom.is_field()) throw domain_error("norm module construction requires a field base");
        size_t d = ext_.rank();
        gs_ = GammaSpace(dom, mod_.rank_r, d);
        gsext_ = GammaSpace(dom, d, d);
        pi_ = pi_map(ext_);
        etale_ = ext_.is_etale();

        // relation span: one row per (Gamma^d(R')-basis, Gamma^d(M')-basis) pair
        Matrix rel(gsext_.dim() * gs_.dim(), gs_.dim(), dom);
        for (size_t g = 0; g < gsext_.dim(); ++g)
            for (size_t x = 0; x < gs_.dim(); ++x) {
                auto row = pairwise_product_basis(gsext_, gs_, mod_.action, g, x);
                row[x] = row[x] - pi_[g];
                for (size_t c = 0; c < gs_.dim(); ++c) rel.at(g * gs_.dim() + x, c) = row[c];
            }
        Rref rr = row_reduce(rel);
        size_t nrel = rr.rank();
        relations_ = Matrix(nrel, gs_.dim(), dom);
        for (size_t i = 0; i < nrel; ++i)
            for (size_t c = 0; c < gs_.dim(); ++c) relations_.at(i, c) = rr.reduced.at(i, c);

        std::vector<bool> is_pivot(gs_.dim(), false);
        for (size_t p : rr.pivots) is_pivot[p] = true;
        for (size_t c = 0; c < gs_.dim(); ++c)
            if (!is_pivot[c]) free_cols_.push_back(c);

        size_t dim = free_cols_.size();
        projection_ = Matrix(dim, gs_.dim(), dom);
        section_ = Matrix(gs_.dim(), dim, dom);
        for (size_t k = 0; k < dim; ++k) {
            projection_.at(k, free_cols_[k]) = Scalar::one(dom);
            section_.at(free_cols_[k], k) = Scalar::one(dom);
        }
        for (size_t r = 0; r < nrel; ++r) {
            size_t p = rr.pivots[r];
            for (size_t k = 0; k < dim; ++k)
                projection_.at(k, p) = -relations_.at(r, free_cols_[k]);
        }

        if (projection_ * section_ != Matrix::identity(dim, dom))
            throw validation_error("norm module: projection o section != id");
        if (!(projection_ * relations_.transpose()).is_zero())
            throw validation_error("norm module: projection does not kill relations");
        if (etale_ && mod_.free_rank >= 0) {
            size_t expect = 1;
            for (size_t k = 0; k < d; ++k) expect *= static_cast<size_t>(mod_.free_rank);
            if (dim != expect) throw validation_error("norm module: etale rank law n^d violated");
        }
    }

    const FiniteAlgebra& ext() const { return ext_; }
    const ExtModule& module() const { return mod_; }
    const GammaSpace& gamma_space() const { return gs_; }
    const GammaSpace& gamma_ext_space() const { return gsext_; }
    const std::vector<Scalar>& pi() const { return pi_; }
    const Matrix& projection() const { return projection_; }
    const Matrix& section() const { return section_; }
    const Matrix& relations() const { return relations_; }
    size_t dim() const { return free_cols_.size(); }
    bool etale() const { return etale_; }
    const ScalarDomain& base() const { return ext_.base(); }

    // nu(m') = class of gamma^d(m'), the universal normic law.
    std::vector<Scalar> nu(const std::vector<Scalar>& m_r) const {
        return projection_.apply(gamma_pure(gs_, m_r).coords);
    }

    std::vector<Scalar> project(const GammaElement& g) const {
        if (g.space != gs_) throw shape_error("gamma element from a different space");
        return projection_.apply(g.coords);
    }

private:
    FiniteAlgebra ext_;
    ExtModule mod_;
    GammaSpace gs_, gsext_;
    std::vector<Scalar> pi_;
    Matrix relations_;
    Matrix projection_, section_;
    std::vector<size_t> free_cols_;
    bool etale_ = false;
};

inline NormModule build_norm_module(const FiniteAlgebra& ext, const ExtModule& mod) {
    if (mod.ext != ext) throw shape_error("module does not live over the given extension");
    return NormModule(ext, mod);
}

// N(phi) for an R'-linear map phi (given as an R-matrix): the descent of
// Gamma^d(phi) through both quotients. R'-linearity is checked against the
// action tables.
inline Matrix norm_matrix(const NormModule& src, const NormModule& dst, const Matrix& phi) {
    if (src.ext() != dst.ext()) throw shape_error("norm_matrix: extensions differ");
    if (phi.rows() != dst.module().rank_r || phi.cols() != src.module().rank_r)
        throw shape_error("norm_matrix: map shape mismatch");
    for (size_t i = 0; i < src.ext().rank(); ++i)
        if (phi * src.module().action[i] != dst.module().action[i] * phi)
            throw validation_error("norm_matrix: map is not R'-linear");
    Matrix g = gamma_matrix(src.gamma_space(), dst.gamma_space(), phi);
    Matrix n = dst.projection() * g * src.section();
    // well-definedness: Gamma^d(phi) maps relations into relations
    if (!(dst.projection() * g * src.relations().transpose()).is_zero())
        throw validation_error("norm_matrix: image of relations not killed");
    return n;
}

// Descent of Gamma^d(phi) for maps that are only semilinear over R' (module
// automorphisms lying over an automorphism of the extension, like the factor
// permutations of a split pair). Well-definedness is certified by checking
// that the image of the relation span is killed.
inline Matrix norm_matrix_semilinear(const NormModule& src, const NormModule& dst,
                                     const Matrix& phi) {
    if (phi.rows() != dst.module().rank_r || phi.cols() != src.module().rank_r)
        throw shape_error("norm_matrix_semilinear: map shape mismatch");
    Matrix g = gamma_matrix(src.gamma_space(), dst.gamma_space(), phi);
    if (!(dst.projection() * g * src.relations().transpose()).is_zero())
        throw validation_error("norm_matrix_semilinear: image of relations not killed");
    return dst.projection() * g * src.section();
}

// Explicit isomorphism N(E_1 x ... x E_d) -> E_1 (x) ... (x) E_d over the
// standard split extension, under which nu becomes the pure-tensor map.
struct SplitOracle {
    Matrix to_tensor;    // dim N -> prod n_j
    Matrix from_tensor;  // inverse
    std::vector<size_t> sizes;

    // coordinates of y_1 (x) ... (x) y_d in the lexicographic tensor basis
    std::vector<Scalar> pure_tensor(const std::vector<std::vector<Scalar>>& ys) const {
        if (ys.size() != sizes.size()) throw shape_error("pure_tensor arity mismatch");
        const ScalarDomain& dom = to_tensor.domain();
        std::vector<Scalar> out{Scalar::one(dom)};
        for (size_t b = 0; b < ys.size(); ++b) {
            if (ys[b].size() != sizes[b]) throw shape_error("pure_tensor factor length mismatch");
            std::vector<Scalar> next;
            next.reserve(out.size() * ys[b].size());
            for (const auto& x : out)
                for (const auto& y : ys[b]) next.push_back(x * y);
            out = std::move(next);
        }
        return out;
    }
};

inline SplitOracle split_oracle(const NormModule& nm) {
    const ExtModule& mod = nm.module();
    if (mod.block_sizes.empty() || mod.block_of.size() != mod.rank_r)
        throw precondition_error("split_oracle requires a module over the standard split extension");
    const ScalarDomain& dom = nm.base();
    size_t d = nm.ext().rank();
    const auto& sizes = mod.block_sizes;
    size_t tdim = 1;
    for (size_t s : sizes) tdim *= s;

    // basis(a) maps to the reordered canonical word when the word hits every
    // block exactly once, and to 0 otherwise
    const GammaSpace& gs = nm.gamma_space();
    Matrix phi(tdim, gs.dim(), dom);
    for (size_t col = 0; col < gs.dim(); ++col) {
        Word w = gs.canonical_word(col);
        std::vector<long> local(d, -1);
        bool good = true;
        for (int idx : w) {
            auto [b, loc] = mod.block_of[static_cast<size_t>(idx)];
            if (local[b] != -1) { good = false; break; }
            local[b] = static_cast<long>(loc);
        }
        if (!good) continue;
        size_t t = 0;
        for (size_t b = 0; b < d; ++b) t = t * sizes[b] + static_cast<size_t>(local[b]);
        phi.at(t, col) = Scalar::one(dom);
    }

    if (!(phi * nm.relations().transpose()).is_zero())
        throw validation_error("split oracle: map does not kill relations");
    Matrix to_tensor = phi * nm.section();
    if (nm.dim() != tdim) throw validation_error("split oracle: dimension mismatch");
    Matrix from_tensor = inverse(to_tensor);
    return SplitOracle{std::move(to_tensor), std::move(from_tensor), sizes};
}

inline Matrix convert_matrix(const Matrix& m, const ScalarDomain& q) {
    Matrix out(m.rows(), m.cols(), q);
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j)
            if (!m.at(i, j).is_zero()) out.at(i, j) = convert(m.at(i, j), q);
    return out;
}

inline ExtModule base_change_module(const ExtModule& mod, const FiniteAlgebra& ext_q,
                                    const ScalarDomain& q) {
    std::vector<Matrix> act;
    act.reserve(mod.action.size());
    for (const auto& a : mod.action) act.push_back(convert_matrix(a, q));
    ExtModule out(ext_q, mod.rank_r, std::move(act));
    out.free_rank = mod.free_rank;
    out.block_sizes = mod.block_sizes;
    out.block_of = mod.block_of;
    return out;
}

// The R-matrix of an R'-linear map R'^{n1} -> R'^{n2} whose (s, j) entry has
// the given R'-coordinates.
inline Matrix free_module_map(const FiniteAlgebra& ext,
                              const std::vector<std::vector<std::vector<Scalar>>>& entries) {
    size_t d = ext.rank();
    size_t n2 = entries.size();
    if (n2 == 0) throw shape_error("free_module_map: empty entry table");
    size_t n1 = entries[0].size();
    Matrix out(n2 * d, n1 * d, ext.base());
    for (size_t s = 0; s < n2; ++s) {
        if (entries[s].size() != n1) throw shape_error("free_module_map: ragged entry table");
        for (size_t j = 0; j < n1; ++j)
            for (size_t t = 0; t < d; ++t) {
                // image of f_j e_t is sum_s (phi_sj e_t) f_s
                auto prod = ext.multiply(entries[s][j], ext.basis_element(t));
                for (size_t u = 0; u < d; ++u)
                    if (!prod[u].is_zero()) out.at(s * d + u, j * d + t) = prod[u];
            }
    }
    return out;
}

// theta_D for the pushout (R -> Q, R' -> R' (x) Q): on representatives it is
// basis(a) (x) q -> basis(a) . q, realized as projection_Q o embed o section.
struct BaseChangeTheta {
    NormModule target;  // N over Q
    Matrix theta;       // dim N_Q x dim N_R, entries in Q
};

inline BaseChangeTheta base_change_theta(const NormModule& nm, const ScalarDomain& q) {
    if (!q.is_field()) throw domain_error("base change target must be a field");
    FiniteAlgebra ext_q = nm.ext().base_change(q);
    ExtModule mod_q = base_change_module(nm.module(), ext_q, q);
    NormModule nq(ext_q, mod_q);
    // embedded R-relations stay relations over Q
    if (!(nq.projection() * convert_matrix(nm.relations(), q).transpose()).is_zero())
        throw validation_error("theta: embedded relations not killed over Q");
    Matrix theta = nq.projection() * convert_matrix(nm.section(), q);
    if (theta.rows() != theta.cols() || det(theta).is_zero())
        throw validation_error("theta: base change map is not invertible");
    return BaseChangeTheta{std::move(nq), std::move(theta)};
}

struct ThetaCoherenceReport {
    bool triangle = false;   // identity pushout acts as the identity
    bool pentagon = false;   // composition of pushouts agrees
};

// Coherence of theta along a chain R -> Q -> W of field base changes:
// the identity-pushout triangle and the composition pentagon.
inline ThetaCoherenceReport check_theta_coherence(const NormModule& nm, const ScalarDomain& q,
                                                  const ScalarDomain& w) {
    ThetaCoherenceReport rep;
    BaseChangeTheta id_change = base_change_theta(nm, nm.base());
    if (id_change.theta != Matrix::identity(nm.dim(), nm.base()))
        throw validation_error("theta coherence: identity pushout is not the identity map");
    rep.triangle = true;

    BaseChangeTheta t1 = base_change_theta(nm, q);       // N_R -> N_Q
    BaseChangeTheta t2 = base_change_theta(t1.target, w);  // N_Q -> N_W
    BaseChangeTheta t13 = base_change_theta(nm, w);      // N_R -> N_W
    Matrix lhs = t2.theta * convert_matrix(t1.theta, w);
    if (lhs != t13.theta)
        throw validation_error("theta coherence: pentagon edge mismatch (theta_QW o theta_RQ != theta_RW)");
    rep.pentagon = true;
    return rep;
}

struct NuSpanReport {
    bool polarization_spans = false;
    bool sampled = false;
    size_t random_rank = 0;
    size_t dim = 0;
};

// The nu image generates: the polarization coefficients are exactly the
// classes of the Gamma basis, so spanning holds by construction; over
// infinite base fields random nu values are sampled as well.
inline NuSpanReport nu_image_spans(const NormModule& nm, Sampler& rng) {
    NuSpanReport rep;
    rep.dim = nm.dim();
    rep.polarization_spans = rank(nm.projection()) == nm.dim();
    if (nm.base().kind() == DomainKind::Rationals ||
        nm.base().kind() == DomainKind::SimpleExtension) {
        rep.sampled = true;
        size_t samples = nm.dim() + 5;
        Matrix vals(samples, nm.dim(), nm.base());
        for (size_t s = 0; s < samples; ++s) {
            auto v = nm.nu(rng.vector(nm.base(), nm.module().rank_r));
            for (size_t j = 0; j < nm.dim(); ++j) vals.at(s, j) = v[j];
        }
        rep.random_rank = rank(vals);
    }
    return rep;
}

// An R'-algebra presented over R: the underlying module plus the R-bilinear
// product (as left-multiplication matrices) and unit. R' must act centrally.
struct ExtAlgebra {
    ExtModule mod;
    std::vector<Matrix> leftmul;  // leftmul[i] = L_{b_i}
    std::vector<Scalar> unit;

    ExtAlgebra(ExtModule m, std::vector<Matrix> lm, std::vector<Scalar> u)
        : mod(std::move(m)), leftmul(std::move(lm)), unit(std::move(u)) {
        if (leftmul.size() != mod.rank_r || unit.size() != mod.rank_r)
            throw shape_error("ext algebra table shape mismatch");
        // central action: e_i (b c) = (e_i b) c = b (e_i c) on basis elements
        for (const auto& a : mod.action)
            for (size_t j = 0; j < mod.rank_r; ++j) {
                Matrix lb = leftmul[j];
                if (a * lb != lb * a) throw validation_error("extension does not act centrally");
            }
    }

    std::vector<Scalar> multiply(const std::vector<Scalar>& x, const std::vector<Scalar>& y) const {
        std::vector<Scalar> out(mod.rank_r, Scalar::zero(mod.ext.base()));
        for (size_t i = 0; i < x.size(); ++i) {
            if (x[i].is_zero()) continue;
            auto col = leftmul[i].apply(y);
            for (size_t k = 0; k < out.size(); ++k) out[k] = out[k] + x[i] * col[k];
        }
        return out;
    }
};

// Restriction of scalars of an AssocAlgebra over a SimpleExtension base field
// K = QQ[x]/(f): an ExtAlgebra over QQ with R' = the quotient presentation.
inline ExtAlgebra restrict_scalars(const AssocAlgebra& b) {
    const ScalarDomain& k = b.base();
    if (k.kind() != DomainKind::SimpleExtension)
        throw domain_error("restrict_scalars expects an algebra over a simple extension");
    FiniteAlgebra ext = algebra_from_extension(k);
    size_t d = ext.rank(), nb = b.rank(), m = nb * d;
    const ScalarDomain& q = ext.base();
    ExtModule mod = ExtModule::free_module(ext, nb);

    // left multiplication by b_j x^i on the R-basis b_l x^t
    std::vector<Matrix> lm(m, Matrix(m, m, q));
    Scalar gen = Scalar::generator(k);
    for (size_t j = 0; j < nb; ++j)
        for (size_t i = 0; i < d; ++i) {
            Matrix& cur = lm[j * d + i];
            for (size_t l = 0; l < nb; ++l)
                for (size_t t = 0; t < d; ++t) {
                    // (b_j x^i)(b_l x^t) = sum_s sc(j,l,s) x^{i+t} b_s
                    Scalar xit = gen.pow(static_cast<long>(i + t));
                    for (size_t s = 0; s < nb; ++s) {
                        Scalar coef = b.sc(j, l, s) * xit;  // element of K
                        auto coords = extension_coords(coef);
                        for (size_t u = 0; u < d; ++u)
                            if (!coords[u].is_zero())
                                cur.at(s * d + u, l * d + t) = cur.at(s * d + u, l * d + t) + coords[u];
                    }
                }
        }
    std::vector<Scalar> unit(m, Scalar::zero(q));
    for (size_t j = 0; j < nb; ++j) {
        auto coords = extension_coords(b.unit()[j]);
        for (size_t u = 0; u < d; ++u) unit[j * d + u] = coords[u];
    }
    return ExtAlgebra(std::move(mod), std::move(lm), std::move(unit));
}

// An R-linear map of a K-algebra, restricted to the R-basis b_j x^i.
inline Matrix restrict_linear_map(const AssocAlgebra& b, const Matrix& phi_k) {
    const ScalarDomain& k = b.base();
    if (k.kind() != DomainKind::SimpleExtension) throw domain_error("restrict_linear_map expects an extension base");
    size_t d = k.extension_degree(), nb = b.rank();
    if (phi_k.rows() != nb || phi_k.cols() != nb) throw shape_error("restrict_linear_map shape mismatch");
    Matrix out(nb * d, nb * d, ScalarDomain::rationals());
    Scalar gen = Scalar::generator(k);
    for (size_t j = 0; j < nb; ++j)
        for (size_t i = 0; i < d; ++i)
            // phi(b_j x^i) = x^i phi(b_j)
            for (size_t s = 0; s < nb; ++s) {
                Scalar coef = phi_k.at(s, j) * gen.pow(static_cast<long>(i));
                auto coords = extension_coords(coef);
                for (size_t u = 0; u < d; ++u)
                    if (!coords[u].is_zero()) out.at(s * d + u, j * d + i) = coords[u];
            }
    return out;
}

// B_1 x ... x B_d over the standard split extension R^d (componentwise
// product, block-diagonal tables).
inline ExtAlgebra split_algebra_product(const std::vector<AssocAlgebra>& factors) {
    if (factors.empty()) throw precondition_error("split_algebra_product needs at least one factor");
    const ScalarDomain& dom = factors[0].base();
    for (const auto& f : factors)
        if (f.base() != dom) throw domain_error("split factors must share a base");
    size_t d = factors.size();
    FiniteAlgebra ext = FiniteAlgebra::split(dom, d);
    std::vector<size_t> sizes;
    for (const auto& f : factors) sizes.push_back(f.rank());
    ExtModule mod = ExtModule::product_module(ext, sizes);
    size_t m = mod.rank_r;
    std::vector<Matrix> lm(m, Matrix(m, m, dom));
    std::vector<Scalar> unit(m, Scalar::zero(dom));
    size_t off = 0;
    for (const auto& f : factors) {
        for (size_t j = 0; j < f.rank(); ++j) {
            Matrix lj = f.left_mult(f.basis_element(j));
            for (size_t r = 0; r < f.rank(); ++r)
                for (size_t c = 0; c < f.rank(); ++c) lm[off + j].at(off + r, off + c) = lj.at(r, c);
            unit[off + j] = f.unit()[j];
        }
        off += f.rank();
    }
    return ExtAlgebra(std::move(mod), std::move(lm), std::move(unit));
}

// R' as a module-algebra over itself (used for N(R') = R checks).
inline ExtAlgebra regular_ext_algebra(const FiniteAlgebra& ext) {
    ExtModule mod = ExtModule::free_module(ext, 1);
    std::vector<Matrix> lm;
    for (size_t i = 0; i < ext.rank(); ++i) lm.push_back(ext.regular_rep(ext.basis_element(i)));
    return ExtAlgebra(std::move(mod), std::move(lm), ext.unit());
}

// End_{R'}(R'^r) presented over R: basis phi_{(k,l),i} = x^i E_{kl} at index
// (k*r + l)*d + i, with product and action given by the structure constants.
inline ExtAlgebra endomorphism_ext_algebra(const FiniteAlgebra& ext, size_t r) {
    size_t d = ext.rank();
    const ScalarDomain& dom = ext.base();
    size_t m = r * r * d;

    std::vector<Matrix> act(d, Matrix(m, m, dom));
    for (size_t j = 0; j < d; ++j)
        for (size_t k = 0; k < r; ++k)
            for (size_t l = 0; l < r; ++l)
                for (size_t i = 0; i < d; ++i)
                    for (size_t t = 0; t < d; ++t)
                        if (!ext.sc(j, i, t).is_zero())
                            act[j].at((k * r + l) * d + t, (k * r + l) * d + i) = ext.sc(j, i, t);
    ExtModule mod(ext, m, std::move(act));
    mod.free_rank = static_cast<long>(r * r);

    std::vector<Matrix> lm(m, Matrix(m, m, dom));
    for (size_t k = 0; k < r; ++k)
        for (size_t l = 0; l < r; ++l)
            for (size_t i = 0; i < d; ++i) {
                Matrix& cur = lm[(k * r + l) * d + i];
                // phi_{(k,l),i} o phi_{(l,l2),i2} = sum_t c(i,i2,t) phi_{(k,l2),t}
                for (size_t l2 = 0; l2 < r; ++l2)
                    for (size_t i2 = 0; i2 < d; ++i2)
                        for (size_t t = 0; t < d; ++t)
                            if (!ext.sc(i, i2, t).is_zero())
                                cur.at((k * r + l2) * d + t, (l * r + l2) * d + i2) = ext.sc(i, i2, t);
            }
    std::vector<Scalar> unit(m, Scalar::zero(dom));
    for (size_t k = 0; k < r; ++k)
        for (size_t i = 0; i < d; ++i) unit[(k * r + k) * d + i] = ext.unit()[i];
    return ExtAlgebra(std::move(mod), std::move(lm), std::move(unit));
}

// Matrix of phi_{(k,l),i} acting on the free module R'^r (R-basis f_l x^t at
// index l*d + t).
inline Matrix endo_basis_action(const FiniteAlgebra& ext, size_t r, size_t k, size_t l, size_t i) {
    size_t d = ext.rank();
    Matrix out(r * d, r * d, ext.base());
    for (size_t t = 0; t < d; ++t)
        for (size_t u = 0; u < d; ++u)
            if (!ext.sc(i, t, u).is_zero()) out.at(k * d + u, l * d + t) = ext.sc(i, t, u);
    return out;
}

// The norm algebra N_{R'/R}(B'): the norm module of the underlying module
// with the product descended from the componentwise symmetric-tensor
// product. Multiplicativity of nu follows; the relation span being an ideal
// is verified and would indicate a bug if it ever failed for commutative R'.
class NormAlgebra {
public:
    NormAlgebra(const FiniteAlgebra& ext, const ExtAlgebra& b)
        : nm_(ext, b.mod), b_unit_(b.unit) {
        const ScalarDomain& dom = nm_.base();
        const GammaSpace& gs = nm_.gamma_space();
        size_t dim = nm_.dim(), gdim = gs.dim();

        // Gamma-level product table on basis pairs.
        std::vector<std::vector<Scalar>> table(gdim * gdim);
        for (size_t i = 0; i < gdim; ++i)
            for (size_t j = 0; j < gdim; ++j)
                table[i * gdim + j] = pairwise_product_basis(gs, gs, b.leftmul, i, j);

        auto prod_vec = [&](const std::vector<Scalar>& u, const std::vector<Scalar>& v) {
            std::vector<Scalar> out(gdim, Scalar::zero(dom));
            for (size_t i = 0; i < gdim; ++i) {
                if (u[i].is_zero()) continue;
                for (size_t j = 0; j < gdim; ++j) {
                    if (v[j].is_zero()) continue;
                    Scalar f = u[i] * v[j];
                    const auto& t = table[i * gdim + j];
                    for (size_t k = 0; k < gdim; ++k)
                        if (!t[k].is_zero()) out[k] = out[k] + f * t[k];
                }
            }
            return out;
        };

        // ideal check: relations are killed after multiplying by any basis
        // element on either side
        for (size_t rrow = 0; rrow < nm_.relations().rows(); ++rrow) {
            auto rel = nm_.relations().row(rrow);
            for (size_t j = 0; j < gdim; ++j) {
                std::vector<Scalar> ej(gdim, Scalar::zero(dom));
                ej[j] = Scalar::one(dom);
                for (const auto& side : {prod_vec(rel, ej), prod_vec(ej, rel)}) {
                    auto img = nm_.projection().apply(side);
                    for (const auto& x : img)
                        if (!x.is_zero())
                            throw validation_error("norm algebra: relation span is not an ideal");
                }
            }
        }

        // descended structure constants
        std::vector<Scalar> c(dim * dim * dim, Scalar::zero(dom));
        for (size_t f = 0; f < dim; ++f) {
            auto sf = nm_.section().col(f);
            for (size_t g = 0; g < dim; ++g) {
                auto sg = nm_.section().col(g);
                auto prod = nm_.projection().apply(prod_vec(sf, sg));
                for (size_t k = 0; k < dim; ++k) c[(f * dim + g) * dim + k] = prod[k];
            }
        }
        std::vector<Scalar> unit = nm_.nu(b.unit);
        long deg = -1;
        size_t s = 0;
        while (s * s < dim) ++s;
        if (s * s == dim) deg = static_cast<long>(s);
        std::optional<std::vector<Scalar>> trd;
        if (deg > 0 && !Scalar::from_integer(dom, deg).is_zero()) {
            // generic Azumaya reduced trace: (1/deg) * regular trace
            AssocAlgebra plain(dom, dim, c, unit);
            trd.emplace(dim, Scalar::zero(dom));
            Scalar inv_deg = Scalar::from_integer(dom, deg).inverse();
            for (size_t i = 0; i < dim; ++i)
                (*trd)[i] = inv_deg * plain.regular_trace(plain.basis_element(i));
        }
        alg_ = AssocAlgebra(dom, dim, std::move(c), std::move(unit), AlgebraFamily::Generic, deg,
                            std::move(trd));
    }

    const NormModule& module() const { return nm_; }
    const AssocAlgebra& algebra() const { return alg_; }
    std::vector<Scalar> nu(const std::vector<Scalar>& b_coords) const { return nm_.nu(b_coords); }
    const std::vector<Scalar>& source_unit() const { return b_unit_; }

private:
    NormModule nm_;
    AssocAlgebra alg_;
    std::vector<Scalar> b_unit_;
};

inline NormAlgebra build_norm_algebra(const FiniteAlgebra& ext, const ExtAlgebra& b) {
    return NormAlgebra(ext, b);
}

// Psi: N(End_{R'}(Q')) -> End_R(N(Q')), the unique algebra isomorphism with
// Psi o nu = eta (eta(phi) = N(phi)). Built by coefficient extraction of the
// normic law eta on a generic endomorphism.
struct PsiIso {
    NormAlgebra nb;   // N(End(Q')) with its algebra structure
    NormModule nq;    // N(Q')
    Matrix psi;       // (dim nq)^2 x dim nb, row-major vec of endomorphisms
};

inline PsiIso psi_endo_iso(const FiniteAlgebra& ext, size_t r) {
    if (!ext.is_etale()) throw precondition_error("psi_endo_iso requires an etale extension");
    const ScalarDomain& dom = ext.base();
    size_t d = ext.rank();
    ExtAlgebra endo = endomorphism_ext_algebra(ext, r);
    NormAlgebra nb(ext, endo);
    NormModule nq(ext, ExtModule::free_module(ext, r));

    size_t vars = r * r * d;
    PolyMatrix generic(r * d, r * d, vars, dom);
    for (size_t k = 0; k < r; ++k)
        for (size_t l = 0; l < r; ++l)
            for (size_t i = 0; i < d; ++i) {
                Matrix m = endo_basis_action(ext, r, k, l, i);
                size_t v = (k * r + l) * d + i;
                MultiPoly tv = MultiPoly::variable(vars, v, dom);
                for (size_t a = 0; a < r * d; ++a)
                    for (size_t bcol = 0; bcol < r * d; ++bcol)
                        if (!m.at(a, bcol).is_zero())
                            generic.at(a, bcol) = generic.at(a, bcol) + m.at(a, bcol) * tv;
            }
    PolyMatrix g = gamma_matrix_poly(nq.gamma_space(), nq.gamma_space(), generic);
    PolyMatrix ngen = PolyMatrix::sandwich(nq.projection(), g, nq.section());

    size_t ndim = nq.dim();
    const GammaSpace& gsb = nb.module().gamma_space();
    Matrix law(ndim * ndim, gsb.dim(), dom);
    for (size_t col = 0; col < gsb.dim(); ++col) {
        const ExpVec& e = gsb.exponents(col);
        for (size_t a = 0; a < ndim; ++a)
            for (size_t bcol = 0; bcol < ndim; ++bcol)
                law.at(a * ndim + bcol, col) = ngen.at(a, bcol).coefficient(e);
    }
    if (!(law * nb.module().relations().transpose()).is_zero())
        throw validation_error("psi: coefficient law does not kill relations");
    Matrix psi = law * nb.module().section();
    if (psi.rows() != psi.cols() || det(psi).is_zero())
        throw validation_error("psi: not bijective");
    return PsiIso{std::move(nb), std::move(nq), std::move(psi)};
}

} // namespace norma

#endif
