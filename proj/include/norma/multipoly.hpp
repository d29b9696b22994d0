#ifndef NORMA_MULTIPOLY_HPP
#define NORMA_MULTIPOLY_HPP

#include <map>
#include <string>
#include <vector>

#include "norma/errors.hpp"
#include "norma/matrix.hpp"
#include "norma/scalar.hpp"

namespace norma {

// Multivariate polynomial in k variables: sparse map from exponent vectors
// to nonzero coefficients. Exponent vectors all have length k.
class MultiPoly {
public:
    using Exponents = std::vector<int>;

    MultiPoly() : k_(0), dom_(ScalarDomain::rationals()) {}
    MultiPoly(size_t k, const ScalarDomain& dom) : k_(k), dom_(dom) {}

    static MultiPoly constant(size_t k, const Scalar& c) {
        MultiPoly p(k, c.domain());
        p.add_term(Exponents(k, 0), c);
        return p;
    }

    static MultiPoly variable(size_t k, size_t i, const ScalarDomain& dom) {
        if (i >= k) throw shape_error("variable index out of range");
        MultiPoly p(k, dom);
        Exponents e(k, 0);
        e[i] = 1;
        p.add_term(e, Scalar::one(dom));
        return p;
    }

    size_t variable_count() const { return k_; }
    const ScalarDomain& domain() const { return dom_; }
    const std::map<Exponents, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Exponents& e, const Scalar& c) {
        if (e.size() != k_) throw shape_error("exponent vector length mismatch");
        if (c.is_zero()) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Scalar coefficient(const Exponents& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Scalar::zero(dom_) : it->second;
    }

    long total_degree() const {
        long d = -1;
        for (const auto& [e, c] : terms_) {
            long t = 0;
            for (int x : e) t += x;
            if (t > d) d = t;
        }
        return d;
    }

    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
        a.check_compatible(b);
        MultiPoly r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, c);
        return r;
    }
    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
        a.check_compatible(b);
        MultiPoly r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, -c);
        return r;
    }
    MultiPoly operator-() const {
        MultiPoly r(k_, dom_);
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
        return r;
    }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        a.check_compatible(b);
        MultiPoly r(a.k_, a.dom_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponents e(a.k_);
                for (size_t i = 0; i < a.k_; ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        return r;
    }
    friend MultiPoly operator*(const Scalar& c, const MultiPoly& a) {
        MultiPoly r(a.k_, a.dom_);
        for (const auto& [e, x] : a.terms_) r.add_term(e, c * x);
        return r;
    }
    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        return a.k_ == b.k_ && a.dom_ == b.dom_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

    Scalar eval(const std::vector<Scalar>& point) const {
        if (point.size() != k_) throw shape_error("evaluation point length mismatch");
        Scalar acc = Scalar::zero(dom_);
        for (const auto& [e, c] : terms_) {
            Scalar t = c;
            for (size_t i = 0; i < k_; ++i)
                if (e[i] > 0) t = t * point[i].pow(e[i]);
            acc = acc + t;
        }
        return acc;
    }

    std::string str(const std::string& var = "t") const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [e, c] : terms_) {
            if (!s.empty()) s += " + ";
            s += c.str();
            for (size_t i = 0; i < k_; ++i) {
                if (e[i] == 0) continue;
                s += "*" + var + std::to_string(i + 1);
                if (e[i] > 1) s += "^" + std::to_string(e[i]);
            }
        }
        return s;
    }

private:
    void check_compatible(const MultiPoly& o) const {
        if (k_ != o.k_) throw shape_error("polynomial variable count mismatch");
        if (dom_ != o.dom_) throw domain_error("polynomial coefficient domain mismatch");
    }

    size_t k_;
    ScalarDomain dom_;
    std::map<Exponents, Scalar> terms_;
};

// Matrix with polynomial entries; just enough structure for polarization.
class PolyMatrix {
public:
    PolyMatrix(size_t rows, size_t cols, size_t k, const ScalarDomain& dom)
        : rows_(rows), cols_(cols), k_(k), dom_(dom), e_(rows * cols, MultiPoly(k, dom)) {}

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    size_t variable_count() const { return k_; }
    const ScalarDomain& domain() const { return dom_; }

    MultiPoly& at(size_t i, size_t j) { return e_[i * cols_ + j]; }
    const MultiPoly& at(size_t i, size_t j) const { return e_[i * cols_ + j]; }

    friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
        if (a.cols_ != b.rows_) throw shape_error("poly matrix product shape mismatch");
        PolyMatrix r(a.rows_, b.cols_, a.k_, a.dom_);
        for (size_t i = 0; i < a.rows_; ++i)
            for (size_t k = 0; k < a.cols_; ++k) {
                if (a.at(i, k).is_zero()) continue;
                for (size_t j = 0; j < b.cols_; ++j)
                    if (!b.at(k, j).is_zero()) r.at(i, j) = r.at(i, j) + a.at(i, k) * b.at(k, j);
            }
        return r;
    }

    // Sandwich by scalar matrices: l * p * r.
    static PolyMatrix sandwich(const Matrix& l, const PolyMatrix& p, const Matrix& r) {
        PolyMatrix lp(l.rows(), p.cols(), p.variable_count(), p.domain());
        for (size_t i = 0; i < l.rows(); ++i)
            for (size_t k = 0; k < l.cols(); ++k) {
                if (l.at(i, k).is_zero()) continue;
                for (size_t j = 0; j < p.cols(); ++j)
                    if (!p.at(k, j).is_zero()) lp.at(i, j) = lp.at(i, j) + l.at(i, k) * p.at(k, j);
            }
        PolyMatrix out(l.rows(), r.cols(), p.variable_count(), p.domain());
        for (size_t i = 0; i < lp.rows(); ++i)
            for (size_t k = 0; k < lp.cols(); ++k) {
                if (lp.at(i, k).is_zero()) continue;
                for (size_t j = 0; j < r.cols(); ++j)
                    if (!r.at(k, j).is_zero()) out.at(i, j) = out.at(i, j) + r.at(k, j) * lp.at(i, k);
            }
        return out;
    }

private:
    size_t rows_, cols_, k_;
    ScalarDomain dom_;
    std::vector<MultiPoly> e_;
};

// Exact multivariate determinant by expansion along the first column.
// Intended for the small polarization matrices (size = extension rank).
inline MultiPoly poly_det(const PolyMatrix& m) {
    if (m.rows() != m.cols()) throw shape_error("poly_det of a non-square matrix");
    size_t n = m.rows();
    if (n == 0) return MultiPoly::constant(m.variable_count(), Scalar::one(m.domain()));
    if (n == 1) return m.at(0, 0);
    MultiPoly acc(m.variable_count(), m.domain());
    for (size_t i = 0; i < n; ++i) {
        if (m.at(i, 0).is_zero()) continue;
        PolyMatrix minor(n - 1, n - 1, m.variable_count(), m.domain());
        for (size_t r = 0, mr = 0; r < n; ++r) {
            if (r == i) continue;
            for (size_t c = 1; c < n; ++c) minor.at(mr, c - 1) = m.at(r, c);
            ++mr;
        }
        MultiPoly term = m.at(i, 0) * poly_det(minor);
        acc = (i % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

} // namespace norma

#endif
