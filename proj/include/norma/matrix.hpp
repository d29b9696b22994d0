#ifndef NORMA_MATRIX_HPP
#define NORMA_MATRIX_HPP

#include <string>
#include <vector>

#include "norma/errors.hpp"
#include "norma/scalar.hpp"

namespace norma {

// Dense rectangular matrix over one ScalarDomain.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0), dom_(ScalarDomain::rationals()) {}

    Matrix(size_t rows, size_t cols, const ScalarDomain& dom)
        : rows_(rows), cols_(cols), dom_(dom), e_(rows * cols, Scalar::zero(dom)) {}

    static Matrix identity(size_t n, const ScalarDomain& dom) {
        Matrix m(n, n, dom);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = Scalar::one(dom);
        return m;
    }

    static Matrix from_rows(const ScalarDomain& dom, const std::vector<std::vector<Scalar>>& rows) {
        if (rows.empty()) return Matrix(0, 0, dom);
        Matrix m(rows.size(), rows[0].size(), dom);
        for (size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_) throw shape_error("ragged matrix rows");
            for (size_t j = 0; j < m.cols_; ++j) m.at(i, j) = rows[i][j];
        }
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    const ScalarDomain& domain() const { return dom_; }

    Scalar& at(size_t i, size_t j) { return e_[i * cols_ + j]; }
    const Scalar& at(size_t i, size_t j) const { return e_[i * cols_ + j]; }

    std::vector<Scalar> row(size_t i) const {
        return std::vector<Scalar>(e_.begin() + i * cols_, e_.begin() + (i + 1) * cols_);
    }
    std::vector<Scalar> col(size_t j) const {
        std::vector<Scalar> c;
        c.reserve(rows_);
        for (size_t i = 0; i < rows_; ++i) c.push_back(at(i, j));
        return c;
    }

    bool is_zero() const {
        for (const auto& x : e_) if (!x.is_zero()) return false;
        return true;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        a.check_shape(b);
        Matrix r = a;
        for (size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = r.e_[i] + b.e_[i];
        return r;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        a.check_shape(b);
        Matrix r = a;
        for (size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = r.e_[i] - b.e_[i];
        return r;
    }
    friend Matrix operator*(const Scalar& c, const Matrix& a) {
        Matrix r = a;
        for (auto& x : r.e_) x = c * x;
        return r;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw shape_error("matrix product shape mismatch");
        Matrix r(a.rows_, b.cols_, a.dom_);
        for (size_t i = 0; i < a.rows_; ++i)
            for (size_t k = 0; k < a.cols_; ++k) {
                const Scalar& aik = a.at(i, k);
                if (aik.is_zero()) continue;
                for (size_t j = 0; j < b.cols_; ++j) {
                    const Scalar& bkj = b.at(k, j);
                    if (!bkj.is_zero()) r.at(i, j) = r.at(i, j) + aik * bkj;
                }
            }
        return r;
    }

    std::vector<Scalar> apply(const std::vector<Scalar>& v) const {
        if (v.size() != cols_) throw shape_error("matrix-vector shape mismatch");
        std::vector<Scalar> r(rows_, Scalar::zero(dom_));
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j)
                if (!at(i, j).is_zero() && !v[j].is_zero()) r[i] = r[i] + at(i, j) * v[j];
        return r;
    }

    Matrix transpose() const {
        Matrix r(cols_, rows_, dom_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    std::string str() const {
        std::string s = "[";
        for (size_t i = 0; i < rows_; ++i) {
            s += i ? ", [" : "[";
            for (size_t j = 0; j < cols_; ++j) s += (j ? ", " : "") + at(i, j).str();
            s += "]";
        }
        return s + "]";
    }

private:
    void check_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw shape_error("matrix shape mismatch");
        if (dom_ != o.dom_) throw domain_error("matrix domain mismatch");
    }

    size_t rows_, cols_;
    ScalarDomain dom_;
    std::vector<Scalar> e_;
};

// Reduced row echelon form data over a field.
struct Rref {
    Matrix reduced;               // RREF of the input
    std::vector<size_t> pivots;   // pivot column per nonzero row, increasing
    size_t rank() const { return pivots.size(); }
};

inline Rref row_reduce(Matrix m) {
    if (!m.domain().is_field()) throw domain_error("row reduction requires a field domain");
    Rref out;
    size_t r = 0;
    for (size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        size_t piv = r;
        while (piv < m.rows() && m.at(piv, c).is_zero()) ++piv;
        if (piv == m.rows()) continue;
        if (piv != r)
            for (size_t j = 0; j < m.cols(); ++j) std::swap(m.at(piv, j), m.at(r, j));
        Scalar inv = m.at(r, c).inverse();
        for (size_t j = c; j < m.cols(); ++j) m.at(r, j) = inv * m.at(r, j);
        for (size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m.at(i, c).is_zero()) continue;
            Scalar f = m.at(i, c);
            for (size_t j = c; j < m.cols(); ++j) m.at(i, j) = m.at(i, j) - f * m.at(r, j);
        }
        out.pivots.push_back(c);
        ++r;
    }
    out.reduced = std::move(m);
    return out;
}

struct RankKernel {
    size_t rank = 0;
    std::vector<std::vector<Scalar>> kernel;  // basis of the right kernel
};

// Rank and right-kernel basis; field domains only.
inline RankKernel rank_and_kernel(const Matrix& m) {
    if (!m.domain().is_field()) throw domain_error("rank_and_kernel requires a field domain");
    Rref rr = row_reduce(m);
    RankKernel out;
    out.rank = rr.rank();
    std::vector<bool> is_pivot(m.cols(), false);
    for (size_t p : rr.pivots) is_pivot[p] = true;
    for (size_t c = 0; c < m.cols(); ++c) {
        if (is_pivot[c]) continue;
        std::vector<Scalar> v(m.cols(), Scalar::zero(m.domain()));
        v[c] = Scalar::one(m.domain());
        for (size_t r = 0; r < rr.pivots.size(); ++r) v[rr.pivots[r]] = -rr.reduced.at(r, c);
        out.kernel.push_back(std::move(v));
    }
    return out;
}

inline size_t rank(const Matrix& m) { return row_reduce(m).rank(); }

// Exact determinant by fraction-free elimination (valid over ZZ as well:
// every division in the Bareiss recurrence is exact).
inline Scalar det(const Matrix& m) {
    if (m.rows() != m.cols()) throw shape_error("determinant of a non-square matrix");
    size_t n = m.rows();
    const ScalarDomain& dom = m.domain();
    if (n == 0) return Scalar::one(dom);
    Matrix a = m;
    Scalar prev = Scalar::one(dom);
    bool negate = false;
    for (size_t k = 0; k + 1 < n; ++k) {
        size_t piv = k;
        while (piv < n && a.at(piv, k).is_zero()) ++piv;
        if (piv == n) return Scalar::zero(dom);
        if (piv != k) {
            for (size_t j = 0; j < n; ++j) std::swap(a.at(piv, j), a.at(k, j));
            negate = !negate;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j)
                a.at(i, j) = (a.at(k, k) * a.at(i, j) - a.at(i, k) * a.at(k, j)) / prev;
        prev = a.at(k, k);
    }
    Scalar d = a.at(n - 1, n - 1);
    return negate ? -d : d;
}

inline Matrix inverse(const Matrix& m) {
    if (m.rows() != m.cols()) throw shape_error("inverse of a non-square matrix");
    if (!m.domain().is_field()) throw domain_error("matrix inverse requires a field domain");
    size_t n = m.rows();
    Matrix aug(n, 2 * n, m.domain());
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, n + i) = Scalar::one(m.domain());
    }
    Rref rr = row_reduce(aug);
    if (rr.rank() < n || rr.pivots[n - 1] >= n) throw precondition_error("matrix is singular");
    Matrix inv(n, n, m.domain());
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) inv.at(i, j) = rr.reduced.at(i, n + j);
    return inv;
}

// Solve m x = b; throws when inconsistent. Returns one solution.
inline std::vector<Scalar> solve(const Matrix& m, const std::vector<Scalar>& b) {
    if (b.size() != m.rows()) throw shape_error("solve: rhs length mismatch");
    Matrix aug(m.rows(), m.cols() + 1, m.domain());
    for (size_t i = 0; i < m.rows(); ++i) {
        for (size_t j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols()) = b[i];
    }
    Rref rr = row_reduce(aug);
    if (!rr.pivots.empty() && rr.pivots.back() == m.cols()) throw precondition_error("inconsistent linear system");
    std::vector<Scalar> x(m.cols(), Scalar::zero(m.domain()));
    for (size_t r = 0; r < rr.pivots.size(); ++r) x[rr.pivots[r]] = rr.reduced.at(r, m.cols());
    return x;
}

// Kronecker product in lexicographic tensor-basis order.
inline Matrix kron(const Matrix& a, const Matrix& b) {
    if (a.domain() != b.domain()) throw domain_error("kron domain mismatch");
    Matrix r(a.rows() * b.rows(), a.cols() * b.cols(), a.domain());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) {
            if (a.at(i, j).is_zero()) continue;
            for (size_t k = 0; k < b.rows(); ++k)
                for (size_t l = 0; l < b.cols(); ++l)
                    r.at(i * b.rows() + k, j * b.cols() + l) = a.at(i, j) * b.at(k, l);
        }
    return r;
}

} // namespace norma

#endif
