#pragma once
// Packed symmetric matrices and the spectral definiteness test at the core of
// the auxetic criterion: a deformation direction is auxetic when the Gram
// velocity is positive semidefinite, strictly auxetic when positive definite.
//
// Storage is the upper triangle only (row-major, diagonal included), so
// symmetry is structural rather than a runtime invariant. Eigenvalues are
// computed in closed form for dim <= 3 and by cyclic Jacobi sweeps otherwise;
// no large matrices arise in practice (lattice dimension <= 4).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace auxetic {

enum class Definiteness {
    PositiveDefinite,
    PositiveSemidefiniteSingular,
    Indefinite,
    NegativeSemidefiniteSingular,
    NegativeDefinite,
    Zero,
};

inline const char* to_string(Definiteness d) {
    switch (d) {
        case Definiteness::PositiveDefinite: return "PositiveDefinite";
        case Definiteness::PositiveSemidefiniteSingular:
            return "PositiveSemidefiniteSingular";
        case Definiteness::Indefinite: return "Indefinite";
        case Definiteness::NegativeSemidefiniteSingular:
            return "NegativeSemidefiniteSingular";
        case Definiteness::NegativeDefinite: return "NegativeDefinite";
        case Definiteness::Zero: return "Zero";
    }
    return "?";
}

// True for the weak (closed-cone) notion used on interval boundaries.
inline bool is_psd(Definiteness d) {
    return d == Definiteness::PositiveDefinite ||
           d == Definiteness::PositiveSemidefiniteSingular ||
           d == Definiteness::Zero;
}

class SymMatrix {
  public:
    SymMatrix() = default;
    explicit SymMatrix(int dim) : dim_(dim), a_(packed_size(dim), 0.0) {
        if (dim < 1) throw InputError("SymMatrix dimension must be >= 1");
    }

    static int packed_size(int dim) { return dim * (dim + 1) / 2; }

    static SymMatrix identity(int dim) {
        SymMatrix m(dim);
        for (int i = 0; i < dim; ++i) m.ref(i, i) = 1.0;
        return m;
    }

    // Packed upper triangle in row-major order: w11, w12, ..., w1d, w22, ...
    static SymMatrix from_packed(int dim, const std::vector<double>& packed) {
        SymMatrix m(dim);
        if ((int)packed.size() != packed_size(dim))
            throw InputError("packed length does not match dimension");
        m.a_ = packed;
        return m;
    }

    int dim() const { return dim_; }
    const std::vector<double>& packed() const { return a_; }

    double operator()(int i, int j) const { return a_[index(i, j)]; }
    double& ref(int i, int j) { return a_[index(i, j)]; }

    // omega * x
    std::vector<double> apply(const std::vector<double>& x) const {
        std::vector<double> y(dim_, 0.0);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) y[i] += (*this)(i, j) * x[j];
        return y;
    }

    // x^T omega x
    double quad_form(const std::vector<double>& x) const {
        double s = 0.0;
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) s += x[i] * (*this)(i, j) * x[j];
        return s;
    }

    double max_abs() const {
        double s = 0.0;
        for (double v : a_) s = std::max(s, std::abs(v));
        return s;
    }

    bool all_finite() const {
        for (double v : a_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    SymMatrix operator+(const SymMatrix& o) const { return zip(o, +1.0); }
    SymMatrix operator-(const SymMatrix& o) const { return zip(o, -1.0); }
    SymMatrix operator*(double s) const {
        SymMatrix r = *this;
        for (double& v : r.a_) v *= s;
        return r;
    }

    Eigen::MatrixXd dense() const {
        Eigen::MatrixXd m(dim_, dim_);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
        return m;
    }

    static SymMatrix from_dense(const Eigen::MatrixXd& m) {
        SymMatrix r((int)m.rows());
        for (int i = 0; i < r.dim_; ++i)
            for (int j = i; j < r.dim_; ++j)
                r.ref(i, j) = 0.5 * (m(i, j) + m(j, i));
        return r;
    }

  private:
    int index(int i, int j) const {
        if (i > j) std::swap(i, j);
        return i * dim_ - i * (i - 1) / 2 + (j - i);
    }
    SymMatrix zip(const SymMatrix& o, double sign) const {
        if (o.dim_ != dim_) throw InputError("dimension mismatch");
        SymMatrix r = *this;
        for (size_t k = 0; k < a_.size(); ++k) r.a_[k] += sign * o.a_[k];
        return r;
    }

    int dim_ = 0;
    std::vector<double> a_;
};

// Default absolute tolerance policy: relative to the largest entry.
inline double default_tol(const SymMatrix& m, double base = 1e-9) {
    return base * (1.0 + m.max_abs());
}

namespace detail {

inline std::vector<double> eig_closed_form_2(const SymMatrix& m) {
    const double a = m(0, 0), b = m(0, 1), c = m(1, 1);
    const double mid = 0.5 * (a + c);
    const double r = std::hypot(0.5 * (a - c), b);
    return {mid - r, mid + r};
}

// Cyclic Jacobi on a dense copy; optionally accumulates rotations into vecs.
inline std::vector<double> jacobi_eigen(const SymMatrix& m,
                                        Eigen::MatrixXd* vecs = nullptr) {
    const int n = m.dim();
    Eigen::MatrixXd A = m.dense();
    if (vecs) *vecs = Eigen::MatrixXd::Identity(n, n);
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
        if (off <= 1e-32 * scale * scale) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(A(p, q)) <= 1e-300) continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
                const double t =
                    (theta >= 0.0 ? 1.0 : -1.0) /
                    (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
                if (vecs) {
                    for (int k = 0; k < n; ++k) {
                        const double vkp = (*vecs)(k, p), vkq = (*vecs)(k, q);
                        (*vecs)(k, p) = c * vkp - s * vkq;
                        (*vecs)(k, q) = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = A(i, i);
    if (vecs) {
        // Sort eigenpairs ascending.
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return v[a] < v[b]; });
        Eigen::MatrixXd sorted(n, n);
        std::vector<double> vs(n);
        for (int i = 0; i < n; ++i) {
            vs[i] = v[order[i]];
            sorted.col(i) = vecs->col(order[i]);
        }
        *vecs = sorted;
        return vs;
    }
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace detail

// Eigenvalues sorted ascending. Closed form for dim <= 2, Jacobi beyond:
// the trigonometric 3x3 formula loses half the working precision at
// clustered roots, which is fatal for tolerance-band classification of
// nearly rank-deficient matrices.
inline std::vector<double> sym_eigenvalues(const SymMatrix& m) {
    if (!m.all_finite()) throw InputError("non-finite matrix entry");
    switch (m.dim()) {
        case 1: return {m(0, 0)};
        case 2: return detail::eig_closed_form_2(m);
        default: return detail::jacobi_eigen(m);
    }
}

// Full eigensystem (ascending); used where eigenvector directions matter.
inline std::pair<std::vector<double>, Eigen::MatrixXd> sym_eigensystem(
    const SymMatrix& m) {
    if (!m.all_finite()) throw InputError("non-finite matrix entry");
    Eigen::MatrixXd vecs;
    auto vals = detail::jacobi_eigen(m, &vecs);
    return {vals, vecs};
}

// Spectral classification against an absolute tolerance band [-tol, tol].
inline Definiteness psd_status(const SymMatrix& m, double tol) {
    if (tol < 0.0 || !std::isfinite(tol))
        throw InputError("tolerance must be finite and non-negative");
    const auto eig = sym_eigenvalues(m);
    const double lo = eig.front();
    const double hi = eig.back();
    if (std::abs(lo) <= tol && std::abs(hi) <= tol) return Definiteness::Zero;
    if (lo > tol) return Definiteness::PositiveDefinite;
    if (hi < -tol) return Definiteness::NegativeDefinite;
    if (lo >= -tol) return Definiteness::PositiveSemidefiniteSingular;
    if (hi <= tol) return Definiteness::NegativeSemidefiniteSingular;
    return Definiteness::Indefinite;
}

inline Definiteness psd_status(const SymMatrix& m) {
    return psd_status(m, default_tol(m));
}

// Gram matrix of a list of equal-dimension vectors; result is k x k for k
// vectors and positive semidefinite by construction.
inline SymMatrix gram(const std::vector<std::vector<double>>& vectors) {
    if (vectors.empty()) throw InputError("gram of an empty vector list");
    const size_t d = vectors[0].size();
    if (d == 0) throw InputError("gram of zero-dimensional vectors");
    for (const auto& v : vectors)
        if (v.size() != d) throw InputError("gram: mixed vector dimensions");
    SymMatrix g((int)vectors.size());
    for (size_t i = 0; i < vectors.size(); ++i)
        for (size_t j = i; j < vectors.size(); ++j) {
            double s = 0.0;
            for (size_t k = 0; k < d; ++k) s += vectors[i][k] * vectors[j][k];
            g.ref((int)i, (int)j) = s;
        }
    return g;
}

}  // namespace auxetic
