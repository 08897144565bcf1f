#pragma once
// Five-point conic fitting and classification. An auxetic configuration of
// the quadrilateral framework is characterized by the conic through a vertex
// and the endpoints of the four bars at it being an ellipse; the transition
// configurations degenerate to pairs of parallel lines (discriminant 0).

#include <array>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "errors.hpp"
#include "geometry.hpp"

namespace auxetic {

// a x^2 + b xy + c y^2 + d x + e y + f = 0, stored unit-norm with the first
// nonzero coefficient positive (in a,b,c,d,e,f order).
struct ConicCoeffs {
    double a = 0, b = 0, c = 0, d = 0, e = 0, f = 0;

    std::array<double, 6> as_array() const { return {a, b, c, d, e, f}; }
    double discriminant() const { return b * b - 4.0 * a * c; }
    double evaluate(Vec2 p) const {
        return a * p.x * p.x + b * p.x * p.y + c * p.y * p.y + d * p.x +
               e * p.y + f;
    }
    Eigen::Matrix3d full_matrix() const {
        Eigen::Matrix3d m;
        m << a, b / 2, d / 2, b / 2, c, e / 2, d / 2, e / 2, f;
        return m;
    }
};

enum class ConicClass { Ellipse, Parabola, Hyperbola, Degenerate };

inline const char* to_string(ConicClass c) {
    switch (c) {
        case ConicClass::Ellipse: return "Ellipse";
        case ConicClass::Parabola: return "Parabola";
        case ConicClass::Hyperbola: return "Hyperbola";
        case ConicClass::Degenerate: return "Degenerate";
    }
    return "?";
}

namespace detail {

inline ConicCoeffs normalize_coeffs(std::array<double, 6> c) {
    double n = 0.0;
    for (double v : c) n += v * v;
    n = std::sqrt(n);
    if (n == 0.0) throw DegeneratePencilError("zero conic vector");
    double sign = 1.0;
    for (double v : c) {
        if (std::abs(v) > 1e-13 * n) {
            sign = v > 0.0 ? 1.0 : -1.0;
            break;
        }
    }
    for (double& v : c) v *= sign / n;
    return {c[0], c[1], c[2], c[3], c[4], c[5]};
}

}  // namespace detail

// Unique conic through 5 pairwise distinct points, via the null vector of the
// 5x6 incidence matrix. Points are centered and scaled internally before the
// singular value decomposition, and the coefficients mapped back, so the fit
// is well conditioned regardless of where the points sit. Throws
// DegeneratePencilError when the null space has dimension >= 2 (e.g. four
// collinear points).
inline ConicCoeffs fit_conic(const std::array<Vec2, 5>& pts,
                             double tol = 1e-9) {
    double scale = 1.0;
    for (const Vec2& p : pts)
        scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
    for (size_t i = 0; i < 5; ++i)
        for (size_t j = i + 1; j < 5; ++j)
            if (dist(pts[i], pts[j]) <= tol * scale)
                throw InputError("fit_conic: coincident input points");

    Vec2 mu{0, 0};
    for (const Vec2& p : pts) mu = mu + 0.2 * p;
    double rms = 0.0;
    for (const Vec2& p : pts) rms += norm2(p - mu);
    const double sigma = std::sqrt(rms / 5.0);

    Eigen::Matrix<double, 5, 6> A;
    for (int i = 0; i < 5; ++i) {
        const double x = (pts[i].x - mu.x) / sigma;
        const double y = (pts[i].y - mu.y) / sigma;
        A.row(i) << x * x, x * y, y * y, x, y, 1.0;
    }
    Eigen::JacobiSVD<Eigen::Matrix<double, 5, 6>> svd(
        A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv(4) <= 1e-10 * sv(0))
        throw DegeneratePencilError(
            "five-point pencil is degenerate (null space dimension >= 2)");
    Eigen::Matrix<double, 6, 1> n = svd.matrixV().col(5);

    // Map the conic matrix back to the original frame: with x' = (x - mu)/s,
    // the original matrix is T^t M' T where T implements the normalization.
    Eigen::Matrix3d Mn;
    Mn << n(0), n(1) / 2, n(3) / 2, n(1) / 2, n(2), n(4) / 2, n(3) / 2,
        n(4) / 2, n(5);
    Eigen::Matrix3d T;
    T << 1.0 / sigma, 0, -mu.x / sigma, 0, 1.0 / sigma, -mu.y / sigma, 0, 0, 1;
    const Eigen::Matrix3d M = T.transpose() * Mn * T;
    return detail::normalize_coeffs({M(0, 0), 2 * M(0, 1), M(1, 1),
                                     2 * M(0, 2), 2 * M(1, 2), M(2, 2)});
}

// Discriminant classification after a rank check on the full 3x3 matrix.
// Coefficients are renormalized internally so tol acts on unit scale.
inline ConicClass classify_conic(const ConicCoeffs& coeffs,
                                 double tol = 1e-9) {
    const ConicCoeffs c = detail::normalize_coeffs(coeffs.as_array());
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(c.full_matrix());
    if (svd.singularValues()(2) <= tol) return ConicClass::Degenerate;
    const double disc = c.discriminant();
    if (disc < -tol) return ConicClass::Ellipse;
    if (disc > tol) return ConicClass::Hyperbola;
    return ConicClass::Parabola;
}

}  // namespace auxetic
