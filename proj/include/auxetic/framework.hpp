#pragma once
// Two-orbit periodic frameworks in lattice coordinates. One vertex orbit is
// the integer lattice Z^d, the other is q + Z^d; the representative at q has
// m neighbors at integer offsets n_0..n_{m-1} (n_0 = 0 after normalization).
// With omega the Gram matrix of the chosen period generators, the squared
// bar lengths impose
//
//     <omega (n_i - q), n_i - q> = s_i ,   i = 0..m-1,
//
// a system in (q, omega) with flexibility f = d + d(d+1)/2 - m. Subtracting
// the i = 0 equation linearizes rows 1..d in the product omega*q; offsets
// beyond the basis add affine constraints on omega alone via their exact
// rational dependence on the basis offsets.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "errors.hpp"
#include "rational.hpp"
#include "symmetric.hpp"

namespace auxetic {

struct FrameworkSpec {
    int dimension = 0;
    std::vector<std::vector<long long>> offsets;  // n_0..n_{m-1}
    std::vector<double> squared_lengths;          // s_0..s_{m-1}

    int m() const { return (int)offsets.size(); }
    int packed_dim() const { return dimension * (dimension + 1) / 2; }
    // Degrees of freedom of the deformation space (can be <= 0).
    int flexibility() const { return dimension + packed_dim() - m(); }
};

struct LatticeConfig {
    std::vector<double> q;
    SymMatrix omega;
};

enum class AuxeticStatus { StrictlyAuxetic, Boundary, NonAuxetic };

inline const char* to_string(AuxeticStatus s) {
    switch (s) {
        case AuxeticStatus::StrictlyAuxetic: return "StrictlyAuxetic";
        case AuxeticStatus::Boundary: return "Boundary";
        case AuxeticStatus::NonAuxetic: return "NonAuxetic";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Validation

// Normalizes n_0 to the origin, checks connectivity and distinctness, and
// reorders offsets 1..m-1 if needed so that the first d of them are linearly
// independent (they serve as the period basis). Throws UnderconnectedError /
// DuplicateEdgeError / BadBasisError.
inline FrameworkSpec validate_spec(const FrameworkSpec& spec) {
    const int d = spec.dimension;
    if (d < 2) throw InputError("lattice dimension must be >= 2");
    const int m = spec.m();
    if ((int)spec.squared_lengths.size() != m)
        throw InputError("offsets and squared_lengths length mismatch");
    if (m < d + 1)
        throw UnderconnectedError(
            "need at least d+1 edge orbits to pin down the period lattice");
    for (const auto& n : spec.offsets)
        if ((int)n.size() != d) throw InputError("offset dimension mismatch");
    for (double s : spec.squared_lengths)
        if (!(s > 0.0) || !std::isfinite(s))
            throw InputError("squared lengths must be positive and finite");

    FrameworkSpec out = spec;
    // Normalize so the first offset is the origin.
    const auto base = out.offsets[0];
    for (auto& n : out.offsets)
        for (int k = 0; k < d; ++k) n[k] -= base[k];
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (out.offsets[i] == out.offsets[j])
                throw DuplicateEdgeError("duplicate edge offsets at indices " +
                                         std::to_string(i) + "," +
                                         std::to_string(j));

    // Greedy exact-rank basis selection among offsets 1..m-1: offset j is
    // promoted to position (row+1) as soon as it enlarges the row space.
    std::vector<std::vector<Rational>> rows;  // eliminated pivot rows
    int next = 1;
    for (int pos = 1; pos <= d; ++pos) {
        bool found = false;
        for (int j = next; j < m; ++j) {
            std::vector<Rational> v(d);
            for (int k = 0; k < d; ++k) v[k] = Rational(out.offsets[j][k]);
            for (const auto& r : rows) {
                int p = 0;
                while (p < d && r[p].is_zero()) ++p;
                if (p == d || v[p].is_zero()) continue;
                const Rational f = v[p] / r[p];
                for (int k = p; k < d; ++k) v[k] = v[k] - f * r[k];
            }
            bool zero = true;
            for (const auto& e : v) zero = zero && e.is_zero();
            if (!zero) {
                rows.push_back(v);
                std::swap(out.offsets[next], out.offsets[j]);
                std::swap(out.squared_lengths[next], out.squared_lengths[j]);
                found = true;
                break;
            }
        }
        if (!found)
            throw BadBasisError(
                "no d linearly independent offsets available as period basis");
        ++next;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exact period dependence

// Row k-d-1 expresses offset n_k (k = d+1..m-1) in the basis n_1..n_d:
// n_k = sum_i coeff[i] * n_i, exactly over the rationals.
struct DependenceTable {
    std::vector<std::vector<Rational>> rows;
};

inline DependenceTable dependence_coeffs(const FrameworkSpec& spec) {
    const int d = spec.dimension;
    DependenceTable table;
    for (int k = d + 1; k < spec.m(); ++k) {
        std::vector<std::vector<Rational>> A(d, std::vector<Rational>(d));
        std::vector<Rational> b(d);
        for (int r = 0; r < d; ++r) {
            for (int i = 0; i < d; ++i)
                A[r][i] = Rational(spec.offsets[i + 1][r]);
            b[r] = Rational(spec.offsets[k][r]);
        }
        table.rows.push_back(solve_rational(A, b));
    }
    return table;
}

// ---------------------------------------------------------------------------
// Residuals and derived linear structure

inline std::vector<double> edge_vector(const FrameworkSpec& spec,
                                       const LatticeConfig& config, int i) {
    std::vector<double> x(spec.dimension);
    for (int k = 0; k < spec.dimension; ++k)
        x[k] = (double)spec.offsets[i][k] - config.q[k];
    return x;
}

inline std::vector<double> residuals(const FrameworkSpec& spec,
                                     const LatticeConfig& config) {
    if ((int)config.q.size() != spec.dimension ||
        config.omega.dim() != spec.dimension)
        throw InputError("configuration dimension mismatch");
    std::vector<double> r(spec.m());
    for (int i = 0; i < spec.m(); ++i)
        r[i] = config.omega.quad_form(edge_vector(spec, config, i)) -
               spec.squared_lengths[i];
    return r;
}

// The product omega*q, solved from the linearized rows
//   2 <omega q, n_i> = s_0 - s_i + <omega n_i, n_i>,  i = 1..d.
// The result is affine (degree one) in the entries of omega.
inline std::vector<double> solve_omega_q(const FrameworkSpec& spec,
                                         const SymMatrix& omega) {
    const int d = spec.dimension;
    Eigen::MatrixXd A(d, d);
    Eigen::VectorXd b(d);
    for (int i = 1; i <= d; ++i) {
        std::vector<double> n(d);
        for (int k = 0; k < d; ++k) {
            n[k] = (double)spec.offsets[i][k];
            A(i - 1, k) = 2.0 * n[k];
        }
        b(i - 1) = spec.squared_lengths[0] - spec.squared_lengths[i] +
                   omega.quad_form(n);
    }
    const Eigen::VectorXd y = A.fullPivLu().solve(b);
    return std::vector<double>(y.data(), y.data() + d);
}

// Affine functional on the packed entries of omega:
//   L(omega) = sum_k coeff[k] * packed[k] + constant.
struct AffineFunctional {
    std::vector<double> coeff;
    double constant = 0.0;

    double evaluate(const SymMatrix& omega) const {
        double v = constant;
        for (size_t k = 0; k < coeff.size(); ++k)
            v += coeff[k] * omega.packed()[k];
        return v;
    }
};

namespace detail {

// Packed coefficients of the quadratic form n^T omega n in omega.
inline std::vector<double> quad_form_coeffs(const std::vector<long long>& n,
                                            int d) {
    std::vector<double> c;
    c.reserve(d * (d + 1) / 2);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j)
            c.push_back(i == j ? (double)n[i] * (double)n[j]
                               : 2.0 * (double)n[i] * (double)n[j]);
    return c;
}

}  // namespace detail

// The m-1-d affine constraints on omega alone obtained by eliminating
// omega*q from the rows of dependent offsets.
inline std::vector<AffineFunctional> linear_constraints_omega(
    const FrameworkSpec& spec) {
    const int d = spec.dimension;
    const int T = spec.packed_dim();
    const DependenceTable dep = dependence_coeffs(spec);
    std::vector<AffineFunctional> out;
    for (int k = d + 1; k < spec.m(); ++k) {
        const auto& a = dep.rows[k - d - 1];
        AffineFunctional L;
        L.coeff.assign(T, 0.0);
        for (int i = 1; i <= d; ++i) {
            const double ai = a[i - 1].to_double();
            const auto qc = detail::quad_form_coeffs(spec.offsets[i], d);
            for (int t = 0; t < T; ++t) L.coeff[t] += ai * qc[t];
            L.constant +=
                ai * (spec.squared_lengths[0] - spec.squared_lengths[i]);
        }
        const auto qk = detail::quad_form_coeffs(spec.offsets[k], d);
        for (int t = 0; t < T; ++t) L.coeff[t] -= qk[t];
        L.constant -= spec.squared_lengths[0] - spec.squared_lengths[k];
        out.push_back(std::move(L));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rigidity Jacobian and tangent space

// Unknown vector layout: (q_0..q_{d-1}, packed upper triangle of omega).
inline Eigen::MatrixXd jacobian(const FrameworkSpec& spec,
                                const LatticeConfig& config) {
    const int d = spec.dimension;
    const int T = spec.packed_dim();
    Eigen::MatrixXd J(spec.m(), d + T);
    for (int i = 0; i < spec.m(); ++i) {
        const auto x = edge_vector(spec, config, i);
        const auto wx = config.omega.apply(x);
        for (int k = 0; k < d; ++k) J(i, k) = -2.0 * wx[k];
        int col = d;
        for (int a = 0; a < d; ++a)
            for (int b = a; b < d; ++b)
                J(i, col++) = (a == b) ? x[a] * x[a] : 2.0 * x[a] * x[b];
    }
    return J;
}

struct TangentVector {
    std::vector<double> dq;
    SymMatrix domega;
};

struct TangentSpace {
    std::vector<TangentVector> basis;  // orthonormal in R^{d+T}
    int rank = 0;
    bool singular_point = false;  // numerical null space larger than f
};

inline TangentVector split_tangent(const FrameworkSpec& spec,
                                   const Eigen::VectorXd& v) {
    const int d = spec.dimension;
    TangentVector t;
    t.dq.assign(v.data(), v.data() + d);
    std::vector<double> packed(v.data() + d, v.data() + d + spec.packed_dim());
    t.domega = SymMatrix::from_packed(d, packed);
    return t;
}

inline TangentSpace tangent_space(const FrameworkSpec& spec,
                                  const LatticeConfig& config,
                                  double tol = 1e-9) {
    const Eigen::MatrixXd J = jacobian(spec, config);
    const int N = (int)J.cols();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    const double thresh = tol * (1.0 + smax);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++rank;
    TangentSpace ts;
    ts.rank = rank;
    const int nulldim = N - rank;
    ts.singular_point = nulldim > std::max(spec.flexibility(), 0);
    for (int i = rank; i < N; ++i)
        ts.basis.push_back(split_tangent(spec, svd.matrixV().col(i)));
    return ts;
}

// ---------------------------------------------------------------------------
// Pointwise auxetic classification

struct LocalAuxeticResult {
    AuxeticStatus status = AuxeticStatus::NonAuxetic;
    // Best achievable minimum eigenvalue of a unit tangent's omega-velocity
    // (over both orientations / the tangent sphere).
    double best_min_eigenvalue = 0.0;
    SymMatrix best_direction;
};

namespace detail {

// Maximize the (concave) minimum eigenvalue of sum_k c_k D_k over the unit
// sphere in c by projected gradient ascent from one start.
inline std::pair<double, Eigen::VectorXd> max_min_eig_from(
    const std::vector<SymMatrix>& D, Eigen::VectorXd c) {
    const int f = (int)D.size();
    const int d = D[0].dim();
    c.normalize();
    auto combo = [&](const Eigen::VectorXd& cc) {
        SymMatrix s(d);
        for (int k = 0; k < f; ++k) s = s + D[k] * cc(k);
        return s;
    };
    auto value = [&](const Eigen::VectorXd& cc) {
        return sym_eigenvalues(combo(cc)).front();
    };
    double fv = value(c);
    double step = 0.5;
    for (int it = 0; it < 200 && step > 1e-14; ++it) {
        const Eigen::VectorXd u = sym_eigensystem(combo(c)).second.col(0);
        Eigen::VectorXd g(f);
        for (int k = 0; k < f; ++k) g(k) = u.dot(D[k].dense() * u);
        g -= g.dot(c) * c;  // project onto the sphere tangent
        if (g.norm() < 1e-14) break;
        bool improved = false;
        while (step > 1e-14) {
            Eigen::VectorXd cn = (c + step * g).normalized();
            const double fn = value(cn);
            if (fn > fv + 1e-16) {
                c = cn;
                fv = fn;
                improved = true;
                step *= 1.4;
                break;
            }
            step *= 0.5;
        }
        if (!improved) break;
    }
    return {fv, c};
}

}  // namespace detail

// Classifies a configuration by its tangent omega-velocities. With
// flexibility 1 the single tangent is tested directly (both orientations);
// with flexibility >= 2 the minimum eigenvalue is maximized over the unit
// tangent sphere by multi-start projected gradient ascent (20 starts).
inline LocalAuxeticResult local_auxetic_test(const FrameworkSpec& spec,
                                             const LatticeConfig& config,
                                             double tol,
                                             unsigned rng_seed) {
    const TangentSpace ts = tangent_space(spec, config, tol);
    LocalAuxeticResult res;
    if (ts.basis.empty()) {
        res.status = AuxeticStatus::NonAuxetic;
        res.best_direction = SymMatrix(spec.dimension);
        return res;
    }
    std::vector<SymMatrix> D;
    double dscale = 0.0;
    for (const auto& t : ts.basis) {
        D.push_back(t.domega);
        dscale = std::max(dscale, t.domega.max_abs());
    }
    const double band = tol * (1.0 + dscale);
    if ((int)D.size() == 1) {
        const SymMatrix& dw = D[0];
        res.best_direction = dw;
        if (dw.max_abs() <= 1e-12) {
            // Tangent motion leaves the Gram matrix still: boundary case.
            res.status = AuxeticStatus::Boundary;
            res.best_min_eigenvalue = 0.0;
            return res;
        }
        const auto ep = sym_eigenvalues(dw);
        res.best_min_eigenvalue = std::max(ep.front(), -ep.back());
        switch (psd_status(dw, band)) {
            case Definiteness::PositiveDefinite:
            case Definiteness::NegativeDefinite:
                res.status = AuxeticStatus::StrictlyAuxetic;
                break;
            case Definiteness::PositiveSemidefiniteSingular:
            case Definiteness::NegativeSemidefiniteSingular:
            case Definiteness::Zero:
                res.status = AuxeticStatus::Boundary;
                break;
            default: res.status = AuxeticStatus::NonAuxetic;
        }
        return res;
    }

    const int f = (int)D.size();
    std::mt19937_64 rng(rng_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double best = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd bestc;
    for (int s = 0; s < 20; ++s) {
        Eigen::VectorXd c(f);
        if (s < 2 * f) {
            c.setZero();
            c(s / 2) = (s % 2 == 0) ? 1.0 : -1.0;
        } else {
            for (int k = 0; k < f; ++k) c(k) = gauss(rng);
            if (c.norm() < 1e-12) c(0) = 1.0;
        }
        const auto [v, copt] = detail::max_min_eig_from(D, c);
        if (v > best) {
            best = v;
            bestc = copt;
        }
    }
    SymMatrix dw(spec.dimension);
    for (int k = 0; k < f; ++k) dw = dw + D[k] * bestc(k);
    res.best_min_eigenvalue = best;
    res.best_direction = dw;
    if (best > band)
        res.status = AuxeticStatus::StrictlyAuxetic;
    else if (best >= -band)
        res.status = AuxeticStatus::Boundary;
    else
        res.status = AuxeticStatus::NonAuxetic;
    return res;
}

inline LocalAuxeticResult local_auxetic_test(const FrameworkSpec& spec,
                                             const LatticeConfig& config,
                                             double tol = 1e-9) {
    return local_auxetic_test(spec, config, tol, 0x5eedu);
}

// ---------------------------------------------------------------------------
// Boundary certificates: the (d+1)x(d+1) Gram matrix of the edge vectors
// v_i = omega^(1/2)(n_i - q), i = 0..d. On a consistent configuration its
// diagonal equals the first d+1 squared lengths, it is positive semidefinite
// of rank exactly d, and the affine functionals on omega vanish.

struct GramCertificates {
    SymMatrix G;
    double diag_deviation = 0.0;     // max |G_ii - s_i|
    double min_abs_eigenvalue = 0.0; // |smallest eigenvalue|
    double second_eigenvalue = 0.0;  // second-smallest eigenvalue
    double constraint_residual = 0.0;
};

inline GramCertificates gram_certificates(const FrameworkSpec& spec,
                                          const LatticeConfig& config) {
    const int d = spec.dimension;
    GramCertificates cert{SymMatrix(d + 1)};
    std::vector<std::vector<double>> edges(d + 1);
    for (int i = 0; i <= d; ++i) edges[i] = edge_vector(spec, config, i);
    for (int i = 0; i <= d; ++i) {
        const auto wi = config.omega.apply(edges[i]);
        for (int j = i; j <= d; ++j) {
            double v = 0.0;
            for (int k = 0; k < d; ++k) v += wi[k] * edges[j][k];
            cert.G.ref(i, j) = v;
        }
    }
    for (int i = 0; i <= d; ++i)
        cert.diag_deviation =
            std::max(cert.diag_deviation,
                     std::abs(cert.G(i, i) - spec.squared_lengths[i]));
    const auto eig = sym_eigenvalues(cert.G);
    cert.min_abs_eigenvalue = std::abs(eig.front());
    cert.second_eigenvalue = eig.size() > 1 ? eig[1] : 0.0;
    for (const auto& L : linear_constraints_omega(spec))
        cert.constraint_residual = std::max(
            cert.constraint_residual, std::abs(L.evaluate(config.omega)));
    return cert;
}

// Strict variant: verifies the certificates and throws InconsistentConfig
// when the configuration does not lie on the spec's solution set.
inline SymMatrix to_gram_G(const FrameworkSpec& spec,
                           const LatticeConfig& config, double tol = 1e-9) {
    const GramCertificates c = gram_certificates(spec, config);
    double smax = 1.0;
    for (double s : spec.squared_lengths) smax = std::max(smax, std::abs(s));
    const double band = tol * (1.0 + smax);
    if (c.diag_deviation > band)
        throw InconsistentConfigError("Gram diagonal deviates from s by " +
                                      std::to_string(c.diag_deviation));
    if (c.min_abs_eigenvalue > band)
        throw InconsistentConfigError(
            "Gram matrix is not singular: smallest eigenvalue " +
            std::to_string(c.min_abs_eigenvalue));
    if (c.second_eigenvalue <= band)
        throw InconsistentConfigError(
            "Gram matrix rank below d: second eigenvalue " +
            std::to_string(c.second_eigenvalue));
    return c.G;
}

}  // namespace auxetic
