#pragma once
// Numerical continuation of the one-dimensional solution curves of a
// two-orbit framework in lattice coordinates x = (q, omega). A tangent
// predictor is followed by a Gauss-Newton corrector (minimum-norm via SVD)
// iterated to machine precision; steps adapt to corrector failures, sharp
// turns, and the approach to the boundary of the positive-definite cone,
// where the period lattice degenerates and the walk stops.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "errors.hpp"
#include "framework.hpp"
#include "geometry.hpp"
#include "symmetric.hpp"

namespace auxetic {

enum class PathVerdict { Closed, BoundaryHit, MaxSteps };

inline const char* to_string(PathVerdict v) {
    switch (v) {
        case PathVerdict::Closed: return "Closed";
        case PathVerdict::BoundaryHit: return "BoundaryHit";
        case PathVerdict::MaxSteps: return "MaxSteps";
    }
    return "?";
}

struct LatticePath {
    FrameworkSpec spec;
    std::vector<double> params;  // cumulative arclength, normalized to [0,1]
    std::vector<LatticeConfig> configs;
    bool closed = false;
    PathVerdict verdict = PathVerdict::MaxSteps;
};

// Raised when the walk cannot make progress; carries what was traced so
// callers can persist the partial result.
struct ContinuationFailure : ContinuationError {
    ContinuationFailure(const std::string& what, LatticePath partial_path)
        : ContinuationError(what, (long)partial_path.configs.size() - 1),
          partial(std::move(partial_path)) {}
    LatticePath partial;
};

namespace detail {

inline Eigen::VectorXd pack_config(const LatticeConfig& c) {
    const int d = (int)c.q.size();
    const int T = SymMatrix::packed_size(c.omega.dim());
    Eigen::VectorXd x(d + T);
    for (int i = 0; i < d; ++i) x(i) = c.q[i];
    for (int t = 0; t < T; ++t) x(d + t) = c.omega.packed()[t];
    return x;
}

inline LatticeConfig unpack_config(int d, const Eigen::VectorXd& x) {
    LatticeConfig c;
    c.q.assign(x.data(), x.data() + d);
    std::vector<double> packed(x.data() + d, x.data() + x.size());
    c.omega = SymMatrix::from_packed(d, packed);
    return c;
}

inline Eigen::VectorXd residual_vec(const FrameworkSpec& spec,
                                    const Eigen::VectorXd& x) {
    const auto r = residuals(spec, unpack_config(spec.dimension, x));
    return Eigen::Map<const Eigen::VectorXd>(r.data(), (long)r.size());
}

inline double length_scale(const FrameworkSpec& spec) {
    double s = 1.0;
    for (double v : spec.squared_lengths) s = std::max(s, std::abs(v));
    return s;
}

// Gauss-Newton with minimum-norm SVD solve and simple backtracking, run to
// stagnation (machine precision in practice). Returns the final residual
// norm; callers judge acceptance against their own target.
inline double correct(const FrameworkSpec& spec, Eigen::VectorXd& x) {
    double fn = residual_vec(spec, x).lpNorm<Eigen::Infinity>();
    for (int it = 0; it < 40; ++it) {
        if (fn == 0.0) break;
        const LatticeConfig c = unpack_config(spec.dimension, x);
        const Eigen::MatrixXd J = jacobian(spec, c);
        const Eigen::VectorXd F = residual_vec(spec, x);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(
            J, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(1e-12);
        Eigen::VectorXd delta = svd.solve(-F);
        double scale = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 8; ++bt) {
            Eigen::VectorXd xn = x + scale * delta;
            const double fnn =
                residual_vec(spec, xn).lpNorm<Eigen::Infinity>();
            if (fnn < fn) {
                x = xn;
                fn = fnn;
                moved = true;
                break;
            }
            scale *= 0.5;
        }
        if (!moved) break;
        if (fn <= 1e-15 * length_scale(spec)) break;
    }
    return fn;
}

// Unit tangent at x: the right-singular vector of the smallest singular
// value. Sets *singular when the numerical nullity exceeds one.
inline Eigen::VectorXd tangent_at(const FrameworkSpec& spec,
                                  const Eigen::VectorXd& x, double tol,
                                  bool* singular) {
    const LatticeConfig c = unpack_config(spec.dimension, x);
    const Eigen::MatrixXd J = jacobian(spec, c);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double thresh = tol * (1.0 + (sv.size() ? sv(0) : 0.0));
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++rank;
    const int N = (int)J.cols();
    if (singular) *singular = (N - rank) > 1;
    return svd.matrixV().col(N - 1);
}

inline double min_eig_omega(const FrameworkSpec& spec,
                            const Eigen::VectorXd& x) {
    const LatticeConfig c = unpack_config(spec.dimension, x);
    return sym_eigenvalues(c.omega).front();
}

// Distance from p to the segment [a, b] in R^N.
inline double point_segment_distance(const Eigen::VectorXd& p,
                                     const Eigen::VectorXd& a,
                                     const Eigen::VectorXd& b) {
    const Eigen::VectorXd ab = b - a;
    const double den = ab.squaredNorm();
    double t = den > 0.0 ? (p - a).dot(ab) / den : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

inline void normalize_params(LatticePath& path,
                             const std::vector<double>& arc) {
    const double total = arc.empty() ? 0.0 : arc.back();
    path.params.resize(arc.size());
    for (size_t i = 0; i < arc.size(); ++i)
        path.params[i] = total > 0.0 ? arc[i] / total : 0.0;
}

}  // namespace detail

// Traces the solution curve through config0 in the given direction (+1/-1
// along the initial tangent). Stops when the curve returns to the start
// (Closed), reaches the boundary of the positive-definite cone in omega
// (BoundaryHit), or exhausts max_steps (MaxSteps). Requires flexibility 1.
inline LatticePath continue_path(const FrameworkSpec& raw_spec,
                                 const LatticeConfig& config0, double step,
                                 int max_steps = 4000, int direction = 1,
                                 double tol = 1e-9) {
    const FrameworkSpec spec = validate_spec(raw_spec);
    if (spec.flexibility() != 1)
        throw InputError("continuation requires flexibility exactly 1");
    if (!(step > 0.0) || !std::isfinite(step))
        throw InputError("step must be positive");
    if (max_steps < 1) throw InputError("max_steps must be positive");
    if (direction != 1 && direction != -1)
        throw InputError("direction must be +1 or -1");

    const double sscale = detail::length_scale(spec);
    const double accept = 1e-10 * (1.0 + sscale);

    LatticePath path;
    path.spec = spec;

    Eigen::VectorXd x0 = detail::pack_config(config0);
    if (detail::correct(spec, x0) > accept)
        throw InconsistentConfigError(
            "initial configuration does not satisfy the length equations");
    {
        const double me0 = detail::min_eig_omega(spec, x0);
        const LatticeConfig c0 = detail::unpack_config(spec.dimension, x0);
        if (me0 <= tol * (1.0 + c0.omega.max_abs()))
            throw InputError(
                "initial omega already on the positive-definite boundary");
    }

    bool singular = false;
    Eigen::VectorXd t = detail::tangent_at(spec, x0, tol, &singular);
    if (singular)
        throw ContinuationFailure("singular point at the start of the walk",
                                  path);
    t *= (double)direction;
    const Eigen::VectorXd t0 = t;

    std::vector<double> arc{0.0};
    path.configs.push_back(detail::unpack_config(spec.dimension, x0));

    Eigen::VectorXd x = x0;
    const double hmax = step;
    const double hmin = step * 1e-7;
    double h = step;
    double me_prev = detail::min_eig_omega(spec, x0);
    int streak = 0;

    auto fail = [&](const std::string& why) -> ContinuationFailure {
        detail::normalize_params(path, arc);
        return ContinuationFailure(why, path);
    };

    for (int k = 0; k < max_steps; ++k) {
        bool accepted = false;
        Eigen::VectorXd xn, tn;
        while (!accepted) {
            xn = x + h * t;
            const double res = detail::correct(spec, xn);
            bool ok = res <= accept;
            if (ok) {
                // Branches of the variety can meet at the cone boundary, so
                // a candidate that already sits on the boundary is accepted
                // without a tangent health check; the walk ends there anyway.
                const LatticeConfig ct =
                    detail::unpack_config(spec.dimension, xn);
                const double met = sym_eigenvalues(ct.omega).front();
                if (met <= tol * (1.0 + ct.omega.max_abs())) {
                    tn = t;
                } else {
                    bool sing = false;
                    tn = detail::tangent_at(spec, xn, tol, &sing);
                    if (tn.dot(t) < 0.0) tn = -tn;
                    // Sharp turn at full step hints at a missed fold; creep.
                    if (sing || (tn.dot(t) < 0.2 && h > 8.0 * hmin))
                        ok = false;
                }
            }
            if (ok) {
                accepted = true;
            } else {
                h *= 0.5;
                streak = -4;  // poison the growth streak
                if (h < hmin)
                    throw fail("corrector failed to converge at minimum step");
            }
        }

        const LatticeConfig cn = detail::unpack_config(spec.dimension, xn);
        const double me = sym_eigenvalues(cn.omega).front();
        const double btol = tol * (1.0 + cn.omega.max_abs());

        arc.push_back(arc.back() + (xn - x).norm());
        path.configs.push_back(cn);

        if (me <= btol) {
            path.verdict = PathVerdict::BoundaryHit;
            path.closed = false;
            detail::normalize_params(path, arc);
            return path;
        }

        // Closure test against the start point, once clearly away from it.
        if ((int)path.configs.size() >= 8 && arc.back() > 8.0 * h) {
            const double dseg = detail::point_segment_distance(x0, x, xn);
            if (dseg <= 0.6 * h && tn.dot(t0) > 0.5) {
                path.configs.push_back(
                    detail::unpack_config(spec.dimension, x0));
                arc.push_back(arc.back() + (x0 - xn).norm());
                path.verdict = PathVerdict::Closed;
                path.closed = true;
                detail::normalize_params(path, arc);
                return path;
            }
        }

        // Approach control: when omega degenerates, aim the step so the
        // smallest eigenvalue roughly halves each step. Halving h itself
        // would stall: the eigenvalue decays linearly in arc length, so a
        // geometric step sequence converges before reaching the boundary.
        if (me < 0.02 * (1.0 + cn.omega.max_abs()) && me < me_prev) {
            const double slope = (me_prev - me) / h;
            h = std::clamp(0.5 * me / slope, 4.0 * hmin, h);
        } else if (++streak >= 3) {
            h = std::min(hmax, 1.4 * h);
            streak = 0;
        }

        me_prev = me;
        x = xn;
        t = tn;
    }

    path.verdict = PathVerdict::MaxSteps;
    path.closed = false;
    detail::normalize_params(path, arc);
    return path;
}

// Convenience wrapper: walks forward; when the forward walk ends on the
// boundary, also walks backward and stitches the two halves into one path
// running boundary-to-boundary.
inline LatticePath trace_component(const FrameworkSpec& spec,
                                   const LatticeConfig& config0, double step,
                                   int max_steps = 4000, double tol = 1e-9) {
    LatticePath fwd = continue_path(spec, config0, step, max_steps, 1, tol);
    if (fwd.verdict != PathVerdict::BoundaryHit) return fwd;
    LatticePath bwd = continue_path(spec, config0, step, max_steps, -1, tol);
    LatticePath full;
    full.spec = fwd.spec;
    full.closed = false;
    full.verdict = bwd.verdict == PathVerdict::MaxSteps
                       ? PathVerdict::MaxSteps
                       : PathVerdict::BoundaryHit;
    for (size_t i = bwd.configs.size(); i-- > 1;)
        full.configs.push_back(bwd.configs[i]);
    for (const auto& c : fwd.configs) full.configs.push_back(c);
    std::vector<double> arc{0.0};
    for (size_t i = 1; i < full.configs.size(); ++i) {
        const double d = (detail::pack_config(full.configs[i]) -
                          detail::pack_config(full.configs[i - 1]))
                             .norm();
        arc.push_back(arc.back() + d);
    }
    detail::normalize_params(full, arc);
    return full;
}

// Deterministic seeding: omega starts as a scaled identity projected onto
// the affine constraint set, q from a fixed-seed uniform; each restart is
// polished by the Gauss-Newton corrector until a positive-definite solution
// appears.
inline LatticeConfig seed_config(const FrameworkSpec& raw_spec,
                                 int restarts = 50,
                                 unsigned rng_seed = 0x5eedc0de,
                                 double tol = 1e-9) {
    const FrameworkSpec spec = validate_spec(raw_spec);
    if (restarts < 1) throw InputError("restarts must be positive");
    const int d = spec.dimension;
    const int T = spec.packed_dim();

    double smean = 0.0;
    for (double s : spec.squared_lengths) smean += s;
    smean /= (double)spec.m();
    double nmean = 0.0;
    for (int i = 1; i < spec.m(); ++i) {
        double n2 = 0.0;
        for (long long v : spec.offsets[i]) n2 += (double)(v * v);
        nmean += n2;
    }
    nmean /= (double)(spec.m() - 1);
    const double alpha = smean / std::max(1.0, nmean);

    Eigen::VectorXd w(T);
    {
        const SymMatrix base = SymMatrix::identity(d) * alpha;
        for (int i = 0; i < T; ++i) w(i) = base.packed()[i];
        const auto cons = linear_constraints_omega(spec);
        if (!cons.empty()) {
            Eigen::MatrixXd A((int)cons.size(), T);
            Eigen::VectorXd r((int)cons.size());
            for (size_t k = 0; k < cons.size(); ++k) {
                for (int t = 0; t < T; ++t) A((int)k, t) = cons[k].coeff[t];
                r((int)k) = cons[k].constant;
            }
            // Project w onto {A w + r = 0} (minimum-norm correction).
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(
                A, Eigen::ComputeThinU | Eigen::ComputeThinV);
            svd.setThreshold(1e-12);
            w -= svd.solve(A * w + r);
        }
    }

    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> uq(-1.5, 1.5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double accept = 1e-10 * (1.0 + detail::length_scale(spec));
    for (int r = 0; r < restarts; ++r) {
        Eigen::VectorXd x(d + T);
        for (int i = 0; i < d; ++i) x(i) = uq(rng);
        for (int t = 0; t < T; ++t)
            x(d + t) = w(t) + (r == 0 ? 0.0 : 0.05 * alpha * gauss(rng));
        if (detail::correct(spec, x) > accept) continue;
        const LatticeConfig c = detail::unpack_config(d, x);
        const double me = sym_eigenvalues(c.omega).front();
        if (me > 10.0 * tol * (1.0 + c.omega.max_abs())) return c;
    }
    throw ContinuationError("seeding found no positive-definite solution",
                            -1);
}

// ---------------------------------------------------------------------------
// Implicit cubic through the projected q-samples (the planar quadrilateral
// family: d = 2, m = 4). The coefficients live in a centered and scaled
// frame recorded alongside them; evaluate() maps a raw point through it.

struct CubicProjection {
    std::vector<Vec2> points;
    // Monomial order: 1, x, y, x^2, xy, y^2, x^3, x^2 y, x y^2, y^3 in the
    // normalized frame x' = (x - center) / scale.
    std::array<double, 10> coeffs{};
    Vec2 center;
    double scale = 1.0;
    double max_residual = 0.0;
    bool fit_warning = false;

    double evaluate(Vec2 p) const {
        const double x = (p.x - center.x) / scale;
        const double y = (p.y - center.y) / scale;
        const double mono[10] = {1.0,   x,     y,     x * x, x * y,
                                 y * y, x * x * x, x * x * y, x * y * y,
                                 y * y * y};
        double v = 0.0;
        for (int i = 0; i < 10; ++i) v += coeffs[i] * mono[i];
        return v;
    }
};

inline CubicProjection cubic_projection_samples(const LatticePath& path) {
    if (path.spec.dimension != 2 || path.spec.m() != 4)
        throw InputError(
            "cubic projection applies to the planar 4-bar family only");
    if (path.configs.size() < 10)
        throw InputError("need at least 10 samples for a cubic fit");

    CubicProjection fit;
    for (const auto& c : path.configs)
        fit.points.push_back(Vec2{c.q[0], c.q[1]});

    Vec2 mu{0.0, 0.0};
    for (const auto& p : fit.points) mu = mu + p;
    mu = mu * (1.0 / (double)fit.points.size());
    double rms = 0.0;
    for (const auto& p : fit.points) rms += norm2(p - mu);
    rms = std::sqrt(rms / (double)fit.points.size());
    fit.center = mu;
    fit.scale = rms > 1e-12 ? rms : 1.0;

    const int n = (int)fit.points.size();
    Eigen::MatrixXd M(n, 10);
    for (int i = 0; i < n; ++i) {
        const double x = (fit.points[i].x - mu.x) / fit.scale;
        const double y = (fit.points[i].y - mu.y) / fit.scale;
        M.row(i) << 1.0, x, y, x * x, x * y, y * y, x * x * x, x * x * y,
            x * y * y, y * y * y;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinV);
    const Eigen::VectorXd c = svd.matrixV().col(9);
    // Fix an overall sign for determinism.
    double lead = 0.0;
    for (int i = 0; i < 10; ++i)
        if (std::abs(c(i)) > 1e-12) {
            lead = c(i);
            break;
        }
    const double flip = lead < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < 10; ++i) fit.coeffs[i] = flip * c(i);

    double maxres = 0.0, maxrow = 0.0;
    for (int i = 0; i < n; ++i) {
        maxres = std::max(maxres, std::abs(M.row(i).dot(c)));
        maxrow = std::max(maxrow, M.row(i).norm());
    }
    fit.max_residual = maxres;
    fit.fit_warning = maxres > 1e-6 * std::max(1.0, maxrow);
    return fit;
}

}  // namespace auxetic
