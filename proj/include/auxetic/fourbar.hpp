#pragma once
// Planar quadrilateral linkages ABCD with bars AB, BC, CD, DA and the two
// diagonals AC, BD acting as period generators of a two-orbit framework.
//
// Joint A is placed at the origin, B at (l1, 0), and D at l4 (cos t, sin t);
// C closes the loop as one of the two circle-circle intersections, selected
// by a branch sign. The deformation space of the linkage is parametrized by
// tau in [0, 1]: either one full revolution of the driving angle (a single
// coupler branch), or a "tent" that sweeps a feasible arc on one coupler
// branch and returns on the other, turning around at the dead points where
// the two coupler circles are tangent.
//
// The induced period Gram matrix omega = Gram(AC, BD) has constant
// off-diagonal entry along every deformation (it is fixed by the bar
// lengths), so the Gram velocity is diagonal: a region is auxetic exactly
// when both diagonal lengths are monotone in the same direction.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "conic.hpp"
#include "errors.hpp"
#include "framework.hpp"
#include "geometry.hpp"
#include "symmetric.hpp"

namespace auxetic {

struct LinkLengths {
    double l1 = 1.0;  // AB
    double l2 = 1.0;  // BC
    double l3 = 1.0;  // CD
    double l4 = 1.0;  // DA

    double max_length() const {
        return std::max(std::max(l1, l2), std::max(l3, l4));
    }
};

inline void validate_lengths(const LinkLengths& l) {
    for (double v : {l.l1, l.l2, l.l3, l.l4})
        if (!(v > 0.0) || !std::isfinite(v))
            throw InputError("bar lengths must be positive and finite");
}

enum class GrashofClass { SingleLoop, TwoLoops, NonGeneric };

inline const char* to_string(GrashofClass c) {
    switch (c) {
        case GrashofClass::SingleLoop: return "SingleLoop";
        case GrashofClass::TwoLoops: return "TwoLoops";
        case GrashofClass::NonGeneric: return "NonGeneric";
    }
    return "?";
}

// Connectivity of the deformation space: TwoLoops when shortest + longest
// is less than the sum of the other two bars (two disconnected branches),
// SingleLoop when greater (one connected loop through dead points),
// NonGeneric when any defining inequality is tight within tolerance.
inline GrashofClass grashof_class(const LinkLengths& l, double tol = 1e-9) {
    validate_lengths(l);
    std::vector<double> v{l.l1, l.l2, l.l3, l.l4};
    std::sort(v.begin(), v.end());
    const double atol = tol * (1.0 + v[3]);
    const double slack = v[0] + v[1] + v[2] - v[3];
    if (slack < -atol)
        throw NoAssemblyError("longest bar exceeds the sum of the others");
    if (slack <= atol) return GrashofClass::NonGeneric;
    const double gap = (v[1] + v[2]) - (v[0] + v[3]);
    if (std::abs(gap) <= atol) return GrashofClass::NonGeneric;
    return gap > 0.0 ? GrashofClass::TwoLoops : GrashofClass::SingleLoop;
}

// ---------------------------------------------------------------------------
// Assembly at a single driving angle

struct QuadAssembly {
    Quadrilateral quad;
    bool dead_point = false;  // coupler circles tangent within tolerance
};

// Solves the coupler position for driving angle theta (angle DAB at the
// origin) and branch sign in {+1, -1}. The branch selects the side of the
// diagonal BD on which C lies; with l = (2,1,2,1) at theta = pi/2 the +1
// branch yields C = (2, 1).
inline QuadAssembly solve_coupler(const LinkLengths& l, double theta,
                                  int branch, double tol = 1e-9) {
    validate_lengths(l);
    if (branch != 1 && branch != -1)
        throw InputError("branch must be +1 or -1");
    if (!std::isfinite(theta)) throw InputError("non-finite driving angle");

    const Vec2 pa{0.0, 0.0};
    const Vec2 pb{l.l1, 0.0};
    const Vec2 pd{l.l4 * std::cos(theta), l.l4 * std::sin(theta)};
    const Vec2 u = pd - pb;
    const double dist = norm(u);
    const double len_tol = tol * (1.0 + l.max_length());
    if (dist <= len_tol)
        throw OutOfRangeError("joints B and D coincide; coupler undetermined");
    if (dist - (l.l2 + l.l3) > len_tol)
        throw OutOfRangeError("driving angle leaves the coupler unreachable");
    if (std::abs(l.l2 - l.l3) - dist > len_tol)
        throw OutOfRangeError("driving angle inside the coupler annulus gap");

    const Vec2 uhat = u * (1.0 / dist);
    const double a =
        (dist * dist + l.l2 * l.l2 - l.l3 * l.l3) / (2.0 * dist);
    double h2 = l.l2 * l.l2 - a * a;
    // Near tangency the subtraction cancels; clamp to an exact dead point so
    // both branches agree there and tent traversals close seamlessly.
    const double h2_clamp = 1e-13 * l.l2 * l.l2;
    bool dead = false;
    if (h2 <= h2_clamp) {
        if (h2 < -1e-9 * l.l2 * l.l2)
            throw OutOfRangeError("coupler circles do not intersect");
        h2 = 0.0;
        dead = true;
    }
    const double h = std::sqrt(h2);
    const Vec2 base = pb + uhat * a;
    const Vec2 pc = base + Vec2{uhat.y, -uhat.x} * ((double)branch * h);
    QuadAssembly out;
    out.quad = Quadrilateral{pa, pb, pc, pd};
    out.dead_point = dead || h <= len_tol;
    return out;
}

// ---------------------------------------------------------------------------
// Deformation-path parametrization

enum class SweepMode { FullCircle, Tent };

// Maps tau in [0,1] to (theta, coupler branch). FullCircle: theta runs once
// around from alpha on a fixed branch. Tent: theta rises alpha -> beta on
// branch coupler_start over tau in [0, 1/2], then returns beta -> alpha on
// the opposite branch, so tau = 0, 1/2 land on the dead points.
struct Traversal {
    SweepMode mode = SweepMode::FullCircle;
    double alpha = 0.0;
    double beta = 0.0;
    int coupler_start = 1;

    std::pair<double, int> theta_branch(double tau) const {
        tau -= std::floor(tau);
        if (mode == SweepMode::FullCircle)
            return {alpha + 2.0 * M_PI * tau, coupler_start};
        if (tau < 0.5) return {alpha + 2.0 * tau * (beta - alpha),
                               coupler_start};
        return {beta - (2.0 * tau - 1.0) * (beta - alpha), -coupler_start};
    }
};

struct AuxeticInterval {
    double lo = 0.0;
    double hi = 0.0;  // may exceed 1 when the interval wraps tau = 0
    int sign = 1;     // orientation of traversal with PSD Gram velocity
    // Every sample away from the two endpoint cells is strictly definite.
    bool strict_interior = false;
    bool endpoints_refined = false;
};

struct DeformationPath {
    LinkLengths lengths;
    int branch = 1;
    GrashofClass loop_class = GrashofClass::SingleLoop;
    std::vector<double> params;  // tau samples, ascending in [0, 1]
    std::vector<Quadrilateral> quads;
    std::vector<SymMatrix> grams;  // omega = Gram(AC, BD) per sample
    std::vector<double> excluded_params;  // parallel-diagonal parameters
    bool closed = false;
    std::optional<Traversal> traversal;  // continuous evaluator when traced

    bool has_evaluator() const { return traversal.has_value(); }

    Quadrilateral quad_at(double tau) const {
        if (!traversal)
            throw InputError("path carries no continuous evaluator");
        const auto [theta, cb] = traversal->theta_branch(tau);
        return solve_coupler(lengths, theta, cb).quad;
    }

    SymMatrix gram_at(double tau) const {
        const Quadrilateral q = quad_at(tau);
        return gram({{q.diag_ac().x, q.diag_ac().y},
                     {q.diag_bd().x, q.diag_bd().y}});
    }

    double signed_area_at(double tau) const {
        const Quadrilateral q = quad_at(tau);
        return cross(q.diag_ac(), q.diag_bd());
    }
};

namespace detail {

inline SymMatrix quad_gram(const Quadrilateral& q) {
    return gram({{q.diag_ac().x, q.diag_ac().y},
                 {q.diag_bd().x, q.diag_bd().y}});
}

struct ArcSet {
    SweepMode mode;
    double alpha, beta;
    bool two_sided;  // two disjoint mirror arcs (one per branch argument)
};

// Feasible driving angles satisfy cLo <= cos(theta) <= cHi with the bounds
// below (coupler reach). Returns the sweep for the requested branch.
inline ArcSet feasible_arcs(const LinkLengths& l, int branch) {
    const double c_lo =
        (l.l1 * l.l1 + l.l4 * l.l4 - (l.l2 + l.l3) * (l.l2 + l.l3)) /
        (2.0 * l.l1 * l.l4);
    const double c_hi =
        (l.l1 * l.l1 + l.l4 * l.l4 - (l.l2 - l.l3) * (l.l2 - l.l3)) /
        (2.0 * l.l1 * l.l4);
    const bool lo_free = c_lo <= -1.0;
    const bool hi_free = c_hi >= 1.0;
    if (lo_free && hi_free) {
        // Full revolution; fixed start angle keeps the seam away from the
        // bar-alignment transitions at theta = 0 and pi.
        return {SweepMode::FullCircle, 2.2395, 0.0, false};
    }
    if (!lo_free && hi_free) {
        const double tm = std::acos(std::clamp(c_lo, -1.0, 1.0));
        return {SweepMode::Tent, -tm, tm, false};
    }
    if (lo_free && !hi_free) {
        const double ta = std::acos(std::clamp(c_hi, -1.0, 1.0));
        return {SweepMode::Tent, ta, 2.0 * M_PI - ta, false};
    }
    const double ta = std::acos(std::clamp(c_hi, -1.0, 1.0));
    const double tb = std::acos(std::clamp(c_lo, -1.0, 1.0));
    if (branch > 0) return {SweepMode::Tent, ta, tb, true};
    return {SweepMode::Tent, -tb, -ta, true};
}

// Index arithmetic treating the stored samples as one cycle. When both
// endpoints tau = 0 and tau = 1 are present they describe the same assembly
// and the last sample is an alias of the first.
inline int unique_cyclic_count(const DeformationPath& p) {
    const int n = (int)p.params.size();
    if (p.closed && n >= 2 && p.params.front() == 0.0 && p.params.back() == 1.0)
        return n - 1;
    return n;
}

inline double cyclic_gap(double from, double to) {
    double d = to - from;
    d -= std::floor(d);
    return d;
}

inline bool cyclic_contains(double lo, double hi, double x) {
    // Open cyclic interval (lo, hi), all values taken mod 1.
    const double span = cyclic_gap(lo, hi);
    const double off = cyclic_gap(lo, x);
    return off > 0.0 && off < span;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Tracing

// Samples one connected component of the deformation space at n parameters
// tau_i = i / (n - 1). Samples where the diagonals become parallel (the
// period lattice degenerates) are excised: the parameters of those events
// are reported in excluded_params and samples within 1e-8 of them, or with
// nearly singular Gram matrix, are dropped.
inline DeformationPath trace_deformation(const LinkLengths& l, int branch,
                                         int n = 1024, double tol = 1e-9) {
    validate_lengths(l);
    if (branch != 1 && branch != -1)
        throw InputError("branch must be +1 or -1");
    if (n < 64) throw InputError("need at least 64 samples");
    const GrashofClass cls = grashof_class(l, tol);
    if (cls == GrashofClass::NonGeneric)
        throw NonGenericError(
            "bar lengths are non-generic; deformation space is singular");

    DeformationPath path;
    path.lengths = l;
    path.branch = branch;
    path.loop_class = cls;
    path.closed = true;
    const detail::ArcSet arcs = detail::feasible_arcs(l, branch);
    Traversal trav;
    trav.mode = arcs.mode;
    trav.alpha = arcs.alpha;
    trav.beta = arcs.beta;
    trav.coupler_start = (arcs.mode == SweepMode::FullCircle) ? branch : 1;
    path.traversal = trav;
    // The feasibility geometry must agree with the length combinatorics:
    // two components iff the driving bar spins freely or the feasible set
    // splits into two mirror arcs.
    const bool two_components =
        arcs.mode == SweepMode::FullCircle || arcs.two_sided;
    if (two_components != (cls == GrashofClass::TwoLoops))
        throw Error("internal: feasibility arcs contradict loop class");

    std::vector<double> taus(n);
    std::vector<Quadrilateral> quads(n);
    std::vector<SymMatrix> grams(n);
    for (int i = 0; i < n; ++i) {
        taus[i] = (double)i / (double)(n - 1);
        quads[i] = path.quad_at(taus[i]);
        grams[i] = detail::quad_gram(quads[i]);
    }

    // Locate parallel-diagonal parameters by sign changes of the signed
    // unit-cell area between consecutive samples.
    const double cs = 1.0 + l.max_length();
    const double area_eps = 1e-13 * cs * cs;
    std::vector<double> excluded;
    for (int i = 0; i + 1 < n; ++i) {
        double sa = cross(quads[i].diag_ac(), quads[i].diag_bd());
        double sb = cross(quads[i + 1].diag_ac(), quads[i + 1].diag_bd());
        if (std::abs(sa) <= area_eps) {
            excluded.push_back(taus[i]);
            continue;
        }
        if (sa * sb >= 0.0) continue;
        double lo = taus[i], hi = taus[i + 1];
        double flo = sa;
        for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = path.signed_area_at(mid);
            if (fm == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((fm > 0.0) == (flo > 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        excluded.push_back(0.5 * (lo + hi));
    }
    std::sort(excluded.begin(), excluded.end());
    excluded.erase(std::unique(excluded.begin(), excluded.end(),
                               [](double a, double b) {
                                   return std::abs(a - b) < 1e-10;
                               }),
                   excluded.end());
    path.excluded_params = excluded;

    // Drop samples inside the excised neighborhoods or with degenerate
    // period lattice.
    const double det_tol = tol * cs * cs * cs * cs;
    for (int i = 0; i < n; ++i) {
        bool keep = true;
        const double det = grams[i](0, 0) * grams[i](1, 1) -
                           grams[i](0, 1) * grams[i](0, 1);
        if (det <= det_tol) keep = false;
        for (double ex : excluded) {
            double d = std::abs(taus[i] - ex);
            d = std::min(d, 1.0 - d);
            if (d <= 1e-8) keep = false;
        }
        if (keep) {
            path.params.push_back(taus[i]);
            path.quads.push_back(quads[i]);
            path.grams.push_back(grams[i]);
        }
    }
    if ((int)path.params.size() < n / 2)
        throw ResolutionError(
            "more than half the samples fell in excised neighborhoods");

    // Closure sanity: tau = 0 and tau = 1 describe the same assembly.
    if (path.params.size() >= 2 && path.params.front() == 0.0 &&
        path.params.back() == 1.0) {
        const auto& qa = path.quads.front();
        const auto& qb = path.quads.back();
        const double ctol = 1e-9 * cs;
        const double dev =
            std::max(std::max(dist(qa.a, qb.a), dist(qa.b, qb.b)),
                     std::max(dist(qa.c, qb.c), dist(qa.d, qb.d)));
        if (dev > ctol)
            throw Error("traced loop failed to close: deviation " +
                        std::to_string(dev));
    }
    return path;
}

// ---------------------------------------------------------------------------
// Gram velocity and auxetic intervals

// Central finite difference of the Gram curve at stored sample i, using the
// cyclic neighbors. Throws NearSingularError when the stencil straddles an
// excluded parameter (the lattice path is not differentiable across it).
inline SymMatrix gram_velocity(const DeformationPath& path, int i,
                               double /*tol*/ = 1e-9) {
    const int n = (int)path.params.size();
    const int N = detail::unique_cyclic_count(path);
    if (n < 3) throw InputError("too few samples for a velocity stencil");
    if (i < 0 || i >= N) throw InputError("sample index out of range");
    int im, ip;
    if (path.closed) {
        im = (i + N - 1) % N;
        ip = (i + 1) % N;
    } else {
        if (i == 0 || i == n - 1)
            throw InputError("open path has no centered stencil at its ends");
        im = i - 1;
        ip = i + 1;
    }
    const double a = path.params[im];
    const double b = path.params[ip];
    double dt = b - a;
    if (path.closed) {
        dt = detail::cyclic_gap(a, b);
        if (dt <= 0.0) dt += 1.0;
        for (double ex : path.excluded_params)
            if (detail::cyclic_contains(a, b, ex))
                throw NearSingularError(
                    "velocity stencil straddles an excluded parameter");
    } else {
        for (double ex : path.excluded_params)
            if (ex > a && ex < b)
                throw NearSingularError(
                    "velocity stencil straddles an excluded parameter");
    }
    return (path.grams[ip] - path.grams[im]) * (1.0 / dt);
}

// Finite difference on the continuous evaluator; smooth in tau even across
// excised parameters (the Gram curve itself is analytic there).
inline SymMatrix gram_velocity_at(const DeformationPath& path, double tau,
                                  double h = 1e-6) {
    return (path.gram_at(tau + h) - path.gram_at(tau - h)) * (0.5 / h);
}

namespace detail {

inline double min_eig_signed_velocity(const DeformationPath& path, double tau,
                                      int sign) {
    const SymMatrix v = gram_velocity_at(path, tau) * (double)sign;
    return sym_eigenvalues(v).front();
}

// Bisection for the parameter where the signed Gram velocity leaves the PSD
// cone. Bracket given in possibly-extended coordinates (hi may exceed 1);
// psd_side = +1 when the PSD side is at hi (refining a lower endpoint).
inline double refine_endpoint(const DeformationPath& path, double lo,
                              double hi, int sign, int psd_side) {
    for (int it = 0; it < 80 && hi - lo > 1e-10; ++it) {
        const double mid = 0.5 * (lo + hi);
        const bool psd = min_eig_signed_velocity(path, mid, sign) >= 0.0;
        if ((psd_side > 0) == psd)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi) - std::floor(0.5 * (lo + hi));
}

// Excluded parameters of the path lifted into the extended interval
// (lo, hi), where hi may exceed 1.
inline std::vector<double> cuts_in(const DeformationPath& path, double lo,
                                   double hi) {
    std::vector<double> cuts;
    for (double ex : path.excluded_params)
        for (double lift : {ex, ex + 1.0})
            if (lift > lo && lift < hi) cuts.push_back(lift);
    std::sort(cuts.begin(), cuts.end());
    return cuts;
}

// Lower endpoint of a run: tau_out (not in cone) precedes tau_in (in cone)
// cyclically. If an excised parameter lies between them and the velocity is
// still PSD just past its 1e-8 neighborhood, the interval is delimited by
// the excision edge; otherwise the genuine cone-exit is bisected.
inline double refine_lower(const DeformationPath& path, double tau_out,
                           double tau_in, int sign) {
    if (tau_in <= tau_out) tau_in += 1.0;
    const auto cuts = cuts_in(path, tau_out, tau_in);
    if (!cuts.empty()) {
        const double edge = cuts.back() + 1e-8;
        if (edge >= tau_in) return tau_in - std::floor(tau_in);
        if (min_eig_signed_velocity(path, edge, sign) >= 0.0)
            return edge - std::floor(edge);
        return refine_endpoint(path, edge, tau_in, sign, +1);
    }
    return refine_endpoint(path, tau_out, tau_in, sign, +1);
}

inline double refine_upper(const DeformationPath& path, double tau_in,
                           double tau_out, int sign) {
    if (tau_out <= tau_in) tau_out += 1.0;
    const auto cuts = cuts_in(path, tau_in, tau_out);
    if (!cuts.empty()) {
        const double edge = cuts.front() - 1e-8;
        if (edge <= tau_in) return tau_in - std::floor(tau_in);
        if (min_eig_signed_velocity(path, edge, sign) >= 0.0)
            return edge - std::floor(edge);
        return refine_endpoint(path, tau_in, edge, sign, -1);
    }
    return refine_endpoint(path, tau_in, tau_out, sign, -1);
}

}  // namespace detail

// Maximal parameter intervals on which the path is auxetic for one of the
// two traversal orientations: sign = +1 means the Gram velocity d omega /
// d tau is positive semidefinite throughout, sign = -1 the reversed
// traversal. Runs must contain at least one strictly definite sample;
// endpoints are refined against the continuous evaluator when available.
// Intervals wrapping tau = 0 are reported with hi = actual + 1 > 1.
inline std::vector<AuxeticInterval> auxetic_intervals(
    const DeformationPath& path, double tol = 1e-9) {
    const int N = detail::unique_cyclic_count(path);
    if (N < 8) throw InputError("too few samples to scan for intervals");
    if (!path.closed)
        throw InputError("interval scan requires a closed path");

    // Per-sample classification for both orientations.
    std::vector<int> cls(N, 0);  // +1 PSD(+), -1 PSD(-), 2 PD(+), -2 PD(-),
                                 // 0 neither/blocked
    for (int i = 0; i < N; ++i) {
        SymMatrix v(2);
        try {
            v = gram_velocity(path, i);
        } catch (const NearSingularError&) {
            continue;
        }
        const Definiteness st = psd_status(v, default_tol(v, tol));
        switch (st) {
            case Definiteness::PositiveDefinite: cls[i] = 2; break;
            case Definiteness::NegativeDefinite: cls[i] = -2; break;
            case Definiteness::PositiveSemidefiniteSingular: cls[i] = 1; break;
            case Definiteness::NegativeSemidefiniteSingular:
                cls[i] = -1;
                break;
            case Definiteness::Zero: cls[i] = 3; break;  // PSD both ways
            default: cls[i] = 0;
        }
    }

    std::vector<AuxeticInterval> out;
    for (int sign : {+1, -1}) {
        auto in_cone = [&](int i) {
            return cls[i] == 3 || cls[i] * sign > 0;
        };
        auto definite = [&](int i) { return cls[i] * sign == 2; };

        int start = -1;
        for (int i = 0; i < N; ++i)
            if (!in_cone(i)) {
                start = i;
                break;
            }
        if (start < 0) {
            // The whole loop classifies as auxetic for this orientation.
            bool any_def = false;
            for (int i = 0; i < N; ++i) any_def = any_def || definite(i);
            if (any_def)
                throw ResolutionError(
                    "auxetic region covers every sample; endpoints "
                    "unresolvable at this sampling resolution");
            continue;  // zero-velocity loop: vacuous, no intervals
        }

        int i = start;
        do {
            // Advance to the next run of in-cone samples.
            int j = (i + 1) % N;
            while (j != start && !in_cone(j)) j = (j + 1) % N;
            if (j == start) break;
            int a = j;  // first sample of run
            int b = a;
            while (true) {
                const int nx = (b + 1) % N;
                if (nx == start || !in_cone(nx)) break;
                b = nx;
            }
            i = b;  // resume scanning after this run

            int len = (b - a + N) % N + 1;
            // Strictness is judged away from the run's two endpoint cells:
            // those samples sit within one grid cell of the transition,
            // where the velocity is legitimately near-singular.
            bool any_def = false, all_def = true;
            for (int k = 0; k < len; ++k) {
                const int idx = (a + k) % N;
                any_def = any_def || definite(idx);
                if (len < 3 || (k > 0 && k + 1 < len))
                    all_def = all_def && definite(idx);
            }
            if (!any_def) continue;  // velocity hovers at zero: not a region
            if (len < 2)
                throw ResolutionError(
                    "auxetic run of a single sample; increase sampling");

            AuxeticInterval itv;
            itv.sign = sign;
            itv.strict_interior = all_def;
            const int before = (a + N - 1) % N;
            const int after = (b + 1) % N;
            double lo = path.params[a];
            double hi = path.params[b];
            if (path.has_evaluator()) {
                lo = detail::refine_lower(path, path.params[before],
                                          path.params[a], sign);
                hi = detail::refine_upper(path, path.params[b],
                                          path.params[after], sign);
                itv.endpoints_refined = true;
            }
            // Express as lo < hi with hi possibly > 1 when wrapping.
            if (hi < lo) hi += 1.0;
            itv.lo = lo;
            itv.hi = hi;
            out.push_back(itv);
        } while (i != start && ((i + 1) % N) != start);
    }
    std::sort(out.begin(), out.end(),
              [](const AuxeticInterval& x, const AuxeticInterval& y) {
                  return x.lo < y.lo || (x.lo == y.lo && x.sign > y.sign);
              });
    return out;
}

// ---------------------------------------------------------------------------
// Pointwise classification through the lattice tangent

inline FrameworkSpec quad_framework_spec(const LinkLengths& l) {
    validate_lengths(l);
    FrameworkSpec spec;
    spec.dimension = 2;
    spec.offsets = {{0, 0}, {0, 1}, {-1, 0}, {-1, 1}};
    spec.squared_lengths = {l.l1 * l.l1, l.l4 * l.l4, l.l2 * l.l2,
                            l.l3 * l.l3};
    return spec;
}

// Lattice coordinates of an assembled quadrilateral: omega = Gram(AC, BD)
// and q = [AC BD]^{-1} (A - B). Throws SingularLatticeError when the
// diagonals are parallel.
inline LatticeConfig lattice_config(const Quadrilateral& quad,
                                    double tol = 1e-9) {
    const Vec2 ac = quad.diag_ac();
    const Vec2 bd = quad.diag_bd();
    const double det = cross(ac, bd);
    const double cs = 1.0 + coord_scale(quad);
    if (std::abs(det) <= tol * cs * cs)
        throw SingularLatticeError(
            "diagonals are parallel; period lattice degenerates");
    LatticeConfig cfg;
    cfg.omega = detail::quad_gram(quad);
    const Vec2 rhs = quad.a - quad.b;
    cfg.q = {(rhs.x * bd.y - rhs.y * bd.x) / det,
             (ac.x * rhs.y - ac.y * rhs.x) / det};
    return cfg;
}

// Classifies a single assembled configuration by its unique tangent motion
// in lattice coordinates.
inline AuxeticStatus auxetic_status_pointwise(const LinkLengths& l,
                                              double theta, int branch,
                                              double tol = 1e-9) {
    const QuadAssembly asmb = solve_coupler(l, theta, branch, tol);
    const LatticeConfig cfg = lattice_config(asmb.quad, tol);
    const FrameworkSpec spec = validate_spec(quad_framework_spec(l));
    return local_auxetic_test(spec, cfg, tol).status;
}

// ---------------------------------------------------------------------------
// Five-point conic and unit cell area

// The five joints incident to vertex A within one unit cell: A itself, its
// two neighbors B and D, and their translates by -AC.
inline std::array<Vec2, 5> five_point_conic_points(const Quadrilateral& q) {
    const Vec2 ac = q.diag_ac();
    return {q.a, q.b, q.d, q.b - ac, q.d - ac};
}

inline ConicCoeffs five_point_conic(const Quadrilateral& q,
                                    double tol = 1e-9) {
    return fit_conic(five_point_conic_points(q), tol);
}

inline double unit_cell_area(const Quadrilateral& q, double tol = 1e-9) {
    const double det = cross(q.diag_ac(), q.diag_bd());
    const double cs = 1.0 + coord_scale(q);
    if (std::abs(det) <= tol * cs * cs)
        throw SingularLatticeError(
            "diagonals are parallel; unit cell area vanishes");
    return std::abs(det);
}

}  // namespace auxetic
