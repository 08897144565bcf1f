// Acceptance harness: end-to-end checks of the deformation-path and
// auxetic-region machinery. Each criterion prints exactly one PASS/FAIL
// line; the exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "auxetic/conic.hpp"
#include "auxetic/continuation.hpp"
#include "auxetic/fourbar.hpp"
#include "auxetic/framework.hpp"
#include "auxetic/geometry.hpp"

using namespace auxetic;

namespace {

double mod1(double x) { return x - std::floor(x); }

double cyc_dist(double a, double b) {
    const double d = mod1(a - b);
    return std::min(d, 1.0 - d);
}

Quadrilateral reflect_quad(Quadrilateral q) {
    q.a.y = -q.a.y;
    q.b.y = -q.b.y;
    q.c.y = -q.c.y;
    q.d.y = -q.d.y;
    return q;
}

double quad_dist(const Quadrilateral& p, const Quadrilateral& q) {
    double m = 0.0;
    m = std::max(m, std::sqrt(norm2(p.a - q.a)));
    m = std::max(m, std::sqrt(norm2(p.b - q.b)));
    m = std::max(m, std::sqrt(norm2(p.c - q.c)));
    m = std::max(m, std::sqrt(norm2(p.d - q.d)));
    return m;
}

LinkLengths random_generic(std::mt19937_64& rng, GrashofClass want) {
    std::uniform_real_distribution<double> U(0.3, 3.0);
    for (;;) {
        const LinkLengths l{U(rng), U(rng), U(rng), U(rng)};
        double v[4] = {l.l1, l.l2, l.l3, l.l4};
        std::sort(v, v + 4);
        const double scale = v[3];
        const double slack = v[0] + v[1] + v[2] - v[3];
        const double gap = (v[1] + v[2]) - (v[0] + v[3]);
        if (slack < 0.08 * scale) continue;   // keep well inside assembly
        if (std::abs(gap) < 0.05 * scale) continue;  // keep generic
        const GrashofClass cls =
            gap > 0.0 ? GrashofClass::TwoLoops : GrashofClass::SingleLoop;
        if (cls == want) return l;
    }
}

struct TracedBranch {
    int branch = 1;
    DeformationPath path;
    std::vector<AuxeticInterval> intervals;
};

struct TracedLinkage {
    LinkLengths l;
    std::vector<TracedBranch> branches;
};

// Populated by criterion 1 and reused by criteria 2, 3 and 5.
std::vector<TracedLinkage> g_two, g_single;

constexpr int kSamples = 1024;

std::string describe(const LinkLengths& l) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "(%.6g, %.6g, %.6g, %.6g)", l.l1, l.l2,
                  l.l3, l.l4);
    return buf;
}

// A parameter well away from every excluded value of the path.
double pick_tau(const DeformationPath& p) {
    if (p.excluded_params.empty()) return 0.37;
    double best = 0.37, best_d = -1.0;
    for (int i = 0; i < 200; ++i) {
        const double t = (i + 0.5) / 200.0;
        double d = 1.0;
        for (double e : p.excluded_params) d = std::min(d, cyc_dist(t, e));
        if (d > best_d) {
            best_d = d;
            best = t;
        }
    }
    return best;
}

double x_norm(const LatticeConfig& cfg) {
    double s = 0.0;
    for (double v : cfg.q) s += v * v;
    for (double v : cfg.omega.packed()) s += v * v;
    return std::sqrt(s);
}

FrameworkSpec d3_spec() {
    FrameworkSpec spec;
    spec.dimension = 3;
    // (2,1,0) rather than (1,1,1): all-0/1 offsets satisfy n^2 = n per
    // coordinate, which collapses the moment vectors onto a hyperplane and
    // leaves the Jacobian singular along the entire family.
    spec.offsets = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1},
                    {1, 1, 0}, {0, 1, 1}, {1, 0, 1}, {2, 1, 0}};
    const double q[3] = {0.2, -0.3, 0.1};
    const double w[3][3] = {
        {2.0, 0.3, 0.1}, {0.3, 1.5, 0.2}, {0.1, 0.2, 1.8}};
    for (const auto& n : spec.offsets) {
        double x[3], s = 0.0;
        for (int k = 0; k < 3; ++k) x[k] = (double)n[k] - q[k];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s += x[i] * w[i][j] * x[j];
        spec.squared_lengths.push_back(s);
    }
    return spec;
}

LatticeConfig d3_config() {
    LatticeConfig c;
    c.q = {0.2, -0.3, 0.1};
    c.omega = SymMatrix(3);
    c.omega.ref(0, 0) = 2.0;
    c.omega.ref(0, 1) = 0.3;
    c.omega.ref(0, 2) = 0.1;
    c.omega.ref(1, 1) = 1.5;
    c.omega.ref(1, 2) = 0.2;
    c.omega.ref(2, 2) = 1.8;
    return c;
}

// ---------------------------------------------------------------------------
// [1] Pointwise equivalence of the three auxetic criteria.

std::string crit_equivalence(std::string& note) {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(11);
    const int per_class = 100;
    for (int k = 0; k < per_class; ++k) {
        TracedLinkage L;
        L.l = random_generic(rng, GrashofClass::TwoLoops);
        g_two.push_back(L);
    }
    for (int k = 0; k < per_class; ++k) {
        TracedLinkage L;
        L.l = random_generic(rng, GrashofClass::SingleLoop);
        g_single.push_back(L);
    }

    long long checked = 0;
    const double margin = 10.0 / (kSamples - 1);
    auto run_linkage = [&](TracedLinkage& L,
                           const std::vector<int>& branches) -> std::string {
        for (int b : branches) {
            TracedBranch tb;
            tb.branch = b;
            tb.path = trace_deformation(L.l, b, kSamples);
            tb.intervals = auxetic_intervals(tb.path);

            std::vector<double> edges;
            for (const auto& itv : tb.intervals) {
                edges.push_back(mod1(itv.lo));
                edges.push_back(mod1(itv.hi));
            }
            const size_t n = tb.path.params.size();
            for (size_t i = 0; i + 1 < n; ++i) {
                const double tau = tb.path.params[i];
                bool near = false;
                for (double e : edges) near |= cyc_dist(tau, e) < margin;
                for (double e : tb.path.excluded_params)
                    near |= cyc_dist(tau, e) < margin;
                if (near) continue;

                SymMatrix v(2);
                try {
                    v = gram_velocity(tb.path, (int)i);
                } catch (const NearSingularError&) {
                    continue;
                }
                const Definiteness st = psd_status(v);
                const bool strict_vel =
                    st == Definiteness::PositiveDefinite ||
                    st == Definiteness::NegativeDefinite;
                bool pseudo = false;
                try {
                    pseudo = is_pseudotriangle(tb.path.quads[i]);
                } catch (const DegenerateAngleError&) {
                    pseudo = false;
                }
                bool ellipse = false;
                try {
                    ellipse = classify_conic(five_point_conic(
                                  tb.path.quads[i])) == ConicClass::Ellipse;
                } catch (const DegeneratePencilError&) {
                    ellipse = false;
                }
                if (strict_vel != pseudo || pseudo != ellipse) {
                    char buf[160];
                    std::snprintf(buf, sizeof(buf),
                                  "disagreement at lengths %s branch %d tau "
                                  "%.12g: velocity=%d pseudo=%d ellipse=%d",
                                  describe(L.l).c_str(), b, tau,
                                  (int)strict_vel, (int)pseudo, (int)ellipse);
                    return buf;
                }
                ++checked;
            }
            L.branches.push_back(std::move(tb));
        }
        return "";
    };

    for (auto& L : g_two) {
        const std::string err = run_linkage(L, {1, -1});
        if (!err.empty()) return err;
    }
    for (auto& L : g_single) {
        const std::string err = run_linkage(L, {1});
        if (!err.empty()) return err;
    }

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    char buf[96];
    std::snprintf(buf, sizeof(buf), "200 linkages, %lld samples, %.1f s",
                  checked, secs);
    note = buf;
    if (secs > 60.0) return "exceeded the 60 s budget";
    if (checked < 200000) return "too few classified samples: " +
                                 std::to_string(checked);
    return "";
}

// ---------------------------------------------------------------------------
// [2] Two-loop linkages: exactly two opposite-sign intervals per branch and
//     a degenerate five-point conic at each refined transition.

std::string crit_two_loop_structure(std::string& note) {
    if (g_two.size() < 100) return "missing cached traces from criterion 1";
    int transitions = 0;
    for (const auto& L : g_two) {
        for (const auto& tb : L.branches) {
            if (tb.intervals.size() != 2)
                return "expected 2 intervals at " + describe(L.l) +
                       ", found " + std::to_string(tb.intervals.size());
            if (tb.intervals[0].sign + tb.intervals[1].sign != 0)
                return "interval signs not opposite at " + describe(L.l);
            // Two-sided tent sweeps pass through two dead configurations,
            // at tau = 0 and tau = 1/2. There the input angle reverses, one
            // diagonal length is extremal, and the Gram velocity leaves the
            // cone through a rank-one matrix: a genuine interval edge, but
            // not a conic degeneracy (the pointwise equivalence needs a
            // regular motion point). Such branches carry exactly two fold
            // edges; full-circle sweeps carry none.
            const bool tent = tb.path.traversal &&
                              tb.path.traversal->mode == SweepMode::Tent;
            int fold_edges = 0;
            for (const auto& itv : tb.intervals) {
                if (!itv.strict_interior || !itv.endpoints_refined)
                    return "unrefined interval at " + describe(L.l);
                // Interval edges are refined on the Gram-velocity
                // eigenvalue, which the library evaluates by finite
                // differences: its root can sit a few 1e-6 from the
                // discriminant's at flat or steep crossings, where the
                // discriminant is already large a tolerance away. Locate
                // the discriminant's own sign change, require it next to
                // the edge, and require the conic to degenerate there.
                const auto disc_at = [&](double tau) {
                    return five_point_conic(tb.path.quad_at(mod1(tau)))
                        .discriminant();
                };
                for (double edge : {itv.lo, itv.hi}) {
                    const double m = mod1(edge);
                    if (tent && (cyc_dist(m, 0.0) <= 1e-8 ||
                                 cyc_dist(m, 0.5) <= 1e-8)) {
                        ++fold_edges;
                        ++transitions;
                        continue;
                    }
                    double a = 0.0, b = 0.0, da = 0.0;
                    bool bracketed = false;
                    for (double w = 1e-9; w <= 1.1e-4; w *= 10.0) {
                        a = edge - w;
                        b = edge + w;
                        da = disc_at(a);
                        if ((da < 0.0) != (disc_at(b) < 0.0)) {
                            bracketed = true;
                            break;
                        }
                    }
                    if (!bracketed)
                        return "no conic-class change within 1e-4 of the "
                               "transition at " +
                               describe(L.l);
                    for (int it = 0; it < 100 && b - a > 1e-15; ++it) {
                        const double m = 0.5 * (a + b);
                        const double dm = disc_at(m);
                        if (dm == 0.0) {
                            a = b = m;
                            break;
                        }
                        if ((dm < 0.0) == (da < 0.0)) {
                            a = m;
                            da = dm;
                        } else {
                            b = m;
                        }
                    }
                    const double root = 0.5 * (a + b);
                    const double droot = std::abs(disc_at(root));
                    if (std::abs(root - edge) > 1e-4 || droot > 1e-6) {
                        char buf[160];
                        std::snprintf(buf, sizeof(buf),
                                      "transition not conic-degenerate at %s "
                                      "tau %.12g: root offset %.3g, "
                                      "|disc| = %.3g",
                                      describe(L.l).c_str(), mod1(edge),
                                      std::abs(root - edge), droot);
                        return buf;
                    }
                    ++transitions;
                }
            }
            if (fold_edges != (tent ? 2 : 0)) {
                char buf[96];
                std::snprintf(buf, sizeof(buf),
                              "%d fold edges on a %s branch at %s",
                              fold_edges, tent ? "tent" : "full-circle",
                              describe(L.l).c_str());
                return buf;
            }
        }
    }
    note = std::to_string(transitions) + " transitions";
    return "";
}

// ---------------------------------------------------------------------------
// [3] Unit-cell area strictly increases along each interval, traversed in
//     its stored orientation.

std::string crit_area_monotone(std::string& note) {
    if (g_two.empty() || g_single.empty())
        return "missing cached traces from criterion 1";
    long long checked = 0;
    auto sweep = [&](const TracedLinkage& L) -> std::string {
        for (const auto& tb : L.branches) {
            for (const auto& itv : tb.intervals) {
                double prev = 0.0;
                for (int k = 0; k < 100; ++k) {
                    double tau = itv.lo +
                                 (itv.hi - itv.lo) * (k + 1) / 101.0;
                    if (itv.sign < 0) tau = itv.lo + itv.hi - tau;
                    const double area =
                        unit_cell_area(tb.path.quad_at(mod1(tau)));
                    if (k > 0 &&
                        area - prev <= -1e-12 * std::max(1.0, std::abs(prev)))
                        return "area not increasing at " + describe(L.l);
                    prev = area;
                    ++checked;
                }
            }
        }
        return "";
    };
    for (const auto& L : g_two) {
        const std::string err = sweep(L);
        if (!err.empty()) return err;
    }
    for (const auto& L : g_single) {
        const std::string err = sweep(L);
        if (!err.empty()) return err;
    }
    note = std::to_string(checked) + " area samples";
    return "";
}

// ---------------------------------------------------------------------------
// [4] Path topology and mirror symmetry per Grashof class.

std::string crit_topology(std::string& note) {
    std::mt19937_64 rng(22);
    const double tau_probe[5] = {0.07, 0.18, 0.33, 0.61, 0.86};

    for (int k = 0; k < 20; ++k) {
        const LinkLengths l = random_generic(rng, GrashofClass::SingleLoop);
        const DeformationPath p1 = trace_deformation(l, 1, kSamples);
        const DeformationPath p2 = trace_deformation(l, -1, kSamples);
        if (!p1.closed || !p2.closed)
            return "single-loop trace not closed at " + describe(l);

        // Both branch arguments describe the same single component.
        if (p1.params.size() != p2.params.size())
            return "branch traces differ in size at " + describe(l);
        for (size_t i = 0; i < p1.params.size(); i += 97)
            if (quad_dist(p1.quads[i], p2.quads[i]) > 1e-10)
                return "branch traces differ at " + describe(l);

        if (p1.excluded_params.size() != 2)
            return "expected 2 excluded parameters at " + describe(l) +
                   ", found " + std::to_string(p1.excluded_params.size());
        const double e0 = p1.excluded_params[0], e1 = p1.excluded_params[1];
        if (std::abs(cyc_dist(e0, e1) - 0.5) > 1e-6)
            return "excluded parameters not mirror-paired at " + describe(l);

        for (double t0 : tau_probe) {
            double tau = t0;
            while (cyc_dist(tau, e0) < 0.05 || cyc_dist(tau, e1) < 0.05)
                tau = mod1(tau + 0.04);
            const double err = quad_dist(reflect_quad(p1.quad_at(tau)),
                                         p1.quad_at(mod1(tau + 0.5)));
            if (err > 1e-8) {
                char buf[128];
                std::snprintf(buf, sizeof(buf),
                              "mirror involution off by %.3g at %s", err,
                              describe(l).c_str());
                return buf;
            }
        }
    }

    for (int k = 0; k < 20; ++k) {
        const LinkLengths l = random_generic(rng, GrashofClass::TwoLoops);
        const DeformationPath p1 = trace_deformation(l, 1, kSamples);
        const DeformationPath p2 = trace_deformation(l, -1, kSamples);
        if (!p1.closed || !p2.closed)
            return "two-loop trace not closed at " + describe(l);
        if (!p1.excluded_params.empty() || !p2.excluded_params.empty())
            return "two-loop trace has excluded parameters at " + describe(l);

        for (double tau : tau_probe) {
            const double tau2 =
                p1.traversal->mode == SweepMode::FullCircle
                    ? mod1(-2.2395 / M_PI - tau)
                    : mod1(tau + 0.5);
            const double err = quad_dist(reflect_quad(p1.quad_at(tau)),
                                         p2.quad_at(tau2));
            if (err > 1e-8) {
                char buf[128];
                std::snprintf(buf, sizeof(buf),
                              "branch mirror off by %.3g at %s", err,
                              describe(l).c_str());
                return buf;
            }
        }
    }
    note = "40 linkages";
    return "";
}

// ---------------------------------------------------------------------------
// [5] Rank certificates along continued framework paths.

std::string crit_certificates(std::string& note) {
    if (g_two.size() < 10) return "missing cached traces from criterion 1";

    struct Job {
        FrameworkSpec spec;
        LatticeConfig cfg;
        double step;
    };
    std::vector<Job> jobs;
    for (int k = 0; k < 10; ++k) {
        const auto& L = g_two[(size_t)k * 9];
        Job j;
        j.spec = validate_spec(quad_framework_spec(L.l));
        j.cfg = lattice_config(
            L.branches[0].path.quad_at(pick_tau(L.branches[0].path)));
        j.step = 2.0 * M_PI * (1.0 + x_norm(j.cfg)) / 1024.0;
        jobs.push_back(std::move(j));
    }
    jobs.push_back({validate_spec(d3_spec()), d3_config(), 0.02});

    long long samples = 0;
    for (const auto& j : jobs) {
        const LatticePath path =
            trace_component(j.spec, j.cfg, j.step, 40 * 1024);
        for (const auto& cfg : path.configs) {
            const GramCertificates cert = gram_certificates(j.spec, cfg);
            if (cert.diag_deviation > 1e-9)
                return "Gram diagonal deviates by " +
                       std::to_string(cert.diag_deviation);
            if (cert.min_abs_eigenvalue > 1e-9)
                return "Gram matrix not singular: " +
                       std::to_string(cert.min_abs_eigenvalue);
            if (cert.constraint_residual > 1e-8)
                return "constraint functional residual " +
                       std::to_string(cert.constraint_residual);
            double trace = 0.0;
            for (int i = 0; i <= j.spec.dimension; ++i) trace += cert.G(i, i);
            const double me = sym_eigenvalues(cfg.omega).front();
            const bool at_boundary =
                me <= 1e-6 * (1.0 + cfg.omega.max_abs());
            if (!at_boundary && cert.second_eigenvalue <= 1e-6 * trace)
                return "Gram rank collapse: second eigenvalue " +
                       std::to_string(cert.second_eigenvalue);
            ++samples;
        }
    }
    note = std::to_string(jobs.size()) + " paths, " +
           std::to_string(samples) + " samples";
    return "";
}

// ---------------------------------------------------------------------------
// [6] The four-bar trace and the framework continuation draw the same Gram
//     curve: two-sided Hausdorff distance in the (w11, w22) plane.

using PtList = std::vector<std::pair<double, double>>;

double pt_seg_dist(double px, double py, double ax, double ay, double bx,
                   double by) {
    const double vx = bx - ax, vy = by - ay;
    const double L2 = vx * vx + vy * vy;
    double t = L2 > 0.0 ? ((px - ax) * vx + (py - ay) * vy) / L2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = px - (ax + t * vx), dy = py - (ay + t * vy);
    return std::sqrt(dx * dx + dy * dy);
}

// Uniform-grid index over the segments of a polyline.
struct SegGrid {
    const PtList* pts;
    double cell = 1.0, ox = 0.0, oy = 0.0;
    std::unordered_map<long long, std::vector<int>> buckets;

    static long long key(long long ix, long long iy) {
        return ix * 2000003LL + iy;
    }

    explicit SegGrid(const PtList& p) : pts(&p) {
        double max_seg = 1e-12;
        for (size_t i = 0; i + 1 < p.size(); ++i)
            max_seg = std::max(max_seg,
                               std::hypot(p[i + 1].first - p[i].first,
                                          p[i + 1].second - p[i].second));
        cell = 4.0 * max_seg;
        ox = p[0].first;
        oy = p[0].second;
        for (size_t i = 0; i + 1 < p.size(); ++i) {
            const long long x0 = (long long)std::floor(
                (std::min(p[i].first, p[i + 1].first) - ox) / cell);
            const long long x1 = (long long)std::floor(
                (std::max(p[i].first, p[i + 1].first) - ox) / cell);
            const long long y0 = (long long)std::floor(
                (std::min(p[i].second, p[i + 1].second) - oy) / cell);
            const long long y1 = (long long)std::floor(
                (std::max(p[i].second, p[i + 1].second) - oy) / cell);
            for (long long ix = x0; ix <= x1; ++ix)
                for (long long iy = y0; iy <= y1; ++iy)
                    buckets[key(ix, iy)].push_back((int)i);
        }
    }

    double distance(double px, double py) const {
        const long long cx = (long long)std::floor((px - ox) / cell);
        const long long cy = (long long)std::floor((py - oy) / cell);
        double best = 1e300;
        for (int ring = 1; ring <= 64; ++ring) {
            for (long long ix = cx - ring; ix <= cx + ring; ++ix)
                for (long long iy = cy - ring; iy <= cy + ring; ++iy) {
                    const auto it = buckets.find(key(ix, iy));
                    if (it == buckets.end()) continue;
                    for (int s : it->second) {
                        const auto& a = (*pts)[s];
                        const auto& b = (*pts)[s + 1];
                        best = std::min(
                            best, pt_seg_dist(px, py, a.first, a.second,
                                              b.first, b.second));
                    }
                }
            // Cells beyond the scanned window lie at least (ring-1) cells
            // away, so the nearest segment has definitely been seen.
            if (best < (ring - 1) * cell) break;
        }
        return best;
    }
};

double hausdorff_one_way(const PtList& from, const SegGrid& to) {
    double h = 0.0;
    for (const auto& p : from)
        h = std::max(h, to.distance(p.first, p.second));
    return h;
}

std::string crit_cross_module(std::string& note) {
    const LinkLengths l{1.0, 2.0, 3.0, 3.5};
    const DeformationPath qpath = trace_deformation(l, 1, 32769);
    const auto qintervals = auxetic_intervals(qpath);

    PtList quad_pts;
    double w12_dev = 0.0;
    for (const auto& g : qpath.grams) {
        quad_pts.emplace_back(g(0, 0), g(1, 1));
        w12_dev = std::max(w12_dev, std::abs(g(0, 1) - 3.125));
    }

    const FrameworkSpec spec = validate_spec(quad_framework_spec(l));
    const LatticeConfig cfg = lattice_config(qpath.quads.front());

    // Pass 1: coarse loop for an arc-length estimate.
    const double coarse_step =
        2.0 * M_PI * (1.0 + x_norm(cfg)) / 256.0;
    const LatticePath coarse =
        continue_path(spec, cfg, coarse_step, 40 * 256);
    if (coarse.verdict != PathVerdict::Closed)
        return "coarse continuation did not close";
    double length = 0.0;
    for (size_t i = 0; i + 1 < coarse.configs.size(); ++i) {
        double s = 0.0;
        for (int k = 0; k < 2; ++k) {
            const double d =
                coarse.configs[i + 1].q[k] - coarse.configs[i].q[k];
            s += d * d;
        }
        for (int t = 0; t < 3; ++t) {
            const double d = coarse.configs[i + 1].omega.packed()[t] -
                             coarse.configs[i].omega.packed()[t];
            s += d * d;
        }
        length += std::sqrt(s);
    }

    // Pass 2: fine loop at roughly 32000 samples, matching the trace
    // resolution so polyline discretization stays well under the
    // Hausdorff tolerance.
    const LatticePath fine =
        continue_path(spec, cfg, length / 32000.0, 64000);
    if (fine.verdict != PathVerdict::Closed)
        return "fine continuation did not close";

    PtList cont_pts;
    for (const auto& c : fine.configs) {
        cont_pts.emplace_back(c.omega(0, 0), c.omega(1, 1));
        w12_dev = std::max(w12_dev, std::abs(c.omega(0, 1) - 3.125));
    }
    if (w12_dev > 1e-9)
        return "w12 drifts from its pinned value by " +
               std::to_string(w12_dev);

    const SegGrid quad_grid(quad_pts);
    const SegGrid cont_grid(cont_pts);
    const double h1 = hausdorff_one_way(quad_pts, cont_grid);
    const double h2 = hausdorff_one_way(cont_pts, quad_grid);
    const double h = std::max(h1, h2);
    if (h > 1e-6) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "Hausdorff distance %.3g", h);
        return buf;
    }

    // Sign-regime runs along the continuation loop vs. traced intervals.
    const size_t n = fine.configs.size() - 1;  // drop duplicated endpoint
    std::vector<int> labels;
    for (size_t i = 0; i < n; ++i) {
        const auto& prev = fine.configs[(i + n - 1) % n].omega;
        const auto& next = fine.configs[(i + 1) % n].omega;
        std::vector<double> packed(3);
        for (int t = 0; t < 3; ++t)
            packed[t] = next.packed()[t] - prev.packed()[t];
        const Definiteness st =
            psd_status(SymMatrix::from_packed(2, packed));
        if (st == Definiteness::PositiveDefinite)
            labels.push_back(1);
        else if (st == Definiteness::NegativeDefinite)
            labels.push_back(-1);
    }
    if (labels.empty()) return "no definite velocity samples on the loop";
    int blocks = 0;
    bool saw_plus = false, saw_minus = false;
    for (size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != labels[(i + 1) % labels.size()]) ++blocks;
        (labels[i] > 0 ? saw_plus : saw_minus) = true;
    }
    if (blocks == 0) blocks = 1;
    if (!saw_plus || !saw_minus || blocks != (int)qintervals.size()) {
        char buf[96];
        std::snprintf(buf, sizeof(buf),
                      "sign regimes %d vs %zu traced intervals", blocks,
                      qintervals.size());
        return buf;
    }

    char buf[96];
    std::snprintf(buf, sizeof(buf), "Hausdorff %.2g over %zu/%zu samples", h,
                  quad_pts.size(), cont_pts.size());
    note = buf;
    return "";
}

// ---------------------------------------------------------------------------
// [7] The projected samples of every planar family lie on an implicit cubic.

std::string crit_cubic(std::string& note) {
    const LinkLengths specs[5] = {{1.0, 2.0, 3.0, 3.5},
                                  {3.0, 1.0, 3.5, 2.0},
                                  {3.0, 1.0, 1.5, 2.0},
                                  {1.0, 0.2, 2.0, 1.05},
                                  {2.0, 3.0, 1.5, 2.8}};
    double worst = 0.0;
    long long total = 0;
    for (const auto& l : specs) {
        const DeformationPath probe = trace_deformation(l, 1, 129);
        const FrameworkSpec spec = validate_spec(quad_framework_spec(l));

        LatticePath fine;
        if (grashof_class(l) == GrashofClass::SingleLoop) {
            // Tent families are unbounded in lattice coordinates: at a
            // dead point the diagonals become parallel and q runs off to
            // infinity, so continuation cannot return. Sample the
            // deformation trace instead, away from the dead points.
            const DeformationPath tr = trace_deformation(l, 1, 4097);
            fine.spec = spec;
            for (int i = 0; i < 4096; ++i) {
                const double tau = i / 4096.0;
                double dmin = 1.0;
                for (double ex : tr.excluded_params)
                    dmin = std::min(dmin, cyc_dist(tau, ex));
                if (dmin < 0.02) continue;
                fine.configs.push_back(lattice_config(tr.quad_at(tau)));
            }
        } else {
            const LatticeConfig cfg =
                lattice_config(probe.quad_at(pick_tau(probe)));
            const double coarse_step =
                2.0 * M_PI * (1.0 + x_norm(cfg)) / 256.0;
            const LatticePath coarse =
                trace_component(spec, cfg, coarse_step, 40 * 256);
            double length = 0.0;
            for (size_t i = 0; i + 1 < coarse.configs.size(); ++i) {
                double s = 0.0;
                for (int k = 0; k < 2; ++k) {
                    const double d =
                        coarse.configs[i + 1].q[k] - coarse.configs[i].q[k];
                    s += d * d;
                }
                for (int t = 0; t < 3; ++t) {
                    const double d =
                        coarse.configs[i + 1].omega.packed()[t] -
                        coarse.configs[i].omega.packed()[t];
                    s += d * d;
                }
                length += std::sqrt(s);
            }

            fine = trace_component(spec, cfg, length / 2300.0, 64000);
            if (fine.configs.size() < 2048)
                fine = trace_component(spec, cfg, length / 4000.0, 64000);
        }
        if (fine.configs.size() < 2048)
            return "only " + std::to_string(fine.configs.size()) +
                   " samples at " + describe(l);

        const CubicProjection fit = cubic_projection_samples(fine);
        if (fit.fit_warning || fit.max_residual > 1e-8) {
            char buf[128];
            std::snprintf(buf, sizeof(buf),
                          "cubic residual %.3g at %s", fit.max_residual,
                          describe(l).c_str());
            return buf;
        }
        worst = std::max(worst, fit.max_residual);
        total += (long long)fine.configs.size();
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max residual %.2g over %lld samples",
                  worst, total);
    note = buf;
    return "";
}

// ---------------------------------------------------------------------------
// [8] The analytic Jacobian of the length equations matches central
//     finite differences.

std::string crit_jacobian(std::string& note) {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const FrameworkSpec quad =
        validate_spec(quad_framework_spec(LinkLengths{1.0, 2.0, 3.0, 3.5}));
    const FrameworkSpec d3 = validate_spec(d3_spec());
    const double h = 1e-5;
    double worst = 0.0;

    for (int trial = 0; trial < 100; ++trial) {
        const FrameworkSpec& spec = trial < 60 ? quad : d3;
        const int d = spec.dimension;
        const int T = spec.packed_dim();
        LatticeConfig cfg;
        cfg.q.resize(d);
        for (int i = 0; i < d; ++i) cfg.q[i] = U(rng);
        std::vector<double> packed(T);
        for (int t = 0; t < T; ++t) packed[t] = U(rng);
        cfg.omega = SymMatrix::from_packed(d, packed);
        for (int i = 0; i < d; ++i) cfg.omega.ref(i, i) += 2.0;

        const Eigen::MatrixXd J = jacobian(spec, cfg);
        for (int col = 0; col < d + T; ++col) {
            auto bumped = [&](double eps) {
                LatticeConfig c = cfg;
                if (col < d) {
                    c.q[col] += eps;
                } else {
                    std::vector<double> p(c.omega.packed());
                    p[col - d] += eps;
                    c.omega = SymMatrix::from_packed(d, p);
                }
                return residuals(spec, c);
            };
            const auto rp = bumped(h), rm = bumped(-h);
            for (int row = 0; row < spec.m(); ++row) {
                const double fd = (rp[row] - rm[row]) / (2.0 * h);
                worst = std::max(worst, std::abs(J(row, col) - fd));
            }
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "max deviation %.2g", worst);
    note = buf;
    if (worst > 1e-6) return buf;
    return "";
}

}  // namespace

int main() {
    struct Criterion {
        const char* desc;
        std::function<std::string(std::string&)> fn;
    };
    const Criterion criteria[] = {
        {"three-criterion equivalence on random linkages", crit_equivalence},
        {"two opposite auxetic intervals and degenerate-conic transitions "
         "per two-loop branch",
         crit_two_loop_structure},
        {"unit-cell area strictly increases along oriented intervals",
         crit_area_monotone},
        {"path topology and mirror symmetry per Grashof class",
         crit_topology},
        {"rank certificates along continued framework paths",
         crit_certificates},
        {"four-bar trace and framework continuation agree on the Gram curve",
         crit_cross_module},
        {"projected samples lie on an implicit cubic", crit_cubic},
        {"analytic Jacobian matches finite differences", crit_jacobian},
    };

    int failures = 0;
    int index = 0;
    for (const auto& c : criteria) {
        ++index;
        std::string note, err;
        try {
            err = c.fn(note);
        } catch (const std::exception& e) {
            err = std::string("exception: ") + e.what();
        }
        if (err.empty()) {
            if (note.empty())
                std::printf("[%d] %s: PASS\n", index, c.desc);
            else
                std::printf("[%d] %s: PASS (%s)\n", index, c.desc,
                            note.c_str());
        } else {
            ++failures;
            std::printf("[%d] %s: FAIL (%s)\n", index, c.desc, err.c_str());
        }
        std::fflush(stdout);
    }
    return failures;
}
