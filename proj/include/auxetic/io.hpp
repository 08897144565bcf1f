#pragma once
// File formats and the command implementations behind the CLI verbs.
//
// Spec files are JSON with exactly one of two shapes:
//   { "dimension": d, "offsets": [[..]..], "squared_lengths": [..],
//     "initial_config": { "q": [..], "omega": [packed upper] } }   (optional)
// or
//   { "quad": { "lengths": [l1, l2, l3, l4] } }
//
// Outputs (under --out DIR, or embedded in the summary with --format json):
//   path.csv / path2.csv   per-sample state of each traced branch
//   intervals.csv          branch,lo,hi,sign,strict_interior,endpoints_refined
//   gramG.csv              boundary certificates along a framework path
//   summary.json           run metadata; keys sorted, no timestamps, so
//                          identical inputs give byte-identical outputs
//
// All floating-point fields in CSV files are printed with %.17g (exact
// round-trip). Exit codes: 0 success, 2 invalid input, 3 I/O failure,
// 4 numerical failure (partial output is still written when possible).

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "continuation.hpp"
#include "errors.hpp"
#include "fourbar.hpp"
#include "framework.hpp"

namespace auxetic {

// ---------------------------------------------------------------------------
// Formatting and hashing

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Stable identifier of a framework spec (dimension, offsets, lengths).
inline std::string spec_hash(const FrameworkSpec& spec) {
    std::ostringstream os;
    os << "d=" << spec.dimension << ";n=";
    for (const auto& n : spec.offsets) {
        for (size_t k = 0; k < n.size(); ++k)
            os << (k ? "," : "") << n[k];
        os << "|";
    }
    os << ";s=";
    for (double s : spec.squared_lengths) os << format_g17(s) << "|";
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  (unsigned long long)fnv1a64(os.str()));
    return buf;
}

// ---------------------------------------------------------------------------
// Spec files

struct SpecFile {
    FrameworkSpec spec;
    std::optional<LatticeConfig> initial;
    std::optional<LinkLengths> quad_lengths;
};

inline SpecFile parse_spec_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InputError("spec file: top level must be an object");
    const bool has_quad = j.contains("quad");
    const bool has_offsets = j.contains("offsets") || j.contains("dimension") ||
                             j.contains("squared_lengths");
    if (has_quad == has_offsets)
        throw InputError(
            "spec file: provide exactly one of the offsets form or a quad block");

    SpecFile out;
    if (has_quad) {
        const auto& q = j.at("quad");
        if (!q.is_object() || !q.contains("lengths"))
            throw InputError("spec file: quad block needs a lengths array");
        const auto& L = q.at("lengths");
        if (!L.is_array() || L.size() != 4)
            throw InputError("spec file: quad lengths must be 4 numbers");
        LinkLengths l{L.at(0).get<double>(), L.at(1).get<double>(),
                      L.at(2).get<double>(), L.at(3).get<double>()};
        validate_lengths(l);
        out.quad_lengths = l;
        out.spec = quad_framework_spec(l);
        return out;
    }

    for (const char* key : {"dimension", "offsets", "squared_lengths"})
        if (!j.contains(key))
            throw InputError(std::string("spec file: missing field ") + key);
    FrameworkSpec spec;
    spec.dimension = j.at("dimension").get<int>();
    for (const auto& row : j.at("offsets")) {
        std::vector<long long> n;
        for (const auto& v : row) {
            if (!v.is_number_integer())
                throw InputError("spec file: offsets must be integers");
            n.push_back(v.get<long long>());
        }
        spec.offsets.push_back(std::move(n));
    }
    for (const auto& v : j.at("squared_lengths"))
        spec.squared_lengths.push_back(v.get<double>());
    out.spec = spec;

    if (j.contains("initial_config")) {
        const auto& ic = j.at("initial_config");
        if (!ic.is_object() || !ic.contains("q") || !ic.contains("omega"))
            throw InputError("spec file: initial_config needs q and omega");
        LatticeConfig cfg;
        for (const auto& v : ic.at("q")) cfg.q.push_back(v.get<double>());
        std::vector<double> packed;
        for (const auto& v : ic.at("omega")) packed.push_back(v.get<double>());
        if ((int)cfg.q.size() != spec.dimension ||
            (int)packed.size() != SymMatrix::packed_size(spec.dimension))
            throw InputError("spec file: initial_config dimension mismatch");
        cfg.omega = SymMatrix::from_packed(spec.dimension, packed);
        out.initial = cfg;
    }
    return out;
}

inline SpecFile load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open spec file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("spec file: invalid JSON: ") + e.what());
    }
    return parse_spec_json(j);
}

// ---------------------------------------------------------------------------
// Output plumbing

namespace detail {

inline void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir);
}

inline void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << body;
    if (!out.good()) throw IoError("write failed: " + path);
}

}  // namespace detail

// One row of the quad-verb path table.
struct QuadPathRow {
    double tau, qx, qy, w11, w12, w22, min_eig, area;
    int pseudo;
    std::string conic;
};

inline std::vector<QuadPathRow> quad_path_rows(const DeformationPath& path,
                                               double tol) {
    std::vector<QuadPathRow> rows;
    for (size_t i = 0; i < path.params.size(); ++i) {
        const Quadrilateral& quad = path.quads[i];
        const SymMatrix& w = path.grams[i];
        QuadPathRow r{};
        r.tau = path.params[i];
        const LatticeConfig cfg = lattice_config(quad, tol);
        r.qx = cfg.q[0];
        r.qy = cfg.q[1];
        r.w11 = w(0, 0);
        r.w12 = w(0, 1);
        r.w22 = w(1, 1);
        r.min_eig = sym_eigenvalues(w).front();
        r.area = unit_cell_area(quad, tol);
        try {
            r.pseudo = is_pseudotriangle(quad, tol) ? 1 : 0;
        } catch (const DegenerateAngleError&) {
            r.pseudo = 0;
        }
        try {
            r.conic = to_string(classify_conic(five_point_conic(quad, tol), tol));
        } catch (const DegeneratePencilError&) {
            r.conic = "Degenerate";
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::string quad_path_csv(const std::vector<QuadPathRow>& rows) {
    std::ostringstream os;
    os << "tau,qx,qy,w11,w12,w22,minEig,area,pseudo,conic\n";
    for (const auto& r : rows)
        os << format_g17(r.tau) << ',' << format_g17(r.qx) << ','
           << format_g17(r.qy) << ',' << format_g17(r.w11) << ','
           << format_g17(r.w12) << ',' << format_g17(r.w22) << ','
           << format_g17(r.min_eig) << ',' << format_g17(r.area) << ','
           << r.pseudo << ',' << r.conic << '\n';
    return os.str();
}

inline std::string intervals_csv(
    const std::vector<std::pair<int, std::vector<AuxeticInterval>>>& per_branch) {
    std::ostringstream os;
    os << "branch,lo,hi,sign,strict_interior,endpoints_refined\n";
    for (const auto& [branch, intervals] : per_branch)
        for (const auto& itv : intervals)
            os << branch << ',' << format_g17(itv.lo) << ','
               << format_g17(itv.hi) << ',' << itv.sign << ','
               << (itv.strict_interior ? 1 : 0) << ','
               << (itv.endpoints_refined ? 1 : 0) << '\n';
    return os.str();
}

inline nlohmann::json interval_json(const AuxeticInterval& itv) {
    return {{"lo", itv.lo},
            {"hi", itv.hi},
            {"sign", itv.sign},
            {"strict_interior", itv.strict_interior},
            {"endpoints_refined", itv.endpoints_refined}};
}

inline nlohmann::json quad_rows_json(const std::vector<QuadPathRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows)
        arr.push_back({{"tau", r.tau},
                       {"qx", r.qx},
                       {"qy", r.qy},
                       {"w11", r.w11},
                       {"w12", r.w12},
                       {"w22", r.w22},
                       {"minEig", r.min_eig},
                       {"area", r.area},
                       {"pseudo", r.pseudo},
                       {"conic", r.conic}});
    return arr;
}

// ---------------------------------------------------------------------------
// Verb: quad

struct QuadRunOptions {
    LinkLengths lengths;
    int samples = 1024;
    double tol = 1e-9;
    std::string out;           // empty: summary to stdout only
    std::string format = "csv";
};

inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ContinuationError*>(&e) ||
        dynamic_cast<const ResolutionError*>(&e) ||
        dynamic_cast<const NearSingularError*>(&e))
        return 4;
    if (dynamic_cast<const IoError*>(&e)) return 3;
    return 2;
}

inline int run_quad(const QuadRunOptions& opt, std::ostream& console) {
    nlohmann::json summary;
    summary["command"] = "quad";
    summary["lengths"] = {opt.lengths.l1, opt.lengths.l2, opt.lengths.l3,
                          opt.lengths.l4};
    summary["samples"] = opt.samples;
    summary["tol"] = opt.tol;
    summary["spec_hash"] = spec_hash(quad_framework_spec(opt.lengths));

    const bool to_files = !opt.out.empty();
    if (to_files) detail::ensure_out_dir(opt.out);
    const auto outpath = [&](const std::string& name) {
        return (std::filesystem::path(opt.out) / name).string();
    };
    auto finish = [&](int code) {
        const std::string body = summary.dump(2) + "\n";
        if (to_files) detail::write_text(outpath("summary.json"), body);
        console << body;
        return code;
    };

    try {
        const GrashofClass cls = grashof_class(opt.lengths, opt.tol);
        summary["class"] = to_string(cls);
        std::vector<int> branches{1};
        if (cls == GrashofClass::TwoLoops) branches.push_back(-1);

        std::vector<std::pair<int, std::vector<AuxeticInterval>>> all_intervals;
        nlohmann::json jbranches = nlohmann::json::array();
        int file_index = 0;
        for (int branch : branches) {
            ++file_index;
            const DeformationPath path =
                trace_deformation(opt.lengths, branch, opt.samples, opt.tol);
            const auto rows = quad_path_rows(path, opt.tol);
            if (to_files && opt.format == "csv")
                detail::write_text(
                    outpath(file_index == 1 ? "path.csv" : "path2.csv"),
                    quad_path_csv(rows));

            nlohmann::json jb;
            jb["branch"] = branch;
            jb["closed"] = path.closed;
            jb["n_samples"] = (int)path.params.size();
            jb["excluded_params"] = path.excluded_params;
            if (opt.format == "json") jb["path"] = quad_rows_json(rows);
            // Intervals may fail on resolution grounds after the paths are
            // already on disk; the partial output then stands.
            const auto intervals = auxetic_intervals(path, opt.tol);
            nlohmann::json ji = nlohmann::json::array();
            for (const auto& itv : intervals) ji.push_back(interval_json(itv));
            jb["intervals"] = ji;
            jbranches.push_back(jb);
            all_intervals.emplace_back(branch, intervals);
            summary["branches"] = jbranches;
        }
        if (to_files && opt.format == "csv")
            detail::write_text(outpath("intervals.csv"),
                               intervals_csv(all_intervals));
        return finish(0);
    } catch (const std::exception& e) {
        const int code = exit_code_for(e);
        if (code == 3) throw;  // let the caller report I/O failures directly
        summary["error"] = e.what();
        summary["exit_code"] = code;
        return finish(code);
    }
}

// ---------------------------------------------------------------------------
// Verb: framework

struct FrameworkRunOptions {
    std::string spec_path;
    int samples = 1024;
    double tol = 1e-9;
    std::string out;
    std::string format = "csv";
    int restarts = 50;
};

inline std::string framework_path_csv(const LatticePath& path) {
    const int d = path.spec.dimension;
    std::ostringstream os;
    os << "tau";
    for (int i = 0; i < d; ++i) os << ",q" << (i + 1);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) os << ",w" << (i + 1) << (j + 1);
    os << ",minEig\n";
    for (size_t k = 0; k < path.configs.size(); ++k) {
        os << format_g17(path.params[k]);
        const auto& c = path.configs[k];
        for (int i = 0; i < d; ++i) os << ',' << format_g17(c.q[i]);
        for (double w : c.omega.packed()) os << ',' << format_g17(w);
        os << ',' << format_g17(sym_eigenvalues(c.omega).front()) << '\n';
    }
    return os.str();
}

inline std::string framework_gram_csv(const LatticePath& path) {
    const int d = path.spec.dimension;
    std::ostringstream os;
    os << "tau";
    for (int i = 0; i <= d; ++i)
        for (int j = i; j <= d; ++j) os << ",g" << (i + 1) << (j + 1);
    os << ",minAbsEig,secondEig,diagDev,constraintResidual\n";
    for (size_t k = 0; k < path.configs.size(); ++k) {
        const GramCertificates cert =
            gram_certificates(path.spec, path.configs[k]);
        os << format_g17(path.params[k]);
        for (double g : cert.G.packed()) os << ',' << format_g17(g);
        os << ',' << format_g17(cert.min_abs_eigenvalue) << ','
           << format_g17(cert.second_eigenvalue) << ','
           << format_g17(cert.diag_deviation) << ','
           << format_g17(cert.constraint_residual) << '\n';
    }
    return os.str();
}

inline nlohmann::json framework_path_json(const LatticePath& path) {
    nlohmann::json arr = nlohmann::json::array();
    for (size_t k = 0; k < path.configs.size(); ++k)
        arr.push_back({{"tau", path.params[k]},
                       {"q", path.configs[k].q},
                       {"omega", path.configs[k].omega.packed()}});
    return arr;
}

inline int run_framework(const FrameworkRunOptions& opt,
                         std::ostream& console) {
    nlohmann::json summary;
    summary["command"] = "framework";
    const bool to_files = !opt.out.empty();
    if (to_files) detail::ensure_out_dir(opt.out);
    const auto outpath = [&](const std::string& name) {
        return (std::filesystem::path(opt.out) / name).string();
    };
    auto finish = [&](int code) {
        const std::string body = summary.dump(2) + "\n";
        if (to_files) detail::write_text(outpath("summary.json"), body);
        console << body;
        return code;
    };

    try {
        const SpecFile sf = load_spec_file(opt.spec_path);
        const FrameworkSpec spec = validate_spec(sf.spec);
        summary["dimension"] = spec.dimension;
        summary["offsets"] = spec.offsets;
        summary["squared_lengths"] = spec.squared_lengths;
        summary["flexibility"] = spec.flexibility();
        summary["spec_hash"] = spec_hash(spec);
        summary["tol"] = opt.tol;

        LatticeConfig cfg;
        if (sf.initial) {
            cfg = *sf.initial;
            summary["config_source"] = "initial_config";
        } else if (sf.quad_lengths) {
            grashof_class(*sf.quad_lengths, opt.tol);  // honest input errors
            DeformationPath probe =
                trace_deformation(*sf.quad_lengths, 1, 64, opt.tol);
            cfg = lattice_config(probe.quad_at(0.25), opt.tol);
            summary["config_source"] = "quad";
        } else {
            cfg = seed_config(spec, opt.restarts, 0x5eedc0de, opt.tol);
            summary["config_source"] = "seeded";
        }

        if (spec.flexibility() == 1) {
            const Eigen::VectorXd x0 = detail::pack_config(cfg);
            const double step =
                2.0 * M_PI * (1.0 + x0.norm()) / (double)opt.samples;
            const LatticePath path = trace_component(
                spec, cfg, step, 40 * opt.samples, opt.tol);
            summary["verdict"] = to_string(path.verdict);
            summary["closed"] = path.closed;
            summary["n_samples"] = (int)path.configs.size();
            double max_diag = 0.0, max_cons = 0.0, max_min_eig = 0.0;
            double min_second = std::numeric_limits<double>::infinity();
            for (const auto& c : path.configs) {
                const GramCertificates cert = gram_certificates(spec, c);
                max_diag = std::max(max_diag, cert.diag_deviation);
                max_cons = std::max(max_cons, cert.constraint_residual);
                max_min_eig =
                    std::max(max_min_eig, cert.min_abs_eigenvalue);
                min_second = std::min(min_second, cert.second_eigenvalue);
            }
            summary["certificates"] = {{"max_diag_deviation", max_diag},
                                       {"max_constraint_residual", max_cons},
                                       {"max_min_abs_eigenvalue", max_min_eig},
                                       {"min_second_eigenvalue", min_second}};
            if (to_files && opt.format == "csv") {
                detail::write_text(outpath("path.csv"),
                                   framework_path_csv(path));
                detail::write_text(outpath("gramG.csv"),
                                   framework_gram_csv(path));
            }
            if (opt.format == "json")
                summary["path"] = framework_path_json(path);
        } else {
            const LocalAuxeticResult res =
                local_auxetic_test(spec, cfg, opt.tol);
            summary["local_status"] = to_string(res.status);
            summary["best_min_eigenvalue"] = res.best_min_eigenvalue;
            summary["q"] = cfg.q;
            summary["omega"] = cfg.omega.packed();
        }
        return finish(0);
    } catch (const ContinuationFailure& e) {
        summary["error"] = e.what();
        summary["exit_code"] = 4;
        summary["n_samples"] = (int)e.partial.configs.size();
        if (to_files && opt.format == "csv" && !e.partial.configs.empty())
            detail::write_text(outpath("path.csv"),
                               framework_path_csv(e.partial));
        return finish(4);
    } catch (const std::exception& e) {
        const int code = exit_code_for(e);
        if (code == 3) throw;
        summary["error"] = e.what();
        summary["exit_code"] = code;
        return finish(code);
    }
}

// ---------------------------------------------------------------------------
// Verb: conic

struct ConicRunOptions {
    LinkLengths lengths;
    double theta = 1.0;
    int branch = 1;
    double tol = 1e-9;
    std::string out;
};

inline int run_conic(const ConicRunOptions& opt, std::ostream& console) {
    nlohmann::json summary;
    summary["command"] = "conic";
    summary["lengths"] = {opt.lengths.l1, opt.lengths.l2, opt.lengths.l3,
                          opt.lengths.l4};
    summary["theta"] = opt.theta;
    summary["branch"] = opt.branch;
    summary["spec_hash"] = spec_hash(quad_framework_spec(opt.lengths));

    const bool to_files = !opt.out.empty();
    if (to_files) detail::ensure_out_dir(opt.out);
    auto finish = [&](int code) {
        const std::string body = summary.dump(2) + "\n";
        if (to_files)
            detail::write_text(
                (std::filesystem::path(opt.out) / "summary.json").string(),
                body);
        console << body;
        return code;
    };

    try {
        const QuadAssembly asmb =
            solve_coupler(opt.lengths, opt.theta, opt.branch, opt.tol);
        summary["dead_point"] = asmb.dead_point;
        const ConicCoeffs cc = five_point_conic(asmb.quad, opt.tol);
        summary["conic"] = {
            {"coeffs", {cc.a, cc.b, cc.c, cc.d, cc.e, cc.f}},
            {"class", to_string(classify_conic(cc, opt.tol))},
            {"discriminant", cc.discriminant()}};
        try {
            summary["pseudotriangle"] = is_pseudotriangle(asmb.quad, opt.tol);
        } catch (const DegenerateAngleError&) {
            summary["pseudotriangle"] = nullptr;
        }
        summary["status"] = to_string(auxetic_status_pointwise(
            opt.lengths, opt.theta, opt.branch, opt.tol));
        return finish(0);
    } catch (const std::exception& e) {
        const int code = exit_code_for(e);
        if (code == 3) throw;
        summary["error"] = e.what();
        summary["exit_code"] = code;
        return finish(code);
    }
}

}  // namespace auxetic
