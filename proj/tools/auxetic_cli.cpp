// Command-line front end: quad / framework / conic verbs over the library.
// Exit codes: 0 success, 2 invalid input, 3 I/O failure, 4 numerical failure
// (partial output is written where possible).

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <auxetic/io.hpp>

int main(int argc, char** argv) {
    CLI::App app{
        "Global deformation paths and auxetic regions of two-orbit periodic "
        "frameworks"};
    app.require_subcommand(1);

    auxetic::QuadRunOptions qopt;
    std::vector<double> quad_lengths;
    CLI::App* quad = app.add_subcommand(
        "quad",
        "Trace the deformation branches of a quadrilateral linkage and "
        "report its auxetic intervals");
    quad->add_option("--lengths", quad_lengths,
                     "Bar lengths l1,l2,l3,l4 (AB,BC,CD,DA)")
        ->required()
        ->delimiter(',')
        ->expected(4);
    quad->add_option("--samples", qopt.samples, "Samples per branch")
        ->check(CLI::PositiveNumber);
    quad->add_option("--tol", qopt.tol, "Relative tolerance base");
    quad->add_option("--out", qopt.out, "Output directory");
    quad->add_option("--format", qopt.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));

    auxetic::FrameworkRunOptions fopt;
    CLI::App* fw = app.add_subcommand(
        "framework",
        "Continue the solution curve of a two-orbit framework spec file");
    fw->add_option("--spec", fopt.spec_path, "Spec file (JSON)")->required();
    fw->add_option("--samples", fopt.samples,
                   "Target number of samples along the curve")
        ->check(CLI::PositiveNumber);
    fw->add_option("--tol", fopt.tol, "Relative tolerance base");
    fw->add_option("--out", fopt.out, "Output directory");
    fw->add_option("--format", fopt.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    fw->add_option("--restarts", fopt.restarts,
                   "Seeding restarts when no initial configuration is given")
        ->check(CLI::PositiveNumber);

    auxetic::ConicRunOptions copt;
    std::vector<double> conic_lengths;
    CLI::App* conic = app.add_subcommand(
        "conic",
        "Classify a single assembled configuration: five-point conic, "
        "pseudotriangle test, pointwise auxetic status");
    conic->add_option("--lengths", conic_lengths,
                      "Bar lengths l1,l2,l3,l4 (AB,BC,CD,DA)")
        ->required()
        ->delimiter(',')
        ->expected(4);
    conic->add_option("--theta", copt.theta, "Driving angle (radians)");
    conic->add_option("--branch", copt.branch, "Coupler branch")
        ->check(CLI::IsMember({1, -1}));
    conic->add_option("--tol", copt.tol, "Relative tolerance base");
    conic->add_option("--out", copt.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (quad->parsed()) {
            qopt.lengths = {quad_lengths[0], quad_lengths[1], quad_lengths[2],
                            quad_lengths[3]};
            return auxetic::run_quad(qopt, std::cout);
        }
        if (fw->parsed()) return auxetic::run_framework(fopt, std::cout);
        copt.lengths = {conic_lengths[0], conic_lengths[1], conic_lengths[2],
                        conic_lengths[3]};
        return auxetic::run_conic(copt, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return auxetic::exit_code_for(e);
    }
}
