#include "cli.hpp"

#include "crc/render.hpp"
#include "crc/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace crc::cli {

namespace {

struct CommonArgs {
    std::string roots_text;
    std::string coeffs_text;
    Tolerances tol;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    auto* roots = cmd->add_option("--roots", args.roots_text,
                                  "roots of the complex polynomial, ';'-separated (a+bi)");
    auto* coeffs = cmd->add_option("--coeffs", args.coeffs_text,
                                   "coefficients, highest degree first, ';'-separated");
    roots->excludes(coeffs);
    coeffs->excludes(roots);

    cmd->add_option("--tol-mult", args.tol.root_cluster, "root clustering tolerance")
        ->envname("CRC_TOL_MULT");
    cmd->add_option("--tol-class", args.tol.classify, "center/node classification margin")
        ->envname("CRC_TOL_CLASS");
    cmd->add_option("--tol-geom", args.tol.collinear, "collinearity tolerance")
        ->envname("CRC_TOL_GEOM");
    cmd->add_option("--tol-sing", args.tol.singular, "singularity clearance")
        ->envname("CRC_TOL_SING");
    cmd->add_option("--tol-seed", args.tol.seed_offset, "separatrix seed offset")
        ->envname("CRC_TOL_SEED");
    cmd->add_option("--tol-land", args.tol.landing, "equilibrium capture radius")
        ->envname("CRC_TOL_LAND");
    cmd->add_option("--trace-budget", args.tol.trace_budget, "rescaled-time trace budget")
        ->envname("CRC_TRACE_BUDGET");
    cmd->add_option("--rk-tol", args.tol.rk_tol, "adaptive RK relative tolerance")
        ->envname("CRC_RK_TOL");
    cmd->add_option("--v-max", args.tol.chart_vmax, "chart validity bound")
        ->envname("CRC_V_MAX");
    cmd->add_option("--max-denominator", args.tol.max_denominator,
                    "commensurability denominator bound")
        ->envname("CRC_MAX_DENOMINATOR");
}

ReportInput input_from(const CommonArgs& args) {
    ReportInput in;
    if (!args.roots_text.empty()) {
        in.kind = ReportInput::Kind::Roots;
        in.values = parse_complex_list(args.roots_text);
    } else if (!args.coeffs_text.empty()) {
        in.kind = ReportInput::Kind::Coeffs;
        in.values = parse_complex_list(args.coeffs_text);
    } else {
        raise(ErrorCode::BadInput, "one of --roots or --coeffs is required");
    }
    return in;
}

void print_equilibria(const Report& rep) {
    std::cout << "system: degree " << rep.system.degree() << ", normalized roots:";
    for (Complex r : rep.system.roots_normalized()) std::cout << " " << format_complex(r) << ";";
    std::cout << "\n";
    const AffineMap& map = rep.system.normalization();
    if (!map.is_identity())
        std::cout << "normalization: zeta = " << format_complex(map.scale) << " * (z - "
                  << format_complex(map.shift) << ")\n";
    std::cout << "equilibria:\n";
    for (const auto& e : rep.equilibria) {
        std::cout << "  " << format_complex(e.location) << "  multiplicity " << e.multiplicity
                  << "  " << equilibrium_type_name(e.kind.type);
        if (e.kind.stability) std::cout << " " << stability_name(*e.kind.stability);
        if (e.kind.rotation) std::cout << " " << rotation_name(*e.kind.rotation);
        if (e.kind.type == EquilibriumType::IsochronousCenter)
            std::cout << " omega=" << e.kind.omega;
        if (e.kind.type == EquilibriumType::Degenerate)
            std::cout << " elliptic_sectors=" << e.kind.elliptic_sectors;
        std::cout << "  lambda=" << format_complex(e.lambda);
        if (e.marginal) std::cout << "  [numerically marginal]";
        std::cout << "\n";
    }
    std::cout << "consistency: " << (rep.consistency.pass ? "pass" : "FAIL");
    for (const auto& f : rep.consistency.failures) std::cout << "  " << f;
    std::cout << "\n";
}

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"Cauchy-Riemann polynomial fields: equilibria, first integrals, "
                 "separatrix portraits"};
    app.require_subcommand(1);

    CommonArgs classify_args, integral_args, portrait_args, report_args;
    std::string out_path;
    bool json_flag = true;

    CLI::App* classify = app.add_subcommand("classify", "classify equilibria and portrait");
    add_common(classify, classify_args);
    CLI::App* integral = app.add_subcommand("integral", "Darboux and rational first integrals");
    add_common(integral, integral_args);
    CLI::App* portrait = app.add_subcommand("portrait", "render the Poincare-disk portrait");
    add_common(portrait, portrait_args);
    portrait->add_option("--out", out_path, "output SVG path")->required();
    CLI::App* report = app.add_subcommand("report", "full JSON report");
    add_common(report, report_args);
    report->add_flag("--json", json_flag, "emit JSON (default)");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);

    if (classify->parsed()) {
        Report rep = analyze(input_from(classify_args), classify_args.tol);
        print_equilibria(rep);
        std::cout << "class: " << topological_class_name(rep.portrait_class) << "\n";
        for (const auto& [idx, b] : rep.center_types)
            std::cout << "center " << format_complex(rep.equilibria[idx].location) << ": type "
                      << (b == CenterBoundary::B1 ? "B1" : "B2") << "\n";
        return 0;
    }
    if (integral->parsed()) {
        Report rep = analyze(input_from(integral_args), integral_args.tol);
        std::cout << "darboux_integral: " << integral_to_json(rep.darboux) << "\n";
        std::cout << "rational_integral: " << rational_result_to_json(rep.rational) << "\n";
        for (const auto& n : rep.notes) std::cout << "note: " << n << "\n";
        return 0;
    }
    if (portrait->parsed()) {
        Report rep = analyze(input_from(portrait_args), portrait_args.tol);
        RenderOptions ro;
        std::string svg = render_portrait(rep.system, rep.config, ro);
        std::ofstream out(out_path, std::ios::binary);
        if (!out) raise(ErrorCode::BadInput, "cannot write '" + out_path + "'");
        out << svg;
        std::cout << "wrote " << out_path << " (" << svg.size() << " bytes), class "
                  << topological_class_name(rep.portrait_class) << "\n";
        return 0;
    }
    Report rep = analyze(input_from(report_args), report_args.tol);
    std::cout << report_to_json(rep) << "\n";
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args) {
    try {
        return dispatch(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << "error: BadInput: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.code()) {
            case ErrorCode::BadInput:
            case ErrorCode::DegreeUnsupported:
            case ErrorCode::ZeroLeadingCoefficient:
            case ErrorCode::OutsideDisk:
                return 2;
            case ErrorCode::TraceBudgetExceeded:
                return 3;
            default:
                return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

} // namespace crc::cli
