#include "crc/report.hpp"

#include "jsonw.hpp"

#include <chrono>
#include <cctype>
#include <cstdlib>
#include <cstring>

namespace crc {

namespace {

std::string strip(const std::string& s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    return out;
}

double parse_real(const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    const char* c = s.c_str();
    char* end = nullptr;
    double v = std::strtod(c, &end);
    if (end != c + s.size())
        raise(ErrorCode::BadInput, "bad numeric literal '" + s + "'");
    return v;
}

} // namespace

Complex parse_complex(const std::string& text) {
    std::string s = strip(text);
    if (s.empty()) raise(ErrorCode::BadInput, "empty complex literal");
    if (s.back() != 'i' && s.back() != 'I') return Complex(parse_real(s), 0.0);

    s.pop_back();  // drop the i
    // split point: last '+'/'-' not at position 0 and not an exponent sign
    size_t split = std::string::npos;
    for (size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) return Complex(0.0, parse_real(s));
    return Complex(parse_real(s.substr(0, split)), parse_real(s.substr(split)));
}

std::vector<Complex> parse_complex_list(const std::string& text) {
    std::vector<Complex> out;
    size_t start = 0;
    while (start <= text.size()) {
        size_t sep = text.find(';', start);
        std::string item =
            sep == std::string::npos ? text.substr(start) : text.substr(start, sep - start);
        if (!strip(item).empty()) out.push_back(parse_complex(item));
        if (sep == std::string::npos) break;
        start = sep + 1;
    }
    if (out.empty()) raise(ErrorCode::BadInput, "no complex values in '" + text + "'");
    return out;
}

std::string format_complex(Complex z) {
    if (z.imag() == 0.0) return jsonw::num(z.real());
    std::string out = jsonw::num(z.real());
    out += z.imag() < 0.0 ? "-" : "+";
    out += jsonw::num(std::abs(z.imag()));
    out += "i";
    return out;
}

Report analyze(const ReportInput& input, const Tolerances& tol) {
    auto t0 = std::chrono::steady_clock::now();

    Report rep;
    rep.input = input;
    std::vector<Complex> values = input.values;
    rep.system = (input.kind == ReportInput::Kind::Roots) ? normalize_from_roots(values, tol)
                                                          : normalize(values, tol);

    rep.equilibria = classify_all(rep.system, tol);
    rep.consistency = global_consistency(rep.equilibria, rep.system.degree(), tol);
    rep.darboux = build_integral(rep.system, tol);
    rep.rational = rational_integral(rep.system, rep.equilibria, tol);

    rep.config = separatrix_configuration(rep.system, tol);
    rep.portrait_class = classify_portrait(rep.config);
    for (size_t i = 0; i < rep.equilibria.size(); ++i)
        if (rep.equilibria[i].kind.type == EquilibriumType::IsochronousCenter)
            rep.center_types.emplace_back(int(i), center_region_type(rep.config, int(i), tol));

    if (rep.system.degree() == 3) {
        bool has_double = false, has_triple = false;
        for (const auto& e : rep.equilibria) {
            has_double |= e.multiplicity == 2;
            has_triple |= e.multiplicity == 3;
        }
        if (has_double && !has_triple)
            rep.notes.push_back(
                "open question: cubic systems with a double root are conjectured to admit "
                "no rational first integral; only the factored Darboux form is emitted");
    }

    rep.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

namespace {

std::string complex_json(Complex z) { return jsonw::quote(format_complex(z)); }

std::string equilibrium_json(const EquilibriumReport& r, const AffineMap& map) {
    jsonw::Obj o;
    o.field("location", complex_json(r.location));
    o.field("location_user", complex_json(map.inverse(r.location)));
    o.integer("multiplicity", r.multiplicity);
    o.field("lambda", complex_json(r.lambda));
    o.str("kind", equilibrium_type_name(r.kind.type));
    if (r.kind.stability) o.str("stability", stability_name(*r.kind.stability));
    if (r.kind.rotation) o.str("rotation", rotation_name(*r.kind.rotation));
    if (r.kind.type == EquilibriumType::IsochronousCenter) o.real("omega", r.kind.omega);
    if (r.kind.type == EquilibriumType::Degenerate) {
        o.integer("elliptic_sectors", r.kind.elliptic_sectors);
        if (r.kind.tangent_line)
            o.field("tangent_line", jsonw::Obj()
                                        .real("b", r.kind.tangent_line->x)
                                        .real("a", r.kind.tangent_line->y)
                                        .str());
    }
    o.boolean("marginal", r.marginal);
    return o.str();
}

std::string consistency_json(const ConsistencyVerdict& v) {
    jsonw::Obj o;
    o.boolean("pass", v.pass);
    o.boolean("applicable", v.applicable);
    o.integer("center_count", v.center_count);
    o.integer("node_count", v.node_count);
    if (v.collinearity_residual) o.real("collinearity_residual", *v.collinearity_residual);
    jsonw::Arr fails;
    for (const auto& f : v.failures) fails.push(jsonw::quote(f));
    o.field("failures", fails.str());
    return o.str();
}

} // namespace

std::string report_to_json(const Report& rep) {
    jsonw::Obj root;
    root.integer("schema", rep.schema);

    jsonw::Arr vals;
    for (Complex v : rep.input.values) vals.push(complex_json(v));
    root.field("input", jsonw::Obj()
                            .str("kind", rep.input.kind == ReportInput::Kind::Roots ? "roots"
                                                                                    : "coeffs")
                            .field("values", vals.str())
                            .str());

    const AffineMap& map = rep.system.normalization();
    root.field("normalization", jsonw::Obj()
                                    .field("scale", complex_json(map.scale))
                                    .field("shift", complex_json(map.shift))
                                    .str());
    jsonw::Arr nroots;
    for (Complex r : rep.system.roots_normalized()) nroots.push(complex_json(r));
    root.field("normalized_roots", nroots.str());
    root.integer("degree", rep.system.degree());

    jsonw::Arr eqs;
    for (const auto& e : rep.equilibria) eqs.push(equilibrium_json(e, map));
    root.field("equilibria", eqs.str());
    root.field("consistency", consistency_json(rep.consistency));
    root.field("darboux_integral", integral_to_json(rep.darboux));
    root.field("rational_integral", rational_result_to_json(rep.rational));
    root.field("separatrix_configuration", configuration_to_json(rep.config));
    root.str("class", topological_class_name(rep.portrait_class));

    jsonw::Arr centers;
    for (const auto& [idx, b] : rep.center_types)
        centers.push(jsonw::Obj()
                         .integer("equilibrium", idx)
                         .str("type", b == CenterBoundary::B1 ? "B1" : "B2")
                         .str());
    root.field("center_types", centers.str());

    jsonw::Arr notes;
    for (const auto& n : rep.notes) notes.push(jsonw::quote(n));
    root.field("notes", notes.str());

    root.field("timing", jsonw::Obj().real("elapsed_ms", rep.elapsed_ms).str());
    return root.str();
}

} // namespace crc
