#include "floq/io.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "floq/floquet.hpp"

namespace floq {

namespace {

using nlohmann::json;

json parse_json(std::istream& in) {
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("malformed JSON: ") + e.what());
    }
}

LatticeSpec spec_from_json(const json& j) {
    if (!j.is_object() || !j.contains("periods") || !j["periods"].is_array())
        throw FormatError("expected an object with a \"periods\" array");
    LatticeSpec spec;
    for (const json& p : j["periods"]) {
        if (!p.is_number_integer()) throw FormatError("periods must be integers");
        spec.periods.push_back(p.get<int>());
    }
    if (j.contains("lattice")) {
        const std::string kind = j["lattice"].get<std::string>();
        if (kind == "hypercubic")
            spec.kind = LatticeKind::hypercubic;
        else if (kind == "triangular")
            spec.kind = LatticeKind::triangular;
        else
            throw FormatError("unknown lattice kind \"" + kind + "\"");
    }
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
    return spec;
}

Complex complex_from_json(const json& v) {
    if (v.is_number()) return Complex{v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return Complex{v[0].get<double>(), v[1].get<double>()};
    throw FormatError("values must be numbers or [re, im] pairs");
}

std::vector<Complex> values_from_json(const json& j, const char* field, const LatticeSpec& spec) {
    if (!j.contains(field) || !j[field].is_array())
        throw FormatError(std::string("expected a \"") + field + "\" array");
    std::vector<Complex> values;
    for (const json& v : j[field]) values.push_back(complex_from_json(v));
    if (static_cast<int>(values.size()) != spec.site_count())
        throw FormatError(std::string("\"") + field + "\" length does not match the lattice");
    return values;
}

const char* kind_name(LatticeKind k) {
    return k == LatticeKind::triangular ? "triangular" : "hypercubic";
}

void write_spec_fields(std::ostream& out, const LatticeSpec& spec) {
    out << "{\"periods\": [";
    for (size_t j = 0; j < spec.periods.size(); ++j)
        out << (j ? ", " : "") << spec.periods[j];
    out << "], \"lattice\": \"" << kind_name(spec.kind) << "\"";
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Potential read_potential(std::istream& in) {
    const json j = parse_json(in);
    const LatticeSpec spec = spec_from_json(j);
    return {spec, values_from_json(j, "values", spec)};
}

void write_potential(std::ostream& out, const Potential& v) {
    v.validate();
    write_spec_fields(out, v.spec);
    out << ", \"values\": [";
    const bool real = v.is_real();
    for (size_t i = 0; i < v.values.size(); ++i) {
        out << (i ? ", " : "");
        if (real)
            out << format_double(v.values[i].real());
        else
            out << "[" << format_double(v.values[i].real()) << ", "
                << format_double(v.values[i].imag()) << "]";
    }
    out << "]}\n";
}

Potential read_potential_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    return read_potential(in);
}

void write_potential_file(const std::string& path, const Potential& v) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path);
    write_potential(out, v);
}

FourierTable read_fourier(std::istream& in) {
    const json j = parse_json(in);
    const LatticeSpec spec = spec_from_json(j);
    return {spec, values_from_json(j, "coefficients", spec)};
}

void write_fourier(std::ostream& out, const FourierTable& f) {
    write_spec_fields(out, f.spec);
    out << ", \"coefficients\": [";
    for (size_t i = 0; i < f.coefficients.size(); ++i)
        out << (i ? ", " : "") << "[" << format_double(f.coefficients[i].real()) << ", "
            << format_double(f.coefficients[i].imag()) << "]";
    out << "]}\n";
}

void write_laurent(std::ostream& out, const LaurentPoly& p) {
    for (const auto& [key, c] : p.terms) {
        for (int e : key) out << e << " ";
        out << format_double(c.real()) << " " << format_double(c.imag()) << "\n";
    }
}

LaurentPoly read_laurent(std::istream& in) {
    LaurentPoly p;
    p.vars = -1;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<std::string> tokens;
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
        if (tokens.size() < 3) throw FormatError("laurent term needs exponents plus re and im");
        const int vars = static_cast<int>(tokens.size()) - 3;
        if (p.vars == -1)
            p.vars = vars;
        else if (p.vars != vars)
            throw FormatError("laurent term lines have inconsistent lengths");
        std::vector<int> key(vars + 1);
        try {
            for (int j = 0; j <= vars; ++j) key[j] = std::stoi(tokens[j]);
            const double re = std::stod(tokens[vars + 1]);
            const double im = std::stod(tokens[vars + 2]);
            p.terms[key] = Complex{re, im};
        } catch (const std::exception&) {
            throw FormatError("malformed laurent term: " + line);
        }
    }
    if (p.vars == -1) throw FormatError("empty laurent dump");
    return p;
}

void write_spectrum_csv(std::ostream& out, const Potential& v,
                        const std::vector<std::vector<double>>& kpoints) {
    v.validate();
    const int d = v.spec.dimension();
    const int q = v.spec.site_count();
    const bool real = v.is_real();
    for (int j = 1; j <= d; ++j) out << "k" << j << ",";
    if (real) {
        for (int t = 1; t <= q; ++t) out << "lambda_" << t << (t == q ? "" : ",");
    } else {
        for (int t = 0; t <= q; ++t)
            out << "c" << t << "_re,c" << t << "_im" << (t == q ? "" : ",");
    }
    out << "\n";
    for (const std::vector<double>& k : kpoints) {
        if (static_cast<int>(k.size()) != d)
            throw FormatError("boundary condition dimension does not match the lattice");
        for (double kj : k) out << format_double(kj) << ",";
        const Eigen::MatrixXcd m = build_dk(v, k).entries;
        if (real) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
            for (int t = 0; t < q; ++t)
                out << format_double(es.eigenvalues()[t]) << (t + 1 == q ? "" : ",");
        } else {
            const std::vector<Complex> c = charpoly_coeffs(m);
            for (int t = 0; t <= q; ++t)
                out << format_double(c[t].real()) << "," << format_double(c[t].imag())
                    << (t == q ? "" : ",");
        }
        out << "\n";
    }
}

std::string report_json(const RigidityReport& r) {
    std::ostringstream out;
    out << "{\"suite\": \"" << json_escape(r.suite) << "\", \"passed\": "
        << (r.all_passed() ? "true" : "false") << ", \"checks\": [";
    for (size_t i = 0; i < r.checks.size(); ++i) {
        const CheckResult& c = r.checks[i];
        out << (i ? ", " : "") << "{\"name\": \"" << json_escape(c.name) << "\", \"passed\": "
            << (c.passed ? "true" : "false") << ", \"value\": " << format_double(c.value)
            << ", \"tolerance\": " << format_double(c.tolerance) << ", \"detail\": \""
            << json_escape(c.detail) << "\"}";
    }
    out << "]}\n";
    return out.str();
}

std::string report_text(const RigidityReport& r) {
    std::ostringstream out;
    out << r.suite << ": " << (r.all_passed() ? "PASS" : "FAIL") << "\n";
    for (const CheckResult& c : r.checks) {
        out << "  [" << (c.passed ? "pass" : "FAIL") << "] " << c.name << ": " << c.value
            << " <= " << c.tolerance;
        if (!c.detail.empty()) out << "  (" << c.detail << ")";
        out << "\n";
    }
    return out.str();
}

}  // namespace floq
