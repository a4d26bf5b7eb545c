// Command-line front end. Every subcommand composes its output completely
// before emitting anything, so a failure never leaves a partial file behind.
// Exit codes: 0 success or positive decision, 1 negative decision or failed
// verification, 2 usage or format errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "floq/floquet.hpp"
#include "floq/io.hpp"
#include "floq/laurent.hpp"
#include "floq/rigidity.hpp"

namespace {

using namespace floq;

// Defaults may come from a --config JSON file; explicit flags always win,
// and FLOQUET_SEED fills in the seed when neither source names one.
struct Config {
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<int> samples;
    std::optional<double> tol;
    std::optional<std::vector<int>> periods;
    std::optional<std::vector<int>> pattern;
    std::optional<std::string> lattice;
};

Config load_config(int argc, char** argv) {
    std::string path;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc)
            path = argv[i + 1];
        else if (arg.rfind("--config=", 0) == 0)
            path = arg.substr(9);
    }
    Config cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open config " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("malformed config JSON: ") + e.what());
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
    if (j.contains("samples")) cfg.samples = j["samples"].get<int>();
    if (j.contains("tol")) cfg.tol = j["tol"].get<double>();
    if (j.contains("periods")) cfg.periods = j["periods"].get<std::vector<int>>();
    if (j.contains("pattern")) cfg.pattern = j["pattern"].get<std::vector<int>>();
    if (j.contains("lattice")) cfg.lattice = j["lattice"].get<std::string>();
    return cfg;
}

std::uint64_t default_seed(const Config& cfg) {
    if (cfg.seed) return *cfg.seed;
    if (const char* env = std::getenv("FLOQUET_SEED")) {
        char* end = nullptr;
        const unsigned long long value = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0') throw FormatError("FLOQUET_SEED is not an integer");
        return value;
    }
    return 1;
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw FormatError("cannot write " + out_path);
    f << content;
}

Potential read_pot_arg(const std::string& path) {
    if (path == "-") return read_potential(std::cin);
    return read_potential_file(path);
}

LatticeKind parse_kind(const std::string& name) {
    if (name == "hypercubic") return LatticeKind::hypercubic;
    if (name == "triangular") return LatticeKind::triangular;
    throw FormatError("unknown lattice kind \"" + name + "\"");
}

std::string index_json(const MultiIndex& n) {
    std::ostringstream out;
    out << "[";
    for (size_t j = 0; j < n.size(); ++j) out << (j ? ", " : "") << n[j];
    out << "]";
    return out.str();
}

std::string iso_json(const IsospectralityReport& r) {
    std::ostringstream out;
    out << "{\"accepted\": " << (r.accepted ? "true" : "false")
        << ", \"max_coeff_diff\": " << format_double(r.max_coeff_diff)
        << ", \"scale\": " << format_double(r.scale)
        << ", \"tolerance\": " << format_double(r.tolerance) << ", \"grid\": [";
    for (size_t j = 0; j < r.grid.size(); ++j) out << (j ? ", " : "") << r.grid[j];
    out << "]}\n";
    return out.str();
}

int run(int argc, char** argv) {
    const Config cfg = load_config(argc, argv);

    CLI::App app{"Floquet spectra of discrete periodic Schrodinger operators"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON file with default option values");

    std::vector<int> periods = cfg.periods.value_or(std::vector<int>{});
    std::vector<int> pattern = cfg.pattern.value_or(std::vector<int>{});
    std::string lattice = cfg.lattice.value_or("hypercubic");
    std::uint64_t seed = default_seed(cfg);
    int trials = cfg.trials.value_or(20);
    int samples = cfg.samples.value_or(100);
    const double tol9 = cfg.tol.value_or(1e-9);
    const double tol8 = cfg.tol.value_or(1e-8);

    // gen
    auto* gen = app.add_subcommand("gen", "draw a reproducible random potential");
    std::string gen_mode = "real", gen_out = "-";
    bool gen_complex_values = false;
    {
        auto* o = gen->add_option("--periods", periods, "lattice periods")->delimiter(',');
        if (!cfg.periods) o->required();
        gen->add_option("--lattice", lattice, "hypercubic or triangular");
        gen->add_option("--mode", gen_mode, "real, complex, separable, or nonseparable");
        gen->add_option("--pattern", pattern, "block sizes for (non)separable draws")
            ->delimiter(',');
        gen->add_flag("--complex-values", gen_complex_values,
                      "draw complex component values in (non)separable modes");
        gen->add_option("--seed", seed, "PRNG seed");
        gen->add_option("--out", gen_out, "output file, - for stdout");
    }

    // dft
    auto* dftc = app.add_subcommand("dft", "Fourier coefficients of a potential");
    std::string dft_in = "-", dft_out = "-";
    dftc->add_option("--in", dft_in, "potential JSON, - for stdin");
    dftc->add_option("--out", dft_out, "output file, - for stdout");

    // separable
    auto* sep = app.add_subcommand("separable", "test block separability (exit 1 if not)");
    std::string sep_in = "-";
    double sep_tol = cfg.tol.value_or(kSeparabilityTol);
    {
        sep->add_option("--in", sep_in, "potential JSON, - for stdin");
        auto* o = sep->add_option("--pattern", pattern, "block sizes")->delimiter(',');
        if (!cfg.pattern) o->required();
        sep->add_option("--tol", sep_tol, "relative tolerance");
    }

    // split
    auto* spl = app.add_subcommand("split", "decompose a separable potential");
    std::string spl_in = "-", spl_prefix;
    double spl_tol = cfg.tol.value_or(kSeparabilityTol);
    {
        spl->add_option("--in", spl_in, "potential JSON, - for stdin");
        auto* o = spl->add_option("--pattern", pattern, "block sizes")->delimiter(',');
        if (!cfg.pattern) o->required();
        spl->add_option("--tol", spl_tol, "relative tolerance");
        spl->add_option("--out-prefix", spl_prefix, "prefix for the output files")->required();
    }

    // spectrum
    auto* spec_cmd = app.add_subcommand("spectrum", "eigenvalue or charpoly table over k");
    std::string spm_in = "-", spm_out = "-";
    std::vector<double> spm_k;
    std::vector<int> spm_grid;
    {
        spec_cmd->add_option("--in", spm_in, "potential JSON, - for stdin");
        auto* ko = spec_cmd->add_option("--k", spm_k, "single boundary condition")->delimiter(',');
        auto* go = spec_cmd->add_option("--grid", spm_grid, "per-axis sample counts")
                       ->delimiter(',');
        ko->excludes(go);
        spec_cmd->add_option("--out", spm_out, "output file, - for stdout");
    }

    // isospectral
    auto* iso = app.add_subcommand("isospectral", "Floquet isospectrality test (exit 1 if not)");
    std::string iso_a, iso_b;
    double iso_tol = tol9;
    iso->add_option("--a", iso_a, "first potential JSON")->required();
    iso->add_option("--b", iso_b, "second potential JSON")->required();
    iso->add_option("--tol", iso_tol, "relative tolerance");

    // fermi
    auto* fer = app.add_subcommand("fermi", "level-set comparison at fixed lambda");
    std::string fer_a, fer_b;
    double fer_re = 0.0, fer_im = 0.0, fer_tol = tol9;
    fer->add_option("--a", fer_a, "first potential JSON")->required();
    fer->add_option("--b", fer_b, "second potential JSON")->required();
    fer->add_option("--lambda-re", fer_re, "real part of lambda")->required();
    fer->add_option("--lambda-im", fer_im, "imaginary part of lambda");
    fer->add_option("--tol", fer_tol, "relative tolerance");

    // invariants
    auto* inv = app.add_subcommand("invariants", "spectral-invariant agreement report");
    std::string inv_a, inv_b;
    inv->add_option("--a", inv_a, "first potential JSON")->required();
    inv->add_option("--b", inv_b, "second potential JSON")->required();
    inv->add_option("--pattern", pattern, "block sizes for the power sums")->delimiter(',');
    inv->add_option("--samples", samples, "green pairing sample count");
    inv->add_option("--seed", seed, "sampling seed");

    // charpoly
    auto* chp = app.add_subcommand("charpoly", "characteristic Laurent polynomial dump");
    std::string chp_in = "-", chp_out = "-";
    bool chp_tilde = false;
    chp->add_option("--in", chp_in, "potential JSON, - for stdin");
    chp->add_flag("--tilde", chp_tilde, "dual form: exponents on the period sublattice");
    chp->add_option("--out", chp_out, "output file, - for stdout");

    // extract
    auto* ext = app.add_subcommand("extract", "component charpoly straight off the spectrum");
    std::string ext_in = "-", ext_out = "-";
    int ext_keep = 0;
    double ext_tol = tol8;
    {
        ext->add_option("--in", ext_in, "potential JSON, - for stdin");
        auto* o = ext->add_option("--pattern", pattern, "block sizes")->delimiter(',');
        if (!cfg.pattern) o->required();
        ext->add_option("--keep", ext_keep, "block to extract (0-based)")->required();
        ext->add_option("--tol", ext_tol, "factorization residual tolerance");
        ext->add_option("--out", ext_out, "output file, - for stdout");
    }

    // verify
    auto* ver = app.add_subcommand("verify", "run a verification suite (exit 1 on failure)");
    std::string ver_suite;
    std::vector<int> ver_tri_periods{2, 2};
    bool ver_json = false;
    {
        ver->add_option("suite", ver_suite, "main2, main3, key, tri, or all")->required();
        auto* po = ver->add_option("--periods", periods, "lattice periods")->delimiter(',');
        if (!cfg.periods) po->default_val(std::vector<int>{2, 3});
        auto* pa = ver->add_option("--pattern", pattern, "block sizes")->delimiter(',');
        if (!cfg.pattern) pa->default_val(std::vector<int>{1, 1});
        ver->add_option("--tri-periods", ver_tri_periods, "periods for the triangular suite")
            ->delimiter(',');
        ver->add_option("--trials", trials, "trials per suite");
        ver->add_option("--seed", seed, "base seed");
        ver->add_flag("--json", ver_json, "print JSON reports instead of text");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (*gen) {
        const LatticeSpec spec{periods, parse_kind(lattice)};
        RandomMode mode;
        if (gen_mode == "real")
            mode = RandomMode::real();
        else if (gen_mode == "complex")
            mode = RandomMode::complex_valued();
        else if (gen_mode == "separable" || gen_mode == "nonseparable") {
            if (pattern.empty()) throw FormatError("--pattern is required for " + gen_mode);
            const SeparabilityPattern p{pattern};
            mode = gen_mode == "separable"
                       ? RandomMode::separable(p, !gen_complex_values)
                       : RandomMode::nonseparable(p, !gen_complex_values);
        } else {
            throw FormatError("unknown mode \"" + gen_mode + "\"");
        }
        std::ostringstream os;
        write_potential(os, random_potential(spec, seed, mode));
        emit(gen_out, os.str());
        return 0;
    }

    if (*dftc) {
        std::ostringstream os;
        write_fourier(os, dft(read_pot_arg(dft_in)));
        emit(dft_out, os.str());
        return 0;
    }

    if (*sep) {
        const Potential v = read_pot_arg(sep_in);
        const SeparabilityResult r = is_separable(dft(v), SeparabilityPattern{pattern}, sep_tol);
        std::ostringstream os;
        os << "{\"separable\": " << (r.separable ? "true" : "false")
           << ", \"max_violation\": " << format_double(r.max_violation)
           << ", \"scale\": " << format_double(r.scale) << ", \"witness\": "
           << (r.witness ? index_json(*r.witness) : std::string("null")) << "}\n";
        emit("-", os.str());
        return r.separable ? 0 : 1;
    }

    if (*spl) {
        const Potential v = read_pot_arg(spl_in);
        const SeparabilityPattern p{pattern};
        const SeparabilityResult r = is_separable(dft(v), p, spl_tol);
        if (!r.separable) {
            std::cerr << "not separable: witness " << index_json(*r.witness)
                      << " with |coefficient| " << format_double(r.max_violation) << "\n";
            return 1;
        }
        const SplitResult parts = split(v, p, spl_tol);
        std::ostringstream constant;
        constant << "{\"constant\": [" << format_double(parts.constant.real()) << ", "
                 << format_double(parts.constant.imag()) << "]}\n";
        std::vector<std::string> comp_text(parts.components.size());
        for (size_t j = 0; j < parts.components.size(); ++j) {
            std::ostringstream os;
            write_potential(os, parts.components[j]);
            comp_text[j] = os.str();
        }
        emit(spl_prefix + "_constant.json", constant.str());
        for (size_t j = 0; j < comp_text.size(); ++j)
            emit(spl_prefix + "_component_" + std::to_string(j) + ".json", comp_text[j]);
        return 0;
    }

    if (*spec_cmd) {
        const Potential v = read_pot_arg(spm_in);
        const int d = v.spec.dimension();
        std::vector<std::vector<double>> kpoints;
        if (!spm_k.empty()) {
            kpoints.push_back(spm_k);
        } else if (!spm_grid.empty()) {
            std::vector<int> grid = spm_grid;
            if (static_cast<int>(grid.size()) == 1) grid.assign(d, grid[0]);
            if (static_cast<int>(grid.size()) != d)
                throw FormatError("--grid needs one count or one per axis");
            std::vector<int> idx(d, 0);
            for (;;) {
                std::vector<double> k(d);
                for (int j = 0; j < d; ++j) k[j] = static_cast<double>(idx[j]) / grid[j];
                kpoints.push_back(k);
                int j = d - 1;
                while (j >= 0 && ++idx[j] == grid[j]) idx[j--] = 0;
                if (j < 0) break;
            }
        } else {
            throw FormatError("spectrum needs --k or --grid");
        }
        std::ostringstream os;
        write_spectrum_csv(os, v, kpoints);
        emit(spm_out, os.str());
        return 0;
    }

    if (*iso) {
        const IsospectralityReport r =
            floquet_isospectral(read_pot_arg(iso_a), read_pot_arg(iso_b), iso_tol);
        emit("-", iso_json(r));
        return r.accepted ? 0 : 1;
    }

    if (*fer) {
        const IsospectralityReport r = fermi_isospectral_at(
            read_pot_arg(fer_a), read_pot_arg(fer_b), Complex{fer_re, fer_im}, fer_tol);
        emit("-", iso_json(r));
        return r.accepted ? 0 : 1;
    }

    if (*inv) {
        std::optional<SeparabilityPattern> p;
        if (!pattern.empty()) p = SeparabilityPattern{pattern};
        const RigidityReport r =
            verify_key1_key4(read_pot_arg(inv_a), read_pot_arg(inv_b), p, samples, seed);
        emit("-", report_json(r));
        return r.all_passed() ? 0 : 1;
    }

    if (*chp) {
        const Potential v = read_pot_arg(chp_in);
        std::ostringstream os;
        write_laurent(os, chp_tilde ? recover_Ptilde(v) : recover_P(v));
        emit(chp_out, os.str());
        return 0;
    }

    if (*ext) {
        const Potential v = read_pot_arg(ext_in);
        const ExtractionResult r =
            extract_component_charpoly(v, SeparabilityPattern{pattern}, ext_keep, ext_tol);
        std::ostringstream os;
        write_laurent(os, r.component);
        emit(ext_out, os.str());
        return 0;
    }

    if (*ver) {
        const LatticeSpec spec{periods, LatticeKind::hypercubic};
        const SeparabilityPattern p{pattern};
        std::vector<RigidityReport> reports;
        if (ver_suite == "main2" || ver_suite == "all")
            reports.push_back(verify_thm_main2(spec, p, trials, seed));
        if (ver_suite == "main3" || ver_suite == "all")
            reports.push_back(verify_thm_main3(spec, p, trials, seed));
        if (ver_suite == "key" || ver_suite == "all")
            reports.push_back(verify_key_suite(spec, trials, seed));
        if (ver_suite == "tri" || ver_suite == "all")
            reports.push_back(verify_triangular(ver_tri_periods, trials, seed));
        if (reports.empty()) throw FormatError("unknown suite \"" + ver_suite + "\"");
        std::ostringstream os;
        bool ok = true;
        for (const RigidityReport& r : reports) {
            os << (ver_json ? report_json(r) : report_text(r));
            ok &= r.all_passed();
        }
        emit("-", os.str());
        return ok ? 0 : 1;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
