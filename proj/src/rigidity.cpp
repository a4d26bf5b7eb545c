#include "floq/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "floq/floquet.hpp"
#include "floq/rng.hpp"

namespace floq {

namespace {

constexpr double kIsoTol = 1e-9;
constexpr double kSepTol = 1e-9;
constexpr double kCrossMassTol = 1e-18;  // relative to squared coefficient scale
constexpr double kComponentTol = 1e-8;

std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index) {
    return Rng::substream(seed, index).next_u64();
}

bool all_zero(const MultiIndex& t) {
    return std::all_of(t.begin(), t.end(), [](int x) { return x == 0; });
}

MultiIndex draw_translation(Rng& rng, const std::vector<int>& periods) {
    MultiIndex t(periods.size(), 0);
    const bool can_move =
        std::any_of(periods.begin(), periods.end(), [](int q) { return q > 1; });
    do {
        for (size_t j = 0; j < periods.size(); ++j) t[j] = rng.below(periods[j]);
    } while (can_move && all_zero(t));
    return t;
}

CheckResult make_check(std::string name, double value, double tol, std::string detail = "") {
    return {std::move(name), value <= tol, value, tol, std::move(detail)};
}

std::string trial_tag(const LatticeSpec& spec, int trials) {
    std::ostringstream os;
    os << trials << " trials on " << to_string(spec);
    return os.str();
}

// sum over the cross-index set of |Fhat(l)|^2, relative to scale^2.
double cross_mass_rel(const FourierTable& f, const SeparabilityPattern& p) {
    double mass = 0.0;
    for (const MultiIndex& l : p.cross_indices(f.spec)) mass += std::norm(f.at(l));
    const double scale = std::max(1.0, f.max_abs());
    return mass / (scale * scale);
}

}  // namespace

bool RigidityReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.passed; });
}

std::pair<Potential, Potential> isospectral_pair(const LatticeSpec& spec, std::uint64_t seed,
                                                 PairMode mode,
                                                 const std::optional<SeparabilityPattern>& pattern,
                                                 bool real_values) {
    spec.validate();
    if (mode == PairMode::component_translate && !pattern)
        throw std::invalid_argument("component_translate needs a separability pattern");

    const RandomMode draw = pattern ? RandomMode::separable(*pattern, real_values)
                            : real_values ? RandomMode::real()
                                          : RandomMode::complex_valued();
    const Potential v = random_potential(spec, seed, draw);
    Rng aux = Rng::substream(seed, 1);

    Potential y = v;
    if (mode == PairMode::translate) {
        y = translate(v, draw_translation(aux, spec.periods));
    } else {
        const SeparabilityPattern& p = *pattern;
        SplitResult parts = split(v, p);
        MultiIndex t = draw_translation(aux, spec.periods);
        std::vector<Potential> shifted;
        for (int j = 0; j < p.block_count(); ++j)
            shifted.push_back(translate(parts.components[j], p.project(t, j)));
        y = join(spec, parts.constant, shifted, p);
    }

    if (!floquet_isospectral(v, y, kIsoTol).accepted)
        throw std::logic_error("constructed pair failed its isospectrality self-check");
    return {v, y};
}

RigidityReport verify_thm_main2(const LatticeSpec& spec, const SeparabilityPattern& pattern,
                                int trials, std::uint64_t seed) {
    spec.validate();
    pattern.validate(spec);
    double worst_iso = 0.0, worst_sep = 0.0, worst_mass_v = 0.0, worst_mass_y = 0.0;
    for (int t = 0; t < trials; ++t) {
        const PairMode mode = t % 2 ? PairMode::component_translate : PairMode::translate;
        const auto [v, y] =
            isospectral_pair(spec, child_seed(seed, t), mode, pattern, /*real_values=*/true);
        const IsospectralityReport iso = floquet_isospectral(v, y, kIsoTol);
        worst_iso = std::max(worst_iso, iso.max_coeff_diff / iso.scale);
        const SeparabilityResult sep = is_separable(dft(y), pattern, kSepTol);
        worst_sep = std::max(worst_sep, sep.max_violation / sep.scale);
        worst_mass_v = std::max(worst_mass_v, cross_mass_rel(dft(v), pattern));
        worst_mass_y = std::max(worst_mass_y, cross_mass_rel(dft(y), pattern));
    }
    RigidityReport rep;
    rep.suite = "separability transfer";
    const std::string tag = trial_tag(spec, trials);
    rep.checks.push_back(make_check("pairs accepted as isospectral", worst_iso, kIsoTol, tag));
    rep.checks.push_back(make_check("isospectral partner stays separable", worst_sep, kSepTol, tag));
    rep.checks.push_back(
        make_check("cross-index Fourier mass of V at roundoff", worst_mass_v, kCrossMassTol, tag));
    rep.checks.push_back(
        make_check("cross-index Fourier mass of Y at roundoff", worst_mass_y, kCrossMassTol, tag));
    return rep;
}

RigidityReport verify_thm_main3(const LatticeSpec& spec, const SeparabilityPattern& pattern,
                                int trials, std::uint64_t seed) {
    spec.validate();
    pattern.validate(spec);
    const int r = pattern.block_count();
    double worst_iso = 0.0, worst_comp = 0.0, worst_extract = 0.0;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t cs = child_seed(seed, t);
        const Potential v =
            random_potential(spec, cs, RandomMode::separable(pattern, /*real_values=*/false));
        const SplitResult pv = split(v, pattern);

        // Per-component translations plus constants summing to zero: the
        // components change individually, the joint spectrum does not.
        Rng aux = Rng::substream(cs, 1);
        const MultiIndex t_all = draw_translation(aux, spec.periods);
        std::vector<Complex> shifts(r);
        Complex balance = 0.0;
        for (int j = 0; j + 1 < r; ++j) {
            shifts[j] = aux.complex_pm1();
            balance += shifts[j];
        }
        shifts[r - 1] = -balance;
        std::vector<Potential> parts;
        for (int j = 0; j < r; ++j)
            parts.push_back(shift_by_constant(translate(pv.components[j], pattern.project(t_all, j)),
                                              shifts[j]));
        const Potential y = join(spec, pv.constant, parts, pattern);

        const IsospectralityReport iso = floquet_isospectral(v, y, kIsoTol);
        worst_iso = std::max(worst_iso, iso.max_coeff_diff / iso.scale);

        const SplitResult py = split(y, pattern);
        for (int j = 0; j < r; ++j) {
            const LaurentPoly pt_v = recover_Ptilde(pv.components[j]);
            const LaurentPoly pt_y = recover_Ptilde(py.components[j]);
            worst_comp = std::max(worst_comp, compare(pt_v, pt_y).rel());
            worst_extract = std::max(
                worst_extract,
                compare(extract_component_charpoly(v, pattern, j).component, pt_v).rel());
            worst_extract = std::max(
                worst_extract,
                compare(extract_component_charpoly(y, pattern, j).component, pt_y).rel());
        }
    }
    RigidityReport rep;
    rep.suite = "componentwise rigidity";
    const std::string tag = trial_tag(spec, trials);
    rep.checks.push_back(make_check("pairs accepted as isospectral", worst_iso, kIsoTol, tag));
    rep.checks.push_back(
        make_check("component charpolys agree across the pair", worst_comp, kComponentTol, tag));
    rep.checks.push_back(make_check("extraction reproduces the component charpolys", worst_extract,
                                    kComponentTol, tag));
    return rep;
}

RigidityReport verify_key1_key4(const Potential& v, const Potential& y,
                                std::optional<SeparabilityPattern> pattern, int g55_samples,
                                std::uint64_t sample_seed, const InvariantTolerances& tol) {
    v.validate();
    y.validate();
    if (!(v.spec == y.spec))
        throw std::invalid_argument("verify_key1_key4 expects matching lattices");
    if (!pattern && v.spec.dimension() >= 2)
        pattern = SeparabilityPattern{std::vector<int>(v.spec.dimension(), 1)};

    RigidityReport rep;
    rep.suite = "invariant agreement";

    const Complex mv = mean(v), my = mean(y);
    const double mean_scale = std::max({1.0, std::abs(mv), std::abs(my)});
    rep.checks.push_back(make_check("means agree", std::abs(mv - my) / mean_scale, tol.mean));

    const G55Report g = check_g55(v, y, g55_samples, sample_seed);
    std::ostringstream gtag;
    gtag << g.samples << " samples";
    rep.checks.push_back(
        make_check("green pairing samples agree", g.max_abs_diff / g.scale, tol.g55, gtag.str()));

    const FourierTable fv = dft(v), fy = dft(y);
    double pw_diff = 0.0, pw_scale = 1.0;
    if (pattern) {
        const BlockPowerSums sv = block_power_sums(fv, *pattern);
        const BlockPowerSums sy = block_power_sums(fy, *pattern);
        pw_diff = std::abs(sv.total - sy.total);
        pw_scale = std::max({pw_scale, sv.total, sy.total});
        for (int j = 0; j < pattern->block_count(); ++j) {
            pw_diff = std::max(pw_diff, std::abs(sv.per_block[j] - sy.per_block[j]));
            pw_scale = std::max({pw_scale, sv.per_block[j], sy.per_block[j]});
        }
    } else {
        double tv = 0.0, ty = 0.0;
        for (const Complex& c : fv.coefficients) tv += std::norm(c);
        for (const Complex& c : fy.coefficients) ty += std::norm(c);
        pw_diff = std::abs(tv - ty);
        pw_scale = std::max({pw_scale, tv, ty});
    }
    rep.checks.push_back(make_check("fourier power sums agree", pw_diff / pw_scale, tol.power));

    const IsospectralityReport iso = floquet_isospectral(v, y, tol.isospectral);
    rep.checks.push_back(make_check("floquet isospectrality", iso.max_coeff_diff / iso.scale,
                                    tol.isospectral));
    return rep;
}

RigidityReport verify_key_suite(const LatticeSpec& spec, int trials, std::uint64_t seed) {
    spec.validate();
    RigidityReport rep;
    for (int t = 0; t < trials; ++t) {
        const auto [v, y] = isospectral_pair(spec, child_seed(seed, t), PairMode::translate, {},
                                             /*real_values=*/true);
        const RigidityReport one = verify_key1_key4(v, y);
        if (t == 0) {
            rep = one;
        } else {
            for (size_t c = 0; c < rep.checks.size(); ++c) {
                rep.checks[c].passed &= one.checks[c].passed;
                rep.checks[c].value = std::max(rep.checks[c].value, one.checks[c].value);
            }
        }
    }
    rep.suite = "invariant suite";
    for (CheckResult& c : rep.checks) c.detail = trial_tag(spec, trials);
    return rep;
}

RigidityReport verify_triangular(const std::vector<int>& periods, int trials, std::uint64_t seed) {
    LatticeSpec spec{periods, LatticeKind::triangular};
    spec.validate();
    const int q = spec.site_count();

    // Dual-form equivalence: charpoly of the hopping matrix at w = z^q must
    // match the charpoly of the Fourier-conjugated matrix at z.
    double worst_dual = 0.0;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t cs = child_seed(seed, t);
        const Potential v = random_potential(spec, cs, RandomMode::complex_valued());
        const FourierTable f = dft(v);
        Rng aux = Rng::substream(cs, 1);
        std::vector<Complex> z(2), w(2);
        for (int j = 0; j < 2; ++j) {
            z[j] = std::polar(1.0, 2.0 * std::numbers::pi * aux.uniform01());
            w[j] = std::pow(z[j], spec.periods[j]);
        }
        const std::vector<Complex> ca = charpoly_coeffs(build_dz_tri(v, w).entries);
        const std::vector<Complex> cb = charpoly_coeffs(build_dual_tri(f, z).entries);
        double diff = 0.0, scale = 1.0;
        for (int i = 0; i <= q; ++i) {
            diff = std::max(diff, std::abs(ca[i] - cb[i]));
            scale = std::max({scale, std::abs(ca[i]), std::abs(cb[i])});
        }
        worst_dual = std::max(worst_dual, diff / scale);
    }

    double worst_iso = 0.0;
    for (int t = 0; t < trials; ++t) {
        const auto [v, y] = isospectral_pair(spec, child_seed(seed, 0x10000 + t),
                                             PairMode::translate, {}, /*real_values=*/false);
        const IsospectralityReport iso = floquet_isospectral(v, y, kIsoTol);
        worst_iso = std::max(worst_iso, iso.max_coeff_diff / iso.scale);
    }

    const SeparabilityPattern p11{{1, 1}};
    const int transfer_trials = std::max(1, trials / 2);
    double worst_sep = 0.0, worst_mass = 0.0;
    for (int t = 0; t < transfer_trials; ++t) {
        const auto [v, y] = isospectral_pair(spec, child_seed(seed, 0x20000 + t),
                                             PairMode::translate, p11, /*real_values=*/true);
        const SeparabilityResult sep = is_separable(dft(y), p11, kSepTol);
        worst_sep = std::max(worst_sep, sep.max_violation / sep.scale);
        worst_mass = std::max(worst_mass, cross_mass_rel(dft(y), p11));
    }

    RigidityReport rep;
    rep.suite = "triangular lattice";
    const std::string tag = trial_tag(spec, trials);
    rep.checks.push_back(make_check("dual forms agree at sampled points", worst_dual, kIsoTol, tag));
    rep.checks.push_back(make_check("translated pairs stay isospectral", worst_iso, kIsoTol, tag));
    rep.checks.push_back(make_check("isospectral partner stays separable", worst_sep, kSepTol,
                                    trial_tag(spec, transfer_trials)));
    rep.checks.push_back(make_check("cross-index Fourier mass of Y at roundoff", worst_mass,
                                    kCrossMassTol, trial_tag(spec, transfer_trials)));
    return rep;
}

}  // namespace floq
