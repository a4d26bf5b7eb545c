#include "floq/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "floq/floquet.hpp"
#include "floq/rng.hpp"

namespace floq {

namespace {

Complex ipow(Complex z, int n) {
    if (n < 0) return 1.0 / ipow(z, -n);
    Complex r = 1.0;
    while (n) {
        if (n & 1) r *= z;
        z *= z;
        n >>= 1;
    }
    return r;
}

// -lambda + sum_j rho^j_{n_j} z_j, the linear factor attached to site n.
LaurentPoly site_linear_factor(const LatticeSpec& spec, const MultiIndex& n) {
    const int d = spec.dimension();
    LaurentPoly f;
    f.vars = d;
    std::vector<int> key(d + 1, 0);
    key[d] = 1;
    f.add_term(key, Complex{-1.0});
    key[d] = 0;
    for (int j = 0; j < d; ++j) {
        key[j] = 1;
        f.add_term(key, phase(spec, j, n[j]));
        key[j] = 0;
    }
    return f;
}

// Samples fn on the tensor grid of N_j-th roots of unity, N_j = 2 window_j
// + 1 + 2 slack, and inverts the transform axis by axis. fn returns the
// spectral coefficient vector at one z. The slack buckets fall outside the
// proven window, so their recovered mass is a direct measurement of
// aliasing: it must sit at roundoff level or the window bound is wrong.
LaurentPoly recover_grid(int dvars, const std::vector<int>& window, const RecoverOptions& opt,
                         const std::function<std::vector<Complex>(const std::vector<Complex>&)>& fn) {
    std::vector<int> n(dvars);
    long grid_size = 1;
    for (int j = 0; j < dvars; ++j) {
        n[j] = 2 * window[j] + 1 + 2 * opt.slack;
        grid_size *= n[j];
    }
    std::vector<long> stride(dvars, 1);
    for (int j = dvars - 2; j >= 0; --j) stride[j] = stride[j + 1] * n[j + 1];

    std::vector<std::vector<Complex>> samples(grid_size);
    {
        std::vector<int> idx(dvars, 0);
        std::vector<Complex> z(dvars);
        for (long g = 0; g < grid_size; ++g) {
            for (int j = 0; j < dvars; ++j)
                z[j] = std::polar(1.0, 2.0 * std::numbers::pi * idx[j] / n[j]);
            samples[g] = fn(z);
            int j = dvars - 1;
            while (j >= 0 && ++idx[j] == n[j]) idx[j--] = 0;
        }
    }
    const int spectral_len = static_cast<int>(samples[0].size());

    // coeff[b][g]: start from the samples of the b-th spectral coefficient,
    // inverse-transform along each axis in turn.
    std::vector<std::vector<Complex>> coeff(spectral_len, std::vector<Complex>(grid_size));
    for (int b = 0; b < spectral_len; ++b) {
        for (long g = 0; g < grid_size; ++g) coeff[b][g] = samples[g][b];
        for (int j = 0; j < dvars; ++j) {
            const int nj = n[j];
            const long s = stride[j];
            std::vector<Complex> root(nj);
            for (int m = 0; m < nj; ++m)
                root[m] = std::polar(1.0, -2.0 * std::numbers::pi * m / nj);
            std::vector<Complex> line(nj);
            for (long outer = 0; outer < grid_size / (s * nj); ++outer) {
                for (long inner = 0; inner < s; ++inner) {
                    const long base = outer * s * nj + inner;
                    for (int t = 0; t < nj; ++t) line[t] = coeff[b][base + t * s];
                    for (int r = 0; r < nj; ++r) {
                        Complex acc = 0.0;
                        for (int t = 0; t < nj; ++t)
                            acc += line[t] * root[static_cast<int>((static_cast<long>(r) * t) % nj)];
                        coeff[b][base + r * s] = acc / static_cast<double>(nj);
                    }
                }
            }
        }
    }

    double scale = 0.0;
    for (int b = 0; b < spectral_len; ++b)
        for (long g = 0; g < grid_size; ++g) scale = std::max(scale, std::abs(coeff[b][g]));

    LaurentPoly out;
    out.vars = dvars;
    double worst_outside = 0.0;
    std::vector<int> key(dvars + 1);
    for (int b = 0; b < spectral_len; ++b) {
        for (long g = 0; g < grid_size; ++g) {
            bool inside = true;
            for (int j = 0; j < dvars; ++j) {
                const int slot = static_cast<int>((g / stride[j]) % n[j]);
                const int a = slot <= (n[j] - 1) / 2 ? slot : slot - n[j];
                key[j] = a;
                inside &= std::abs(a) <= window[j];
            }
            const double mag = std::abs(coeff[b][g]);
            if (!inside) {
                worst_outside = std::max(worst_outside, mag);
                continue;
            }
            if (mag > opt.prune_rel * scale) {
                key[dvars] = b;
                out.terms[key] = coeff[b][g];
            }
        }
    }
    if (worst_outside > opt.window_check_tol * scale)
        throw std::logic_error("coefficient recovery leaked outside the exponent window: " +
                               std::to_string(worst_outside) + " vs scale " + std::to_string(scale));
    return out;
}

std::vector<int> p_window(const LatticeSpec& spec) {
    const int q = spec.site_count();
    std::vector<int> window(spec.dimension());
    if (spec.kind == LatticeKind::triangular)
        window.assign(2, q / spec.periods[0] + q / spec.periods[1]);
    else
        for (int j = 0; j < spec.dimension(); ++j) window[j] = q / spec.periods[j];
    return window;
}

}  // namespace

LaurentPoly LaurentPoly::constant(int vars, Complex c) {
    LaurentPoly p;
    p.vars = vars;
    p.terms[std::vector<int>(vars + 1, 0)] = c;
    return p;
}

void LaurentPoly::add_term(const std::vector<int>& key, Complex c) {
    if (static_cast<int>(key.size()) != vars + 1)
        throw std::invalid_argument("laurent term key length does not match variable count");
    terms[key] += c;
}

Complex LaurentPoly::coeff(const std::vector<int>& key) const {
    const auto it = terms.find(key);
    return it == terms.end() ? Complex{0.0} : it->second;
}

double LaurentPoly::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [key, c] : terms) m = std::max(m, std::abs(c));
    return m;
}

Complex LaurentPoly::eval(const std::vector<Complex>& z, Complex lambda) const {
    if (static_cast<int>(z.size()) != vars)
        throw std::invalid_argument("laurent eval point does not match variable count");
    Complex acc = 0.0;
    for (const auto& [key, c] : terms) {
        Complex term = c;
        for (int j = 0; j < vars; ++j) term *= ipow(z[j], key[j]);
        acc += term * ipow(lambda, key[vars]);
    }
    return acc;
}

LaurentPoly LaurentPoly::pruned(double threshold) const {
    LaurentPoly out;
    out.vars = vars;
    for (const auto& [key, c] : terms)
        if (std::abs(c) > threshold) out.terms[key] = c;
    return out;
}

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.vars != b.vars) throw std::invalid_argument("laurent variable counts differ");
    LaurentPoly out = a;
    for (const auto& [key, c] : b.terms) out.terms[key] += c;
    return out;
}

LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.vars != b.vars) throw std::invalid_argument("laurent variable counts differ");
    LaurentPoly out = a;
    for (const auto& [key, c] : b.terms) out.terms[key] -= c;
    return out;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.vars != b.vars) throw std::invalid_argument("laurent variable counts differ");
    LaurentPoly out;
    out.vars = a.vars;
    std::vector<int> key(a.vars + 1);
    for (const auto& [ka, ca] : a.terms) {
        for (const auto& [kb, cb] : b.terms) {
            for (int j = 0; j <= a.vars; ++j) key[j] = ka[j] + kb[j];
            out.terms[key] += ca * cb;
        }
    }
    return out;
}

LaurentPoly operator*(Complex c, const LaurentPoly& p) {
    LaurentPoly out = p;
    for (auto& [key, v] : out.terms) v *= c;
    return out;
}

PolyComparison compare(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.vars != b.vars) throw std::invalid_argument("laurent variable counts differ");
    PolyComparison r;
    r.scale = std::max({a.max_abs_coeff(), b.max_abs_coeff(), 1e-30});
    for (const auto& [key, c] : a.terms)
        r.max_abs_diff = std::max(r.max_abs_diff, std::abs(c - b.coeff(key)));
    for (const auto& [key, c] : b.terms)
        r.max_abs_diff = std::max(r.max_abs_diff, std::abs(c - a.coeff(key)));
    return r;
}

LaurentPoly select_degree(const LaurentPoly& p, const std::vector<int>& positions, int degree) {
    LaurentPoly out;
    out.vars = p.vars;
    for (const auto& [key, c] : p.terms) {
        int total = 0;
        for (int pos : positions) total += key[pos];
        if (total == degree) out.terms[key] = c;
    }
    return out;
}

LaurentPoly total_degree_filter(const LaurentPoly& p, int degree) {
    std::vector<int> positions(p.vars + 1);
    for (int j = 0; j <= p.vars; ++j) positions[j] = j;
    return select_degree(p, positions, degree);
}

LaurentPoly substitute_exponents(const LaurentPoly& p, const std::vector<int>& factors) {
    if (static_cast<int>(factors.size()) != p.vars)
        throw std::invalid_argument("substitute_exponents: factor count does not match");
    LaurentPoly out;
    out.vars = p.vars;
    for (const auto& [key, c] : p.terms) {
        std::vector<int> nk = key;
        for (int j = 0; j < p.vars; ++j) nk[j] *= factors[j];
        out.terms[nk] += c;
    }
    return out;
}

LaurentPoly recover_P(const Potential& v, const RecoverOptions& opt) {
    v.validate();
    return recover_grid(v.spec.dimension(), p_window(v.spec), opt,
                        [&](const std::vector<Complex>& z) {
                            return charpoly_coeffs(build_dz(v, z).entries);
                        });
}

LaurentPoly recover_P_tri(const Potential& v, const RecoverOptions& opt) {
    if (v.spec.kind != LatticeKind::triangular)
        throw std::invalid_argument("recover_P_tri expects a triangular lattice");
    return recover_P(v, opt);
}

LaurentPoly recover_Ptilde(const Potential& v, const RecoverOptions& opt) {
    v.validate();
    const int d = v.spec.dimension();
    const FourierTable f = dft(v);
    std::vector<int> window = p_window(v.spec);
    for (int j = 0; j < d; ++j) window[j] *= v.spec.periods[j];
    LaurentPoly direct = recover_grid(d, window, opt, [&](const std::vector<Complex>& z) {
        return charpoly_coeffs(build_dual(f, z).entries);
    });

    // The dual form only sees z through z_j^{q_j}, so every surviving
    // exponent must be a period multiple.
    for (const auto& [key, c] : direct.terms)
        for (int j = 0; j < d; ++j)
            if (key[j] % v.spec.periods[j] != 0)
                throw std::logic_error("dual charpoly support escaped the period sublattice");

    if (opt.cross_check) {
        const LaurentPoly via_p = substitute_exponents(recover_P(v, opt), v.spec.periods);
        const PolyComparison c = compare(direct, via_p);
        if (!c.within(opt.window_check_tol))
            throw std::logic_error("dual-form charpoly disagrees with the substituted direct form: rel " +
                                   std::to_string(c.rel()));
    }
    return direct;
}

LaurentPoly h_poly(const LatticeSpec& spec) {
    spec.validate();
    LaurentPoly acc = LaurentPoly::constant(spec.dimension(), 1.0);
    for (const MultiIndex& n : fundamental_domain(spec)) acc = acc * site_linear_factor(spec, n);
    return acc;
}

PolyComparison check_h1(const Potential& v, const RecoverOptions& opt) {
    v.validate();
    if (v.spec.kind != LatticeKind::hypercubic)
        throw std::invalid_argument("check_h1 expects a hypercubic lattice");
    const int d = v.spec.dimension();
    const int q = v.spec.site_count();
    const LaurentPoly lhs = total_degree_filter(recover_Ptilde(v, opt), q - 1);

    const auto domain = fundamental_domain(v.spec);
    std::vector<LaurentPoly> factors;
    factors.reserve(q);
    for (const MultiIndex& n : domain) factors.push_back(site_linear_factor(v.spec, n));
    std::vector<LaurentPoly> suffix(q);
    suffix[q - 1] = LaurentPoly::constant(d, 1.0);
    for (int i = q - 2; i >= 0; --i) suffix[i] = factors[i + 1] * suffix[i + 1];
    LaurentPoly prefix = LaurentPoly::constant(d, 1.0);
    LaurentPoly sum;
    sum.vars = d;
    for (int i = 0; i < q; ++i) {
        sum = sum + prefix * suffix[i];
        prefix = prefix * factors[i];
    }
    return compare(lhs, mean(v) * sum);
}

PolyComparison check_h2_diff(const Potential& v, const RecoverOptions& opt) {
    v.validate();
    if (v.spec.kind != LatticeKind::hypercubic)
        throw std::invalid_argument("check_h2_diff expects a hypercubic lattice");
    if (!v.is_real())
        throw std::invalid_argument("check_h2_diff expects a real potential");
    const int d = v.spec.dimension();
    const int q = v.spec.site_count();
    const auto domain = fundamental_domain(v.spec);
    const Complex vbar = mean(v);

    const LaurentPoly h2 = total_degree_filter(recover_Ptilde(v, opt), q - 2);

    // Diagonal-only product: same layer of prod_n (mean - lambda + free diagonal).
    LaurentPoly pbar = LaurentPoly::constant(d, 1.0);
    for (const MultiIndex& n : domain) {
        LaurentPoly diag = site_linear_factor(v.spec, n);
        std::vector<int> key(d + 1, 0);
        diag.add_term(key, vbar);
        for (int j = 0; j < d; ++j) {
            key[j] = -1;
            diag.add_term(key, phase(v.spec, j, -n[j]));
            key[j] = 0;
        }
        pbar = pbar * diag;
    }
    const LaurentPoly lhs = h2 - total_degree_filter(pbar, q - 2);

    const FourierTable f = dft(v);
    std::vector<LaurentPoly> factors;
    factors.reserve(q);
    for (const MultiIndex& n : domain) factors.push_back(site_linear_factor(v.spec, n));
    LaurentPoly rhs;
    rhs.vars = d;
    for (int a = 0; a < q; ++a) {
        for (int b = a + 1; b < q; ++b) {
            LaurentPoly prod = LaurentPoly::constant(d, 1.0);
            for (int m = 0; m < q; ++m)
                if (m != a && m != b) prod = prod * factors[m];
            MultiIndex diff = domain[a];
            for (int j = 0; j < d; ++j) diff[j] -= domain[b][j];
            MultiIndex ndiff = diff;
            for (int& x : ndiff) x = -x;
            const double w = std::norm(f.at(diff)) + std::norm(f.at(ndiff));
            rhs = rhs + Complex{-0.5 * w} * prod;
        }
    }
    return compare(lhs, rhs);
}

G55Report check_g55(const Potential& v, const Potential& y, int samples, std::uint64_t seed) {
    v.validate();
    y.validate();
    if (!(v.spec == y.spec)) throw std::invalid_argument("check_g55 expects matching lattices");
    const int d = v.spec.dimension();
    const int q = v.spec.site_count();
    const auto domain = fundamental_domain(v.spec);
    const FourierTable fv = dft(v);
    const FourierTable fy = dft(y);
    const double bound = 2.0 * d + std::max(v.max_abs(), y.max_abs());

    // |Fhat(n - n')|^2 is all the invariant sees of the potential, so it is
    // blind to the phase twists a translation applies.
    std::vector<double> wv(q * q), wy(q * q);
    for (int a = 0; a < q; ++a) {
        for (int b = 0; b < q; ++b) {
            MultiIndex diff = domain[a];
            for (int j = 0; j < d; ++j) diff[j] -= domain[b][j];
            wv[a * q + b] = std::norm(fv.at(diff));
            wy[a * q + b] = std::norm(fy.at(diff));
        }
    }

    Rng rng(seed);
    G55Report rep;
    rep.samples = samples;
    std::vector<Complex> t(q);
    for (int s = 0; s < samples; ++s) {
        std::vector<Complex> z(d);
        for (int j = 0; j < d; ++j)
            z[j] = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform01());
        const Complex lambda{rng.uniform(-bound, bound), 1.0};
        for (int a = 0; a < q; ++a) {
            Complex acc = -lambda;
            for (int j = 0; j < d; ++j) acc += phase(v.spec, j, domain[a][j]) * z[j];
            t[a] = acc;
        }
        Complex gv = 0.0, gy = 0.0;
        for (int a = 0; a < q; ++a) {
            for (int b = 0; b < q; ++b) {
                const Complex den = t[a] * t[b];
                gv += wv[a * q + b] / den;
                gy += wy[a * q + b] / den;
            }
        }
        rep.max_abs_diff = std::max(rep.max_abs_diff, std::abs(gv - gy));
        rep.scale = std::max({rep.scale, std::abs(gv), std::abs(gy)});
    }
    return rep;
}

BlockPowerSums block_power_sums(const FourierTable& f, const SeparabilityPattern& p) {
    p.validate(f.spec);
    BlockPowerSums s;
    for (const Complex& c : f.coefficients) s.total += std::norm(c);
    s.per_block.assign(p.block_count(), 0.0);
    for (int j = 0; j < p.block_count(); ++j)
        for (const MultiIndex& lj : fundamental_domain(p.block_spec(f.spec, j)))
            s.per_block[j] += std::norm(f.at(p.embed(lj, j)));
    return s;
}

ExtractionResult extract_component_charpoly(const Potential& v, const SeparabilityPattern& p,
                                            int keep, double tol, const RecoverOptions& opt) {
    v.validate();
    if (v.spec.kind != LatticeKind::hypercubic)
        throw std::invalid_argument("extract_component_charpoly expects a hypercubic lattice");
    p.validate(v.spec);
    if (keep < 0 || keep >= p.block_count())
        throw std::invalid_argument("extract_component_charpoly: keep block out of range");

    const int d = v.spec.dimension();
    const int q = v.spec.site_count();
    const auto domain = fundamental_domain(v.spec);
    const FourierTable f = dft(subtract_mean(v));

    std::vector<int> keep_axes, comp_axes;
    for (int j = 0; j < p.block_count(); ++j)
        for (int t = 0; t < p.blocks[j]; ++t)
            (j == keep ? keep_axes : comp_axes).push_back(p.block_offset(j) + t);
    int w_keep = 1;
    for (int ax : keep_axes) w_keep *= v.spec.periods[ax];

    // lambda = y + sum_{j in C} (z_j + 1/z_j): recover det(dual - lambda I)
    // as a polynomial in y, Laurent in every z.
    auto fn = [&](const std::vector<Complex>& z) {
        Eigen::MatrixXcd m = build_dual(f, z).entries;
        Complex corr = 0.0;
        for (int ax : comp_axes) corr += z[ax] + 1.0 / z[ax];
        m.diagonal().array() -= corr;
        return charpoly_coeffs(m);
    };
    const LaurentPoly t_full = recover_grid(d, std::vector<int>(d, q), opt, fn);
    const LaurentPoly t_top = select_degree(t_full, comp_axes, q - w_keep);

    // prod over n with n_C != 0 of sum_{j in C} (rho^j_{n_j} - 1) z_j
    LaurentPoly prefactor = LaurentPoly::constant(d, 1.0);
    for (const MultiIndex& n : domain) {
        bool comp_zero = true;
        for (int ax : comp_axes) comp_zero &= (n[ax] == 0);
        if (comp_zero) continue;
        LaurentPoly lin;
        lin.vars = d;
        std::vector<int> key(d + 1, 0);
        for (int ax : comp_axes) {
            if (n[ax] == 0) continue;
            key[ax] = 1;
            lin.add_term(key, phase(v.spec, ax, n[ax]) - 1.0);
            key[ax] = 0;
        }
        prefactor = prefactor * lin;
    }

    // t_top = prefactor (complement variables) x component (keep variables, y):
    // solve for the component coefficient of each (keep, y) group by least
    // squares against the prefactor and record the worst mismatch.
    std::map<std::vector<int>, Complex> pref;
    double pref_norm2 = 0.0;
    for (const auto& [key, c] : prefactor.terms) {
        std::vector<int> ck;
        for (int ax : comp_axes) ck.push_back(key[ax]);
        pref[ck] += c;
        pref_norm2 += std::norm(c);
    }
    std::map<std::vector<int>, std::map<std::vector<int>, Complex>> groups;
    for (const auto& [key, c] : t_top.terms) {
        std::vector<int> gk;
        for (int ax : keep_axes) gk.push_back(key[ax]);
        gk.push_back(key[d]);
        std::vector<int> ck;
        for (int ax : comp_axes) ck.push_back(key[ax]);
        groups[gk][ck] += c;
    }

    ExtractionResult out;
    out.scale = std::max(1.0, t_top.max_abs_coeff());
    out.component.vars = static_cast<int>(keep_axes.size());
    for (const auto& [gk, tmap] : groups) {
        Complex num = 0.0;
        for (const auto& [ck, pc] : pref) {
            const auto it = tmap.find(ck);
            if (it != tmap.end()) num += std::conj(pc) * it->second;
        }
        const Complex cg = num / pref_norm2;
        double res = 0.0;
        for (const auto& [ck, tc] : tmap) {
            const auto it = pref.find(ck);
            const Complex pc = it == pref.end() ? Complex{0.0} : it->second;
            res = std::max(res, std::abs(tc - cg * pc));
        }
        for (const auto& [ck, pc] : pref)
            if (!tmap.count(ck)) res = std::max(res, std::abs(cg * pc));
        out.residual = std::max(out.residual, res);
        if (std::abs(cg) > opt.prune_rel * out.scale) out.component.terms[gk] = cg;
    }
    if (!out.within(tol))
        throw std::logic_error("component extraction failed to factor the top layer: residual " +
                               std::to_string(out.residual) + " vs scale " +
                               std::to_string(out.scale));
    return out;
}

}  // namespace floq
