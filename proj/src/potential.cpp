#include "floq/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "floq/rng.hpp"

namespace floq {

namespace {

double max_abs_of(const std::vector<Complex>& v) {
    double m = 0.0;
    for (const Complex& c : v) m = std::max(m, std::abs(c));
    return m;
}

std::string index_to_string(const MultiIndex& n) {
    std::ostringstream os;
    os << "(";
    for (size_t j = 0; j < n.size(); ++j) os << (j ? "," : "") << n[j];
    os << ")";
    return os.str();
}

}  // namespace

bool Potential::is_real() const {
    return std::all_of(values.begin(), values.end(),
                       [](const Complex& c) { return c.imag() == 0.0; });
}

double Potential::max_abs() const { return max_abs_of(values); }

void Potential::validate() const {
    spec.validate();
    if (static_cast<int>(values.size()) != spec.site_count())
        throw std::invalid_argument("potential value count does not match the lattice");
}

double FourierTable::max_abs() const { return max_abs_of(coefficients); }

FourierTable dft(const Potential& v) {
    v.validate();
    const auto domain = fundamental_domain(v.spec);
    const int q = v.spec.site_count();
    const int d = v.spec.dimension();
    std::vector<Complex> coeffs(q);
    for (int li = 0; li < q; ++li) {
        const MultiIndex& l = domain[li];
        Complex acc = 0.0;
        for (int ni = 0; ni < q; ++ni) {
            const MultiIndex& n = domain[ni];
            Complex w = 1.0;
            for (int j = 0; j < d; ++j)
                w *= phase(v.spec, j, -static_cast<long>(l[j]) * n[j]);
            acc += v.values[ni] * w;
        }
        coeffs[li] = acc / static_cast<double>(q);
    }
    return {v.spec, std::move(coeffs)};
}

Potential idft(const FourierTable& f) {
    const auto domain = fundamental_domain(f.spec);
    const int q = f.spec.site_count();
    const int d = f.spec.dimension();
    std::vector<Complex> values(q);
    for (int ni = 0; ni < q; ++ni) {
        const MultiIndex& n = domain[ni];
        Complex acc = 0.0;
        for (int li = 0; li < q; ++li) {
            const MultiIndex& l = domain[li];
            Complex w = 1.0;
            for (int j = 0; j < d; ++j)
                w *= phase(f.spec, j, static_cast<long>(l[j]) * n[j]);
            acc += f.coefficients[li] * w;
        }
        values[ni] = acc;
    }
    return {f.spec, std::move(values)};
}

Complex mean(const Potential& v) {
    const Complex sum = std::accumulate(v.values.begin(), v.values.end(), Complex{0.0});
    return sum / static_cast<double>(v.values.size());
}

int SeparabilityPattern::dimension() const {
    return std::accumulate(blocks.begin(), blocks.end(), 0);
}

int SeparabilityPattern::block_offset(int j) const {
    return std::accumulate(blocks.begin(), blocks.begin() + j, 0);
}

void SeparabilityPattern::validate(const LatticeSpec& spec) const {
    if (block_count() < 2)
        throw std::invalid_argument("separability pattern needs at least two blocks");
    for (int b : blocks)
        if (b < 1) throw std::invalid_argument("separability pattern blocks must be positive");
    if (dimension() != spec.dimension())
        throw std::invalid_argument("separability pattern does not match the lattice dimension");
}

LatticeSpec SeparabilityPattern::block_spec(const LatticeSpec& spec, int j) const {
    const int off = block_offset(j);
    LatticeSpec sub;
    sub.periods.assign(spec.periods.begin() + off, spec.periods.begin() + off + blocks[j]);
    return sub;
}

MultiIndex SeparabilityPattern::project(const MultiIndex& l, int j) const {
    const int off = block_offset(j);
    return MultiIndex(l.begin() + off, l.begin() + off + blocks[j]);
}

MultiIndex SeparabilityPattern::embed(const MultiIndex& lj, int j) const {
    MultiIndex l(dimension(), 0);
    std::copy(lj.begin(), lj.end(), l.begin() + block_offset(j));
    return l;
}

int SeparabilityPattern::nonzero_block_count(const MultiIndex& l) const {
    int count = 0;
    int off = 0;
    for (int b : blocks) {
        bool nonzero = false;
        for (int t = 0; t < b; ++t) nonzero |= (l[off + t] != 0);
        count += nonzero;
        off += b;
    }
    return count;
}

std::vector<MultiIndex> SeparabilityPattern::cross_indices(const LatticeSpec& spec) const {
    validate(spec);
    std::vector<MultiIndex> s;
    for (const MultiIndex& l : fundamental_domain(spec))
        if (nonzero_block_count(l) >= 2) s.push_back(l);
    return s;
}

SeparabilityResult is_separable(const FourierTable& f, const SeparabilityPattern& p, double tol) {
    p.validate(f.spec);
    SeparabilityResult r;
    r.scale = std::max(1.0, f.max_abs());
    for (const MultiIndex& l : p.cross_indices(f.spec)) {
        const double mag = std::abs(f.at(l));
        if (mag > r.max_violation) {
            r.max_violation = mag;
            r.witness = l;
        }
    }
    r.separable = r.max_violation <= tol * r.scale;
    if (r.separable) r.witness.reset();
    return r;
}

SplitResult split(const Potential& v, const SeparabilityPattern& p, double tol) {
    const FourierTable f = dft(v);
    const SeparabilityResult sep = is_separable(f, p, tol);
    if (!sep.separable) {
        throw std::invalid_argument("split: potential is not separable, witness " +
                                    index_to_string(*sep.witness) + " with |coefficient| " +
                                    std::to_string(sep.max_violation));
    }
    SplitResult out;
    out.constant = f.coefficients[0];
    for (int j = 0; j < p.block_count(); ++j) {
        const LatticeSpec sub = p.block_spec(v.spec, j);
        FourierTable fj{sub, std::vector<Complex>(sub.site_count(), 0.0)};
        for (const MultiIndex& lj : fundamental_domain(sub)) {
            const bool zero = std::all_of(lj.begin(), lj.end(), [](int x) { return x == 0; });
            if (zero) continue;  // components are zero-mean; the constant is split off
            fj.coefficients[flatten(sub, lj)] = f.at(p.embed(lj, j));
        }
        out.components.push_back(idft(fj));
    }
    if (v.is_real()) {
        // components of a real separable potential are real; drop the
        // transform round-trip dust so is_real() survives a split
        out.constant = Complex{out.constant.real(), 0.0};
        for (Potential& c : out.components)
            for (Complex& x : c.values) x = Complex{x.real(), 0.0};
    }
    return out;
}

Potential join(const LatticeSpec& spec, Complex c, const std::vector<Potential>& components,
               const SeparabilityPattern& p) {
    spec.validate();
    p.validate(spec);
    if (static_cast<int>(components.size()) != p.block_count())
        throw std::invalid_argument("join: component count does not match the pattern");
    for (int j = 0; j < p.block_count(); ++j) {
        if (components[j].spec.periods != p.block_spec(spec, j).periods)
            throw std::invalid_argument("join: component lattice does not match its block");
        components[j].validate();
    }
    const auto domain = fundamental_domain(spec);
    std::vector<Complex> values(domain.size());
    for (size_t i = 0; i < domain.size(); ++i) {
        Complex acc = c;
        for (int j = 0; j < p.block_count(); ++j)
            acc += components[j].values[flatten(components[j].spec, p.project(domain[i], j))];
        values[i] = acc;
    }
    return {spec, std::move(values)};
}

Potential translate(const Potential& v, const MultiIndex& t) {
    v.validate();
    if (t.size() != static_cast<size_t>(v.spec.dimension()))
        throw std::invalid_argument("translate: dimension mismatch");
    const auto domain = fundamental_domain(v.spec);
    std::vector<Complex> values(domain.size());
    for (size_t i = 0; i < domain.size(); ++i) {
        MultiIndex shifted = domain[i];
        for (size_t j = 0; j < shifted.size(); ++j) shifted[j] += t[j];
        values[i] = v.values[flatten(v.spec, reduce_mod(v.spec, shifted))];
    }
    return {v.spec, std::move(values)};
}

Potential shift_by_constant(const Potential& v, Complex c) {
    Potential out = v;
    for (Complex& x : out.values) x += c;
    return out;
}

Potential subtract_mean(const Potential& v) { return shift_by_constant(v, -mean(v)); }

namespace {

Potential random_plain(const LatticeSpec& spec, Rng& rng, bool real_values) {
    std::vector<Complex> values(spec.site_count());
    for (Complex& x : values)
        x = real_values ? Complex{rng.uniform_pm1(), 0.0} : rng.complex_pm1();
    return {spec, std::move(values)};
}

Potential random_separable(const LatticeSpec& spec, Rng& rng, const SeparabilityPattern& p,
                           bool real_values) {
    const Complex c = real_values ? Complex{rng.uniform_pm1(), 0.0} : rng.complex_pm1();
    std::vector<Potential> components;
    for (int j = 0; j < p.block_count(); ++j)
        components.push_back(subtract_mean(random_plain(p.block_spec(spec, j), rng, real_values)));
    return join(spec, c, components, p);
}

}  // namespace

Potential random_potential(const LatticeSpec& spec, std::uint64_t seed, const RandomMode& mode) {
    spec.validate();
    Rng rng(seed);
    switch (mode.kind) {
        case RandomMode::Kind::real:
            return random_plain(spec, rng, true);
        case RandomMode::Kind::complex_valued:
            return random_plain(spec, rng, false);
        case RandomMode::Kind::separable:
        case RandomMode::Kind::nonseparable:
            break;
    }
    if (!mode.pattern) throw std::invalid_argument("random_potential: mode requires a pattern");
    const SeparabilityPattern& p = *mode.pattern;
    Potential v = random_separable(spec, rng, p, mode.real_components);
    if (mode.kind == RandomMode::Kind::separable) return v;

    const auto cross = p.cross_indices(spec);
    if (cross.empty())
        throw std::invalid_argument("random_potential: lattice has no cross indices to plant");
    const MultiIndex& l = cross[rng.below(static_cast<int>(cross.size()))];
    const double magnitude = 0.5 + 0.25 * rng.uniform01();
    FourierTable f = dft(v);
    const MultiIndex neg = reduce_mod(spec, [&] {
        MultiIndex m = l;
        for (int& x : m) x = -x;
        return m;
    }());
    if (mode.real_components) {
        // Mirror the plant so the coefficient table stays conjugate-symmetric.
        if (neg == l) {
            f.coefficients[flatten(spec, l)] += magnitude;
        } else {
            const Complex delta = std::polar(magnitude, 2.0 * std::numbers::pi * rng.uniform01());
            f.coefficients[flatten(spec, l)] += delta;
            f.coefficients[flatten(spec, neg)] += std::conj(delta);
        }
        Potential out = idft(f);
        for (Complex& x : out.values) x = Complex{x.real(), 0.0};  // drop roundoff dust
        return out;
    }
    const Complex delta = std::polar(magnitude, 2.0 * std::numbers::pi * rng.uniform01());
    f.coefficients[flatten(spec, l)] += delta;
    return idft(f);
}

}  // namespace floq
