#include "floq/lattice.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace floq {

int LatticeSpec::site_count() const {
    int q = 1;
    for (int p : periods) q *= p;
    return q;
}

void LatticeSpec::validate() const {
    if (periods.empty())
        throw std::invalid_argument("lattice spec needs at least one period");
    for (int p : periods)
        if (p < 1) throw std::invalid_argument("lattice periods must be positive");
    if (kind == LatticeKind::triangular && periods.size() != 2)
        throw std::invalid_argument("triangular lattice requires dimension 2");
}

bool is_canonical(const LatticeSpec& spec, const MultiIndex& n) {
    if (n.size() != spec.periods.size()) return false;
    for (size_t j = 0; j < n.size(); ++j)
        if (n[j] < 0 || n[j] >= spec.periods[j]) return false;
    return true;
}

std::vector<MultiIndex> fundamental_domain(const LatticeSpec& spec) {
    spec.validate();
    const int d = spec.dimension();
    std::vector<MultiIndex> out;
    out.reserve(spec.site_count());
    MultiIndex n(d, 0);
    while (true) {
        out.push_back(n);
        int j = d - 1;
        while (j >= 0 && ++n[j] == spec.periods[j]) n[j--] = 0;
        if (j < 0) break;
    }
    return out;
}

int flatten(const LatticeSpec& spec, const MultiIndex& n) {
    if (!is_canonical(spec, n))
        throw std::invalid_argument("flatten: index not in the fundamental domain");
    int idx = 0;
    for (int j = 0; j < spec.dimension(); ++j) idx = idx * spec.periods[j] + n[j];
    return idx;
}

MultiIndex unflatten(const LatticeSpec& spec, int index) {
    if (index < 0 || index >= spec.site_count())
        throw std::invalid_argument("unflatten: flat index out of range");
    const int d = spec.dimension();
    MultiIndex n(d);
    for (int j = d - 1; j >= 0; --j) {
        n[j] = index % spec.periods[j];
        index /= spec.periods[j];
    }
    return n;
}

MultiIndex reduce_mod(const LatticeSpec& spec, const MultiIndex& n) {
    if (n.size() != spec.periods.size())
        throw std::invalid_argument("reduce_mod: dimension mismatch");
    MultiIndex r(n.size());
    for (size_t j = 0; j < n.size(); ++j) {
        int m = n[j] % spec.periods[j];
        r[j] = m < 0 ? m + spec.periods[j] : m;
    }
    return r;
}

Complex phase(const LatticeSpec& spec, int axis, long n) {
    const int q = spec.periods.at(axis);
    long m = n % q;
    if (m < 0) m += q;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(m) / q;
    return {std::cos(angle), std::sin(angle)};
}

std::string to_string(const LatticeSpec& spec) {
    std::ostringstream os;
    os << (spec.kind == LatticeKind::triangular ? "triangular(" : "hypercubic(");
    for (int j = 0; j < spec.dimension(); ++j) os << (j ? "," : "") << spec.periods[j];
    os << ")";
    return os.str();
}

}  // namespace floq
