#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace floq {

using Complex = std::complex<double>;

enum class LatticeKind { hypercubic, triangular };

/// Period lattice q_1 Z + ... + q_d Z together with the hopping geometry.
/// The fundamental domain W is {n : 0 <= n_j <= q_j - 1}; its size is
/// Q = q_1 q_2 ... q_d. All matrices and value sequences in this library
/// are indexed by W in a single canonical flat order (see fundamental_domain).
struct LatticeSpec {
    std::vector<int> periods;
    LatticeKind kind = LatticeKind::hypercubic;

    int dimension() const { return static_cast<int>(periods.size()); }
    int site_count() const;
    void validate() const;  // throws std::invalid_argument on a bad spec

    bool operator==(const LatticeSpec&) const = default;
};

/// Integer lattice point. Canonical iff 0 <= n_j <= q_j - 1 for all j.
using MultiIndex = std::vector<int>;

bool is_canonical(const LatticeSpec& spec, const MultiIndex& n);

/// All Q canonical indices, lexicographic with n_1 most significant and
/// n_d fastest-varying. This enumeration fixes the flat order everywhere.
std::vector<MultiIndex> fundamental_domain(const LatticeSpec& spec);

/// Position of a canonical index in fundamental_domain order.
int flatten(const LatticeSpec& spec, const MultiIndex& n);

/// Inverse of flatten.
MultiIndex unflatten(const LatticeSpec& spec, int index);

/// Componentwise n_j mod q_j with result in [0, q_j); Euclidean remainder,
/// so negative inputs reduce into W.
MultiIndex reduce_mod(const LatticeSpec& spec, const MultiIndex& n);

/// exp(2*pi*i * n / q_axis), the root-of-unity phase for one coordinate.
/// The argument is reduced mod q_axis before evaluation, so the period in
/// n is exact. axis is 0-based.
Complex phase(const LatticeSpec& spec, int axis, long n);

std::string to_string(const LatticeSpec& spec);

}  // namespace floq
