#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "floq/lattice.hpp"

namespace floq {

/// Default relative tolerance for the separability decision.
inline constexpr double kSeparabilityTol = 1e-9;

/// Periodic potential sampled on the fundamental domain, canonical flat order.
struct Potential {
    LatticeSpec spec;
    std::vector<Complex> values;

    Complex at(const MultiIndex& n) const { return values[flatten(spec, reduce_mod(spec, n))]; }
    bool is_real() const;        // true iff every imaginary part is exactly zero
    double max_abs() const;
    void validate() const;
};

/// Fourier coefficients F(l) for l in W, extended periodically to Z^d via at().
struct FourierTable {
    LatticeSpec spec;
    std::vector<Complex> coefficients;

    Complex at(const MultiIndex& l) const {
        return coefficients[flatten(spec, reduce_mod(spec, l))];
    }
    double max_abs() const;
};

/// F(l) = (1/Q) sum_{n in W} V(n) exp(-2 pi i sum_j l_j n_j / q_j).
FourierTable dft(const Potential& v);

/// V(n) = sum_{l in W} F(l) exp(+2 pi i sum_j l_j n_j / q_j); inverse of dft.
Potential idft(const FourierTable& f);

/// Average (1/Q) sum_{n in W} V(n); equals the zero Fourier coefficient.
Complex mean(const Potential& v);

/// Coordinate-block structure (d_1, ..., d_r), r >= 2, sum d_j = d.
/// Block j owns coordinates [offset(j), offset(j) + d_j).
struct SeparabilityPattern {
    std::vector<int> blocks;

    int block_count() const { return static_cast<int>(blocks.size()); }
    int dimension() const;
    int block_offset(int j) const;  // number of coordinates before block j
    void validate(const LatticeSpec& spec) const;

    /// Sub-lattice spec carrying block j's periods (always hypercubic).
    LatticeSpec block_spec(const LatticeSpec& spec, int j) const;

    /// Block-j coordinates of a full index.
    MultiIndex project(const MultiIndex& l, int j) const;

    /// Zero-pad a block-j index back into Z^d.
    MultiIndex embed(const MultiIndex& lj, int j) const;

    /// Number of blocks on which l is nonzero.
    int nonzero_block_count(const MultiIndex& l) const;

    /// Cross-index set S: canonical indices with at least two nonzero blocks.
    /// W is partitioned into {0}, the nonzero pure-block embeddings, and S.
    std::vector<MultiIndex> cross_indices(const LatticeSpec& spec) const;

    bool operator==(const SeparabilityPattern&) const = default;
};

struct SeparabilityResult {
    bool separable = true;
    double max_violation = 0.0;          // max |F(l)| over l in S
    double scale = 1.0;                  // max(1, max |F(l)| over W)
    std::optional<MultiIndex> witness;   // worst offender when not separable
};

/// Decides whether the coefficients vanish on the cross-index set S,
/// up to tol * scale. A potential is block-separable exactly when its
/// Fourier transform is supported off S.
SeparabilityResult is_separable(const FourierTable& f, const SeparabilityPattern& p,
                                double tol = kSeparabilityTol);

struct SplitResult {
    Complex constant;                    // the mean of the input
    std::vector<Potential> components;   // one zero-mean potential per block
};

/// Decomposes a separable potential as constant + sum of zero-mean block
/// components. Throws std::invalid_argument (with the witness index) if the
/// separability test fails at tol.
SplitResult split(const Potential& v, const SeparabilityPattern& p,
                  double tol = kSeparabilityTol);

/// V(n) = c + sum_j components[j](block-j coordinates of n). Inverse of split
/// on (constant, zero-mean components).
Potential join(const LatticeSpec& spec, Complex c, const std::vector<Potential>& components,
               const SeparabilityPattern& p);

/// result(n) = V(n + t), indices reduced into W. Preserves all Fourier
/// magnitudes, hence the Floquet spectrum.
Potential translate(const Potential& v, const MultiIndex& t);

/// Pointwise V + c.
Potential shift_by_constant(const Potential& v, Complex c);

/// Pointwise V - mean(V).
Potential subtract_mean(const Potential& v);

struct RandomMode {
    enum class Kind { real, complex_valued, separable, nonseparable };
    Kind kind = Kind::real;
    std::optional<SeparabilityPattern> pattern;  // required for (non)separable
    bool real_components = false;                // (non)separable: real-valued draw

    static RandomMode real() { return {Kind::real, std::nullopt, true}; }
    static RandomMode complex_valued() { return {Kind::complex_valued, std::nullopt, false}; }
    static RandomMode separable(SeparabilityPattern p, bool real_values = false) {
        return {Kind::separable, std::move(p), real_values};
    }
    static RandomMode nonseparable(SeparabilityPattern p, bool real_values = false) {
        return {Kind::nonseparable, std::move(p), real_values};
    }
};

/// Deterministic draw for a given seed. Separable mode joins independently
/// drawn zero-mean block components with a drawn constant; nonseparable mode
/// additionally plants one Fourier coefficient of magnitude >= 0.5 at a drawn
/// cross index (mirrored conjugate-symmetrically when real_components).
Potential random_potential(const LatticeSpec& spec, std::uint64_t seed, const RandomMode& mode);

}  // namespace floq
