#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "floq/potential.hpp"

namespace floq {

/// Laurent polynomial in z_1..z_vars plus one distinguished ordinary
/// polynomial variable (the spectral parameter: lambda, or y in component
/// extraction). Term key = (a_1, ..., a_vars, b): z exponents may be
/// negative, the spectral exponent b is >= 0. std::map keeps keys in
/// lexicographic order, which fixes the on-disk dump order.
struct LaurentPoly {
    int vars = 0;
    std::map<std::vector<int>, Complex> terms;

    static LaurentPoly constant(int vars, Complex c);

    void add_term(const std::vector<int>& key, Complex c);  // accumulates
    Complex coeff(const std::vector<int>& key) const;
    int term_count() const { return static_cast<int>(terms.size()); }
    double max_abs_coeff() const;
    Complex eval(const std::vector<Complex>& z, Complex lambda) const;

    /// Copy without terms of magnitude <= threshold (absolute).
    LaurentPoly pruned(double threshold) const;
};

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly operator*(Complex c, const LaurentPoly& p);

/// Worst coefficient mismatch over the union of supports, and the larger of
/// the two coefficient scales; within() is the standard relative acceptance.
struct PolyComparison {
    double max_abs_diff = 0.0;
    double scale = 1e-30;  // max(|a|_inf, |b|_inf, 1e-30)
    double rel() const { return max_abs_diff / scale; }
    bool within(double tol) const { return max_abs_diff <= tol * scale; }
};

PolyComparison compare(const LaurentPoly& a, const LaurentPoly& b);

/// Terms whose exponents summed over `positions` equal `degree` exactly.
/// Positions 0..vars-1 select z exponents, position vars the spectral one.
LaurentPoly select_degree(const LaurentPoly& p, const std::vector<int>& positions, int degree);

/// select_degree over all positions including the spectral variable: the
/// signed-total-degree layer (deg z_j = +1, deg 1/z_j = -1, deg lambda = +1).
LaurentPoly total_degree_filter(const LaurentPoly& p, int degree);

/// a_j -> factors[j] * a_j on every key; the spectral exponent is untouched.
LaurentPoly substitute_exponents(const LaurentPoly& p, const std::vector<int>& factors);

/// Controls for grid-based coefficient recovery. Axis j is sampled at
/// N_j = 2 A_j + 1 + 2 slack roots of unity where A_j is the proven exponent
/// window, so the slack buckets outside the window must come out at roundoff
/// level (checked against window_check_tol, also used for the cross-route
/// consistency check in recover_Ptilde); anything smaller than
/// prune_rel * scale is dropped from the result.
struct RecoverOptions {
    int slack = 1;
    double prune_rel = 1e-12;
    double window_check_tol = 1e-10;
    bool cross_check = true;
};

/// P(z, lambda) = det(D_z(V) - lambda I) as an exact Laurent polynomial,
/// recovered by sampling z on a tensor grid of roots of unity and inverting
/// the discrete Fourier transform axis by axis. Exponent window per axis:
/// Q / q_j on the hypercubic lattice, Q/q_1 + Q/q_2 on the triangular one.
LaurentPoly recover_P(const Potential& v, const RecoverOptions& opt = {});
LaurentPoly recover_P_tri(const Potential& v, const RecoverOptions& opt = {});

/// Ptilde(z, lambda) = P(z_1^{q_1}, ..., z_d^{q_d}, lambda), equal to
/// det(dual matrix - lambda I). Recovered directly from the dual matrix
/// (window q_j * (P window)) and, when opt.cross_check, verified against the
/// exponent-substituted recover_P; the support lies in q_j Z per axis.
LaurentPoly recover_Ptilde(const Potential& v, const RecoverOptions& opt = {});

/// The potential-independent top layer of Ptilde:
/// h = prod_{n in W} (-lambda + sum_j rho^j_{n_j} z_j), every monomial of
/// signed total degree exactly Q.
LaurentPoly h_poly(const LatticeSpec& spec);

/// Layer Q-1 of Ptilde equals mean(V) * sum_n prod_{n' != n} of the linear
/// factors above. Hypercubic only. Returns the two-sided comparison.
PolyComparison check_h1(const Potential& v, const RecoverOptions& opt = {});

/// Layer Q-2: subtracting the same layer of the diagonal-only product
/// prod_n (mean(V) - lambda + sum_j (rho^j z_j + 1/(rho^j z_j))) leaves
///   -(1/2) sum_{n != n'} |Fhat(n - n')|^2 prod_{m not in {n,n'}} (linear factors),
/// which pins every off-diagonal Fourier magnitude. Real potentials,
/// hypercubic only.
PolyComparison check_h2_diff(const Potential& v, const RecoverOptions& opt = {});

struct G55Report {
    double max_abs_diff = 0.0;
    double scale = 1.0;  // max(1, |g| seen)
    int samples = 0;
    bool within(double tol) const { return max_abs_diff <= tol * scale; }
};

/// Green-pairing invariant g(V; z, lambda) =
///   sum_{n, n' in W} |Fhat(n - n')|^2 / (that_n that_{n'}),
/// that_n = -lambda + sum_j rho^j_{n_j} z_j, compared between V and Y at
/// shared random samples: z on the unit torus, lambda = mu + i with mu
/// uniform in +-(2d + max sup norm). Agrees exactly for Floquet-isospectral
/// pairs; deterministic in the seed.
G55Report check_g55(const Potential& v, const Potential& y, int samples, std::uint64_t seed);

struct BlockPowerSums {
    double total = 0.0;               // sum over all of W of |Fhat(l)|^2
    std::vector<double> per_block;    // sum over block-j embeddings, l_j in W_j
};

BlockPowerSums block_power_sums(const FourierTable& f, const SeparabilityPattern& p);

struct ExtractionResult {
    LaurentPoly component;  // keep-block z variables in axis order, then y
    double residual = 0.0;  // worst factorization mismatch, absolute
    double scale = 1.0;     // max(1, top-layer coefficient scale)
    bool within(double tol) const { return residual <= tol * scale; }
};

/// Reads the characteristic polynomial of one separable component straight
/// off the joint spectrum. With lambda = y + sum_{j notin keep} (z_j + 1/z_j),
/// the top layer in the complement variables of det(dual(V - mean) - lambda I)
/// factors as
///   prod_{n : n_C != 0} (sum_{j in C} (rho^j_{n_j} - 1) z_j)  *  Ptilde_{V_keep}(z_keep, y),
/// so dividing the recovered layer by the explicit prefactor returns the
/// zero-mean keep component's Ptilde without ever splitting V. residual
/// reports how exactly the layer factored. Hypercubic only.
ExtractionResult extract_component_charpoly(const Potential& v, const SeparabilityPattern& p,
                                            int keep, double tol = 1e-8,
                                            const RecoverOptions& opt = {});

}  // namespace floq
