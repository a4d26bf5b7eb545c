#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "floq/potential.hpp"

namespace floq {

/// How the off-diagonal hopping entries of a Floquet matrix were filled in.
/// dz carries formal Laurent variables evaluated at concrete z; dk is dz at
/// z_j = exp(2 pi i k_j); dual is the Fourier-conjugated form whose diagonal
/// carries the hopping and whose off-diagonal carries Fourier coefficients.
enum class MatrixForm { dk, dz, dual };

struct FloquetMatrix {
    LatticeSpec spec;
    MatrixForm form = MatrixForm::dz;
    std::vector<Complex> z;  // evaluation point, one entry per axis
    Eigen::MatrixXcd entries;
};

/// Floquet matrix of -Laplacian-plus-V with boundary twist
/// u(n + q_j e_j) = exp(2 pi i k_j) u(n). Row n, column n': each hop
/// n -> n +- e_j contributes z_j^s where s = +1 when the hop wraps the top
/// face, -1 when it wraps the bottom face, 0 inside W; the diagonal carries
/// V(n). Wraps that land on the same column accumulate (periods 1 and 2).
FloquetMatrix build_dz(const Potential& v, const std::vector<Complex>& z);

/// build_dz at z_j = exp(2 pi i k_j).
FloquetMatrix build_dk(const Potential& v, const std::vector<double>& k);

/// Fourier conjugate of build_dz: diagonal entry at n is
/// sum_j (rho^j_{n_j} z_j + 1 / (rho^j_{n_j} z_j)) with rho^j_m the m-th
/// power of the q_j-th root of unity; entry (n, n') off the diagonal is
/// Fhat(n - n'). Same characteristic polynomial as build_dz at z_j^{q_j}:
///   charpoly(build_dz(V, w)) == charpoly(build_dual(dft(V), z)),  w_j = z_j^{q_j}.
FloquetMatrix build_dual(const FourierTable& f, const std::vector<Complex>& z);

/// Triangular-lattice (d = 2) variants: six hops +-e_1, +-e_2, (e_1 - e_2),
/// (e_2 - e_1); a diagonal hop that wraps both axes carries the product of
/// both wrap factors. The dual diagonal gains rho^2 z_2 / (rho^1 z_1) and its
/// reciprocal.
FloquetMatrix build_dz_tri(const Potential& v, const std::vector<Complex>& z);
FloquetMatrix build_dk_tri(const Potential& v, const std::vector<double>& k);
FloquetMatrix build_dual_tri(const FourierTable& f, const std::vector<Complex>& z);

/// Coefficients c_0..c_Q of det(M - lambda I) in ascending powers of lambda;
/// c_Q = (-1)^Q exactly, c_0 = det(M). Computed by Hessenberg reduction and
/// the standard three-term recurrence on leading principal minors, O(Q^3)
/// total, no root-finding.
std::vector<Complex> charpoly_coeffs(const Eigen::MatrixXcd& m);

struct IsospectralityReport {
    bool accepted = false;
    double max_coeff_diff = 0.0;  // worst |c - c'| over the grid, all lambda powers
    double scale = 1.0;           // max coefficient magnitude seen (>= 1)
    double tolerance = 0.0;
    std::vector<int> grid;        // per-axis sample counts actually used
};

/// Decides whether V and Y share every Floquet eigenvalue at every boundary
/// condition, by comparing characteristic-polynomial coefficient vectors of
/// the dz matrices on a deterministic tensor grid of roots of unity dense
/// enough to pin the Laurent polynomial exactly. Never compares eigenvalue
/// multisets. Throws if the two lattices differ.
IsospectralityReport floquet_isospectral(const Potential& v, const Potential& y,
                                         double tol = 1e-9);

/// Value of the Floquet symbol det(D(k) - lambda I) at one (k, lambda).
Complex bloch_eval(const Potential& v, const std::vector<double>& k, Complex lambda);

/// True when lambda lies in the spectrum at boundary condition k, i.e. the
/// symbol vanishes to tolerance relative to the coefficient scale.
bool fermi_member(const Potential& v, const std::vector<double>& k, Complex lambda,
                  double tol = 1e-9);

/// Compares the level sets {k : det(D(k) - lambda) = 0} of two potentials at
/// a fixed lambda by comparing the Laurent coefficient vectors of
/// det(D(z) - lambda) on the same deterministic grid as floquet_isospectral.
/// Coefficient equality is the criterion; equality of the zero sets alone is
/// weaker and is not what is decided here.
IsospectralityReport fermi_isospectral_at(const Potential& v, const Potential& y, Complex lambda,
                                          double tol = 1e-9);

}  // namespace floq
