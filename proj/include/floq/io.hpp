#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "floq/laurent.hpp"
#include "floq/rigidity.hpp"

namespace floq {

/// Raised for malformed input files; the CLI maps it to exit code 2.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shortest-fixed formatting with full round-trip precision (%.17g). All
/// writers below use it so identical data produces byte-identical files.
std::string format_double(double x);

/// Potential files are JSON: {"periods": [...], "lattice": "hypercubic" |
/// "triangular", "values": [...]}, each value either a bare number or an
/// [re, im] pair; the writer emits bare numbers exactly when the potential
/// is real.
Potential read_potential(std::istream& in);
void write_potential(std::ostream& out, const Potential& v);
Potential read_potential_file(const std::string& path);
void write_potential_file(const std::string& path, const Potential& v);

/// Fourier tables use the same JSON shape with "coefficients" ([re, im]
/// pairs, always) in place of "values".
FourierTable read_fourier(std::istream& in);
void write_fourier(std::ostream& out, const FourierTable& f);

/// Laurent dumps are plain text, one term per line:
///   a_1 ... a_vars b re im
/// in the map's lexicographic key order; the variable count is inferred
/// from the token count on read. Round-trips exactly.
void write_laurent(std::ostream& out, const LaurentPoly& p);
LaurentPoly read_laurent(std::istream& in);

/// Eigenvalue table for real potentials: header k1,...,kd,lambda_1,...,
/// lambda_Q, one row per boundary condition, eigenvalues ascending.
/// Complex potentials get charpoly coefficient columns c0_re,c0_im,...
/// instead since the matrix is no longer Hermitian.
void write_spectrum_csv(std::ostream& out, const Potential& v,
                        const std::vector<std::vector<double>>& kpoints);

std::string report_json(const RigidityReport& r);
std::string report_text(const RigidityReport& r);

}  // namespace floq
