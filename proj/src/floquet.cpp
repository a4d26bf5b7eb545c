#include "floq/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace floq {

namespace {

void check_z(const LatticeSpec& spec, const std::vector<Complex>& z) {
    if (static_cast<int>(z.size()) != spec.dimension())
        throw std::invalid_argument("evaluation point dimension does not match the lattice");
    for (const Complex& zj : z)
        if (zj == Complex{0.0}) throw std::invalid_argument("evaluation point has a zero entry");
}

// Adds z_1^{s_1} ... z_d^{s_d} to entry (row, column of the reduced target),
// where s_j counts how many periods the hop crossed on axis j (in {-1,0,+1}
// componentwise for nearest and diagonal hops alike).
void add_hop(Eigen::MatrixXcd& m, const LatticeSpec& spec, const std::vector<Complex>& z,
             int row, const MultiIndex& target) {
    MultiIndex reduced = target;
    Complex weight = 1.0;
    for (size_t j = 0; j < reduced.size(); ++j) {
        const int q = spec.periods[j];
        if (reduced[j] < 0) {
            reduced[j] += q;
            weight /= z[j];
        } else if (reduced[j] >= q) {
            reduced[j] -= q;
            weight *= z[j];
        }
    }
    m(row, flatten(spec, reduced)) += weight;
}

Eigen::MatrixXcd hopping_dz(const Potential& v, const std::vector<Complex>& z) {
    const auto domain = fundamental_domain(v.spec);
    const int q = v.spec.site_count();
    const int d = v.spec.dimension();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(q, q);
    for (int i = 0; i < q; ++i) {
        for (int j = 0; j < d; ++j) {
            MultiIndex up = domain[i];
            ++up[j];
            add_hop(m, v.spec, z, i, up);
            MultiIndex down = domain[i];
            --down[j];
            add_hop(m, v.spec, z, i, down);
        }
        if (v.spec.kind == LatticeKind::triangular) {
            MultiIndex ne = domain[i];
            ++ne[0];
            --ne[1];
            add_hop(m, v.spec, z, i, ne);
            MultiIndex sw = domain[i];
            --sw[0];
            ++sw[1];
            add_hop(m, v.spec, z, i, sw);
        }
        m(i, i) += v.values[i];
    }
    return m;
}

std::vector<Complex> unit_circle(const std::vector<double>& k) {
    std::vector<Complex> z(k.size());
    for (size_t j = 0; j < k.size(); ++j)
        z[j] = std::polar(1.0, 2.0 * std::numbers::pi * k[j]);
    return z;
}

Eigen::MatrixXcd dual_matrix(const FourierTable& f, const std::vector<Complex>& z) {
    const auto domain = fundamental_domain(f.spec);
    const int q = f.spec.site_count();
    const int d = f.spec.dimension();
    Eigen::MatrixXcd m(q, q);
    for (int r = 0; r < q; ++r) {
        for (int c = 0; c < q; ++c) {
            MultiIndex diff = domain[r];
            for (int j = 0; j < d; ++j) diff[j] -= domain[c][j];
            m(r, c) = f.at(diff);
        }
        Complex diag = 0.0;
        std::vector<Complex> rz(d);
        for (int j = 0; j < d; ++j) {
            rz[j] = phase(f.spec, j, domain[r][j]) * z[j];
            diag += rz[j] + 1.0 / rz[j];
        }
        if (f.spec.kind == LatticeKind::triangular) diag += rz[0] / rz[1] + rz[1] / rz[0];
        m(r, r) += diag;
    }
    return m;
}

IsospectralityReport compare_on_grid(const Potential& v, const Potential& y,
                                     const std::vector<int>& grid, double tol) {
    IsospectralityReport report;
    report.tolerance = tol;
    report.grid = grid;
    const int d = v.spec.dimension();
    const int q = v.spec.site_count();

    std::vector<int> idx(d, 0);
    std::vector<Complex> z(d);
    for (;;) {
        for (int j = 0; j < d; ++j)
            z[j] = std::polar(1.0, 2.0 * std::numbers::pi * idx[j] / grid[j]);
        const std::vector<Complex> cv = charpoly_coeffs(build_dz(v, z).entries);
        const std::vector<Complex> cy = charpoly_coeffs(build_dz(y, z).entries);
        for (int t = 0; t <= q; ++t) {
            report.max_coeff_diff = std::max(report.max_coeff_diff, std::abs(cv[t] - cy[t]));
            report.scale = std::max({report.scale, std::abs(cv[t]), std::abs(cy[t])});
        }
        int j = d - 1;
        while (j >= 0 && ++idx[j] == grid[j]) idx[j--] = 0;
        if (j < 0) break;
    }
    report.accepted = report.max_coeff_diff <= tol * report.scale;
    return report;
}

// Per-axis grid large enough to separate every Laurent exponent that can
// occur in det(D(z) - lambda): |a_j| <= Q / q_j on the hypercubic lattice,
// |a_j| <= Q/q_1 + Q/q_2 on the triangular one (diagonal hops mix the axes).
std::vector<int> isospectrality_grid(const LatticeSpec& spec) {
    const int q = spec.site_count();
    std::vector<int> grid(spec.dimension());
    if (spec.kind == LatticeKind::triangular) {
        const int bound = q / spec.periods[0] + q / spec.periods[1];
        grid.assign(2, 2 * bound + 1);
    } else {
        for (int j = 0; j < spec.dimension(); ++j) grid[j] = 2 * (q / spec.periods[j]) + 1;
    }
    return grid;
}

}  // namespace

FloquetMatrix build_dz(const Potential& v, const std::vector<Complex>& z) {
    v.validate();
    check_z(v.spec, z);
    return {v.spec, MatrixForm::dz, z, hopping_dz(v, z)};
}

FloquetMatrix build_dk(const Potential& v, const std::vector<double>& k) {
    if (static_cast<int>(k.size()) != v.spec.dimension())
        throw std::invalid_argument("boundary condition dimension does not match the lattice");
    FloquetMatrix m = build_dz(v, unit_circle(k));
    m.form = MatrixForm::dk;
    return m;
}

FloquetMatrix build_dual(const FourierTable& f, const std::vector<Complex>& z) {
    f.spec.validate();
    check_z(f.spec, z);
    return {f.spec, MatrixForm::dual, z, dual_matrix(f, z)};
}

FloquetMatrix build_dz_tri(const Potential& v, const std::vector<Complex>& z) {
    if (v.spec.kind != LatticeKind::triangular)
        throw std::invalid_argument("build_dz_tri expects a triangular lattice");
    return build_dz(v, z);
}

FloquetMatrix build_dk_tri(const Potential& v, const std::vector<double>& k) {
    if (v.spec.kind != LatticeKind::triangular)
        throw std::invalid_argument("build_dk_tri expects a triangular lattice");
    return build_dk(v, k);
}

FloquetMatrix build_dual_tri(const FourierTable& f, const std::vector<Complex>& z) {
    if (f.spec.kind != LatticeKind::triangular)
        throw std::invalid_argument("build_dual_tri expects a triangular lattice");
    return build_dual(f, z);
}

std::vector<Complex> charpoly_coeffs(const Eigen::MatrixXcd& m) {
    const int q = static_cast<int>(m.rows());
    if (m.cols() != q) throw std::invalid_argument("charpoly_coeffs expects a square matrix");
    if (q == 1) return {m(0, 0), Complex{-1.0}};

    // det(H - lambda I) is preserved by the unitary similarity, and on a
    // Hessenberg matrix the leading principal minors p_m(lambda) obey
    //   p_m = (h_{m,m} - lambda) p_{m-1}
    //       + sum_{i<m} (-1)^{m-i} h_{i,m} (prod_{j=i}^{m-1} h_{j+1,j}) p_{i-1},
    // expanding along the last column. Polynomials are coefficient vectors
    // in ascending powers of lambda.
    Eigen::HessenbergDecomposition<Eigen::MatrixXcd> hess(m);
    const Eigen::MatrixXcd h = hess.matrixH();

    std::vector<std::vector<Complex>> p(q + 1);
    p[0] = {Complex{1.0}};
    for (int mrow = 1; mrow <= q; ++mrow) {
        std::vector<Complex> cur(mrow + 1, Complex{0.0});
        const Complex diag = h(mrow - 1, mrow - 1);
        for (int t = 0; t < mrow; ++t) {
            cur[t] += diag * p[mrow - 1][t];
            cur[t + 1] -= p[mrow - 1][t];
        }
        Complex subprod = 1.0;  // prod of subdiagonal entries h_{j+1,j}, j = i..m-2
        for (int i = mrow - 1; i >= 1; --i) {
            subprod *= h(i, i - 1);
            const Complex c = ((mrow - i) % 2 ? -1.0 : 1.0) * h(i - 1, mrow - 1) * subprod;
            for (int t = 0; t < i; ++t) cur[t] += c * p[i - 1][t];
        }
        p[mrow] = std::move(cur);
    }
    return p[q];
}

IsospectralityReport floquet_isospectral(const Potential& v, const Potential& y, double tol) {
    v.validate();
    y.validate();
    if (!(v.spec == y.spec))
        throw std::invalid_argument("floquet_isospectral expects matching lattices");
    return compare_on_grid(v, y, isospectrality_grid(v.spec), tol);
}

Complex bloch_eval(const Potential& v, const std::vector<double>& k, Complex lambda) {
    Eigen::MatrixXcd m = build_dk(v, k).entries;
    m.diagonal().array() -= lambda;
    return m.partialPivLu().determinant();
}

bool fermi_member(const Potential& v, const std::vector<double>& k, Complex lambda, double tol) {
    const Eigen::MatrixXcd m = build_dk(v, k).entries;
    const std::vector<Complex> c = charpoly_coeffs(m);
    double scale = 1.0;
    for (const Complex& ct : c) scale = std::max(scale, std::abs(ct));
    Complex value = 0.0;  // Horner, ascending coefficients
    for (int t = static_cast<int>(c.size()) - 1; t >= 0; --t) value = value * lambda + c[t];
    return std::abs(value) <= tol * scale;
}

IsospectralityReport fermi_isospectral_at(const Potential& v, const Potential& y, Complex lambda,
                                          double tol) {
    v.validate();
    y.validate();
    if (!(v.spec == y.spec))
        throw std::invalid_argument("fermi_isospectral_at expects matching lattices");
    // det(D(z) - lambda) is one coefficient slice of the full comparison;
    // sampling the same grid and evaluating at lambda keeps the criterion a
    // coefficient identity rather than a zero-set comparison.
    IsospectralityReport report;
    report.tolerance = tol;
    report.grid = isospectrality_grid(v.spec);
    const int d = v.spec.dimension();

    std::vector<int> idx(d, 0);
    std::vector<Complex> z(d);
    for (;;) {
        for (int j = 0; j < d; ++j)
            z[j] = std::polar(1.0, 2.0 * std::numbers::pi * idx[j] / report.grid[j]);
        Eigen::MatrixXcd mv = build_dz(v, z).entries;
        Eigen::MatrixXcd my = build_dz(y, z).entries;
        mv.diagonal().array() -= lambda;
        my.diagonal().array() -= lambda;
        const Complex dv = mv.partialPivLu().determinant();
        const Complex dy = my.partialPivLu().determinant();
        report.max_coeff_diff = std::max(report.max_coeff_diff, std::abs(dv - dy));
        report.scale = std::max({report.scale, std::abs(dv), std::abs(dy)});
        int j = d - 1;
        while (j >= 0 && ++idx[j] == report.grid[j]) idx[j--] = 0;
        if (j < 0) break;
    }
    report.accepted = report.max_coeff_diff <= tol * report.scale;
    return report;
}

}  // namespace floq
