#include "posmap/entanglement.hpp"

#include <cmath>

#include "posmap/rng.hpp"

namespace posmap {

BipartiteState BipartiteState::pure_state(BipartiteDims dims, Vector psi) {
    if (dims.dim_a < 1 || dims.dim_b < 1) throw DimensionMismatch("factor dimensions must be positive");
    if (psi.size() != dims.total()) throw DimensionMismatch("state vector length mismatch");
    if (std::abs(psi.norm() - 1.0) > 1e-12) throw BadParameter("pure state must have unit norm");
    BipartiteState s;
    s.dims = dims;
    s.pure = std::move(psi);
    return s;
}

BipartiteState BipartiteState::mixed_state(BipartiteDims dims, Matrix rho) {
    if (dims.dim_a < 1 || dims.dim_b < 1) throw DimensionMismatch("factor dimensions must be positive");
    if (rho.rows() != dims.total() || rho.cols() != dims.total())
        throw DimensionMismatch("density matrix dimension mismatch");
    if (!is_hermitian(rho, 1e-10)) throw BadParameter("density matrix must be Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-10) throw BadParameter("density matrix trace must be 1");
    if (min_eigenvalue(rho) < -1e-9) throw BadParameter("density matrix must be PSD");
    BipartiteState s;
    s.dims = dims;
    s.mixed = std::move(rho);
    return s;
}

Matrix BipartiteState::density() const {
    if (mixed.has_value()) return *mixed;
    return (*pure) * pure->adjoint();
}

SchmidtData schmidt_decompose(const BipartiteState& state, double rank_tol) {
    if (!state.is_pure()) throw NotPure("Schmidt decomposition requires a pure state");
    const int da = state.dims.dim_a;
    const int db = state.dims.dim_b;

    // Coefficient matrix M with psi = sum_{ab} M(a,b) |a> (x) |b>.
    Matrix coeff(da, db);
    for (int a = 0; a < da; ++a) coeff.row(a) = state.pure->segment(a * db, db).transpose();

    Eigen::JacobiSVD<Matrix> svd(coeff, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SchmidtData data;
    data.singular_values = svd.singularValues();
    data.left_basis = svd.matrixU();
    data.right_basis = svd.matrixV().conjugate();

    const double cutoff = rank_tol * data.singular_values(0);
    data.rank = 0;
    for (Eigen::Index i = 0; i < data.singular_values.size(); ++i)
        if (data.singular_values(i) > cutoff) ++data.rank;
    return data;
}

bool is_maximally_entangled(const BipartiteState& state, double tol) {
    const SchmidtData data = schmidt_decompose(state);
    const int r = std::min(state.dims.dim_a, state.dims.dim_b);
    if (data.rank != r) return false;
    const double expected = 1.0 / std::sqrt(static_cast<double>(r));
    for (int i = 0; i < r; ++i)
        if (std::abs(data.singular_values(i) - expected) >= tol) return false;
    return true;
}

Matrix partial_transpose(const Matrix& rho, BipartiteDims dims, TransposeFactor factor) {
    const int da = dims.dim_a;
    const int db = dims.dim_b;
    if (rho.rows() != dims.total() || rho.cols() != dims.total())
        throw DimensionMismatch("partial_transpose: dimension mismatch");
    Matrix out(rho.rows(), rho.cols());
    for (int a = 0; a < da; ++a)
        for (int ap = 0; ap < da; ++ap) {
            if (factor == TransposeFactor::First)
                out.block(ap * db, a * db, db, db) = rho.block(a * db, ap * db, db, db);
            else
                out.block(a * db, ap * db, db, db) = rho.block(a * db, ap * db, db, db).transpose();
        }
    return out;
}

PptVerdict ppt_check(const Matrix& rho, BipartiteDims dims, double tol) {
    const Matrix pt = partial_transpose(rho, dims, TransposeFactor::Second);
    PptVerdict verdict;
    verdict.min_eigenvalue = min_eigenvalue(pt);
    verdict.ppt = verdict.min_eigenvalue >= -tol;
    verdict.conclusive_for_separability = (dims.dim_a == 2 && dims.dim_b == 2);
    return verdict;
}

bool detect_schmidt_number_gt(const Matrix& rho, BipartiteDims dims, int n,
                              const MapRep& detector, double tol) {
    if (detector.dim() != dims.dim_b)
        throw DimensionMismatch("detector dimension must match the second factor");
    if (rho.rows() != dims.total() || rho.cols() != dims.total())
        throw DimensionMismatch("state dimension mismatch");
    (void)n;  // the caller certifies the detector's n-positivity
    const MapRep ampliated = ampliate(detector, dims.dim_a);
    return min_eigenvalue(ampliated.apply(rho)) < -tol;
}

Matrix sample_separable(BipartiteDims dims, int terms, std::uint64_t seed) {
    if (terms < 1) throw BadParameter("terms must be >= 1");
    Rng rng = Rng::derive(seed, 0);
    const RealVector weights = terms == 1 ? RealVector::Ones(1) : random_simplex(rng, terms);
    Matrix rho = Matrix::Zero(dims.total(), dims.total());
    for (int t = 0; t < terms; ++t) {
        const Vector a = random_unit_vector(rng, dims.dim_a);
        const Vector b = random_unit_vector(rng, dims.dim_b);
        Vector product(dims.total());
        for (int i = 0; i < dims.dim_a; ++i) product.segment(i * dims.dim_b, dims.dim_b) = a(i) * b;
        rho += weights(t) * (product * product.adjoint());
    }
    return hermitize(rho);
}

BipartiteState max_entangled(int d) {
    if (d < 1) throw BadParameter("dimension must be positive");
    Vector psi = Vector::Zero(d * d);
    for (int i = 0; i < d; ++i) psi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
    return BipartiteState::pure_state({d, d}, std::move(psi));
}

}  // namespace posmap
