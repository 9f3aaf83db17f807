#include "posmap/linmap.hpp"

#include <cmath>
#include <utility>

namespace posmap {

MapRep::MapRep(Matrix superop) {
    if (superop.rows() != superop.cols())
        throw DimensionMismatch("superoperator must be square");
    const int d = exact_isqrt(superop.rows());
    if (d < 1) throw DimensionMismatch("superoperator must be d^2 x d^2");
    if (!superop.allFinite()) throw BadParameter("superoperator entries must be finite");
    dim_ = d;
    superop_ = std::make_shared<const Matrix>(std::move(superop));
    cache_ = std::make_shared<Cache>();
}

MapRep MapRep::from_choi(const Matrix& choi) {
    if (choi.rows() != choi.cols()) throw DimensionMismatch("Choi matrix must be square");
    const int d = exact_isqrt(choi.rows());
    if (d < 1) throw DimensionMismatch("Choi matrix must be d^2 x d^2");
    return MapRep(superop_from_choi(choi, d));
}

MapRep MapRep::from_kraus(const KrausSet& kraus) {
    const int d = kraus.dim;
    if (d < 1) throw DimensionMismatch("Kraus set dimension must be positive");
    Matrix s = Matrix::Zero(d * d, d * d);
    for (const Matrix& k : kraus.operators) {
        if (k.rows() != d || k.cols() != d)
            throw DimensionMismatch("Kraus operator dimension mismatch");
        s += kron(k.conjugate(), k);
    }
    return MapRep(std::move(s));
}

const Matrix& MapRep::choi() const {
    std::call_once(cache_->choi_once,
                   [this] { cache_->choi = choi_from_superop(*superop_, dim_); });
    return cache_->choi;
}

Matrix MapRep::apply(const Matrix& x) const {
    if (x.rows() != dim_ || x.cols() != dim_)
        throw DimensionMismatch("argument dimension does not match map dimension");
    return unvec(*superop_ * vec(x), dim_, dim_);
}

const StructuralFlags& MapRep::flags() const {
    std::call_once(cache_->flags_once,
                   [this] { cache_->flags = structural_flags(*this, kDefaultFlagTol); });
    return cache_->flags;
}

// Superop row (l*d + k), col (j*d + i) holds Phi(E_ij)_{kl}; the Choi entry
// at row (i*d + k), col (j*d + l) holds the same number. Swapping i <-> l is
// involutive, so one routine serves both directions.
namespace {
Matrix reshuffle(const Matrix& m, int d) {
    Matrix out(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            for (int j = 0; j < d; ++j)
                for (int l = 0; l < d; ++l) out(i * d + k, j * d + l) = m(l * d + k, j * d + i);
    return out;
}
}  // namespace

Matrix choi_from_superop(const Matrix& superop, int d) { return reshuffle(superop, d); }

Matrix superop_from_choi(const Matrix& choi, int d) { return reshuffle(choi, d); }

KrausSet kraus_from_choi(const Matrix& choi, double tol) {
    if (choi.rows() != choi.cols()) throw DimensionMismatch("Choi matrix must be square");
    const int d = exact_isqrt(choi.rows());
    if (d < 1) throw DimensionMismatch("Choi matrix must be d^2 x d^2");
    if (!is_hermitian(choi, std::max(tol, 1e-12)))
        throw NotHermitianPreserving("Choi matrix is not Hermitian within tolerance");

    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(choi));
    KrausSet out;
    out.dim = d;
    for (int a = 0; a < solver.eigenvalues().size(); ++a) {
        const double lambda = solver.eigenvalues()(a);
        if (lambda < -tol)
            throw NotCompletelyPositive("Choi matrix has eigenvalue below -tol");
        if (lambda <= tol * d) continue;  // noise band
        const Vector v = solver.eigenvectors().col(a);
        Matrix k(d, d);
        for (int i = 0; i < d; ++i) k.col(i) = v.segment(i * d, d);
        out.operators.push_back(std::sqrt(lambda) * k);
    }
    return out;
}

MapRep hs_adjoint(const MapRep& map) { return MapRep(map.superop().adjoint()); }

MapRep compose(const MapRep& a, const MapRep& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("compose: dimension mismatch");
    return MapRep(a.superop() * b.superop());
}

MapRep tensor(const MapRep& a, const MapRep& b) {
    const int da = a.dim();
    const int db = b.dim();
    const int dd = da * db;
    const Matrix& sa = a.superop();
    const Matrix& sb = b.superop();
    Matrix s(dd * dd, dd * dd);
    // Entry of the product map on E_{a1 a2} (x) E_{b1 b2}, read off factor by
    // factor; composite indices are (a, b) -> a*db + b with columns stacked.
    for (int a2 = 0; a2 < da; ++a2)
        for (int b2 = 0; b2 < db; ++b2)
            for (int a1 = 0; a1 < da; ++a1)
                for (int b1 = 0; b1 < db; ++b1) {
                    const Eigen::Index col =
                        static_cast<Eigen::Index>(a2 * db + b2) * dd + (a1 * db + b1);
                    for (int a4 = 0; a4 < da; ++a4)
                        for (int b4 = 0; b4 < db; ++b4)
                            for (int a3 = 0; a3 < da; ++a3)
                                for (int b3 = 0; b3 < db; ++b3) {
                                    const Eigen::Index row =
                                        static_cast<Eigen::Index>(a4 * db + b4) * dd +
                                        (a3 * db + b3);
                                    s(row, col) = sa(a4 * da + a3, a2 * da + a1) *
                                                  sb(b4 * db + b3, b2 * db + b1);
                                }
                }
    return MapRep(std::move(s));
}

MapRep ampliate(const MapRep& map, int n) {
    if (n < 1) throw BadParameter("ampliation order must be >= 1");
    return tensor(identity_map(n), map);
}

StructuralFlags structural_flags(const MapRep& map, double tol) {
    const int d = map.dim();
    StructuralFlags f;
    f.tol = tol;

    const Matrix& c = map.choi();
    f.hermiticity_preserving =
        (c - c.adjoint()).cwiseAbs().maxCoeff() <= tol ? TriState::Yes : TriState::No;

    // Trace preservation: partial trace of the Choi over the system factor
    // equals the identity on the ancilla factor.
    Matrix tr2 = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) tr2(i, j) += c(i * d + k, j * d + k);
    f.trace_preserving =
        (tr2 - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= tol ? TriState::Yes : TriState::No;

    const Matrix image_of_identity = map.apply(Matrix::Identity(d, d));
    f.unital = (image_of_identity - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= tol
                   ? TriState::Yes
                   : TriState::No;
    return f;
}

bool is_trace_preserving(const MapRep& map, double tol) {
    return structural_flags(map, tol).trace_preserving == TriState::Yes;
}

bool is_hermiticity_preserving(const MapRep& map, double tol) {
    return structural_flags(map, tol).hermiticity_preserving == TriState::Yes;
}

bool is_unital(const MapRep& map, double tol) {
    return structural_flags(map, tol).unital == TriState::Yes;
}

// ------------------------------ map gallery --------------------------------

MapRep identity_map(int d) {
    if (d < 1) throw BadParameter("dimension must be positive");
    return MapRep(Matrix::Identity(d * d, d * d));
}

MapRep transposition_map(int d) {
    if (d < 1) throw BadParameter("dimension must be positive");
    Matrix s = Matrix::Zero(d * d, d * d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) s(c * d + r, r * d + c) = 1.0;
    return MapRep(std::move(s));
}

MapRep pinching_map(int d) {
    if (d < 1) throw BadParameter("dimension must be positive");
    Matrix s = Matrix::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i) s(i * d + i, i * d + i) = 1.0;
    return MapRep(std::move(s));
}

MapRep pinching_map(const Matrix& basis) {
    const int d = static_cast<int>(basis.rows());
    if (basis.cols() != d) throw DimensionMismatch("basis must be square");
    if ((basis.adjoint() * basis - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
        throw BadParameter("basis columns must be orthonormal");
    // Rotate to the basis, pinch there, rotate back.
    return compose(unitary_conjugation(basis),
                   compose(pinching_map(d), unitary_conjugation(basis.adjoint())));
}

MapRep unitary_conjugation(const Matrix& u) {
    const int d = static_cast<int>(u.rows());
    if (u.cols() != d) throw DimensionMismatch("unitary must be square");
    if ((u.adjoint() * u - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
        throw BadParameter("matrix is not unitary within 1e-10");
    return MapRep(kron(u.conjugate(), u));
}

MapRep depolarizing_contraction(int d) {
    if (d < 1) throw BadParameter("dimension must be positive");
    const Vector id_vec = vec(Matrix::Identity(d, d));
    return MapRep(Matrix((id_vec * id_vec.adjoint()) / static_cast<double>(d)));
}

MapRep phi_family(int d, double a) {
    if (d < 1) throw BadParameter("dimension must be positive");
    if (a == static_cast<double>(d)) throw BadParameter("family parameter a must differ from d");
    const Vector id_vec = vec(Matrix::Identity(d, d));
    Matrix s = id_vec * id_vec.adjoint() - a * Matrix::Identity(d * d, d * d);
    s /= (d - a);
    return MapRep(std::move(s));
}

MapRep phi_family_transposed(int d, double a) {
    if (d < 1) throw BadParameter("dimension must be positive");
    if (a == static_cast<double>(d)) throw BadParameter("family parameter a must differ from d");
    const Vector id_vec = vec(Matrix::Identity(d, d));
    Matrix s = id_vec * id_vec.adjoint() - a * transposition_map(d).superop();
    s /= (d - a);
    return MapRep(std::move(s));
}

MapRep spa_mix(const MapRep& map, double lambda) {
    const int d = map.dim();
    Matrix s = lambda * depolarizing_contraction(d).superop() + (1.0 - lambda) * map.superop();
    return MapRep(std::move(s));
}

}  // namespace posmap
