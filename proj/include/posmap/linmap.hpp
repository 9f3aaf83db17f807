// linmap.hpp — Linear maps on d x d complex matrix algebras.
//
// A map is held as its d^2 x d^2 superoperator in the column-stacking
// convention, vec(Phi(X)) = S vec(X). The Choi matrix uses the unnormalized
// convention C = sum_{ij} E_ij (x) Phi(E_ij) with the ancilla as the first
// tensor factor, and is cached on first use.

#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "posmap/errors.hpp"
#include "posmap/types.hpp"

namespace posmap {

enum class TriState { Yes, No, Unchecked };

struct StructuralFlags {
    TriState hermiticity_preserving = TriState::Unchecked;
    TriState trace_preserving = TriState::Unchecked;
    TriState unital = TriState::Unchecked;
    double tol = kDefaultFlagTol;
};

struct KrausSet {
    int dim = 0;
    std::vector<Matrix> operators;
};

class MapRep {
public:
    MapRep() = default;

    // Takes the superoperator; throws DimensionMismatch unless it is
    // d^2 x d^2 for some d >= 1.
    explicit MapRep(Matrix superop);

    static MapRep from_superop(Matrix superop) { return MapRep(std::move(superop)); }
    static MapRep from_choi(const Matrix& choi);
    static MapRep from_kraus(const KrausSet& kraus);

    int dim() const { return dim_; }
    const Matrix& superop() const { return *superop_; }

    // Choi matrix, computed lazily and shared across copies.
    const Matrix& choi() const;

    // Phi(X) for a d x d argument.
    Matrix apply(const Matrix& x) const;

    // Flags at the default tolerance, cached alongside the Choi matrix.
    const StructuralFlags& flags() const;

private:
    struct Cache {
        std::once_flag choi_once;
        Matrix choi;
        std::once_flag flags_once;
        StructuralFlags flags;
    };

    int dim_ = 0;
    std::shared_ptr<const Matrix> superop_;
    std::shared_ptr<Cache> cache_;
};

// Reshuffle between superoperator and Choi forms (an involution).
Matrix choi_from_superop(const Matrix& superop, int d);
Matrix superop_from_choi(const Matrix& choi, int d);

// Spectral Kraus extraction. Eigenvalues inside [-tol, tol*d] are discarded;
// anything below -tol throws NotCompletelyPositive.
KrausSet kraus_from_choi(const Matrix& choi, double tol = kDefaultViolationTol);

// Hilbert-Schmidt adjoint: <adj(Phi)(A), B> = <A, Phi(B)>.
MapRep hs_adjoint(const MapRep& map);

// a after b, i.e. X -> a(b(X)).
MapRep compose(const MapRep& a, const MapRep& b);

// Tensor product acting on the (d_a * d_b)-dimensional algebra.
MapRep tensor(const MapRep& a, const MapRep& b);

// id_n (x) map.
MapRep ampliate(const MapRep& map, int n);

StructuralFlags structural_flags(const MapRep& map, double tol = kDefaultFlagTol);

bool is_trace_preserving(const MapRep& map, double tol = kDefaultFlagTol);
bool is_hermiticity_preserving(const MapRep& map, double tol = kDefaultFlagTol);
bool is_unital(const MapRep& map, double tol = kDefaultFlagTol);

// ------------------------------ map gallery --------------------------------

MapRep identity_map(int d);
MapRep transposition_map(int d);

// Erases off-diagonal entries in the given orthonormal basis (columns of
// `basis`); canonical basis when omitted.
MapRep pinching_map(int d);
MapRep pinching_map(const Matrix& basis);

MapRep unitary_conjugation(const Matrix& u);

// X -> Tr(X) I / d.
MapRep depolarizing_contraction(int d);

// One-parameter unital trace-preserving family (Tr(X) I - a X) / (d - a).
// Throws BadParameter when a == d.
MapRep phi_family(int d, double a);

// Transposed variant (Tr(X) I - a X^T) / (d - a).
MapRep phi_family_transposed(int d, double a);

// lambda * Tr(.) I / d + (1 - lambda) * Phi.
MapRep spa_mix(const MapRep& map, double lambda);

}  // namespace posmap
