// entanglement.hpp — Schmidt decomposition, partial transposition / PPT, and
// Schmidt-number detection through n-positive maps.

#pragma once

#include <cstdint>
#include <optional>

#include "posmap/linmap.hpp"
#include "posmap/types.hpp"

namespace posmap {

struct BipartiteDims {
    int dim_a = 0;
    int dim_b = 0;
    int total() const { return dim_a * dim_b; }
};

struct BipartiteState {
    BipartiteDims dims;
    std::optional<Vector> pure;  // unit vector of length dim_a * dim_b
    std::optional<Matrix> mixed;

    static BipartiteState pure_state(BipartiteDims dims, Vector psi);
    static BipartiteState mixed_state(BipartiteDims dims, Matrix rho);
    bool is_pure() const { return pure.has_value(); }
    Matrix density() const;  // projector for pure states
};

struct SchmidtData {
    RealVector singular_values;  // nonincreasing, nonnegative
    Matrix left_basis;           // orthonormal columns
    Matrix right_basis;
    int rank = 0;
};

SchmidtData schmidt_decompose(const BipartiteState& state, double rank_tol = 1e-10);

bool is_maximally_entangled(const BipartiteState& state, double tol = 1e-10);

enum class TransposeFactor { First, Second };

Matrix partial_transpose(const Matrix& rho, BipartiteDims dims,
                         TransposeFactor factor = TransposeFactor::Second);

struct PptVerdict {
    bool ppt = false;
    double min_eigenvalue = 0.0;
    // Two qubits: PPT is equivalent to separability; otherwise only
    // NPT => entangled holds.
    bool conclusive_for_separability = false;
};

PptVerdict ppt_check(const Matrix& rho, BipartiteDims dims, double tol = kDefaultViolationTol);

// True certifies Schmidt number > n given an n-positive detector map acting
// on the second factor; false is inconclusive.
bool detect_schmidt_number_gt(const Matrix& rho, BipartiteDims dims, int n,
                              const MapRep& detector, double tol = kDefaultViolationTol);

// Convex mixture of random pure product states; always PPT.
Matrix sample_separable(BipartiteDims dims, int terms, std::uint64_t seed);

BipartiteState max_entangled(int d);

}  // namespace posmap
