// positivity.hpp — Certification and falsification across the positivity
// hierarchy: n-positivity, generalized Schwarz levels, complete (co)positivity,
// decomposability, tensor-stable positivity and partial trace-norm
// contractivity.
//
// Falsifiers return Refuted (with a re-checkable witness) or Undetermined;
// Certified is reserved for checks with exact spectral certificates or
// closed-form oracles.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "posmap/linmap.hpp"
#include "posmap/types.hpp"

namespace posmap {

enum class PropertyKind {
    NPositive,           // P_n
    Schwarz,             // S_n (generalized Schwarz at level n)
    CompletelyPositive,  // CP
    CompletelyCopositive,
    Decomposable,
    TensorStable,  // level n: Phi^{(x) n} positive
    Contractive,   // level n: trace-norm contractive on n-state spans
};

struct Property {
    PropertyKind kind = PropertyKind::NPositive;
    int level = 0;  // n where applicable, 0 otherwise
};

std::string property_name(const Property& p);

enum class VerdictStatus { Certified, Refuted, Undetermined };

struct Witness {
    enum class Kind { SchmidtVector, SchwarzOperator, HermitianTestOperator };
    Kind kind = Kind::SchmidtVector;
    // SchmidtVector payload: v = sum_k left[k] (x) right[k], normalized.
    std::vector<Vector> left;
    std::vector<Vector> right;
    // SchwarzOperator / HermitianTestOperator payload.
    Matrix test_operator;
    double value = 0.0;  // violation magnitude (negative for refutations)
};

// Assemble sum_k left[k] (x) right[k] from a Schmidt-vector witness.
Vector assemble_schmidt_vector(const Witness& w);

struct SpectralCertificate {
    double min_eigenvalue = 0.0;
    int index = 0;
};

struct DecompositionCertificate {
    Matrix cp_part;    // PSD Choi block A
    Matrix cocp_part;  // PSD block B with A + partial_transpose(B) = Choi
    double residual = 0.0;
};

struct ToleranceRecord {
    double violation_tol = kDefaultViolationTol;
    double rel_decrease_tol = 0.0;
};

struct PositivityVerdict {
    Property property;
    VerdictStatus status = VerdictStatus::Undetermined;
    std::optional<Witness> witness;
    std::optional<SpectralCertificate> spectral;
    std::optional<DecompositionCertificate> decomposition;
    ToleranceRecord tolerances;
    std::uint64_t seed = 0;
    int restarts_used = 0;
};

struct HierarchyReport {
    int d = 0;
    StructuralFlags flags;
    std::vector<PositivityVerdict> p_levels;  // P_1 .. P_d
    std::vector<PositivityVerdict> s_levels;  // S_1 .. S_d
    PositivityVerdict cp;
    PositivityVerdict cocp;
    PositivityVerdict decomposable;
};

struct FalsifierOptions {
    int restarts = 50;
    int max_iters = 500;
    double rel_tol = 1e-11;
    double tol = kDefaultViolationTol;
    std::uint64_t seed = 0;
};

struct SchwarzOptions {
    int restarts = 20;
    int max_sweeps = 200;
    double tol = kDefaultViolationTol;
    double initial_step = 0.5;
    double min_step = 1e-5;
    std::uint64_t seed = 0;
};

struct DykstraOptions {
    int max_iters = 2000;
    double tol = 1e-7;
};

struct ClassifyOptions {
    FalsifierOptions positivity;
    SchwarzOptions schwarz;
    DykstraOptions dykstra;
    bool run_decomposable = true;
};

// Exact Choi-spectrum test; Certified iff lambda_min >= -tol.
PositivityVerdict check_cp(const MapRep& map, double tol = kDefaultViolationTol);

// Exact test of Phi = T o (CP): Choi of T o Phi must be PSD.
PositivityVerdict check_cocp(const MapRep& map, double tol = kDefaultViolationTol);

// Block-coordinate descent over Schmidt-rank-n vectors against the Choi
// matrix. For n >= d the question collapses to CP and the exact verdict is
// returned.
PositivityVerdict falsify_n_positivity(const MapRep& map, int n,
                                       const FalsifierOptions& opts = {});

// Multi-start local search for an operator X violating the level-n Schwarz
// block inequality. Uses the 2x2 block form, which avoids pseudoinverse
// rank decisions.
PositivityVerdict falsify_generalized_schwarz(const MapRep& map, int n,
                                              const SchwarzOptions& opts = {});

// Minimal lambda in [0, 1] such that the depolarizing mixture of the map is
// CP; closed form from the minimal Choi eigenvalue.
double spa_lambda(const MapRep& map);

// Dykstra-style alternating projections searching for Choi = A + B^Gamma with
// A, B PSD. Certified on convergence; non-convergence is Undetermined.
PositivityVerdict decompose_map(const MapRep& map, const DykstraOptions& opts = {});

// Builds the n-fold tensor power and falsifies its 1-positivity. Guarded by
// d^n <= 64.
PositivityVerdict falsify_tensor_stable_positivity(const MapRep& map, int n,
                                                   const FalsifierOptions& opts = {});

// Samples Hermitian operators in B(H)_h (x) span{rho_1..rho_n} and compares
// trace norms before and after id (x) Phi.
PositivityVerdict check_trace_norm_contractivity(const MapRep& map, int n, int samples,
                                                 std::uint64_t seed,
                                                 double tol = kDefaultViolationTol);

// Full hierarchy scan with monotone-consistency propagation: a refutation at
// a weaker property is inherited by every stronger one, and an exact CP
// certificate certifies every weaker level.
HierarchyReport classify(const MapRep& map, const ClassifyOptions& opts = {});

// ------------------------- closed-form family oracle ------------------------

enum class PhiFamilyKind { Plain, Transposed };
enum class OracleProperty { NPositive, Schwarz, CompletelyPositive };

// Ground-truth membership for the phi_a / phi_aT families. S_d is treated as
// identical to CP.
bool oracle_phi_family(PhiFamilyKind kind, int d, double a, OracleProperty property, int n = 0);

// Threshold value of `a` at which membership stops (upper endpoint), and the
// lower endpoint when one exists (transposed Schwarz/CP ranges).
struct OracleInterval {
    double lower;  // -infinity encoded as -HUGE_VAL
    double upper;
};
OracleInterval oracle_phi_interval(PhiFamilyKind kind, int d, OracleProperty property, int n = 0);

}  // namespace posmap
