// json_io.hpp — The shared JSON interchange formats.
//
// Matrices travel as {"d": n, "re": [[..]], "im": [[..]]} ("im" optional on
// input). Maps travel as {"d": d, "superop"|"choi": matrix} or
// {"d": d, "kraus": [matrix, ...]}. Verdicts, reports, stochastic matrices,
// generators and trajectories follow the shapes documented per function.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "posmap/classical.hpp"
#include "posmap/dynamics.hpp"
#include "posmap/entanglement.hpp"
#include "posmap/linmap.hpp"
#include "posmap/positivity.hpp"

namespace posmap {

using Json = nlohmann::json;

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json real_matrix_rows(const RealMatrix& m);
RealMatrix real_matrix_from_rows(const Json& rows);

Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

enum class MapForm { Superop, Choi, Kraus };

Json map_to_json(const MapRep& map, MapForm form = MapForm::Superop, double tol = kDefaultViolationTol);
MapRep map_from_json(const Json& j);

Json stochastic_to_json(const StochasticMatrix& s);
StochasticMatrix stochastic_from_json(const Json& j, double tol = 1e-10);

Json probability_to_json(const ProbabilityVector& p);
ProbabilityVector probability_from_json(const Json& j, bool renormalize = false);

Json kolmogorov_to_json(const KolmogorovGenerator& g);
KolmogorovGenerator kolmogorov_from_json(const Json& j);

Json gkls_to_json(const GklsGenerator& g);
GklsGenerator gkls_from_json(const Json& j);

Json witness_to_json(const Witness& w);
Json verdict_to_json(const PositivityVerdict& v);
Json flags_to_json(const StructuralFlags& f);
Json hierarchy_to_json(const HierarchyReport& r);

// One JSON-lines record per trajectory point.
std::vector<std::string> trajectory_to_json_lines(const Trajectory& t);

// Parses text and maps nlohmann's errors onto ParseError.
Json parse_json_text(const std::string& text);
Json load_json_file(const std::string& path);

}  // namespace posmap
