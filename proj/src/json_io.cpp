#include "posmap/json_io.hpp"

#include <fstream>
#include <sstream>

namespace posmap {

namespace {

std::string status_name(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::Certified:
            return "certified";
        case VerdictStatus::Refuted:
            return "refuted";
        case VerdictStatus::Undetermined:
            return "undetermined";
    }
    return "undetermined";
}

std::string tristate_name(TriState t) {
    switch (t) {
        case TriState::Yes:
            return "yes";
        case TriState::No:
            return "no";
        case TriState::Unchecked:
            return "unchecked";
    }
    return "unchecked";
}

std::string stoch_class_name(StochClass c) {
    switch (c) {
        case StochClass::Row:
            return "row";
        case StochClass::Column:
            return "column";
        case StochClass::Bi:
            return "bi";
        case StochClass::Ortho:
            return "ortho";
        case StochClass::Pseudo:
            return "pseudo";
        case StochClass::PseudoBi:
            return "pseudo_bi";
    }
    return "?";
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
    const int n = static_cast<int>(m.rows());
    Json re = Json::array();
    Json im = Json::array();
    for (int i = 0; i < n; ++i) {
        Json re_row = Json::array();
        Json im_row = Json::array();
        for (int j = 0; j < static_cast<int>(m.cols()); ++j) {
            re_row.push_back(m(i, j).real());
            im_row.push_back(m(i, j).imag());
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    return Json{{"d", n}, {"re", std::move(re)}, {"im", std::move(im)}};
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("re")) throw ParseError("matrix object requires \"re\"");
    const Json& re = j.at("re");
    if (!re.is_array() || re.empty()) throw ParseError("matrix \"re\" must be a nonempty array");
    const int rows = static_cast<int>(re.size());
    const int cols = static_cast<int>(re.at(0).size());
    if (j.contains("d") && j.at("d").get<int>() != rows)
        throw ParseError("matrix \"d\" disagrees with row count");

    Matrix m(rows, cols);
    const bool has_im = j.contains("im");
    for (int i = 0; i < rows; ++i) {
        const Json& re_row = re.at(i);
        if (static_cast<int>(re_row.size()) != cols) throw ParseError("ragged matrix rows");
        for (int c = 0; c < cols; ++c) {
            const double real_part = re_row.at(c).get<double>();
            const double imag_part = has_im ? j.at("im").at(i).at(c).get<double>() : 0.0;
            m(i, c) = Complex(real_part, imag_part);
        }
    }
    if (!m.allFinite()) throw ParseError("matrix entries must be finite");
    return m;
}

Json real_matrix_rows(const RealMatrix& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

RealMatrix real_matrix_from_rows(const Json& rows) {
    if (!rows.is_array() || rows.empty()) throw ParseError("expected a nonempty array of rows");
    const int n = static_cast<int>(rows.size());
    const int c = static_cast<int>(rows.at(0).size());
    RealMatrix m(n, c);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows.at(i).size()) != c) throw ParseError("ragged rows");
        for (int j = 0; j < c; ++j) m(i, j) = rows.at(i).at(j).get<double>();
    }
    if (!m.allFinite()) throw ParseError("matrix entries must be finite");
    return m;
}

Json vector_to_json(const Vector& v) {
    Json re = Json::array();
    Json im = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        re.push_back(v(i).real());
        im.push_back(v(i).imag());
    }
    return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

Vector vector_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("re")) throw ParseError("vector object requires \"re\"");
    const Json& re = j.at("re");
    Vector v(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) {
        const double imag_part = j.contains("im") ? j.at("im").at(i).get<double>() : 0.0;
        v(static_cast<Eigen::Index>(i)) = Complex(re.at(i).get<double>(), imag_part);
    }
    return v;
}

Json map_to_json(const MapRep& map, MapForm form, double tol) {
    Json j{{"d", map.dim()}};
    switch (form) {
        case MapForm::Superop:
            j["superop"] = matrix_to_json(map.superop());
            break;
        case MapForm::Choi:
            j["choi"] = matrix_to_json(map.choi());
            break;
        case MapForm::Kraus: {
            const KrausSet kraus = kraus_from_choi(map.choi(), tol);
            Json list = Json::array();
            for (const Matrix& k : kraus.operators) list.push_back(matrix_to_json(k));
            j["kraus"] = std::move(list);
            break;
        }
    }
    return j;
}

MapRep map_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("map object expected");
    if (j.contains("superop")) return MapRep(matrix_from_json(j.at("superop")));
    if (j.contains("choi")) return MapRep::from_choi(matrix_from_json(j.at("choi")));
    if (j.contains("kraus")) {
        if (!j.contains("d")) throw ParseError("kraus map requires \"d\"");
        KrausSet ks;
        ks.dim = j.at("d").get<int>();
        for (const Json& k : j.at("kraus")) ks.operators.push_back(matrix_from_json(k));
        return MapRep::from_kraus(ks);
    }
    throw ParseError("map object requires \"superop\", \"choi\" or \"kraus\"");
}

Json stochastic_to_json(const StochasticMatrix& s) {
    Json classes = Json::array();
    for (const StochClass c : s.classes) classes.push_back(stoch_class_name(c));
    return Json{{"d", s.dim()}, {"rows", real_matrix_rows(s.m)}, {"classes", std::move(classes)}};
}

StochasticMatrix stochastic_from_json(const Json& j, double tol) {
    if (!j.is_object() || !j.contains("rows"))
        throw ParseError("stochastic matrix requires \"rows\"");
    const RealMatrix m = real_matrix_from_rows(j.at("rows"));
    if (m.rows() != m.cols()) throw ParseError("stochastic matrix must be square");
    if (j.contains("d") && j.at("d").get<int>() != m.rows())
        throw ParseError("stochastic \"d\" disagrees with row count");
    return tag_stochastic(m, tol);
}

Json probability_to_json(const ProbabilityVector& p) {
    Json arr = Json::array();
    for (int i = 0; i < p.dim(); ++i) arr.push_back(p.p(i));
    return arr;
}

ProbabilityVector probability_from_json(const Json& j, bool renormalize) {
    if (!j.is_array() || j.empty()) throw ParseError("probability vector must be a nonempty array");
    RealVector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
    return ProbabilityVector::make(std::move(v), 1e-12, renormalize);
}

Json kolmogorov_to_json(const KolmogorovGenerator& g) {
    return Json{{"W", real_matrix_rows(g.rates)}, {"L", real_matrix_rows(g.generator)}};
}

KolmogorovGenerator kolmogorov_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("W")) throw ParseError("classical generator requires \"W\"");
    const Json& w = j.at("W");
    const RealMatrix rates =
        w.is_array() ? real_matrix_from_rows(w) : matrix_from_json(w).real();
    return kolmogorov_from_rates(rates);
}

Json gkls_to_json(const GklsGenerator& g) {
    Json jumps = Json::array();
    for (const Matrix& jump : g.jumps) jumps.push_back(matrix_to_json(jump));
    return Json{{"H", matrix_to_json(g.hamiltonian)}, {"jumps", std::move(jumps)}};
}

GklsGenerator gkls_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("H")) throw ParseError("quantum generator requires \"H\"");
    Matrix h = matrix_from_json(j.at("H"));
    std::vector<Matrix> jumps;
    if (j.contains("jumps"))
        for (const Json& jump : j.at("jumps")) jumps.push_back(matrix_from_json(jump));
    return GklsGenerator::make(std::move(h), std::move(jumps));
}

Json witness_to_json(const Witness& w) {
    Json j;
    j["value"] = w.value;
    switch (w.kind) {
        case Witness::Kind::SchmidtVector: {
            j["kind"] = "schmidt_vector";
            Json xs = Json::array();
            Json ys = Json::array();
            for (const Vector& x : w.left) xs.push_back(vector_to_json(x));
            for (const Vector& y : w.right) ys.push_back(vector_to_json(y));
            j["x"] = std::move(xs);
            j["y"] = std::move(ys);
            break;
        }
        case Witness::Kind::SchwarzOperator:
            j["kind"] = "schwarz_operator";
            j["X"] = matrix_to_json(w.test_operator);
            break;
        case Witness::Kind::HermitianTestOperator:
            j["kind"] = "hermitian_test_operator";
            j["X"] = matrix_to_json(w.test_operator);
            break;
    }
    return j;
}

Json verdict_to_json(const PositivityVerdict& v) {
    Json j;
    j["property"] = property_name(v.property);
    j["status"] = status_name(v.status);
    if (v.witness.has_value()) {
        j["value"] = v.witness->value;
        j["witness"] = witness_to_json(*v.witness);
    } else if (v.spectral.has_value()) {
        j["value"] = v.spectral->min_eigenvalue;
    }
    if (v.spectral.has_value())
        j["certificate"] = Json{{"min_eigenvalue", v.spectral->min_eigenvalue},
                                {"index", v.spectral->index}};
    if (v.decomposition.has_value())
        j["certificate"] = Json{{"residual", v.decomposition->residual},
                                {"cp_part", matrix_to_json(v.decomposition->cp_part)},
                                {"cocp_part", matrix_to_json(v.decomposition->cocp_part)}};
    j["seed"] = v.seed;
    j["restarts_used"] = v.restarts_used;
    j["tolerances"] = Json{{"violation", v.tolerances.violation_tol},
                           {"rel_decrease", v.tolerances.rel_decrease_tol}};
    return j;
}

Json flags_to_json(const StructuralFlags& f) {
    return Json{{"hermiticity_preserving", tristate_name(f.hermiticity_preserving)},
                {"trace_preserving", tristate_name(f.trace_preserving)},
                {"unital", tristate_name(f.unital)},
                {"tol", f.tol}};
}

Json hierarchy_to_json(const HierarchyReport& r) {
    Json p_levels = Json::array();
    Json s_levels = Json::array();
    for (const auto& v : r.p_levels) p_levels.push_back(verdict_to_json(v));
    for (const auto& v : r.s_levels) s_levels.push_back(verdict_to_json(v));
    return Json{{"d", r.d},
                {"flags", flags_to_json(r.flags)},
                {"P", std::move(p_levels)},
                {"S", std::move(s_levels)},
                {"CP", verdict_to_json(r.cp)},
                {"coCP", verdict_to_json(r.cocp)},
                {"decomposable", verdict_to_json(r.decomposable)}};
}

std::vector<std::string> trajectory_to_json_lines(const Trajectory& t) {
    std::vector<std::string> lines;
    lines.reserve(t.points.size());
    for (const TrajectoryPoint& point : t.points) {
        Json j;
        j["t"] = point.t;
        if (std::holds_alternative<RealVector>(point.state)) {
            const RealVector& p = std::get<RealVector>(point.state);
            Json arr = Json::array();
            for (Eigen::Index i = 0; i < p.size(); ++i) arr.push_back(p(i));
            j["state"] = std::move(arr);
        } else {
            j["state"] = matrix_to_json(std::get<Matrix>(point.state));
        }
        j["valid"] = point.valid;
        lines.push_back(j.dump());
    }
    return lines;
}

Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_json_text(buffer.str());
}

}  // namespace posmap
