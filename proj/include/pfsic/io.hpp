#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pfsic/fisher.hpp"
#include "pfsic/povm.hpp"
#include "pfsic/tomography.hpp"
#include "pfsic/types.hpp"

namespace pfsic {

// Complex numbers serialize as two-element arrays [re, im]; matrices as
// row-major nested arrays.
nlohmann::json complex_to_json(Complex z);
Complex complex_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j);

/// POVM file format: { "dim": d, "n": n, "vectors": [ [[re,im], ...], ... ] }.
nlohmann::json povm_to_json(const RankOnePOVM& povm);

/// Parses the vectors without validating completeness (verification tooling
/// wants the residual even for invalid files).
std::vector<CVector> povm_vectors_from_json(const nlohmann::json& j);

/// Parses and validates; throws CompletenessError for an invalid POVM.
RankOnePOVM povm_from_json(const nlohmann::json& j, double tol = kAlgebraTol);

RankOnePOVM load_povm(const std::string& path);
void save_povm(const RankOnePOVM& povm, const std::string& path);

nlohmann::json pfsic_verdict_to_json(const PfsicVerdict& v);
nlohmann::json fisher_report_to_json(const FisherReport& report);
nlohmann::json sim_report_to_json(const SimReport& report);

/// Per-trial estimates, one row per trial, columns x^{1,0}, x^{1,1}, ...;
/// doubles rendered with 17 significant digits.
void write_estimates_csv(const SimReport& report, std::ostream& out);

/// Construction descriptors:
///   {"kind":"minimal","d":D}
///   {"kind":"two_basis","d":D,"p_chi":P,"basis":[[...],...]?}
///   {"kind":"mix","base":<descriptor>,"seed":S,"size":M?,"strict":B?}
///   {"kind":"file","path":"..."}
RankOnePOVM povm_from_descriptor(const nlohmann::json& descriptor);

}  // namespace pfsic
