#pragma once

#include <string>
#include <variant>

#include "json.hpp"

#include "hcm/algebra.hpp"
#include "hcm/constructions.hpp"
#include "hcm/dense.hpp"
#include "hcm/module.hpp"
#include "hcm/spectra.hpp"
#include "hcm/symbolic.hpp"

namespace hcm::io {

using json = nlohmann::json;

/// Complex numbers are [re, im] pairs; matrices are row-major arrays of rows.
json to_json(cplx z);
json to_json(const Mat& m);
json to_json(const Signature& sig);
json to_json(const AlgebraElement& a);
json to_json(const DimensionVector& d);
json to_json(const IndexValue& v);
json to_json(const ModuleVector& x);
json to_json(const Submodule& s);
json to_json(const DenseOperator& f);
json to_json(const SymbolicOperator& f);
json to_json(const SparseVector& v);
json to_json(const KernelDescriptor& k);
json to_json(const ClassificationReport& r);
json to_json(const WeylFlags& w);
json to_json(const DecompositionWitness& w);
json to_json(const ExactSequenceReport& r);
json to_json(const RadiiEstimate& r);
json to_json(const RieszReport& r);
json to_json(const RefinementRow& r);

// Readers throw Error(ParseError) on malformed input.
cplx complex_from_json(const json& j);
Mat matrix_from_json(const json& j);
Signature signature_from_json(const json& j);
AlgebraElement element_from_json(const json& j, const Signature& sig);
ModuleVector vector_from_json(const json& j);
Submodule submodule_from_json(const json& j);
DenseOperator dense_from_json(const json& j);
/// Accepts the full term form or the shorthand {"catalog": name, "signature": [...]}.
SymbolicOperator symbolic_from_json(const json& j);

using AnyOperator = std::variant<DenseOperator, SymbolicOperator>;
AnyOperator operator_from_json(const json& j);

json read_file(const std::string& path);
/// Canonical form: sorted keys, two-space indentation, trailing newline.
std::string dump(const json& j);
void write_file(const std::string& path, const json& j);

}  // namespace hcm::io
