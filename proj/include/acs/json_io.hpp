#ifndef ACS_JSON_IO_HPP
#define ACS_JSON_IO_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "acs/poly.hpp"

namespace acs {

using json = nlohmann::json;

// Complex scalars are written as {"re": .., "im": ..}. Readers also accept
// a bare number for a real scalar.
json complex_to_json(cplx z);
cplx complex_from_json(const json& j);

json vector_to_json(const CVector& v);
/// Real vectors as plain number arrays (imaginary parts must be zero).
json real_vector_to_json(const CVector& v);
CVector vector_from_json(const json& j);

json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);

/// {"nvars": n, "polys": [[{"exp": [..], "re": c, "im": c}, ..], ..]}
json system_to_json(const PolySystem& sys);
PolySystem system_from_json(const json& j);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

} // namespace acs

#endif
