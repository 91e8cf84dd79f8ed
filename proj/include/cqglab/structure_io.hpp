#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "cqglab/hopf_core.hpp"

namespace cqg {

// JSON document {name, dim, mult, comult, unit, counit, antipode, star}; every
// scalar is an [re, im] pair. Doubles are written with round-trip precision,
// so load(save(x)) reproduces x bit for bit.
//
// Errors: InputError for unreadable files or JSON syntax (byte offset in the
// message), StructureError for wrong shapes (JSON pointer in the message).
StructureConstants structure_from_json(const nlohmann::json& doc);
nlohmann::json structure_to_json(const StructureConstants& sc);

FiniteQuantumGroup load_structure(const std::filesystem::path& path);
void save_structure(const std::filesystem::path& path, const StructureConstants& sc);

nlohmann::json complex_to_json(cplx z);
cplx complex_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j, const std::string& where);

nlohmann::json read_json_file(const std::filesystem::path& path);

} // namespace cqg
