#pragma once

#include <optional>
#include <string>

#include "syswork/cochain_model.hpp"
#include "syswork/lattice.hpp"

namespace syswork {

struct ModelLoadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A cochain model as declared in a JSON file, plus the optional metric.
struct ModelFile {
  CochainModel model;
  std::optional<RatMatrix> gram;  // frame Gram matrix from "metric"
};

// Model files: { "type": "lie", "dim": n, "c": [[i,j,k,value],...] } with
// 1-based indices i < j, or { "type": "simplicial", "simplices": [[...]] }.
// Optional keys: "name", "cycles" (degree -> rows), "covolume",
// "metric": {"gram": [[...]]}.  Rationals are numbers or "p/q" strings.
ModelFile load_model_file(const std::string& path);
ModelFile parse_model_json(const std::string& text, const std::string& name_hint);

// Lattice files: { "basis": [[...]], "norm": {"kind": "quadratic"|"polyhedral",
// "gram"|"vertices"|"facets": [[...]]} }.
NormedLattice load_lattice_file(const std::string& path);
NormedLattice parse_lattice_json(const std::string& text);

// True when the file parses as JSON with a "basis" key (lattice shape).
bool is_lattice_file(const std::string& path);

std::string read_text_file(const std::string& path);

}  // namespace syswork
