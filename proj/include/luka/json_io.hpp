#pragma once

// JSON forms of the library objects.  Rationals are strings "p/q" (or "p"
// for integers); points are arrays of such strings.  Object keys keep
// insertion order so that output is deterministic.

#include "luka/coherence.hpp"
#include "luka/complex.hpp"
#include "luka/geometry.hpp"
#include "luka/states.hpp"

#include "json.hpp"

namespace luka {

using Json = nlohmann::ordered_json;

Json rational_to_json(const Rational& q);
Rational rational_from_json(const Json& j);
Json point_to_json(const VectorQ& x);
VectorQ point_from_json(const Json& j);

/// {"n": int, "vertices": [[...], ...], "simplexes": [[idx, ...], ...]}
Json complex_to_json(const RegularComplex& c);
/// Rebuilds the complex; throws Error on malformed input.
RegularComplex complex_from_json(const Json& j);

/// {"ambient": int, "dimension": int, "extremals": [...], "facets":
/// [{"normal": [...], "offset": "p/q", "vertices": [...]}], "hull":
/// {"equations": [[...]], "rhs": [...]}}
Json polytope_to_json(const Polytope& p);

/// {"verdict": "strict|coherent|incoherent", "arm": ..., "lambda": {vertex:
/// weight}, "sigma": [...], "vertex_order": [...]}; "lambda" and "sigma"
/// appear when the verdict carries them.
Json verdict_to_json(const Verdict& v, const RegularComplex& c);

/// [["formula", "p/q"], ...]
Json book_to_json(const Book& book);
Book book_from_json(const Json& j);

/// {"book": [...], "dimension": n, "history": [["formula", "p/q"], ...],
///  "complex": {...}, "lambda": {vertex: weight}}
Json session_to_json(const ExtensionSession& s);
/// Replays the stored history and throws Error unless the replay reproduces
/// the stored history values, complex and weights exactly.
ExtensionSession session_from_json(const Json& j);

}  // namespace luka
