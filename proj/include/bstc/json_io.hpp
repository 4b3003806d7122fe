#ifndef BSTC_JSON_IO_HPP
#define BSTC_JSON_IO_HPP

#include <string>

#include "bstc/choice.hpp"
#include "bstc/solver.hpp"

namespace bstc {

// The `.choice.json` format:
//   {"universe": ["x","y","z"],
//    "choice":   [{"menu": ["x","y"], "selected": ["x"]}, ...]}
// Throws ChoiceDataError with a field path on validation failure
// (duplicate menu, empty selection, selection outside the menu,
// unknown element, or structural problems).
PartialChoice choice_from_json(const std::string& json_text);
std::string choice_to_json(const PartialChoice& c, bool pretty = true);

// Witness-model serialization. The choice component is stored as the
// induced data on the menu terms plus the extension rule (and the
// preorder layers for WARP); the explicit power-set listing is attached
// only for universes of at most 8 elements. Models round-trip: a
// deserialized model re-verifies, re-deriving the total choice from the
// rule when the listing is absent.
std::string model_to_json(const FiniteModel& m, bool pretty = true);
FiniteModel model_from_json(const std::string& json_text);

}  // namespace bstc

#endif
