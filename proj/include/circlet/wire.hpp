#pragma once

// JSON encoding of terms, equations and proof records ("circlet.*/1" schemas).
// Terms are sent both as display text and as operator trees.

#include <json.hpp>

#include "circlet/proof.hpp"
#include "circlet/spec.hpp"

namespace circlet {

using json = nlohmann::json;

json term_json(const Term& t);
/// Inverse of term_json. Unknown fresh subsorts "S<x>" are added to spec.sig.
Term term_from_json(const json& j, Specification& spec);

json equation_json(const Equation& e);
Equation equation_from_json(const json& j, Specification& spec);

json goal_json(const FrozenGoal& g);
json hypothesis_json(const Hypothesis& h);
json node_json(const GoalNode& n);
json step_json(const TraceStep& s);

}  // namespace circlet
