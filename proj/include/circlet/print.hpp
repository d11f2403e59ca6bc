#pragma once

#include <string>

#include "circlet/term.hpp"

namespace circlet {

/// n, n₁, n₂ ... for frozen constants.
std::string frozen_display(const std::string& base, int index);

std::string to_string(const Term& t);
std::string to_string(const Equation& e);
std::string to_string(const FrozenGoal& g);
std::string to_string(const Condition& c);
std::string to_string(const Context& c);

}  // namespace circlet
