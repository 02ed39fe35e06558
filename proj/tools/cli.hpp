#pragma once

#include "filtss/document.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace filtss::cli {

enum Exit : int { ok = 0, negative = 1, invalid = 2, budget_exhausted = 3 };

// defining-system budget: FILTSS_BUDGET if set, else 2^20
std::size_t default_budget();

// args excludes the program name
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace filtss::cli
