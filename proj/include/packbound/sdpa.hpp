#pragma once

#include "packbound/numeric.hpp"

#include <string>

namespace packbound {

// SDPA sparse format. The model min <C,Y> s.t. <A_k,Y> = b_k is SDPA's dual problem, so
// F0 = -C, F_k = A_k and the cost vector is b. Comment lines record block roles.
std::string export_sdpa(const NumericModel& model);
void write_sdpa(const NumericModel& model, const std::string& path);
NumericModel import_sdpa(const std::string& text, unsigned precision);
NumericModel read_sdpa(const std::string& path, unsigned precision);

// Reads the yMat section (our Y) of an SDPA result file.
SolutionBundle import_sdpa_solution(const std::string& text, const NumericModel& model);

}  // namespace packbound
