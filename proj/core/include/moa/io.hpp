#pragma once

#include <string>

#include "moa/array.hpp"
#include "moa/cg.hpp"

namespace moa {

enum class ReportFormat { Json, Csv };

// Reads a matrix from a MatrixMarket file (coordinate or array format,
// real field, general or symmetric) or from headerless CSV. Symmetric
// files expand to full dense storage; coordinate entries not listed are
// zero; duplicate coordinate entries are an error.
DenseArray load_matrix(const std::string& path);

// Reads a vector: one value per line, or a single comma-separated row
// or column. An empty file yields the empty vector and sets the warning
// flag when provided.
DenseArray load_vector(const std::string& path, bool* empty_warning = nullptr);

// JSON object with keys solution, iterations, converged,
// residual_history; or CSV with the solution row first and then one
// residual per line. Values round-trip at 17 significant digits.
std::string format_report(const SolveReport& report, ReportFormat format);

void write_report(const SolveReport& report, const std::string& path, ReportFormat format);

}  // namespace moa
