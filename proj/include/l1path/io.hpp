#pragma once

// Plain-text matrix/vector format: one row per line, entries separated by
// commas and/or whitespace, '#' starts a comment line, blank lines ignored.
// Writers emit 17 significant digits and never depend on the C locale.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "l1path/matrix.hpp"

namespace l1path::io {

/// Shortest text that parses back to the same double, locale independent.
std::string format_double(double x);

/// Parse a decimal float; the whole token must be consumed.
double parse_double(std::string_view token);

/// Split a data line on commas and whitespace.
std::vector<std::string_view> split_fields(std::string_view line);

MatrixXd read_matrix(std::istream& in, std::string_view source = "<stream>");
MatrixXd read_matrix_file(const std::filesystem::path& path);

/// A vector file is one value per line; a single row of values is accepted too.
VectorXd read_vector(std::istream& in, std::string_view source = "<stream>");
VectorXd read_vector_file(const std::filesystem::path& path);

void write_matrix(std::ostream& out, const MatrixXd& M);
void write_vector(std::ostream& out, const VectorXd& v);

} // namespace l1path::io
