#pragma once

// Small text helpers shared by every file format in the project.

#include <Eigen/Core>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dpgp::io {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);
void append_double(std::string& out, double value);

/// Parses a whole field as a double; no surrounding whitespace allowed.
std::optional<double> parse_double(std::string_view field);

std::vector<std::string_view> split_fields(std::string_view line, char sep = ',');

/// Splits on '\n', dropping one trailing '\r' per line and a final empty line.
std::vector<std::string_view> split_lines(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Dense matrix as CSV with no header, one row per line.
std::string matrix_to_csv(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_csv(std::string_view text);

}  // namespace dpgp::io
