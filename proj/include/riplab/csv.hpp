#pragma once

#include <filesystem>
#include <string>

#include "riplab/matrix.hpp"

namespace riplab {

/// Malformed numeric CSV; carries 1-based row/column of the offending cell.
class CsvError : public std::runtime_error {
public:
    CsvError(const std::string& what, std::size_t row, std::size_t col)
        : std::runtime_error(what), row(row), col(col) {}
    std::size_t row;
    std::size_t col;
};

/// One matrix row per line, comma separated, decimal notation, no header.
DenseMatrix read_matrix_csv(const std::filesystem::path& path);
/// Single-column CSV.
Vector read_vector_csv(const std::filesystem::path& path);

/// Written with 17 significant digits so values round-trip exactly.
void write_matrix_csv(const std::filesystem::path& path, const DenseMatrix& m);
void write_vector_csv(const std::filesystem::path& path, std::span<const double> v);

std::string format_double(double x);

}  // namespace riplab
