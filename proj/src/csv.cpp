#include "riplab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace riplab {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_cell(const std::string& field, std::size_t row, std::size_t col) {
    std::size_t pos = 0;
    double value;
    try {
        value = std::stod(field, &pos);
    } catch (const std::exception&) {
        throw CsvError("not a number: '" + field + "'", row, col);
    }
    while (pos < field.size() && (field[pos] == ' ' || field[pos] == '\t')) ++pos;
    if (pos != field.size()) throw CsvError("trailing junk in cell: '" + field + "'", row, col);
    return value;
}

}  // namespace

DenseMatrix read_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open " + path.string(), 0, 0);
    std::vector<Vector> rows;
    std::string line;
    std::size_t lineno = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_fields(line);
        Vector row(fields.size());
        for (std::size_t j = 0; j < fields.size(); ++j)
            row[j] = parse_cell(fields[j], lineno, j + 1);
        if (rows.empty())
            width = row.size();
        else if (row.size() != width)
            throw CsvError("row has " + std::to_string(row.size()) + " fields, expected " +
                               std::to_string(width),
                           lineno, row.size());
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw CsvError("empty file " + path.string(), 0, 0);
    DenseMatrix m(rows.size(), width);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < width; ++j) m(i, j) = rows[i][j];
    return m;
}

Vector read_vector_csv(const std::filesystem::path& path) {
    const DenseMatrix m = read_matrix_csv(path);
    if (m.cols() != 1)
        throw CsvError("expected a single-column vector, got " + std::to_string(m.cols()) +
                           " columns",
                       1, m.cols());
    Vector v(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m(i, 0);
    return v;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_matrix_csv(const std::filesystem::path& path, const DenseMatrix& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

void write_vector_csv(const std::filesystem::path& path, std::span<const double> v) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (double x : v) out << format_double(x) << '\n';
}

}  // namespace riplab
