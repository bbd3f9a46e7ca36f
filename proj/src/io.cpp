#include "l1path/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace l1path::io {

std::string format_double(double x)
{
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc())
        throw Error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

double parse_double(std::string_view token)
{
    if (!token.empty() && token.front() == '+')
        token.remove_prefix(1);
    double value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw ParseError("not a number: '" + std::string(token) + "'");
    return value;
}

std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> fields;
    auto is_sep = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\r'; };
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_sep(line[i]))
            ++i;
        std::size_t j = i;
        while (j < line.size() && !is_sep(line[j]))
            ++j;
        if (j > i)
            fields.push_back(line.substr(i, j - i));
        i = j;
    }
    return fields;
}

namespace {

bool is_skippable(std::string_view line)
{
    const auto first = line.find_first_not_of(" \t\r");
    return first == std::string_view::npos || line[first] == '#';
}

std::vector<std::vector<double>> read_rows(std::istream& in, std::string_view source)
{
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_skippable(line))
            continue;
        std::vector<double> row;
        for (auto field : split_fields(line)) {
            double v = 0;
            try {
                v = parse_double(field);
            } catch (const ParseError& e) {
                throw ParseError(std::string(source) + ":" + std::to_string(lineno) + ": " +
                                 e.what());
            }
            if (!std::isfinite(v))
                throw ParseError(std::string(source) + ":" + std::to_string(lineno) +
                                 ": non-finite entry");
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError(std::string(source) + ":" + std::to_string(lineno) + ": row has " +
                             std::to_string(row.size()) + " entries, expected " +
                             std::to_string(rows.front().size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw ParseError(std::string(source) + ": no data");
    return rows;
}

std::ifstream open(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open " + path.string());
    return in;
}

} // namespace

MatrixXd read_matrix(std::istream& in, std::string_view source)
{
    const auto rows = read_rows(in, source);
    MatrixXd M(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < M.rows(); ++i)
        for (Index j = 0; j < M.cols(); ++j)
            M(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return M;
}

MatrixXd read_matrix_file(const std::filesystem::path& path)
{
    auto in = open(path);
    return read_matrix(in, path.string());
}

VectorXd read_vector(std::istream& in, std::string_view source)
{
    const MatrixXd M = read_matrix(in, source);
    if (M.cols() == 1)
        return M.col(0);
    if (M.rows() == 1)
        return M.row(0).transpose();
    throw ParseError(std::string(source) + ": expected a vector, got a " +
                     std::to_string(M.rows()) + "x" + std::to_string(M.cols()) + " matrix");
}

VectorXd read_vector_file(const std::filesystem::path& path)
{
    auto in = open(path);
    return read_vector(in, path.string());
}

void write_matrix(std::ostream& out, const MatrixXd& M)
{
    for (Index i = 0; i < M.rows(); ++i) {
        for (Index j = 0; j < M.cols(); ++j) {
            if (j > 0)
                out << ' ';
            out << format_double(M(i, j));
        }
        out << '\n';
    }
}

void write_vector(std::ostream& out, const VectorXd& v)
{
    for (Index i = 0; i < v.size(); ++i)
        out << format_double(v(i)) << '\n';
}

} // namespace l1path::io
