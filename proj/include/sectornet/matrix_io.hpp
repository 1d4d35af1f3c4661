#ifndef SECTORNET_MATRIX_IO_HPP_
#define SECTORNET_MATRIX_IO_HPP_

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sectornet/errors.hpp"
#include "sectornet/text.hpp"

namespace sectornet {

// Binary layout of a square matrix:
//   bytes 0..7   magic "SNMATRX1"
//   bytes 8..15  N as unsigned 64-bit little-endian
//   then N*N IEEE-754 binary64 values, row-major, little-endian
inline constexpr std::array<char, 8> kMatrixMagic = {'S', 'N', 'M', 'A', 'T', 'R', 'X', '1'};

/// Row-major CSV, no header; doubles printed in shortest round-trip form.
inline void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            out << text::format_double(m(r, c));
        }
        out << '\n';
    }
}

inline Eigen::MatrixXd read_matrix_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        std::vector<double> row;
        for (const auto& field : text::split_csv(line)) {
            const auto v = text::parse_double(field);
            if (!v) throw DataError("matrix CSV line " + std::to_string(line_no) + ": malformed value '" + field + "'");
            row.push_back(*v);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw DataError("matrix CSV line " + std::to_string(line_no) + ": ragged row");
        }
        rows.push_back(std::move(row));
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    return m;
}

namespace detail {

inline void put_u64_le(std::ostream& out, std::uint64_t v) {
    char bytes[8];
    for (int k = 0; k < 8; ++k) bytes[k] = static_cast<char>((v >> (8 * k)) & 0xffu);
    out.write(bytes, 8);
}

inline std::uint64_t get_u64_le(std::istream& in) {
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw DataError("truncated binary matrix");
    std::uint64_t v = 0;
    for (int k = 7; k >= 0; --k) v = (v << 8) | bytes[k];
    return v;
}

} // namespace detail

inline void write_matrix_binary(std::ostream& out, const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw UsageError("binary matrix layout requires a square matrix");
    out.write(kMatrixMagic.data(), kMatrixMagic.size());
    detail::put_u64_le(out, static_cast<std::uint64_t>(m.rows()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) detail::put_u64_le(out, std::bit_cast<std::uint64_t>(m(r, c)));
}

inline Eigen::MatrixXd read_matrix_binary(std::istream& in) {
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMatrixMagic) {
        throw DataError("not a binary matrix file (bad magic)");
    }
    const auto n = detail::get_u64_le(in);
    if (n > (1u << 20)) throw DataError("binary matrix dimension too large");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = std::bit_cast<double>(detail::get_u64_le(in));
    return m;
}

inline std::string matrix_csv_string(const Eigen::MatrixXd& m) {
    std::ostringstream out;
    write_matrix_csv(out, m);
    return out.str();
}

inline std::string matrix_binary_string(const Eigen::MatrixXd& m) {
    std::ostringstream out(std::ios::binary);
    write_matrix_binary(out, m);
    return out.str();
}

} // namespace sectornet

#endif // SECTORNET_MATRIX_IO_HPP_
