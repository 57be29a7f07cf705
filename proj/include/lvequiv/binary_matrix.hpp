#pragma once

#include <string>
#include <vector>

#include "lvequiv/bits.hpp"

namespace lvequiv {

// Dense binary matrix with at most 64 rows and 64 columns. Each row is a bitmask over columns.
class BinaryMatrix {
public:
    BinaryMatrix() = default;
    BinaryMatrix(int rows, int cols);
    static BinaryMatrix from_rows(int cols, std::vector<VertexSet> rows);
    static BinaryMatrix from_columns(int rows, const std::vector<VertexSet>& cols);
    static BinaryMatrix identity(int d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    bool get(int r, int c) const { return contains(row_bits_[r], c); }
    void set(int r, int c, bool v = true);

    VertexSet row(int r) const { return row_bits_[r]; }
    VertexSet column(int c) const;
    const std::vector<VertexSet>& row_bits() const { return row_bits_; }
    std::vector<VertexSet> column_bits() const;

    // Keeps the selected columns in their original order.
    BinaryMatrix select_columns(VertexSet cols) const;
    // Replaces column c with the indicator of `rows`.
    BinaryMatrix with_column(int c, VertexSet rows) const;
    BinaryMatrix append_column(VertexSet rows) const;

    int nonzeros() const;
    std::string to_string() const;

    bool operator==(const BinaryMatrix& o) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<VertexSet> row_bits_;
};

}  // namespace lvequiv
