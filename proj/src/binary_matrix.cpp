#include "lvequiv/binary_matrix.hpp"

#include "lvequiv/errors.hpp"

namespace lvequiv {

BinaryMatrix::BinaryMatrix(int rows, int cols) : rows_(rows), cols_(cols), row_bits_(rows, 0) {
    if (rows < 0 || cols < 0 || rows > 64 || cols > 64)
        throw SizeError("binary matrix dimensions must lie in [0, 64]");
}

BinaryMatrix BinaryMatrix::from_rows(int cols, std::vector<VertexSet> rows) {
    BinaryMatrix m(static_cast<int>(rows.size()), cols);
    for (auto& r : rows) r &= low_bits(cols);
    m.row_bits_ = std::move(rows);
    return m;
}

BinaryMatrix BinaryMatrix::from_columns(int rows, const std::vector<VertexSet>& cols) {
    BinaryMatrix m(rows, static_cast<int>(cols.size()));
    for (int c = 0; c < m.cols_; ++c)
        for_each_bit(cols[c] & low_bits(rows), [&](int r) { m.row_bits_[r] |= bit(c); });
    return m;
}

BinaryMatrix BinaryMatrix::identity(int d) {
    BinaryMatrix m(d, d);
    for (int i = 0; i < d; ++i) m.row_bits_[i] = bit(i);
    return m;
}

void BinaryMatrix::set(int r, int c, bool v) {
    if (v)
        row_bits_[r] |= bit(c);
    else
        row_bits_[r] &= ~bit(c);
}

VertexSet BinaryMatrix::column(int c) const {
    VertexSet out = 0;
    for (int r = 0; r < rows_; ++r)
        if (contains(row_bits_[r], c)) out |= bit(r);
    return out;
}

std::vector<VertexSet> BinaryMatrix::column_bits() const {
    std::vector<VertexSet> out(cols_, 0);
    for (int r = 0; r < rows_; ++r) for_each_bit(row_bits_[r], [&](int c) { out[c] |= bit(r); });
    return out;
}

BinaryMatrix BinaryMatrix::select_columns(VertexSet cols) const {
    std::vector<int> keep = bits_of(cols & low_bits(cols_));
    BinaryMatrix m(rows_, static_cast<int>(keep.size()));
    for (int r = 0; r < rows_; ++r) {
        VertexSet row = 0;
        for (int k = 0; k < static_cast<int>(keep.size()); ++k)
            if (contains(row_bits_[r], keep[k])) row |= bit(k);
        m.row_bits_[r] = row;
    }
    return m;
}

BinaryMatrix BinaryMatrix::with_column(int c, VertexSet rows) const {
    BinaryMatrix m = *this;
    for (int r = 0; r < rows_; ++r) m.set(r, c, contains(rows, r));
    return m;
}

BinaryMatrix BinaryMatrix::append_column(VertexSet rows) const {
    BinaryMatrix m(rows_, cols_ + 1);
    m.row_bits_ = row_bits_;
    for (int r = 0; r < rows_; ++r)
        if (contains(rows, r)) m.row_bits_[r] |= bit(cols_);
    return m;
}

int BinaryMatrix::nonzeros() const {
    int n = 0;
    for (auto r : row_bits_) n += popcount(r);
    return n;
}

std::string BinaryMatrix::to_string() const {
    std::string s;
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) s += get(r, c) ? '1' : '0';
        s += '\n';
    }
    return s;
}

}  // namespace lvequiv
