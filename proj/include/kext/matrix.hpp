#pragma once

#include "kext/error.hpp"
#include "kext/ring.hpp"

#include <initializer_list>
#include <string>
#include <vector>

namespace kext {

/// Dense matrix over a ring. 0 x k and k x 0 shapes are legal zero maps.
struct Matrix {
    Ring ring;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Elem> data;

    Matrix() = default;

    Matrix(Ring r, std::size_t m, std::size_t n) : ring(std::move(r)), rows(m), cols(n), data(m * n, ring->zero()) {}

    Elem& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const Elem& at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    bool empty() const { return rows == 0 || cols == 0; }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows == b.rows && a.cols == b.cols && a.data == b.data && same_ring(a.ring, b.ring);
    }
};

inline Matrix zeros(const Ring& r, std::size_t m, std::size_t n) { return Matrix(r, m, n); }

inline Matrix mat_identity(const Ring& r, std::size_t n)
{
    Matrix m(r, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = r->one();
    return m;
}

inline Matrix from_ints(const Ring& r, std::initializer_list<std::initializer_list<long long>> rows)
{
    std::size_t m = rows.size();
    std::size_t n = m ? rows.begin()->size() : 0;
    Matrix a(r, m, n);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != n) fail(ErrorCode::DimensionMismatch, "matrix", "ragged row list");
        std::size_t j = 0;
        for (long long v : row) a.at(i, j++) = r->from_int(v);
        ++i;
    }
    return a;
}

inline bool mat_is_zero(const Matrix& a)
{
    for (const auto& x : a.data)
        if (!a.ring->is_zero(x)) return false;
    return true;
}

inline void require_same_shape(const Matrix& a, const Matrix& b, const char* what)
{
    require_same_ring(a.ring, b.ring, "matrix");
    if (a.rows != b.rows || a.cols != b.cols)
        fail(ErrorCode::DimensionMismatch, "matrix",
             std::string(what) + ": " + std::to_string(a.rows) + "x" + std::to_string(a.cols) + " vs " +
                 std::to_string(b.rows) + "x" + std::to_string(b.cols));
}

inline Matrix mat_add(const Matrix& a, const Matrix& b)
{
    require_same_shape(a, b, "mat_add");
    Matrix c = a;
    for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] = a.ring->add(a.data[i], b.data[i]);
    return c;
}

inline Matrix mat_sub(const Matrix& a, const Matrix& b)
{
    require_same_shape(a, b, "mat_sub");
    Matrix c = a;
    for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] = a.ring->sub(a.data[i], b.data[i]);
    return c;
}

inline Matrix mat_neg(const Matrix& a)
{
    Matrix c = a;
    for (auto& x : c.data) x = a.ring->neg(x);
    return c;
}

inline Matrix mat_scale(const Elem& s, const Matrix& a)
{
    Matrix c = a;
    if (a.ring->is_zero(s)) {
        for (auto& x : c.data) x = a.ring->zero();
        return c;
    }
    for (auto& x : c.data)
        if (!a.ring->is_zero(x)) x = a.ring->mul(s, x);
    return c;
}

inline Matrix mat_mul(const Matrix& a, const Matrix& b)
{
    require_same_ring(a.ring, b.ring, "matrix");
    if (a.cols != b.rows)
        fail(ErrorCode::DimensionMismatch, "matrix",
             "mat_mul: " + std::to_string(a.rows) + "x" + std::to_string(a.cols) + " times " + std::to_string(b.rows) +
                 "x" + std::to_string(b.cols));
    const Ring& r = a.ring;
    Matrix c(r, a.rows, b.cols);
    if (r->kind() == RingKind::IntegersModN || r->kind() == RingKind::PrimeField) {
        auto n = static_cast<std::int64_t>(r->characteristic());
        std::vector<std::int64_t> acc(b.cols);
        for (std::size_t i = 0; i < a.rows; ++i) {
            std::fill(acc.begin(), acc.end(), 0);
            for (std::size_t k = 0; k < a.cols; ++k) {
                std::int64_t x = std::get<std::int64_t>(a.at(i, k));
                if (!x) continue;
                for (std::size_t j = 0; j < b.cols; ++j) {
                    std::int64_t y = std::get<std::int64_t>(b.at(k, j));
                    if (y) acc[j] = num::addmod(acc[j], num::mulmod(x, y, n), n);
                }
            }
            for (std::size_t j = 0; j < b.cols; ++j) c.at(i, j) = acc[j];
        }
        return c;
    }
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const Elem& x = a.at(i, k);
            if (r->is_zero(x)) continue;
            for (std::size_t j = 0; j < b.cols; ++j) {
                const Elem& y = b.at(k, j);
                if (r->is_zero(y)) continue;
                c.at(i, j) = r->add(c.at(i, j), r->mul(x, y));
            }
        }
    return c;
}

inline Matrix transpose(const Matrix& a)
{
    Matrix t(a.ring, a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
    return t;
}

/// Assembles a block matrix. Every row of the grid must share block heights and
/// every column block widths.
inline Matrix mat_block(const std::vector<std::vector<Matrix>>& grid)
{
    if (grid.empty()) fail(ErrorCode::DimensionMismatch, "matrix", "mat_block: empty grid");
    std::size_t bc = grid[0].size();
    std::vector<std::size_t> heights(grid.size()), widths(bc);
    Ring r = grid[0].empty() ? nullptr : grid[0][0].ring;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i].size() != bc) fail(ErrorCode::DimensionMismatch, "matrix", "mat_block: ragged grid");
        for (std::size_t j = 0; j < bc; ++j) {
            const Matrix& m = grid[i][j];
            require_same_ring(r, m.ring, "matrix");
            if (j == 0) heights[i] = m.rows;
            else if (m.rows != heights[i]) fail(ErrorCode::DimensionMismatch, "matrix", "mat_block: inconsistent row partition");
            if (i == 0) widths[j] = m.cols;
            else if (m.cols != widths[j]) fail(ErrorCode::DimensionMismatch, "matrix", "mat_block: inconsistent column partition");
        }
    }
    std::size_t total_r = 0, total_c = 0;
    for (auto h : heights) total_r += h;
    for (auto w : widths) total_c += w;
    Matrix out(r, total_r, total_c);
    std::size_t r0 = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::size_t c0 = 0;
        for (std::size_t j = 0; j < bc; ++j) {
            const Matrix& m = grid[i][j];
            for (std::size_t a = 0; a < m.rows; ++a)
                for (std::size_t b = 0; b < m.cols; ++b) out.at(r0 + a, c0 + b) = m.at(a, b);
            c0 += widths[j];
        }
        r0 += heights[i];
    }
    return out;
}

/// Kronecker product with row-major basis ordering: (A (x) B)[(i,k),(j,l)] = A[i,j] B[k,l].
inline Matrix kron(const Matrix& a, const Matrix& b)
{
    require_same_ring(a.ring, b.ring, "matrix");
    const Ring& r = a.ring;
    Matrix out(r, a.rows * b.rows, a.cols * b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) {
            const Elem& x = a.at(i, j);
            if (r->is_zero(x)) continue;
            for (std::size_t k = 0; k < b.rows; ++k)
                for (std::size_t l = 0; l < b.cols; ++l) {
                    const Elem& y = b.at(k, l);
                    if (!r->is_zero(y)) out.at(i * b.rows + k, j * b.cols + l) = r->mul(x, y);
                }
        }
    return out;
}

inline Matrix submatrix(const Matrix& a, std::size_t r0, std::size_t c0, std::size_t h, std::size_t w)
{
    if (r0 + h > a.rows || c0 + w > a.cols) fail(ErrorCode::DimensionMismatch, "matrix", "submatrix out of range");
    Matrix s(a.ring, h, w);
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < w; ++j) s.at(i, j) = a.at(r0 + i, c0 + j);
    return s;
}

/// Writes b into a at offset (r0, c0).
inline void place(Matrix& a, const Matrix& b, std::size_t r0, std::size_t c0)
{
    if (r0 + b.rows > a.rows || c0 + b.cols > a.cols) fail(ErrorCode::DimensionMismatch, "matrix", "place out of range");
    for (std::size_t i = 0; i < b.rows; ++i)
        for (std::size_t j = 0; j < b.cols; ++j) a.at(r0 + i, c0 + j) = b.at(i, j);
}

inline Matrix hstack(const Matrix& a, const Matrix& b)
{
    require_same_ring(a.ring, b.ring, "matrix");
    if (a.rows != b.rows) fail(ErrorCode::DimensionMismatch, "matrix", "hstack row mismatch");
    Matrix out(a.ring, a.rows, a.cols + b.cols);
    place(out, a, 0, 0);
    place(out, b, 0, a.cols);
    return out;
}

inline Matrix vstack(const Matrix& a, const Matrix& b)
{
    require_same_ring(a.ring, b.ring, "matrix");
    if (a.cols != b.cols) fail(ErrorCode::DimensionMismatch, "matrix", "vstack column mismatch");
    Matrix out(a.ring, a.rows + b.rows, a.cols);
    place(out, a, 0, 0);
    place(out, b, a.rows, 0);
    return out;
}

inline Matrix column(const Matrix& a, std::size_t j) { return submatrix(a, 0, j, a.rows, 1); }

inline std::string print_matrix_row(const Matrix& a, std::size_t i)
{
    std::string out = "[";
    for (std::size_t j = 0; j < a.cols; ++j) {
        if (j) out += ", ";
        out += a.ring->print(a.at(i, j));
    }
    return out + "]";
}

inline std::string print_matrix(const Matrix& a)
{
    std::string out;
    for (std::size_t i = 0; i < a.rows; ++i) out += print_matrix_row(a, i) + "\n";
    return out;
}

} // namespace kext
