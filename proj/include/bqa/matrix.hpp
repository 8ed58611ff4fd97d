#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bqa/field.hpp"

namespace bqa {

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Dense row-major matrix over a field F. 0 x n and n x 0 shapes are legal and
// stand for maps to and from the zero space.
template <class F>
class Matrix {
 public:
  using field_type = F;
  using value_type = typename F::value_type;

  Matrix() = default;
  Matrix(F field, std::size_t rows, std::size_t cols)
      : field_(field), rows_(rows), cols_(cols), data_(rows * cols, field.zero()) {}
  Matrix(F field, std::size_t rows, std::size_t cols, std::vector<value_type> entries)
      : field_(field), rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows * cols) throw DimensionMismatch("matrix entry count does not match shape");
  }

  static Matrix identity(F field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
    return m;
  }

  static Matrix from_ints(F field, std::size_t rows, std::size_t cols, const std::vector<long long>& v) {
    std::vector<value_type> e;
    e.reserve(v.size());
    for (long long x : v) e.push_back(field.from_int(x));
    return Matrix(field, rows, cols, std::move(e));
  }

  const F& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  value_type& operator()(std::size_t r, std::size_t c) {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }
  const value_type& operator()(std::size_t r, std::size_t c) const {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }

  std::span<value_type> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const value_type> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  const std::vector<value_type>& entries() const { return data_; }

  std::vector<value_type> column(std::size_t c) const {
    std::vector<value_type> v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
  }

  static Matrix column_vector(F field, const std::vector<value_type>& v) {
    return Matrix(field, v.size(), 1, v);
  }

  bool is_zero() const {
    for (const auto& x : data_) {
      if (!field_.is_zero(x)) return false;
    }
    return true;
  }

  Matrix transpose() const {
    Matrix t(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionMismatch("block out of range");
    Matrix b(field_, nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw DimensionMismatch("set_block out of range");
    for (std::size_t r = 0; r < b.rows_; ++r)
      for (std::size_t c = 0; c < b.cols_; ++c) (*this)(r0 + r, c0 + c) = b(r, c);
  }

  Matrix select_columns(const std::vector<std::size_t>& cols) const {
    Matrix s(field_, rows_, cols.size());
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t k = 0; k < cols.size(); ++k) s(r, k) = (*this)(r, cols[k]);
    return s;
  }

  Matrix select_rows(const std::vector<std::size_t>& rows) const {
    Matrix s(field_, rows.size(), cols_);
    for (std::size_t k = 0; k < rows.size(); ++k)
      for (std::size_t c = 0; c < cols_; ++c) s(k, c) = (*this)(rows[k], c);
    return s;
  }

  // [this | other]
  Matrix hstack(const Matrix& other) const {
    if (other.rows_ != rows_) throw DimensionMismatch("hstack: row counts differ");
    Matrix h(field_, rows_, cols_ + other.cols_);
    h.set_block(0, 0, *this);
    h.set_block(0, cols_, other);
    return h;
  }

  // [this ; other]
  Matrix vstack(const Matrix& other) const {
    if (other.cols_ != cols_) throw DimensionMismatch("vstack: column counts differ");
    Matrix v(field_, rows_ + other.rows_, cols_);
    v.set_block(0, 0, *this);
    v.set_block(rows_, 0, other);
    return v;
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) {
      throw DimensionMismatch("matrix product: " + shape() + " * " + o.shape());
    }
    Matrix p(field_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const value_type& a = (*this)(i, k);
        if (field_.is_zero(a)) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) {
          p(i, j) = field_.add(p(i, j), field_.mul(a, o(k, j)));
        }
      }
    }
    return p;
  }

  std::vector<value_type> apply(const std::vector<value_type>& v) const {
    if (v.size() != cols_) throw DimensionMismatch("matrix-vector product: size mismatch");
    std::vector<value_type> out(rows_, field_.zero());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const value_type& a = (*this)(i, k);
        if (!field_.is_zero(a)) out[i] = field_.add(out[i], field_.mul(a, v[k]));
      }
    return out;
  }

  Matrix operator+(const Matrix& o) const {
    check_same_shape(o);
    Matrix s(field_, rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] = field_.add(data_[i], o.data_[i]);
    return s;
  }

  Matrix operator-(const Matrix& o) const {
    check_same_shape(o);
    Matrix s(field_, rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] = field_.sub(data_[i], o.data_[i]);
    return s;
  }

  Matrix scaled(const value_type& c) const {
    Matrix s(field_, rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] = field_.mul(c, data_[i]);
    return s;
  }

  bool operator==(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t i = 0; i < data_.size(); ++i)
      if (!field_.equal(data_[i], o.data_[i])) return false;
    return true;
  }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  std::string to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t r = 0; r < rows_; ++r) {
      os << (r ? ", [" : "[");
      for (std::size_t c = 0; c < cols_; ++c) os << (c ? ", " : "") << field_.to_string((*this)(r, c));
      os << "]";
    }
    os << "]";
    return os.str();
  }

 private:
  void check_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("shape mismatch: " + shape() + " vs " + o.shape());
  }

  F field_{};
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<value_type> data_;
};

// Block-diagonal matrix diag(blocks...).
template <class F>
Matrix<F> block_diagonal(const F& field, const std::vector<Matrix<F>>& blocks) {
  std::size_t r = 0, c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  Matrix<F> m(field, r, c);
  std::size_t r0 = 0, c0 = 0;
  for (const auto& b : blocks) {
    m.set_block(r0, c0, b);
    r0 += b.rows();
    c0 += b.cols();
  }
  return m;
}

}  // namespace bqa
