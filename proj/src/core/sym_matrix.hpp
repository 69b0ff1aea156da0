#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "settings.hpp"

namespace corrgen {

/// General row-major matrix, used for factors and eigenvector bases.
class Dense {
 public:
  Dense() = default;
  Dense(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Dense identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  Dense transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// a * b.
Dense multiply(const Dense& a, const Dense& b);
/// a * b^T.
Dense multiply_transposed(const Dense& a, const Dense& b);

/// Dense symmetric p x p matrix. Symmetry is exact: construction from raw
/// entries averages (M + M^T) / 2 and every mutator writes both halves.
class SymMatrix {
 public:
  /// Symmetrizes `entries` (row-major, p*p values).
  SymMatrix(std::size_t p, std::vector<double> entries);
  /// Symmetrizes a square Dense matrix.
  explicit SymMatrix(const Dense& square);

  static SymMatrix zeros(std::size_t p);
  static SymMatrix identity(std::size_t p);
  static SymMatrix constant(std::size_t p, double value);

  std::size_t dim() const noexcept { return p_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * p_ + j]; }
  void set(std::size_t i, std::size_t j, double value) {
    data_[i * p_ + j] = value;
    data_[j * p_ + i] = value;
  }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * p_, p_};
  }
  std::span<const double> entries() const noexcept { return data_; }

  bool all_finite() const noexcept;
  double frobenius_norm() const noexcept;
  double max_abs_offdiag() const noexcept;
  Dense to_dense() const;

  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator-=(const SymMatrix& other);
  SymMatrix& operator*=(double s) noexcept;
  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

  bool operator==(const SymMatrix& other) const = default;

 private:
  struct Trusted {};
  SymMatrix(Trusted, std::size_t p, std::vector<double> entries)
      : p_(p), data_(std::move(entries)) {}
  friend SymMatrix from_symmetric_storage(std::size_t, std::vector<double>);

  std::size_t p_;
  std::vector<double> data_;
};

/// Wraps storage the caller guarantees is exactly symmetric (checked).
SymMatrix from_symmetric_storage(std::size_t p, std::vector<double> entries);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

/// CSV: p rows of p comma-separated decimals, no header. The reader rejects
/// asymmetry beyond `symmetry_tol` and then symmetrizes.
SymMatrix read_matrix_csv(std::istream& in, double symmetry_tol = 1e-9);
SymMatrix read_matrix_csv_file(const std::string& path, double symmetry_tol = 1e-9);
void write_matrix_csv(std::ostream& out, const SymMatrix& m);
void write_matrix_csv_file(const std::string& path, const SymMatrix& m);

}  // namespace corrgen
