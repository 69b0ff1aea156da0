#include "sym_matrix.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "error.hpp"

namespace corrgen {

Dense Dense::identity(std::size_t n) {
  Dense d(n, n);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = 1.0;
  return d;
}

Dense Dense::transposed() const {
  Dense t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Dense multiply(const Dense& a, const Dense& b) {
  if (a.cols() != b.rows()) fail(ErrorCode::InvalidInput, "multiply: shape mismatch");
  Dense c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

Dense multiply_transposed(const Dense& a, const Dense& b) {
  if (a.cols() != b.cols()) fail(ErrorCode::InvalidInput, "multiply_transposed: shape mismatch");
  Dense c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ai = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      auto bj = b.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += ai[k] * bj[k];
      c(i, j) = s;
    }
  }
  return c;
}

namespace {

void symmetrize_in_place(std::size_t p, std::vector<double>& d) {
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      const double avg = 0.5 * (d[i * p + j] + d[j * p + i]);
      d[i * p + j] = avg;
      d[j * p + i] = avg;
    }
  }
}

}  // namespace

SymMatrix::SymMatrix(std::size_t p, std::vector<double> entries)
    : p_(p), data_(std::move(entries)) {
  if (p_ == 0) fail(ErrorCode::InvalidInput, "matrix dimension must be at least 1");
  if (data_.size() != p_ * p_)
    fail(ErrorCode::InvalidInput, "matrix entry count does not match dimension");
  symmetrize_in_place(p_, data_);
}

SymMatrix::SymMatrix(const Dense& square)
    : SymMatrix(square.rows(),
                std::vector<double>(square.data().begin(), square.data().end())) {
  if (square.rows() != square.cols())
    fail(ErrorCode::InvalidInput, "matrix must be square");
}

SymMatrix from_symmetric_storage(std::size_t p, std::vector<double> entries) {
  if (p == 0 || entries.size() != p * p)
    fail(ErrorCode::InvalidInput, "bad symmetric storage");
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      if (entries[i * p + j] != entries[j * p + i])
        fail(ErrorCode::InvalidInput, "storage is not exactly symmetric");
  return SymMatrix(SymMatrix::Trusted{}, p, std::move(entries));
}

SymMatrix SymMatrix::zeros(std::size_t p) { return constant(p, 0.0); }

SymMatrix SymMatrix::constant(std::size_t p, double value) {
  if (p == 0) fail(ErrorCode::InvalidInput, "matrix dimension must be at least 1");
  return SymMatrix(Trusted{}, p, std::vector<double>(p * p, value));
}

SymMatrix SymMatrix::identity(std::size_t p) {
  SymMatrix m = zeros(p);
  for (std::size_t i = 0; i < p; ++i) m.data_[i * p + i] = 1.0;
  return m;
}

bool SymMatrix::all_finite() const noexcept {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

double SymMatrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double SymMatrix::max_abs_offdiag() const noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < p_; ++i)
    for (std::size_t j = i + 1; j < p_; ++j) m = std::max(m, std::abs(data_[i * p_ + j]));
  return m;
}

Dense SymMatrix::to_dense() const {
  Dense d(p_, p_);
  std::copy(data_.begin(), data_.end(), d.data().begin());
  return d;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  if (other.p_ != p_) fail(ErrorCode::InvalidInput, "dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& other) {
  if (other.p_ != p_) fail(ErrorCode::InvalidInput, "dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) noexcept {
  for (double& v : data_) v *= s;
  return *this;
}

std::string format_double(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) fail(ErrorCode::NumericalFailure, "cannot format value");
  return std::string(buf, ptr);
}

namespace {

double parse_double(std::string_view text, std::size_t line_no) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
    fail(ErrorCode::InvalidInput,
         "line " + std::to_string(line_no) + ": bad number '" + std::string(text) + "'");
  return v;
}

}  // namespace

SymMatrix read_matrix_csv(std::istream& in, double symmetry_tol) {
  std::vector<double> values;
  std::size_t p = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::size_t count = 0;
    std::string_view rest = line;
    for (;;) {
      const auto comma = rest.find(',');
      values.push_back(parse_double(rest.substr(0, comma), line_no));
      ++count;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (rows == 0) p = count;
    if (count != p)
      fail(ErrorCode::InvalidInput, "line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(p) + " columns, got " +
                                        std::to_string(count));
    ++rows;
  }
  if (rows == 0) fail(ErrorCode::InvalidInput, "empty matrix file");
  if (rows != p)
    fail(ErrorCode::InvalidInput, "matrix is " + std::to_string(rows) + "x" +
                                      std::to_string(p) + ", expected square");
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      if (std::abs(values[i * p + j] - values[j * p + i]) > symmetry_tol)
        fail(ErrorCode::InvalidInput, "matrix is not symmetric at (" + std::to_string(i) +
                                          "," + std::to_string(j) + ")");
  return SymMatrix(p, std::move(values));
}

SymMatrix read_matrix_csv_file(const std::string& path, double symmetry_tol) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);
  return read_matrix_csv(in, symmetry_tol);
}

void write_matrix_csv(std::ostream& out, const SymMatrix& m) {
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv_file(const std::string& path, const SymMatrix& m) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  write_matrix_csv(out, m);
  if (!out) fail(ErrorCode::Io, "write failed for " + path);
}

}  // namespace corrgen
