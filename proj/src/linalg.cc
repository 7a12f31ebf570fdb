#include "fastjl/linalg.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "fastjl/errors.h"

namespace fastjl {

Matrix Matrix::Identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

void Matrix::set_column(std::size_t j, std::span<const double> v) {
  if (v.size() != rows_ || j >= cols_) {
    throw DimensionError("set_column: column length or index out of range");
  }
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("multiply: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Vector multiply(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw DimensionError("multiply: vector length differs");
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

Matrix multiply_transposed(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("multiply_transposed: row counts differ");
  }
  Matrix c(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = a(k, i);
      if (aki == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aki * b(k, j);
    }
  }
  return c;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("subtract: shapes differ");
  }
  Matrix c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] -= b.data()[i];
  return c;
}

double frobenius_norm(const Matrix& a) { return norm2(a.data()); }

double max_abs_entry(const Matrix& a) { return infinity_norm(a.data()); }

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: lengths differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

double norm2(std::span<const double> a) { return std::sqrt(squared_norm(a)); }

double infinity_norm(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

bool is_power_of_two(std::size_t n) { return std::has_single_bit(n); }

std::size_t next_power_of_two(std::size_t n) { return std::bit_ceil(std::max<std::size_t>(n, 1)); }

int floor_log2(std::size_t n) { return static_cast<int>(std::bit_width(n)) - 1; }

int ceil_log2(std::size_t n) {
  return n <= 1 ? 0 : static_cast<int>(std::bit_width(n - 1));
}

namespace {

void fwht_unnormalized(double* v, std::size_t n) {
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = v[j];
        const double b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

}  // namespace

void fwht_inplace(std::span<double> v) {
  const std::size_t n = v.size();
  if (!is_power_of_two(n)) {
    throw ContractError("fwht: length " + std::to_string(n) +
                        " is not a power of two");
  }
  fwht_unnormalized(v.data(), n);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (double& x : v) x *= s;
}

Vector fwht(Vector v) {
  fwht_inplace(v);
  return v;
}

void block_fwht_inplace(std::span<double> v, std::size_t block) {
  if (!is_power_of_two(block) || v.size() % block != 0) {
    throw ContractError("block_fwht: block must be a power of two dividing n");
  }
  for (std::size_t off = 0; off < v.size(); off += block) {
    fwht_inplace(v.subspan(off, block));
  }
}

Matrix hadamard(std::size_t n) {
  if (!is_power_of_two(n)) throw ContractError("hadamard: n is not a power of two");
  Matrix h(n, n);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      h(i, j) = (std::popcount(i & j) & 1) ? -s : s;
  return h;
}

EigenDecomposition symmetric_eigen(const Matrix& m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw DimensionError("symmetric_eigen: matrix is not square");
  const double fro = frobenius_norm(m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-10 * std::max(fro, 1.0)) {
        throw ContractError("symmetric_eigen: input is not symmetric");
      }

  Matrix a = m;
  Matrix v = Matrix::Identity(n);
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  const double tol = 1e-12 * fro;
  for (int sweep = 0; sweep < 100 && off_norm() > tol; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  EigenDecomposition out{Vector(n), Matrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = v(k, order[j]);
  }
  return out;
}

Vector symmetric_eigenvalues(const Matrix& m) { return symmetric_eigen(m).values; }

SpectralExtremes spectral_extremes(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return {};
  const Matrix gram = a.rows() <= a.cols() ? multiply_transposed(a.transpose(), a.transpose())
                                           : multiply_transposed(a, a);
  const Vector ev = symmetric_eigenvalues(gram);
  return {std::sqrt(std::max(ev.front(), 0.0)), std::sqrt(std::max(ev.back(), 0.0))};
}

Vector least_squares(const Matrix& a, std::span<const double> b) {
  if (b.size() != a.rows()) throw DimensionError("least_squares: rhs length differs");
  const std::size_t d = a.cols();
  const Matrix gram = multiply_transposed(a, a);
  const EigenDecomposition eig = symmetric_eigen(gram);
  const double lmin = d ? eig.values.front() : 0.0;
  const double lmax = d ? eig.values.back() : 0.0;
  if (d == 0 || lmin <= 1e-12 * lmax || lmax <= 0.0) {
    const double cond = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
    throw SingularityError("least_squares: A^T A is singular", cond);
  }
  Vector atb(d, 0.0);
  for (std::size_t k = 0; k < a.rows(); ++k)
    for (std::size_t j = 0; j < d; ++j) atb[j] += a(k, j) * b[k];
  // x = V diag(1/lambda) V^T A^T b
  Vector x(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double c = 0.0;
    for (std::size_t k = 0; k < d; ++k) c += eig.vectors(k, j) * atb[k];
    c /= eig.values[j];
    for (std::size_t k = 0; k < d; ++k) x[k] += c * eig.vectors(k, j);
  }
  return x;
}

Vector circular_convolve(std::span<const double> g, std::span<const double> x) {
  const std::size_t n = x.size();
  if (g.size() != n) throw DimensionError("circular_convolve: lengths differ");
  Vector y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += g[(i + n - j) % n] * x[j];
    y[i] = s;
  }
  return y;
}

void write_matrix_csv(const Matrix& m, std::ostream& out) {
  out << m.rows() << ',' << m.cols() << '\n';
  char buf[40];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw ResourceError("write_matrix_csv: stream write failed");
}

void write_matrix_csv(const Matrix& m, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ResourceError("cannot open " + path + " for writing");
  write_matrix_csv(m, f);
}

Matrix read_matrix_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ResourceError("matrix csv: empty input");
  std::size_t rows = 0, cols = 0;
  char comma = 0;
  std::istringstream hs(header);
  if (!(hs >> rows >> comma >> cols) || comma != ',') {
    throw ResourceError("matrix csv: malformed header '" + header + "'");
  }
  Matrix m(rows, cols);
  std::string token;
  std::size_t filled = 0;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    while (std::getline(ls, token, ',')) {
      const auto first = token.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      if (filled == rows * cols) throw ResourceError("matrix csv: too many values");
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token.substr(first), &used);
      } catch (const std::exception&) {
        throw ResourceError("matrix csv: bad value '" + token + "'");
      }
      if (token.find_first_not_of(" \t\r", first + used) != std::string::npos) {
        throw ResourceError("matrix csv: bad value '" + token + "'");
      }
      m.data()[filled++] = v;
    }
  }
  if (filled != rows * cols) {
    throw ResourceError("matrix csv: expected " + std::to_string(rows * cols) +
                        " values, found " + std::to_string(filled));
  }
  return m;
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ResourceError("cannot open " + path);
  return read_matrix_csv(f);
}

}  // namespace fastjl
