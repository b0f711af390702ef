#pragma once

#include <vector>

#include "linexp3/errors.hpp"

namespace linexp3 {

using Vector = std::vector<double>;

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);
Vector scaled(const Vector& a, double s);
void axpy(double s, const Vector& x, Vector& y);  // y += s*x
bool all_finite(const Vector& a);

// Dense row-major d-by-d matrix. General (not necessarily symmetric);
// products of symmetric factors are not symmetric, so resampling estimates
// live here.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim) * dim, 0.0) {}
    static Matrix identity(int dim);

    int dim() const { return dim_; }
    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * dim_ + j]; }

    Vector apply(const Vector& v) const;
    Matrix multiply(const Matrix& other) const;
    double max_abs_entry() const;

    Matrix& add_scaled(const Matrix& other, double s);  // this += s*other
    Matrix& scale(double s);
    // this -= s * (x yT)
    Matrix& subtract_scaled_outer(double s, const Vector& x, const Vector& y);

private:
    int dim_ = 0;
    std::vector<double> a_;
};

// Symmetric matrix stored dense; set() writes both triangles so the
// symmetry invariant holds exactly.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int dim) : m_(dim) {}
    static SymMatrix identity(int dim);
    static SymMatrix diagonal(const Vector& diag);
    // Throws ValidationError unless rows are exactly symmetric.
    static SymMatrix from_rows(const std::vector<Vector>& rows);

    int dim() const { return m_.dim(); }
    double operator()(int i, int j) const { return m_(i, j); }
    void set(int i, int j, double v) {
        m_(i, j) = v;
        m_(j, i) = v;
    }

    Vector apply(const Vector& v) const { return m_.apply(v); }
    const Matrix& dense() const { return m_; }
    double trace() const;

    SymMatrix& add_scaled(const SymMatrix& other, double s);
    SymMatrix& add_scaled_outer(double w, const Vector& x);  // this += w*x*xT
    SymMatrix& scale(double s);

    // Symmetric product A*B symmetrized; exact when A and B commute (used
    // for polynomials in one matrix).
    SymMatrix multiply_sym(const SymMatrix& other) const;

private:
    Matrix m_;
};

struct SpdCertificate {
    SymMatrix matrix;
    Matrix factor;  // lower triangular, factor * factorT == matrix
    double lambda_min = 0.0;
};

// Cholesky factorization plus smallest eigenvalue by cyclic Jacobi.
// Throws NotPositiveDefinite when a pivot falls below 1e-12 times the
// largest diagonal entry.
SpdCertificate spd_factorize(const SymMatrix& m);

SymMatrix spd_inverse(const SpdCertificate& c);

// m^p * v via repeated multiplication; p == 0 returns v.
Vector matrix_power_apply(const SymMatrix& m, int p, const Vector& v);

// All eigenvalues by cyclic Jacobi iteration, ascending; relative
// off-diagonal tolerance 1e-12.
std::vector<double> jacobi_eigenvalues(const SymMatrix& m);

double operator_norm(const Matrix& m);  // largest singular value via sqrt(lambda_max(MtM))

}  // namespace linexp3
