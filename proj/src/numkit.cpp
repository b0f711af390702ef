#include "linexp3/numkit.hpp"

#include <algorithm>
#include <cmath>

namespace linexp3 {

double dot(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

Vector scaled(const Vector& a, double s) {
    Vector out(a);
    for (double& v : out) v *= s;
    return out;
}

void axpy(double s, const Vector& x, Vector& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

bool all_finite(const Vector& a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

Matrix Matrix::identity(int dim) {
    Matrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

Vector Matrix::apply(const Vector& v) const {
    Vector out(dim_, 0.0);
    for (int i = 0; i < dim_; ++i) {
        double s = 0.0;
        for (int j = 0; j < dim_; ++j) s += (*this)(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

Matrix Matrix::multiply(const Matrix& other) const {
    Matrix out(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < dim_; ++k) {
            double v = (*this)(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < dim_; ++j) out(i, j) += v * other(k, j);
        }
    return out;
}

double Matrix::max_abs_entry() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

Matrix& Matrix::add_scaled(const Matrix& other, double s) {
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += s * other.a_[i];
    return *this;
}

Matrix& Matrix::scale(double s) {
    for (double& v : a_) v *= s;
    return *this;
}

Matrix& Matrix::subtract_scaled_outer(double s, const Vector& x, const Vector& y) {
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) (*this)(i, j) -= s * x[i] * y[j];
    return *this;
}

SymMatrix SymMatrix::identity(int dim) {
    SymMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.set(i, i, 1.0);
    return m;
}

SymMatrix SymMatrix::diagonal(const Vector& diag) {
    SymMatrix m(static_cast<int>(diag.size()));
    for (std::size_t i = 0; i < diag.size(); ++i)
        m.set(static_cast<int>(i), static_cast<int>(i), diag[i]);
    return m;
}

SymMatrix SymMatrix::from_rows(const std::vector<Vector>& rows) {
    const int d = static_cast<int>(rows.size());
    SymMatrix m(d);
    for (int i = 0; i < d; ++i) {
        if (static_cast<int>(rows[i].size()) != d)
            throw ValidationError("SymMatrix::from_rows: ragged rows");
        for (int j = 0; j <= i; ++j) {
            if (rows[i][j] != rows[j][i])
                throw ValidationError("SymMatrix::from_rows: not symmetric");
            m.set(i, j, rows[i][j]);
        }
    }
    return m;
}

double SymMatrix::trace() const {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) s += m_(i, i);
    return s;
}

SymMatrix& SymMatrix::add_scaled(const SymMatrix& other, double s) {
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j <= i; ++j) set(i, j, m_(i, j) + s * other(i, j));
    return *this;
}

SymMatrix& SymMatrix::add_scaled_outer(double w, const Vector& x) {
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j <= i; ++j) set(i, j, m_(i, j) + w * x[i] * x[j]);
    return *this;
}

SymMatrix& SymMatrix::scale(double s) {
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j <= i; ++j) set(i, j, m_(i, j) * s);
    return *this;
}

SymMatrix SymMatrix::multiply_sym(const SymMatrix& other) const {
    Matrix p = m_.multiply(other.dense());
    SymMatrix out(dim());
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j <= i; ++j) out.set(i, j, 0.5 * (p(i, j) + p(j, i)));
    return out;
}

std::vector<double> jacobi_eigenvalues(const SymMatrix& m) {
    const int d = m.dim();
    Matrix a = m.dense();
    double scale = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) scale += a(i, j) * a(i, j);
    scale = std::sqrt(scale);
    const double tol = 1e-12 * (scale > 0.0 ? scale : 1.0);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < d; ++p)
            for (int q = p + 1; q < d; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(2.0 * off) <= tol) break;
        for (int p = 0; p < d; ++p) {
            for (int q = p + 1; q < d; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < d; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < d; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(d);
    for (int i = 0; i < d; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

SpdCertificate spd_factorize(const SymMatrix& m) {
    const int d = m.dim();
    double max_diag = 0.0;
    for (int i = 0; i < d; ++i) max_diag = std::max(max_diag, m(i, i));

    Matrix L(d);
    for (int j = 0; j < d; ++j) {
        double diag = m(j, j);
        for (int k = 0; k < j; ++k) diag -= L(j, k) * L(j, k);
        if (diag <= 1e-12 * (max_diag > 0.0 ? max_diag : 1.0))
            throw NotPositiveDefinite("spd_factorize: nonpositive pivot at column " +
                                      std::to_string(j));
        L(j, j) = std::sqrt(diag);
        for (int i = j + 1; i < d; ++i) {
            double v = m(i, j);
            for (int k = 0; k < j; ++k) v -= L(i, k) * L(j, k);
            L(i, j) = v / L(j, j);
        }
    }

    SpdCertificate cert;
    cert.matrix = m;
    cert.factor = L;
    cert.lambda_min = jacobi_eigenvalues(m).front();
    return cert;
}

SymMatrix spd_inverse(const SpdCertificate& c) {
    const int d = c.matrix.dim();
    const Matrix& L = c.factor;
    // Solve L LT x = e_j per column, then symmetrize the roundoff away.
    Matrix cols(d);
    for (int col = 0; col < d; ++col) {
        Vector y(d, 0.0);
        for (int i = 0; i < d; ++i) {
            double v = (i == col) ? 1.0 : 0.0;
            for (int k = 0; k < i; ++k) v -= L(i, k) * y[k];
            y[i] = v / L(i, i);
        }
        Vector x(d, 0.0);
        for (int i = d - 1; i >= 0; --i) {
            double v = y[i];
            for (int k = i + 1; k < d; ++k) v -= L(k, i) * x[k];
            x[i] = v / L(i, i);
        }
        for (int i = 0; i < d; ++i) cols(i, col) = x[i];
    }
    SymMatrix inv(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) inv.set(i, j, 0.5 * (cols(i, j) + cols(j, i)));
    return inv;
}

Vector matrix_power_apply(const SymMatrix& m, int p, const Vector& v) {
    Vector out = v;
    for (int k = 0; k < p; ++k) out = m.apply(out);
    return out;
}

double operator_norm(const Matrix& m) {
    const int d = m.dim();
    SymMatrix mtm(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) {
            double s = 0.0;
            for (int k = 0; k < d; ++k) s += m(k, i) * m(k, j);
            mtm.set(i, j, s);
        }
    const double lmax = jacobi_eigenvalues(mtm).back();
    return std::sqrt(std::max(0.0, lmax));
}

}  // namespace linexp3
