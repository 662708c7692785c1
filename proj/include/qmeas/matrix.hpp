// matrix.hpp — dense complex square matrices, tensor/partial-trace helpers,
// Hermitian eigendecomposition and the PSD-cone operations built on it.

#pragma once

#include <complex>
#include <vector>

namespace qmeas {

using cplx = std::complex<double>;

// Immutable dense complex square matrix, row-major. All stored entries are
// finite; constructors reject NaN/Inf.
class Matrix {
public:
    explicit Matrix(int dim);                      // zero matrix
    Matrix(int dim, std::vector<cplx> entries);    // row-major, dim*dim entries

    static Matrix identity(int dim);
    static Matrix diagonal(const std::vector<double>& diag);

    int dim() const { return dim_; }
    const cplx& operator()(int r, int c) const { return entries_[static_cast<size_t>(r) * dim_ + c]; }
    const std::vector<cplx>& entries() const { return entries_; }

    Matrix adjoint() const;
    cplx trace() const;
    double frobenius_norm() const;
    double max_abs() const;

    bool is_hermitian(double tol) const;
    bool is_psd(double tol) const;
    bool is_identity(double tol) const;

private:
    int dim_;
    std::vector<cplx> entries_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(cplx s, const Matrix& m);
Matrix operator*(double s, const Matrix& m);

// max_ij |a_ij - b_ij|
double max_abs_diff(const Matrix& a, const Matrix& b);

// Kronecker product: (i*b.dim+k, j*b.dim+l) entry = a(i,j)*b(k,l).
Matrix tensor_product(const Matrix& a, const Matrix& b);

enum class Subsystem { a, b };

// Traces out the complementary subsystem of an (d_a*d_b)-dimensional matrix.
Matrix partial_trace(const Matrix& m, int d_a, int d_b, Subsystem keep);

struct EigenSystem {
    std::vector<double> eigenvalues;  // ascending
    Matrix eigenvectors;              // orthonormal columns, column k pairs with eigenvalues[k]
};

// Cyclic Jacobi diagonalisation of a Hermitian matrix. Deterministic for a
// fixed input: fixed sweep order, stable ascending sort. Input must be
// Hermitian within 1e-10.
EigenSystem hermitian_eigensystem(const Matrix& m);

// Square root of a PSD matrix. Eigenvalues in [-1e-9, 0) are clipped to zero;
// anything below -1e-9 is an error.
Matrix psd_sqrt(const Matrix& m);

// Trace norm ||A||_1 = sum of singular values, read off the Hermitian
// dilation [[0, A], [A^dag, 0]].
double trace_norm(const Matrix& m);

// Nearest PSD matrix in Frobenius distance: negative eigenvalues zeroed.
// Input must be Hermitian within 1e-10.
Matrix project_psd(const Matrix& m);

// Pauli matrices and friends; the recurring 2x2 cast.
Matrix sigma_x();
Matrix sigma_y();
Matrix sigma_z();
Matrix bloch_observable(double nx, double ny, double nz);  // n.sigma

}  // namespace qmeas
