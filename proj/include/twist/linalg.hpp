#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace tw {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Kronecker product in row-major block order: the left factor indexes the
// slow (outer) position, so (a (x) b)(i*rb + k, j*cb + l) = a(i,j) b(k,l).
Mat kron(const Mat& a, const Mat& b);
Mat kron_all(const std::vector<Mat>& factors);

Mat identity(long n);

double max_abs(const Mat& m);

bool is_unitary(const Mat& m, double tol);

// Integer power; negative exponents use the inverse (the adjoint when the
// matrix is unitary to 1e-13, otherwise a full LU inverse).
Mat mat_pow(const Mat& m, long e);

// Orthonormal basis of the range of a Hermitian (projection-like) matrix:
// eigenvectors whose eigenvalue exceeds tol.
Mat range_basis(const Mat& herm, double tol);

// Orthonormal basis of the column span of an arbitrary matrix (SVD, tol on
// singular values).
Mat column_span(const Mat& m, double tol);

// Orthonormal basis of {x : m x = 0} (SVD, tol on singular values).
Mat null_basis(const Mat& m, double tol);

}  // namespace tw
