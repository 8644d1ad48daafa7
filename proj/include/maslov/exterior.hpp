#pragma once

#include <Eigen/Dense>

namespace maslov {

// Largest supported system dimension. Small fixed capacity keeps the
// integrator's inner loop free of heap traffic.
inline constexpr int kMaxDim = 8;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using RowVec = Eigen::Matrix<double, 1, Eigen::Dynamic, Eigen::RowMajor, 1, kMaxDim>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

// A 1-form is stored as its coefficient vector on e_1..e_n.
using OneForm = Vec;

// An (n-1)-form is stored as raw minors in slot order
//   V_1 e1^..^e_{n-1},  V_2 e1^..^e_{n-2}^e_n,  ...,  V_n e2^..^e_n.
// Slot j therefore holds the coefficient of the basis element that omits
// e_{n+1-j}. No signs are stored here; they live in wedge_top and
// coform_to_covector.
using CoForm = Vec;

// Coefficient of e1^...^en in v ^ V.
double wedge_top(const OneForm& v, const CoForm& V);

// Matrix driving the (n-1)-form flow: if Y' = AY column-wise then the
// coform of the columns obeys C' = ((tr A) I + induced(A)) C.
Mat induced_matrix(const Mat& A);

// Raw minors of an n x (n-1) matrix in slot order.
CoForm columns_to_coform(const Mat& cols);

// Row vector z with z.y == wedge_top(y, V) for every y.
RowVec coform_to_covector(const CoForm& V);
CoForm covector_to_coform(const RowVec& z);

// wedge_top(A u, U) + wedge_top(u, induced(A) U); identically zero.
double conjugation_residual(const Mat& A, const OneForm& u, const CoForm& U);

// Co-eigenvector built from a left eigenvector w (w A = mu w gives
// induced(A) V = -mu V), and its inverse.
CoForm tilde_eigvec_from_left(const RowVec& w);
RowVec left_from_tilde_eigvec(const CoForm& V);

// Action of a constant change of variables y -> M y on (n-1)-forms built
// from n-1 solutions: columns_to_coform(M Y) == coform_pushforward(M, C).
CoForm coform_pushforward(const Mat& M, const CoForm& C);

}  // namespace maslov
