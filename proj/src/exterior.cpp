#include "maslov/exterior.hpp"

#include <stdexcept>
#include <string>

namespace maslov {

namespace {

void require_dim(Eigen::Index a, Eigen::Index b, const char* what) {
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

inline double alt(Eigen::Index k) { return (k % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

double wedge_top(const OneForm& v, const CoForm& V) {
    require_dim(v.size(), V.size(), "wedge_top");
    const Eigen::Index n = v.size();
    if (n < 2) throw std::invalid_argument("wedge_top: n must be at least 2");
    double acc = 0.0;
    // 0-based: sum_i (-1)^i v_i V_{n-1-i}
    for (Eigen::Index i = 0; i < n; ++i) acc += alt(i) * v(i) * V(n - 1 - i);
    return acc;
}

Mat induced_matrix(const Mat& A) {
    require_dim(A.rows(), A.cols(), "induced_matrix");
    const Eigen::Index n = A.rows();
    Mat T(n, n);
    // 1-based: t_ij = (-1)^(i+j+1) a_{(n+1-j),(n+1-i)}
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            T(i, j) = -alt(i + j) * A(n - 1 - j, n - 1 - i);
    return T;
}

CoForm columns_to_coform(const Mat& cols) {
    const Eigen::Index n = cols.rows();
    if (n < 2 || cols.cols() != n - 1) {
        throw std::invalid_argument("columns_to_coform: expected an n x (n-1) matrix");
    }
    CoForm C(n);
    Mat sub(n - 1, n - 1);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::Index drop = n - 1 - j;
        for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
            if (r == drop) continue;
            sub.row(rr++) = cols.row(r);
        }
        C(j) = (n == 2) ? sub(0, 0) : sub.determinant();
    }
    return C;
}

RowVec coform_to_covector(const CoForm& V) {
    const Eigen::Index n = V.size();
    RowVec z(n);
    for (Eigen::Index j = 0; j < n; ++j) z(j) = alt(j) * V(n - 1 - j);
    return z;
}

CoForm covector_to_coform(const RowVec& z) {
    const Eigen::Index n = z.size();
    CoForm V(n);
    for (Eigen::Index k = 0; k < n; ++k) V(n - 1 - k) = alt(k) * z(k);
    return V;
}

double conjugation_residual(const Mat& A, const OneForm& u, const CoForm& U) {
    require_dim(A.rows(), A.cols(), "conjugation_residual");
    require_dim(A.cols(), u.size(), "conjugation_residual");
    return wedge_top(A * u, U) + wedge_top(u, induced_matrix(A) * U);
}

CoForm tilde_eigvec_from_left(const RowVec& w) {
    const Eigen::Index n = w.size();
    CoForm V(n);
    // 1-based: V_j = (-1)^(n-j) w_{n+1-j}
    for (Eigen::Index j = 0; j < n; ++j) V(j) = alt(n - 1 - j) * w(n - 1 - j);
    return V;
}

RowVec left_from_tilde_eigvec(const CoForm& V) {
    const Eigen::Index n = V.size();
    RowVec w(n);
    // 1-based: w_k = (-1)^(k-1) V_{n+1-k}
    for (Eigen::Index k = 0; k < n; ++k) w(k) = alt(k) * V(n - 1 - k);
    return w;
}

CoForm coform_pushforward(const Mat& M, const CoForm& C) {
    require_dim(M.rows(), M.cols(), "coform_pushforward");
    require_dim(M.cols(), C.size(), "coform_pushforward");
    // (M y) ^ Lambda(M) C = det(M) y ^ C, so the covector transforms as
    // z -> det(M) z M^{-1}.
    const Eigen::PartialPivLU<Mat> lu(M.transpose());
    const RowVec z = coform_to_covector(C);
    const RowVec zinv = lu.solve(z.transpose()).transpose();
    return covector_to_coform(lu.determinant() * zinv);
}

}  // namespace maslov
