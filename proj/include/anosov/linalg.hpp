#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <type_traits>

#include "anosov/error.hpp"

namespace anosov {

using Complex = std::complex<double>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatR = Mat<double>;
using MatC = Mat<Complex>;
using VecR = Vec<double>;

/// Scalar field of the ambient vector space.
enum class Field { real, complex };

template <typename Scalar>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

template <typename Scalar>
inline constexpr bool is_complex_v = is_complex<Scalar>::value;

template <typename Scalar>
constexpr Field field_of() {
    return is_complex_v<Scalar> ? Field::complex : Field::real;
}

template <typename Scalar>
Mat<Scalar> identity(Eigen::Index d) {
    return Mat<Scalar>::Identity(d, d);
}

template <typename Scalar>
bool all_finite(const Mat<Scalar>& a) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (!std::isfinite(std::abs(a.data()[i]))) return false;
    }
    return true;
}

/// Largest absolute entry; used as the scale for entry-wise tolerances.
template <typename Scalar>
double max_abs(const Mat<Scalar>& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

template <typename Scalar>
double abs_det(const Mat<Scalar>& a) {
    if (a.rows() == 0) return 1.0;
    return std::abs(a.partialPivLu().determinant());
}

template <typename Scalar>
void require_square(const Mat<Scalar>& a, const char* what) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw InvalidArgument(std::string(what) + ": expected a non-empty square matrix");
    }
}

/// Inverse that refuses singular input. The threshold is relative to the
/// entry scale raised to the dimension, i.e. |det| against max|a|^d.
template <typename Scalar>
Mat<Scalar> checked_inverse(const Mat<Scalar>& a, double rel_tol = 1e-13) {
    require_square(a, "inverse");
    Eigen::FullPivLU<Mat<Scalar>> lu(a);
    double scale = max_abs(a);
    if (scale == 0.0 || !lu.isInvertible() ||
        std::abs(lu.determinant()) <= rel_tol * std::pow(scale, static_cast<double>(a.rows()))) {
        throw SingularError("matrix is singular within tolerance");
    }
    return lu.inverse();
}

}  // namespace anosov
