#pragma once

// Small fixed-size linear algebra, spherical harmonics and symmetric-matrix
// utilities shared by every other header. All types are templated on the
// scalar so the same code runs in float (training path) and double (oracles).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace vod {

template <class T>
struct Vec2 {
    T x{}, y{};
};

template <class T>
struct Vec3 {
    T x{}, y{}, z{};

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(T s) const { return {x * s, y * s, z * s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    T dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    T norm2() const { return dot(*this); }
    T norm() const { return std::sqrt(norm2()); }
    T max_component() const { return std::max(x, std::max(y, z)); }
};

template <class T>
inline Vec3<T> operator*(T s, const Vec3<T>& v) {
    return v * s;
}

// Normalizes v; falls back to +z for (near-)zero input so callers stay total.
template <class T>
inline Vec3<T> normalize_or_z(const Vec3<T>& v) {
    const T n2 = v.norm2();
    if (!(n2 >= std::numeric_limits<T>::min()))
        return Vec3<T>{T(0), T(0), T(1)};
    const T inv = T(1) / std::sqrt(n2);
    return v * inv;
}

template <class T>
struct Mat3 {
    // Row-major.
    T m[3][3]{};

    static Mat3 identity() {
        Mat3 r;
        r.m[0][0] = r.m[1][1] = r.m[2][2] = T(1);
        return r;
    }
    static Mat3 diagonal(T a, T b, T c) {
        Mat3 r;
        r.m[0][0] = a;
        r.m[1][1] = b;
        r.m[2][2] = c;
        return r;
    }

    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
        return r;
    }

    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                T s = T(0);
                for (int k = 0; k < 3; ++k) s += m[i][k] * o.m[k][j];
                r.m[i][j] = s;
            }
        return r;
    }

    Vec3<T> operator*(const Vec3<T>& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }

    Vec3<T> row(int i) const { return {m[i][0], m[i][1], m[i][2]}; }
    Vec3<T> col(int j) const { return {m[0][j], m[1][j], m[2][j]}; }

    T frobenius_norm() const {
        T s = T(0);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s += m[i][j] * m[i][j];
        return std::sqrt(s);
    }
};

// Six coefficients of a symmetric 3x3 matrix. The learnable S-hat is stored
// this way; no positive-definiteness is implied or enforced.
template <class T>
struct SymMat3 {
    T xx{}, xy{}, xz{}, yy{}, yz{}, zz{};

    static SymMat3 zero() { return {}; }
    static SymMat3 identity() { return {T(1), T(0), T(0), T(1), T(0), T(1)}; }
    static SymMat3 diagonal(T a, T b, T c) { return {a, T(0), T(0), b, T(0), c}; }

    Mat3<T> expand() const {
        Mat3<T> r;
        r.m[0][0] = xx;
        r.m[0][1] = xy;
        r.m[0][2] = xz;
        r.m[1][0] = xy;
        r.m[1][1] = yy;
        r.m[1][2] = yz;
        r.m[2][0] = xz;
        r.m[2][1] = xz * T(0) + yz;  // keep exact symmetry explicit
        r.m[2][2] = zz;
        r.m[2][1] = yz;
        return r;
    }

    static SymMat3 from_mat3_symmetric(const Mat3<T>& a) {
        return {a.m[0][0], a.m[0][1], a.m[0][2], a.m[1][1], a.m[1][2], a.m[2][2]};
    }

    SymMat3 operator+(const SymMat3& o) const {
        return {xx + o.xx, xy + o.xy, xz + o.xz, yy + o.yy, yz + o.yz, zz + o.zz};
    }
    SymMat3 operator*(T s) const { return {xx * s, xy * s, xz * s, yy * s, yz * s, zz * s}; }
    SymMat3& operator+=(const SymMat3& o) {
        xx += o.xx;
        xy += o.xy;
        xz += o.xz;
        yy += o.yy;
        yz += o.yz;
        zz += o.zz;
        return *this;
    }

    T frobenius_norm() const {
        return std::sqrt(xx * xx + yy * yy + zz * zz + T(2) * (xy * xy + xz * xz + yz * yz));
    }
};

// w^T S w, exploiting symmetry: the three off-diagonal coefficients each
// appear twice in the dense product.
template <class T>
inline T quadratic_form(const SymMat3<T>& s, const Vec3<T>& w) {
    return w.x * w.x * s.xx + w.y * w.y * s.yy + w.z * w.z * s.zz +
           T(2) * (w.x * w.y * s.xy + w.x * w.z * s.xz + w.y * w.z * s.yz);
}

// Projected area of the ellipsoid described by S in direction w: sqrt(w^T S w).
// Diagnostic quantity; the quadratic form must be nonnegative.
template <class T>
inline T sggx_projected_area(const SymMat3<T>& s, const Vec3<T>& w) {
    const T q = quadratic_form(s, w);
    if (q < T(0)) throw std::domain_error("sggx_projected_area: negative quadratic form");
    return std::sqrt(q);
}

template <class T>
struct Quat {
    T w{1}, x{}, y{}, z{};

    static Quat identity() { return {T(1), T(0), T(0), T(0)}; }

    T norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

    Quat normalized() const {
        const T n = norm();
        if (!(n >= std::numeric_limits<T>::min())) return identity();
        const T inv = T(1) / n;
        return {w * inv, x * inv, y * inv, z * inv};
    }

    // Rotation matrix of the normalized quaternion.
    Mat3<T> to_mat3() const {
        const Quat q = normalized();
        Mat3<T> r;
        const T xx = q.x * q.x, yy = q.y * q.y, zz = q.z * q.z;
        const T xy = q.x * q.y, xz = q.x * q.z, yz = q.y * q.z;
        const T wx = q.w * q.x, wy = q.w * q.y, wz = q.w * q.z;
        r.m[0][0] = T(1) - T(2) * (yy + zz);
        r.m[0][1] = T(2) * (xy - wz);
        r.m[0][2] = T(2) * (xz + wy);
        r.m[1][0] = T(2) * (xy + wz);
        r.m[1][1] = T(1) - T(2) * (xx + zz);
        r.m[1][2] = T(2) * (yz - wx);
        r.m[2][0] = T(2) * (xz - wy);
        r.m[2][1] = T(2) * (yz + wx);
        r.m[2][2] = T(1) - T(2) * (xx + yy);
        return r;
    }
};

// Sigma = R diag(s) diag(s)^T R^T; positive semi-definite by construction.
template <class T>
inline SymMat3<T> covariance_from_scale_rotation(const Vec3<T>& scale, const Quat<T>& rot) {
    const Mat3<T> r = rot.to_mat3();
    Mat3<T> l = r;  // columns scaled: L = R diag(s)
    for (int i = 0; i < 3; ++i) {
        l.m[i][0] *= scale.x;
        l.m[i][1] *= scale.y;
        l.m[i][2] *= scale.z;
    }
    const Mat3<T> sigma = l * l.transposed();
    return SymMat3<T>::from_mat3_symmetric(sigma);
}

template <class T>
inline T sigmoid(T v) {
    if (v >= T(0)) return T(1) / (T(1) + std::exp(-v));
    const T e = std::exp(v);
    return e / (T(1) + e);
}

template <class T>
inline T logit(T p) {
    if (!(p > T(0) && p < T(1))) throw std::domain_error("logit: argument must be in (0,1)");
    return std::log(p / (T(1) - p));
}

// ---------------------------------------------------------------------------
// Symmetric 3x3 eigendecomposition, cyclic Jacobi rotations.
// ---------------------------------------------------------------------------

template <class T>
struct EigenDecomposition {
    Vec3<T> values;    // descending: values.x >= values.y >= values.z
    Mat3<T> vectors;   // orthonormal columns, column k pairs with value k
};

// Q diag(lambda) Q^T reconstructs S within 1e-6*(1+||S||_F). Repeated
// eigenvalues are fine; ties keep the pre-sort (rotation) order.
template <class T>
inline EigenDecomposition<T> sym3_eigendecompose(const SymMat3<T>& s) {
    T a[3][3] = {{s.xx, s.xy, s.xz}, {s.xy, s.yy, s.yz}, {s.xz, s.yz, s.zz}};
    T v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    const T fro = s.frobenius_norm();
    const T tol = T(1e-12) * (T(1) + fro);

    for (int sweep = 0; sweep < 30; ++sweep) {
        const T off = std::sqrt(T(2) * (a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2]));
        if (off <= tol) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                const T apq = a[p][q];
                if (apq == T(0)) continue;
                const T theta = (a[q][q] - a[p][p]) / (T(2) * apq);
                const T sign = theta >= T(0) ? T(1) : T(-1);
                const T t = sign / (std::abs(theta) + std::sqrt(theta * theta + T(1)));
                const T c = T(1) / std::sqrt(t * t + T(1));
                const T sn = t * c;
                const T tau = sn / (T(1) + c);

                const T app = a[p][p], aqq = a[q][q];
                a[p][p] = app - t * apq;
                a[q][q] = aqq + t * apq;
                a[p][q] = a[q][p] = T(0);
                for (int r = 0; r < 3; ++r) {
                    if (r != p && r != q) {
                        const T arp = a[r][p], arq = a[r][q];
                        a[r][p] = a[p][r] = arp - sn * (arq + tau * arp);
                        a[r][q] = a[q][r] = arq + sn * (arp - tau * arq);
                    }
                    const T vrp = v[r][p], vrq = v[r][q];
                    v[r][p] = vrp - sn * (vrq + tau * vrp);
                    v[r][q] = vrq + sn * (vrp - tau * vrq);
                }
            }
        }
    }

    // Stable descending sort: on ties the original column order survives.
    std::array<int, 3> order = {0, 1, 2};
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a[i][i] > a[j][j]; });

    EigenDecomposition<T> out;
    const T* vals[3] = {&a[order[0]][0], nullptr, nullptr};
    (void)vals;
    out.values = {a[order[0]][order[0]], a[order[1]][order[1]], a[order[2]][order[2]]};
    for (int k = 0; k < 3; ++k)
        for (int r = 0; r < 3; ++r) out.vectors.m[r][k] = v[r][order[k]];
    return out;
}

// ---------------------------------------------------------------------------
// Spherical harmonics, real basis up to degree 3, 3DGS constants.
// ---------------------------------------------------------------------------

inline constexpr int kShCoeffsPerChannel = 16;  // (3+1)^2
inline constexpr int kShMaxDegree = 3;

namespace sh {
inline constexpr double kC0 = 0.28209479177387814;
inline constexpr double kC1 = 0.4886025119029199;
inline constexpr double kC2[5] = {1.0925484305920792, -1.0925484305920792,
                                  0.31539156525252005, -1.0925484305920792,
                                  0.5462742152960396};
inline constexpr double kC3[7] = {-0.5900435899266435, 2.890611442640554,
                                  -0.4570457994644658, 0.3731763325901154,
                                  -0.4570457994644658, 1.445305721320277,
                                  -0.5900435899266435};
}  // namespace sh

// Basis values for a unit direction; entries beyond the active degree are 0.
template <class T>
inline std::array<T, kShCoeffsPerChannel> sh_basis(const Vec3<T>& dir, int degree) {
    std::array<T, kShCoeffsPerChannel> b{};
    b[0] = T(sh::kC0);
    if (degree < 1) return b;
    const T x = dir.x, y = dir.y, z = dir.z;
    b[1] = T(-sh::kC1) * y;
    b[2] = T(sh::kC1) * z;
    b[3] = T(-sh::kC1) * x;
    if (degree < 2) return b;
    const T xx = x * x, yy = y * y, zz = z * z;
    const T xy = x * y, yz = y * z, xz = x * z;
    b[4] = T(sh::kC2[0]) * xy;
    b[5] = T(sh::kC2[1]) * yz;
    b[6] = T(sh::kC2[2]) * (T(2) * zz - xx - yy);
    b[7] = T(sh::kC2[3]) * xz;
    b[8] = T(sh::kC2[4]) * (xx - yy);
    if (degree < 3) return b;
    b[9] = T(sh::kC3[0]) * y * (T(3) * xx - yy);
    b[10] = T(sh::kC3[1]) * xy * z;
    b[11] = T(sh::kC3[2]) * y * (T(4) * zz - xx - yy);
    b[12] = T(sh::kC3[3]) * z * (T(2) * zz - T(3) * xx - T(3) * yy);
    b[13] = T(sh::kC3[4]) * x * (T(4) * zz - xx - yy);
    b[14] = T(sh::kC3[5]) * z * (xx - yy);
    b[15] = T(sh::kC3[6]) * x * (xx - T(3) * yy);
    return b;
}

// coeffs: 16 coefficients per channel, layout [coeff][channel], 48 scalars.
// 3DGS convention: basis dot coeffs + 0.5, clamped at zero.
template <class T>
inline Vec3<T> sh_evaluate(const T* coeffs, int degree, const Vec3<T>& dir) {
    const auto b = sh_basis(dir, degree);
    const int n = (degree + 1) * (degree + 1);
    Vec3<T> c{};
    for (int k = 0; k < n; ++k) {
        c.x += b[k] * coeffs[k * 3 + 0];
        c.y += b[k] * coeffs[k * 3 + 1];
        c.z += b[k] * coeffs[k * 3 + 2];
    }
    c.x = std::max(T(0), c.x + T(0.5));
    c.y = std::max(T(0), c.y + T(0.5));
    c.z = std::max(T(0), c.z + T(0.5));
    return c;
}

}  // namespace vod
