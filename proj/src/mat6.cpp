#include "bearform/mat6.hpp"

#include <algorithm>
#include <cmath>

namespace bearform {

double Vec6::norm() const { return std::sqrt(dot(*this)); }

Mat6 Mat6::from_blocks(const Mat3& tl, const Mat3& tr, const Mat3& bl, const Mat3& br) {
    Mat6 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            r.m[i][j] = tl(i, j);
            r.m[i][j + 3] = tr(i, j);
            r.m[i + 3][j] = bl(i, j);
            r.m[i + 3][j + 3] = br(i, j);
        }
    return r;
}

Mat6 Mat6::identity() {
    Mat6 r;
    for (int i = 0; i < 6; ++i) r.m[i][i] = 1.0;
    return r;
}

Mat6 Mat6::operator+(const Mat6& o) const {
    Mat6 r;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) r.m[i][j] = m[i][j] + o.m[i][j];
    return r;
}

Mat6 Mat6::operator-(const Mat6& o) const {
    Mat6 r;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) r.m[i][j] = m[i][j] - o.m[i][j];
    return r;
}

Mat6 Mat6::operator*(double s) const {
    Mat6 r;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) r.m[i][j] = m[i][j] * s;
    return r;
}

Mat6 Mat6::operator*(const Mat6& o) const {
    Mat6 r;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            double s = 0.0;
            for (int k = 0; k < 6; ++k) s += m[i][k] * o.m[k][j];
            r.m[i][j] = s;
        }
    return r;
}

Vec6 Mat6::operator*(const Vec6& v) const {
    double out[6];
    for (int i = 0; i < 6; ++i) {
        double s = 0.0;
        for (int k = 0; k < 6; ++k) s += m[i][k] * v[k];
        out[i] = s;
    }
    return {{out[0], out[1], out[2]}, {out[3], out[4], out[5]}};
}

Mat6 Mat6::transpose() const {
    Mat6 r;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) r.m[i][j] = m[j][i];
    return r;
}

double Mat6::asymmetry() const {
    double a = 0.0;
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) a = std::max(a, std::abs(m[i][j] - m[j][i]));
    return a;
}

double Mat6::max_abs() const {
    double a = 0.0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) a = std::max(a, std::abs(m[i][j]));
    return a;
}

double quadratic_form(const Mat6& a, const Vec6& x) { return x.dot(a * x); }

std::array<double, 6> sym_eigenvalues(const Mat6& a) {
    double w[6][6];
    double scale = 0.0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            w[i][j] = 0.5 * (a.m[i][j] + a.m[j][i]);
            scale = std::max(scale, std::abs(w[i][j]));
        }
    if (scale == 0.0) return {0, 0, 0, 0, 0, 0};

    const double tol = 1e-15 * scale;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < 6; ++p)
            for (int q = p + 1; q < 6; ++q) off = std::max(off, std::abs(w[p][q]));
        if (off <= tol) break;
        for (int p = 0; p < 6; ++p)
            for (int q = p + 1; q < 6; ++q) {
                const double apq = w[p][q];
                if (std::abs(apq) <= tol) continue;
                const double tau = (w[q][q] - w[p][p]) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int k = 0; k < 6; ++k) {
                    const double wkp = w[k][p];
                    const double wkq = w[k][q];
                    w[k][p] = c * wkp - s * wkq;
                    w[k][q] = s * wkp + c * wkq;
                }
                for (int k = 0; k < 6; ++k) {
                    const double wpk = w[p][k];
                    const double wqk = w[q][k];
                    w[p][k] = c * wpk - s * wqk;
                    w[q][k] = s * wpk + c * wqk;
                }
            }
    }
    std::array<double, 6> ev{w[0][0], w[1][1], w[2][2], w[3][3], w[4][4], w[5][5]};
    std::sort(ev.begin(), ev.end());
    return ev;
}

} // namespace bearform
