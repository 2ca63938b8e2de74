#ifndef FRONTLAB_COMMON_HPP
#define FRONTLAB_COMMON_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace frontlab {

// ---------------------------------------------------------------------------
// Error types. Config/parameter problems and numerical failures are kept
// apart so the CLI can map them to distinct exit codes.
// ---------------------------------------------------------------------------

struct invalid_parameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct wrong_regime : invalid_parameter {
    using invalid_parameter::invalid_parameter;
};

// ---------------------------------------------------------------------------
// Small numeric helpers shared across modules.
// ---------------------------------------------------------------------------

/// Quintic smoothstep on [0,1]: S(0)=0, S(1)=1, S'(0)=S'(1)=S''(0)=S''(1)=0.
inline double smoothstep5(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

/// Derivative of smoothstep5 with respect to t.
inline double smoothstep5_deriv(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return t * t * (30.0 + t * (-60.0 + 30.0 * t));
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    std::size_t n = 0;
};

/// Ordinary least squares y ~ slope*x + intercept.
inline LinearFit ols_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw invalid_parameter("ols_line: need at least two samples");
    const std::size_t n = x.size();
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) { sx += x[i]; sy += y[i]; }
    const double mx = sx / double(n), my = sy / double(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0) throw numerical_error("ols_line: degenerate abscissa");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - f.slope * x[i] - f.intercept;
        ss += r * r;
    }
    f.stderr_slope = (n > 2) ? std::sqrt(ss / double(n - 2) / sxx) : 0.0;
    f.n = n;
    return f;
}

/// Solves a symmetric positive definite 3x3 system (for the t, ln t, 1 fit).
inline void solve3x3(double a[3][3], double b[3], double out[3]) {
    for (int k = 0; k < 3; ++k) {
        int p = k;
        for (int i = k + 1; i < 3; ++i)
            if (std::fabs(a[i][k]) > std::fabs(a[p][k])) p = i;
        if (std::fabs(a[p][k]) < 1e-300) throw numerical_error("solve3x3: singular design matrix");
        if (p != k) {
            for (int j = 0; j < 3; ++j) std::swap(a[k][j], a[p][j]);
            std::swap(b[k], b[p]);
        }
        for (int i = k + 1; i < 3; ++i) {
            const double m = a[i][k] / a[k][k];
            for (int j = k; j < 3; ++j) a[i][j] -= m * a[k][j];
            b[i] -= m * b[k];
        }
    }
    for (int i = 2; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < 3; ++j) s -= a[i][j] * out[j];
        out[i] = s / a[i][i];
    }
}

/// Thomas algorithm for tridiagonal systems. Diagonals are (lower, diag, upper)
/// with lower[0] and upper[n-1] unused. Overwrites rhs with the solution.
inline void solve_tridiagonal(const std::vector<double>& lower,
                              const std::vector<double>& diag,
                              const std::vector<double>& upper,
                              std::vector<double>& rhs,
                              std::vector<double>& scratch) {
    const std::size_t n = diag.size();
    scratch.resize(n);
    double beta = diag[0];
    if (std::fabs(beta) < 1e-300) throw numerical_error("tridiagonal solve: zero pivot");
    rhs[0] /= beta;
    for (std::size_t i = 1; i < n; ++i) {
        scratch[i] = upper[i - 1] / beta;
        beta = diag[i] - lower[i] * scratch[i];
        if (std::fabs(beta) < 1e-300) throw numerical_error("tridiagonal solve: zero pivot");
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;)
        rhs[i] -= scratch[i + 1] * rhs[i + 1];
}

/// Golden-section minimization of a unimodal function on [a,b].
inline double golden_minimize(const std::function<double(double)>& f,
                              double a, double b, double xtol) {
    const double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

/// FNV-1a 64-bit hash, used for manifest checksums.
inline std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed = 14695981039346656037ull) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

} // namespace frontlab

#endif
