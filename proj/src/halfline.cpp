// halfline.cpp - recursion with scale tracking, JL norms, m-function.
#include "starlike/halfline.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace starlike {

namespace {
constexpr int kRenormEvery = 64;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}  // namespace

double HalfLineSolution::value(int n) const {
    return val.at(n) * std::exp(logsc.at(n));
}

double HalfLineSolution::log_abs(int n) const {
    const double v = val.at(n);
    return v == 0.0 ? kNegInf : std::log(std::abs(v)) + logsc.at(n);
}

HalfLineSolution solve_initial(const BranchCoefficients& c, double E, double g0, double g1,
                               int horizon) {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (!std::isfinite(E) || !std::isfinite(g0) || !std::isfinite(g1))
        throw std::invalid_argument("non-finite solve input");
    HalfLineSolution out;
    out.energy = E;
    out.val.resize(horizon + 1);
    out.logsc.resize(horizon + 1);
    out.val[0] = g0;
    out.logsc[0] = 0.0;
    out.val[1] = g1;
    out.logsc[1] = 0.0;
    double p = g0, q = g1, scale = 0.0;
    for (int n = 1; n < horizon; ++n) {
        const double r = ((E - c.b(n)) * q - c.a(n) * p) / c.a(n + 1);
        out.val[n + 1] = r;
        out.logsc[n + 1] = scale;
        p = q;
        q = r;
        if (n % kRenormEvery == 0) {
            const double m = std::max(std::abs(p), std::abs(q));
            if (m > 0.0) {
                p /= m;
                q /= m;
                scale += std::log(m);
            }
        }
    }
    return out;
}

HalfLineSolution solve(const BranchCoefficients& c, double E, double theta, int horizon) {
    return solve_initial(c, E, -std::sin(theta), std::cos(theta), horizon);
}

Eigen::Matrix2d transfer(const BranchCoefficients& c, double E, int n) {
    Eigen::Matrix2d t;
    t << 0.0, 1.0, -c.a(n) / c.a(n + 1), (E - c.b(n)) / c.a(n + 1);
    return t;
}

double jl_norm_log(const HalfLineSolution& g, double L) {
    if (!(L >= 1.0)) throw std::invalid_argument("JL length must be >= 1");
    const int whole = static_cast<int>(std::floor(L));
    const double frac = L - whole;
    const int last = frac > 0.0 ? whole + 1 : whole;
    if (last > g.horizon()) throw std::invalid_argument("JL length exceeds horizon");

    double top = kNegInf;
    for (int k = 1; k <= whole; ++k) top = std::max(top, 2.0 * g.log_abs(k));
    if (frac > 0.0) top = std::max(top, std::log(frac) + 2.0 * g.log_abs(whole + 1));
    if (top == kNegInf) return kNegInf;

    double sum = 0.0;
    for (int k = 1; k <= whole; ++k) {
        const double t = 2.0 * g.log_abs(k);
        if (t != kNegInf) sum += std::exp(t - top);
    }
    if (frac > 0.0) {
        const double t = std::log(frac) + 2.0 * g.log_abs(whole + 1);
        if (t != kNegInf) sum += std::exp(t - top);
    }
    return 0.5 * (top + std::log(sum));
}

double jl_norm(const HalfLineSolution& g, double L) {
    const double lg = jl_norm_log(g, L);
    return lg == kNegInf ? 0.0 : std::exp(lg);
}

double subordinacy_ratio(const BranchCoefficients& c, double E, double theta, double eta,
                         double L) {
    const double gap = std::remainder(theta - eta, M_PI);
    if (std::abs(gap) < 1e-12) throw std::invalid_argument("boundary angles coincide");
    const int horizon = static_cast<int>(std::floor(L)) + 1;
    const auto gt = solve(c, E, theta, horizon);
    const auto ge = solve(c, E, eta, horizon);
    const double lt = jl_norm_log(gt, L);
    const double le = jl_norm_log(ge, L);
    if (le == kNegInf) throw std::invalid_argument("comparison solution vanishes");
    if (lt == kNegInf) return 0.0;
    return std::exp(lt - le);
}

SubordinateDirection subordinate_direction(const BranchCoefficients& c, double E, double L) {
    if (!(L >= 1.0)) throw std::invalid_argument("JL length must be >= 1");
    const int whole = static_cast<int>(std::floor(L));
    const double frac = L - whole;
    const int horizon = whole + (frac > 0.0 ? 1 : 0);
    const auto u1 = solve(c, E, 0.0, std::max(horizon, 1));
    const auto u2 = solve(c, E, M_PI / 2.0, std::max(horizon, 1));

    // Gram matrix of (u1, u2) in the JL inner product, accumulated relative to
    // the largest term so huge solutions never overflow.
    double top = kNegInf;
    auto term_log = [&](const HalfLineSolution& x, const HalfLineSolution& y, int k) {
        return x.log_abs(k) + y.log_abs(k);
    };
    for (int k = 1; k <= whole; ++k) {
        top = std::max(top, term_log(u1, u1, k));
        top = std::max(top, term_log(u2, u2, k));
        top = std::max(top, term_log(u1, u2, k));
    }
    if (frac > 0.0) {
        const int k = whole + 1;
        const double lf = std::log(frac);
        top = std::max(top, lf + term_log(u1, u1, k));
        top = std::max(top, lf + term_log(u2, u2, k));
        top = std::max(top, lf + term_log(u1, u2, k));
    }
    if (top == kNegInf) throw std::invalid_argument("fundamental solutions vanish");

    auto add = [&](const HalfLineSolution& x, const HalfLineSolution& y, int k, double extra) {
        const double t = term_log(x, y, k) + extra;
        if (t == kNegInf) return 0.0;
        const double sgn = (x.val[k] < 0) == (y.val[k] < 0) ? 1.0 : -1.0;
        return sgn * std::exp(t - top);
    };
    Eigen::Matrix2d gram = Eigen::Matrix2d::Zero();
    for (int k = 1; k <= whole; ++k) {
        gram(0, 0) += add(u1, u1, k, 0.0);
        gram(1, 1) += add(u2, u2, k, 0.0);
        gram(0, 1) += add(u1, u2, k, 0.0);
    }
    if (frac > 0.0) {
        const int k = whole + 1;
        const double lf = std::log(frac);
        gram(0, 0) += add(u1, u1, k, lf);
        gram(1, 1) += add(u2, u2, k, lf);
        gram(0, 1) += add(u1, u2, k, lf);
    }
    gram(1, 0) = gram(0, 1);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(gram);
    const double lo = std::max(eig.eigenvalues()(0), 0.0);
    const double hi = eig.eigenvalues()(1);
    SubordinateDirection out;
    out.condition = hi > 0.0 ? lo / hi : 1.0;
    if (hi - lo <= 1e-12 * std::abs(hi)) {
        out.theta = 0.0;  // isotropic Gram: tie broken toward the Dirichlet direction
        out.condition = 1.0;
        return out;
    }
    const auto dir = eig.eigenvectors().col(0);
    // g = x u1 + y u2 has boundary values (-y, x) = (-sin theta, cos theta).
    double theta = std::atan2(dir(1), dir(0));
    if (theta < 0.0) theta += M_PI;
    if (theta >= M_PI) theta -= M_PI;
    out.theta = theta;
    return out;
}

std::complex<double> m_function(const BranchCoefficients& c, std::complex<double> z, double tol,
                                long depth_cap, long start_depth, long* used_depth) {
    if (!(z.imag() > 0.0)) throw std::invalid_argument("m-function needs Im z > 0");
    if (start_depth < 2) start_depth = 2;
    auto eval = [&](long depth) {
        std::complex<double> m = 0.0;
        for (long n = depth; n >= 1; --n) {
            const double an1 = c.a(static_cast<int>(n) + 1);
            m = 1.0 / (c.b(static_cast<int>(n)) - z - an1 * an1 * m);
        }
        return m;
    };
    long depth = std::min(start_depth, depth_cap);
    std::complex<double> prev = eval(depth);
    while (depth < depth_cap) {
        depth = std::min(2 * depth, depth_cap);
        const std::complex<double> cur = eval(depth);
        if (std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur))) {
            if (used_depth) *used_depth = depth;
            return cur;
        }
        prev = cur;
    }
    throw std::runtime_error("m-function continued fraction did not converge");
}

}  // namespace starlike
