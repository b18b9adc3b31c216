#include "speckle/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "speckle/errors.hpp"
#include "speckle/special_math.hpp"

namespace speckle {

namespace {

struct SampleView {
    const std::vector<double>& z;
    double looks;
    double mean_log_z;

    explicit SampleView(const Sample& s) : z(s.values), looks(s.looks) {
        double acc = 0.0;
        for (double v : z) acc += std::log(v);
        mean_log_z = acc / static_cast<double>(z.size());
    }

    // mean log(gamma + L z) and mean 1/(gamma + L z)
    void tail_means(double gamma, double& mean_log, double& mean_inv) const {
        double acc_log = 0.0, acc_inv = 0.0;
        for (double v : z) {
            const double t = gamma + looks * v;
            acc_log += std::log(t);
            acc_inv += 1.0 / t;
        }
        const double n = static_cast<double>(z.size());
        mean_log = acc_log / n;
        mean_inv = acc_inv / n;
    }

    double mean_loglik(double alpha, double gamma) const {
        const double L = looks;
        double mean_log_gz, mean_inv_gz;
        tail_means(gamma, mean_log_gz, mean_inv_gz);
        return L * std::log(L) + ln_gamma(L - alpha) - alpha * std::log(gamma)
               - ln_gamma(-alpha) - ln_gamma(L)
               + (L - 1.0) * mean_log_z + (alpha - L) * mean_log_gz;
    }

    // d/dalpha and d/dgamma of the per-observation log-likelihood
    void mean_score(double alpha, double gamma, double& s_alpha, double& s_gamma) const {
        const double L = looks;
        double mean_log_gz, mean_inv_gz;
        tail_means(gamma, mean_log_gz, mean_inv_gz);
        s_alpha = digamma(-alpha) - digamma(L - alpha) - std::log(gamma) + mean_log_gz;
        s_gamma = -alpha / gamma + (alpha - L) * mean_inv_gz;
    }
};

struct Vec2 {
    double x = 0.0, y = 0.0;
};
struct Mat2 {
    double a = 1.0, b = 0.0, d = 1.0; // symmetric [[a,b],[b,d]]
};

Vec2 matvec(const Mat2& m, const Vec2& v) {
    return {m.a * v.x + m.b * v.y, m.b * v.x + m.d * v.y};
}

constexpr double kGradTol = 1e-6;
constexpr int kMaxIterations = 500;
constexpr double kCoordClampA = 40.0;   // |log(-alpha)| bound
constexpr double kCoordClampG = 500.0;  // |log(gamma)| bound

struct Objective {
    const SampleView& view;

    // u = (log(-alpha), log(gamma)); returns -mean log-likelihood
    double value(const Vec2& u) const {
        const double alpha = -std::exp(u.x);
        const double gamma = std::exp(u.y);
        return -view.mean_loglik(alpha, gamma);
    }

    Vec2 gradient(const Vec2& u) const {
        const double alpha = -std::exp(u.x);
        const double gamma = std::exp(u.y);
        double s_alpha, s_gamma;
        view.mean_score(alpha, gamma, s_alpha, s_gamma);
        // chain rule: d alpha / du.x = alpha, d gamma / du.y = gamma
        return {-s_alpha * alpha, -s_gamma * gamma};
    }
};

Vec2 clamp_coords(Vec2 u) {
    u.x = std::clamp(u.x, -kCoordClampA, kCoordClampA);
    u.y = std::clamp(u.y, -kCoordClampG, kCoordClampG);
    return u;
}

struct BfgsOutcome {
    Vec2 u;
    double f = std::numeric_limits<double>::infinity();
    double grad_norm = std::numeric_limits<double>::infinity();
    bool converged = false;
    int iterations = 0;
    bool usable = false;
};

BfgsOutcome bfgs(const Objective& obj, Vec2 u0) {
    BfgsOutcome out;
    Vec2 u = clamp_coords(u0);
    double f = obj.value(u);
    if (!std::isfinite(f)) return out;
    Vec2 g = obj.gradient(u);
    if (!std::isfinite(g.x) || !std::isfinite(g.y)) return out;
    out.usable = true;

    Mat2 h; // inverse Hessian approximation
    int it = 0;
    for (; it < kMaxIterations; ++it) {
        const double gnorm = std::sqrt(g.x * g.x + g.y * g.y);
        if (gnorm <= kGradTol) {
            out.converged = true;
            break;
        }
        Vec2 p{-(h.a * g.x + h.b * g.y), -(h.b * g.x + h.d * g.y)};
        double slope = g.x * p.x + g.y * p.y;
        if (!(slope < 0.0)) {
            h = Mat2{};
            p = {-g.x, -g.y};
            slope = -(g.x * g.x + g.y * g.y);
        }

        // Armijo backtracking
        double step = 1.0;
        Vec2 u_new;
        double f_new = f;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            u_new = clamp_coords({u.x + step * p.x, u.y + step * p.y});
            f_new = obj.value(u_new);
            if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        const Vec2 g_new = obj.gradient(u_new);
        if (!std::isfinite(g_new.x) || !std::isfinite(g_new.y)) break;
        const Vec2 s{u_new.x - u.x, u_new.y - u.y};
        const Vec2 y{g_new.x - g.x, g_new.y - g.y};
        const double ys = y.x * s.x + y.y * s.y;
        const double s_norm = std::sqrt(s.x * s.x + s.y * s.y);
        const double y_norm = std::sqrt(y.x * y.x + y.y * y.y);
        if (ys > 1e-12 * s_norm * y_norm) {
            // H <- (I - r s y') H (I - r y s') + r s s'
            const double r = 1.0 / ys;
            const Vec2 hy = matvec(h, y);
            const double yhy = y.x * hy.x + y.y * hy.y;
            const double c1 = (1.0 + r * yhy) * r;
            h.a += c1 * s.x * s.x - r * (s.x * hy.x + hy.x * s.x);
            h.b += c1 * s.x * s.y - r * (s.x * hy.y + hy.x * s.y);
            h.d += c1 * s.y * s.y - r * (s.y * hy.y + hy.y * s.y);
        } else {
            h = Mat2{};
        }
        u = u_new;
        f = f_new;
        g = g_new;
    }
    out.u = u;
    out.f = f;
    out.grad_norm = std::sqrt(g.x * g.x + g.y * g.y);
    out.iterations = it;
    return out;
}

Vec2 start_point(const SampleView& view, double alpha0) {
    double mean = 0.0;
    for (double v : view.z) mean += v;
    mean /= static_cast<double>(view.z.size());
    double gamma0;
    if (std::isfinite(mean) && mean > 0.0) {
        gamma0 = -(1.0 + alpha0) * mean; // moment-match the mean at alpha0
    } else {
        std::vector<double> sorted(view.z);
        std::sort(sorted.begin(), sorted.end());
        gamma0 = sorted[sorted.size() / 2];
    }
    return {std::log(-alpha0), std::log(gamma0)};
}

} // namespace

double log_likelihood(double alpha, double gamma, const Sample& s) {
    s.validate();
    if (!(alpha < 0.0)) throw std::domain_error("log_likelihood: requires alpha < 0");
    if (!(gamma > 0.0)) throw std::domain_error("log_likelihood: requires gamma > 0");
    SampleView view(s);
    return view.mean_loglik(alpha, gamma) * static_cast<double>(s.size());
}

std::pair<double, double> score(double alpha, double gamma, const Sample& s) {
    s.validate();
    if (!(alpha < 0.0)) throw std::domain_error("score: requires alpha < 0");
    if (!(gamma > 0.0)) throw std::domain_error("score: requires gamma > 0");
    SampleView view(s);
    double s_alpha, s_gamma;
    view.mean_score(alpha, gamma, s_alpha, s_gamma);
    return {s_alpha, s_gamma};
}

FitResult fit_ml(const Sample& s) {
    s.validate();
    if (s.size() < 3) throw std::domain_error("fit_ml: requires at least 3 observations");
    SampleView view(s);
    Objective obj{view};

    BfgsOutcome best = bfgs(obj, start_point(view, -3.0));
    int iterations = best.iterations;
    if (!best.converged) {
        BfgsOutcome retry = bfgs(obj, start_point(view, -1.5));
        iterations += retry.iterations;
        if (retry.usable && (!best.usable || retry.converged || retry.f < best.f))
            best = retry;
    }
    if (!best.usable)
        throw estimation_error("fit_ml: log-likelihood not finite at any start");

    FitResult result;
    result.params = {-std::exp(best.u.x), std::exp(best.u.y), s.looks};
    result.log_likelihood = -best.f * static_cast<double>(s.size());
    result.converged = best.converged;
    result.iterations = iterations;
    result.score_norm_at_opt = best.grad_norm;
    return result;
}

bool censor_accept(const FitResult& fit, double true_alpha) {
    if (!(true_alpha < 0.0))
        throw std::domain_error("censor_accept: requires true_alpha < 0");
    const double a = fit.params.alpha;
    return 10.0 * true_alpha <= a && a <= true_alpha / 20.0;
}

} // namespace speckle
