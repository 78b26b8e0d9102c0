#pragma once

// Least-squares fit of the logistic reverse-rank curve
//
//     R_rev(c) = top - (top - bottom) / (1 + (c / c_mid)^p)
//
// with bottom = 1 and top = n unless the asymptotes are freed. The solver is
// Levenberg-Marquardt with Moré's diagonal scaling: the damping term is
// lambda * D^2 where D holds the running maximum of the Jacobian column norms.
// Internally the abscissa is log(c) and the location parameter log(c_mid).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "closerank/error.hpp"
#include "closerank/ranking.hpp"

namespace closerank {

struct FitPoint {
    double closeness = 0.0;
    double reverse_rank = 0.0;
};

struct FitConfig {
    int max_iterations = 1000;
    /// Stop once an accepted step reduces the sum of squared residuals by a
    /// relative amount of at most `tolerance`, and the linearized model
    /// predicts no larger reduction.
    double tolerance = 1e-4;
    std::optional<double> initial_c_mid;  ///< default: median closeness
    double initial_p = default_slope;
    /// Fit the lower and upper asymptotes too (4 free parameters).
    bool free_asymptotes = false;

    void validate() const {
        if (max_iterations < 1) throw DomainError("max_iterations must be >= 1");
        if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
        if (!(initial_p > 0.0)) throw DomainError("initial p must be positive");
        if (initial_c_mid && !(*initial_c_mid > 0.0)) throw DomainError("initial c_mid must be positive");
    }
};

struct FitResult {
    LogisticParams params;
    double bottom = 1.0;
    double top = 0.0;
    double residual_norm = 0.0;  ///< sqrt of the final sum of squared residuals
    int iterations_used = 0;     ///< trial steps, accepted or not
    bool converged = false;
    /// Sum of squared residuals at the start and after every accepted step.
    std::vector<double> objective_trace;
};

/// Partial derivatives of R_rev with respect to c_mid and p (fixed asymptotes).
struct LogisticGradient {
    double d_c_mid = 0.0;
    double d_p = 0.0;
};

namespace detail {

/// 1 / (1 + e^z) without overflow.
inline double logistic_tail(double z) {
    if (z > 0.0) {
        const double e = std::exp(-z);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(z));
}

}  // namespace detail

inline LogisticGradient logistic_gradient(const LogisticParams& m, double c) {
    if (!(c > 0.0)) throw DomainError("closeness must be positive");
    const double log_ratio = std::log(c) - std::log(m.c_mid);
    const double f = detail::logistic_tail(m.p * log_ratio);
    const double slope = static_cast<double>(m.n - 1) * f * (1.0 - f);
    return {-slope * m.p / m.c_mid, slope * log_ratio};
}

namespace detail {

class LogisticProblem {
public:
    LogisticProblem(std::span<const FitPoint> points, bool free_asymptotes)
        : free_(free_asymptotes), x_(points.size()), y_(points.size()) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            x_[i] = std::log(points[i].closeness);
            y_[i] = points[i].reverse_rank;
        }
    }

    Eigen::Index dims() const { return free_ ? 4 : 2; }
    Eigen::Index rows() const { return static_cast<Eigen::Index>(x_.size()); }

    /// theta = (log c_mid, p[, bottom, top]); asymptotes from `fixed` otherwise.
    void residuals(const Eigen::VectorXd& theta, double bottom, double top, Eigen::VectorXd& r,
                   Eigen::MatrixXd* jac) const {
        const double a = theta[0];
        const double p = theta[1];
        if (free_) {
            bottom = theta[2];
            top = theta[3];
        }
        const double height = top - bottom;
        r.resize(rows());
        if (jac) jac->resize(rows(), dims());
        for (Eigen::Index i = 0; i < rows(); ++i) {
            const double u = x_[static_cast<std::size_t>(i)] - a;
            const double f = logistic_tail(p * u);
            r[i] = top - height * f - y_[static_cast<std::size_t>(i)];
            if (jac) {
                const double dz = height * f * (1.0 - f);
                (*jac)(i, 0) = -dz * p;
                (*jac)(i, 1) = dz * u;
                if (free_) {
                    (*jac)(i, 2) = f;
                    (*jac)(i, 3) = 1.0 - f;
                }
            }
        }
    }

private:
    bool free_;
    std::vector<double> x_;
    std::vector<double> y_;
};

inline double median(std::vector<double> v) {
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2 == 1) return *mid;
    const double hi = *mid;
    const double lo = *std::max_element(v.begin(), mid);
    return (lo + hi) / 2.0;
}

}  // namespace detail

/// Fits c_mid and p (and optionally the asymptotes) to (closeness, reverse
/// rank) points. Points are sorted first, so the result does not depend on
/// their order.
inline FitResult fit_logistic(std::span<const FitPoint> input, std::uint64_t n, const FitConfig& config = {}) {
    config.validate();
    if (input.size() < 2) throw DomainError("fit needs at least 2 points");
    if (n < 2) throw DomainError("fit needs n >= 2");
    std::vector<FitPoint> points(input.begin(), input.end());
    for (const auto& pt : points) {
        if (!(pt.closeness > 0.0) || !std::isfinite(pt.closeness))
            throw DomainError("closeness must be positive");
        if (!(pt.reverse_rank >= 1.0 && pt.reverse_rank <= static_cast<double>(n)))
            throw DomainError("reverse rank outside [1, n]");
    }
    std::sort(points.begin(), points.end(), [](const FitPoint& a, const FitPoint& b) {
        return a.closeness != b.closeness ? a.closeness < b.closeness : a.reverse_rank < b.reverse_rank;
    });
    if (points.front().closeness == points.back().closeness) throw DegenerateProfileError();

    const detail::LogisticProblem problem(points, config.free_asymptotes);
    const Eigen::Index q = problem.dims();
    const double fixed_bottom = 1.0;
    const double fixed_top = static_cast<double>(n);

    Eigen::VectorXd theta(q);
    std::vector<double> cs(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) cs[i] = points[i].closeness;
    theta[0] = std::log(config.initial_c_mid.value_or(detail::median(std::move(cs))));
    theta[1] = config.initial_p;
    if (config.free_asymptotes) {
        theta[2] = fixed_bottom;
        theta[3] = fixed_top;
    }

    Eigen::VectorXd r;
    Eigen::MatrixXd jac;
    problem.residuals(theta, fixed_bottom, fixed_top, r, &jac);
    double ssr = r.squaredNorm();

    // Exact fits stop here; the scale keeps the threshold meaningful for any n.
    const double exact_floor = 1e-24 * std::max(1.0, static_cast<double>(points.size()) * fixed_top * fixed_top);

    FitResult result;
    result.objective_trace.push_back(ssr);
    Eigen::VectorXd scale = Eigen::VectorXd::Zero(q);
    double lambda = 1e-3;
    bool fresh_jacobian = true;
    Eigen::MatrixXd jtj;
    Eigen::VectorXd jtr;

    while (result.iterations_used < config.max_iterations) {
        if (ssr <= exact_floor) {
            result.converged = true;
            break;
        }
        if (fresh_jacobian) {
            for (Eigen::Index j = 0; j < q; ++j) {
                const double norm = jac.col(j).norm();
                scale[j] = std::max(scale[j], norm);
                if (scale[j] == 0.0) scale[j] = 1.0;
            }
            jtj = jac.transpose() * jac;
            jtr = jac.transpose() * r;
            fresh_jacobian = false;
        }

        ++result.iterations_used;
        Eigen::MatrixXd lhs = jtj;
        lhs.diagonal() += lambda * scale.cwiseAbs2();
        const Eigen::VectorXd step = lhs.ldlt().solve(-jtr);
        if (!step.allFinite()) {
            lambda *= 10.0;
            if (lambda > 1e30) throw FitError("singular normal equations: damping exhausted");
            continue;
        }

        Eigen::VectorXd trial = theta + step;
        if (trial[1] <= 0.0) trial[1] = theta[1] / 2.0;  // keep the slope positive
        Eigen::VectorXd r_trial;
        problem.residuals(trial, fixed_bottom, fixed_top, r_trial, nullptr);
        const double ssr_trial = r_trial.squaredNorm();

        if (std::isfinite(ssr_trial) && ssr_trial < ssr) {
            const double actual = (ssr - ssr_trial) / ssr;
            const double predicted = (ssr - (r + jac * step).squaredNorm()) / ssr;
            theta = trial;
            ssr = ssr_trial;
            result.objective_trace.push_back(ssr);
            problem.residuals(theta, fixed_bottom, fixed_top, r, &jac);
            fresh_jacobian = true;
            lambda = std::max(lambda / 10.0, 1e-15);
            if (actual <= config.tolerance && std::abs(predicted) <= config.tolerance) {
                result.converged = true;
                break;
            }
        } else {
            lambda *= 10.0;
            if (lambda > 1e30) {
                // No descent left at any damping: a stationary point.
                result.converged = true;
                break;
            }
        }
    }

    result.params = {n, std::exp(theta[0]), theta[1]};
    result.bottom = config.free_asymptotes ? theta[2] : fixed_bottom;
    result.top = config.free_asymptotes ? theta[3] : fixed_top;
    result.residual_norm = std::sqrt(ssr);
    return result;
}

/// Fits the curve to the exact reverse-rank profile of a closeness array.
inline FitResult fit_profile(std::span<const double> closeness_values, const FitConfig& config = {}) {
    const auto reverse = exact_reverse_ranks(closeness_values);
    std::vector<FitPoint> points(closeness_values.size());
    for (std::size_t i = 0; i < points.size(); ++i) points[i] = {closeness_values[i], reverse[i]};
    return fit_logistic(points, closeness_values.size(), config);
}

struct NamedGraph {
    std::string name;
    Graph graph;
};

struct SlopeRow {
    std::string name;
    std::uint64_t nodes = 0;
    std::uint64_t edges = 0;
    FitResult fit;
};

struct SlopeTable {
    std::vector<SlopeRow> rows;
    double mean_p = 0.0;
};

/// Fitted hill slope of every graph's exact closeness profile, and their mean.
inline SlopeTable slope_table(std::span<const NamedGraph> graphs, const FitConfig& config = {},
                              unsigned threads = 0) {
    SlopeTable table;
    double sum = 0.0;
    for (const auto& [name, graph] : graphs) {
        const auto profile = closeness_all(graph, threads);
        SlopeRow row{name, graph.node_count(), graph.edge_count(), fit_profile(profile, config)};
        sum += row.fit.params.p;
        table.rows.push_back(std::move(row));
    }
    if (!table.rows.empty()) table.mean_p = sum / static_cast<double>(table.rows.size());
    return table;
}

}  // namespace closerank
