#include "kinemotion/linear_svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kinemotion/errors.hpp"

namespace kinemotion {

namespace {

constexpr double kTau = 1e-12;  // curvature floor for non-PD pairs
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

Standardizer Standardizer::fit(const Matrix& x) {
    const std::size_t n = x.rows(), d = x.cols();
    if (n == 0) throw EmptyInputError("cannot fit a standardizer on zero rows");
    std::vector<double> mean(d, 0.0), sd(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) mean[c] += x(r, c);
    }
    for (auto& m : mean) m /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) sd[c] += (x(r, c) - mean[c]) * (x(r, c) - mean[c]);
    }
    for (std::size_t c = 0; c < d; ++c) {
        sd[c] = std::sqrt(sd[c] / static_cast<double>(n));
        // relative floor: a spread at rounding level is no spread
        if (sd[c] <= 1e-12 * std::max(1.0, std::abs(mean[c]))) sd[c] = 0.0;
    }
    return {std::move(mean), std::move(sd)};
}

void Standardizer::transform_row(std::span<const double> in, std::span<double> out) const {
    for (std::size_t c = 0; c < in.size(); ++c) out[c] = sd_[c] > 0.0 ? (in[c] - mean_[c]) / sd_[c] : 0.0;
}

Matrix Standardizer::transform(const Matrix& x) const {
    if (x.cols() != mean_.size()) throw Error("standardizer fitted on a different feature count");
    Matrix out(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) transform_row(x.row(r), out.row(r));
    return out;
}

double LinearModel::decision(std::span<const double> x) const {
    double s = bias;
    for (std::size_t k = 0; k < weights.size(); ++k) s += weights[k] * x[selected_features[k]];
    return s;
}

DualSvmSolver::DualSvmSolver(const Matrix& x, std::span<const int> labels, double C)
    : x_(&x), C_(C), n_(x.rows()) {
    if (labels.size() != n_) throw Error("label count does not match rows");
    if (!(C > 0.0)) throw ConfigError("SVM C must be positive");
    bool has_pos = false, has_neg = false;
    y_.reserve(n_);
    for (int l : labels) {
        y_.push_back(l == 1 ? 1.0 : -1.0);
        (l == 1 ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) throw DegenerateError("SVM training needs both classes");

    active_.resize(x.cols());
    for (std::size_t c = 0; c < active_.size(); ++c) active_[c] = c;

    q_.assign(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        auto xi = x.row(i);
        for (std::size_t j = i; j < n_; ++j) {
            auto xj = x.row(j);
            double k = 0.0;
            for (std::size_t c = 0; c < xi.size(); ++c) k += xi[c] * xj[c];
            q_[i * n_ + j] = q_[j * n_ + i] = y_[i] * y_[j] * k;
        }
    }
    alpha_.assign(n_, 0.0);
    grad_.assign(n_, -1.0);
}

void DualSvmSolver::rebuild_gradient() {
    for (std::size_t i = 0; i < n_; ++i) {
        double g = -1.0;
        const double* qi = q_.data() + i * n_;
        for (std::size_t j = 0; j < n_; ++j) {
            if (alpha_[j] != 0.0) g += qi[j] * alpha_[j];
        }
        grad_[i] = g;
    }
}

void DualSvmSolver::remove_feature(std::size_t column) {
    auto it = std::find(active_.begin(), active_.end(), column);
    if (it == active_.end()) throw Error("feature is not active");
    active_.erase(it);
    for (std::size_t i = 0; i < n_; ++i) {
        const double vi = y_[i] * (*x_)(i, column);
        if (vi == 0.0) continue;
        for (std::size_t j = 0; j < n_; ++j) q_[i * n_ + j] -= vi * y_[j] * (*x_)(j, column);
    }
    rebuild_gradient();
}

std::size_t DualSvmSolver::solve(const SvmOptions& opts) {
    std::size_t iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
        // Working-set selection with second-order information.
        double gmax = -kInf, gmax2 = -kInf;
        std::size_t i = n_;
        for (std::size_t t = 0; t < n_; ++t) {
            if (y_[t] > 0) {
                if (!at_upper(t) && -grad_[t] >= gmax) {
                    gmax = -grad_[t];
                    i = t;
                }
            } else if (!at_lower(t) && grad_[t] >= gmax) {
                gmax = grad_[t];
                i = t;
            }
        }
        if (i == n_) break;
        const double* qi = q_.data() + i * n_;
        std::size_t j = n_;
        double best = kInf;
        for (std::size_t t = 0; t < n_; ++t) {
            double grad_diff, quad;
            if (y_[t] > 0) {
                if (at_lower(t)) continue;
                gmax2 = std::max(gmax2, grad_[t]);
                grad_diff = gmax + grad_[t];
                quad = qi[i] + q_[t * n_ + t] - 2.0 * y_[i] * qi[t];
            } else {
                if (at_upper(t)) continue;
                gmax2 = std::max(gmax2, -grad_[t]);
                grad_diff = gmax - grad_[t];
                quad = qi[i] + q_[t * n_ + t] + 2.0 * y_[i] * qi[t];
            }
            if (grad_diff <= 0.0) continue;
            const double obj = -(grad_diff * grad_diff) / (quad > 0.0 ? quad : kTau);
            if (obj <= best) {
                best = obj;
                j = t;
            }
        }
        if (gmax + gmax2 < opts.tolerance || j == n_) break;

        const double* qj = q_.data() + j * n_;
        const double old_i = alpha_[i], old_j = alpha_[j];
        double& ai = alpha_[i];
        double& aj = alpha_[j];
        if (y_[i] != y_[j]) {
            double quad = qi[i] + qj[j] + 2.0 * qi[j];
            if (quad <= 0.0) quad = kTau;
            const double delta = (-grad_[i] - grad_[j]) / quad;
            const double diff = ai - aj;
            ai += delta;
            aj += delta;
            if (diff > 0.0) {
                if (aj < 0.0) {
                    aj = 0.0;
                    ai = diff;
                }
            } else if (ai < 0.0) {
                ai = 0.0;
                aj = -diff;
            }
            if (diff > 0.0) {
                if (ai > C_) {
                    ai = C_;
                    aj = C_ - diff;
                }
            } else if (aj > C_) {
                aj = C_;
                ai = C_ + diff;
            }
        } else {
            double quad = qi[i] + qj[j] - 2.0 * qi[j];
            if (quad <= 0.0) quad = kTau;
            const double delta = (grad_[i] - grad_[j]) / quad;
            const double sum = ai + aj;
            ai -= delta;
            aj += delta;
            if (sum > C_) {
                if (ai > C_) {
                    ai = C_;
                    aj = sum - C_;
                }
            } else if (aj < 0.0) {
                aj = 0.0;
                ai = sum;
            }
            if (sum > C_) {
                if (aj > C_) {
                    aj = C_;
                    ai = sum - C_;
                }
            } else if (ai < 0.0) {
                ai = 0.0;
                aj = sum;
            }
        }
        const double di = ai - old_i, dj = aj - old_j;
        for (std::size_t t = 0; t < n_; ++t) grad_[t] += qi[t] * di + qj[t] * dj;
    }
    iterations_ += iter;
    return iter;
}

std::vector<double> DualSvmSolver::weights() const {
    std::vector<double> w(active_.size(), 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        if (alpha_[i] == 0.0) continue;
        const double coef = alpha_[i] * y_[i];
        auto xi = x_->row(i);
        for (std::size_t k = 0; k < active_.size(); ++k) w[k] += coef * xi[active_[k]];
    }
    return w;
}

double DualSvmSolver::bias() const {
    double ub = kInf, lb = -kInf, sum_free = 0.0;
    std::size_t n_free = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        const double yg = y_[i] * grad_[i];
        if (at_upper(i)) {
            if (y_[i] < 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else if (at_lower(i)) {
            if (y_[i] > 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else {
            ++n_free;
            sum_free += yg;
        }
    }
    const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);
    return -rho;
}

LinearModel DualSvmSolver::model() const {
    LinearModel m;
    m.weights = weights();
    m.bias = bias();
    m.C = C_;
    m.selected_features = active_;
    m.iterations = iterations_;
    return m;
}

LinearModel train_linear_svm(const Matrix& x, std::span<const int> labels, double C, const SvmOptions& opts) {
    if (x.rows() < 2) throw TooShortError("SVM training needs at least 2 rows");
    if (x.cols() == 0) throw DegenerateError("SVM training needs at least one feature");
    DualSvmSolver solver(x, labels, C);
    solver.solve(opts);
    return solver.model();
}

double svm_probability(const LinearModel& model, std::span<const double> x) {
    const double m = model.decision(x);
    return m >= 0.0 ? 1.0 / (1.0 + std::exp(-m)) : std::exp(m) / (1.0 + std::exp(m));
}

double svm_objective(const LinearModel& model, const Matrix& x, std::span<const int> labels) {
    double reg = 0.0;
    for (double w : model.weights) reg += w * w;
    double hinge = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const double y = labels[r] == 1 ? 1.0 : -1.0;
        hinge += std::max(0.0, 1.0 - y * model.decision(x.row(r)));
    }
    return 0.5 * reg + model.C * hinge;
}

}  // namespace kinemotion
