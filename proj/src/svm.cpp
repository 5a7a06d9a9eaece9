#include "sensorassoc/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "sensorassoc/errors.hpp"
#include "sensorassoc/parallel.hpp"

namespace sensorassoc {

std::string to_string(KernelKind kind) { return kind == KernelKind::linear ? "linear" : "quadratic"; }

double Kernel::operator()(const Point2& x, const Point2& y) const {
    const double d = dot(x, y);
    if (kind == KernelKind::linear) return d;
    const double s = d + offset;
    return s * s;
}

double kernel_eval(const Kernel& kernel, std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("kernel_eval: dimension mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d += x[i] * y[i];
    if (kernel.kind == KernelKind::linear) return d;
    const double s = d + kernel.offset;
    return s * s;
}

void SvmConfig::validate() const {
    if (!(C > 0.0) || !std::isfinite(C)) throw ConfigError("svm: C must be positive and finite");
    if (!(kkt_tolerance > 0.0)) throw ConfigError("svm: kkt_tolerance must be positive");
    if (max_iterations < 1) throw ConfigError("svm: max_iterations must be >= 1");
}

double BinarySvmModel::decision_value(const Point2& x) const {
    double f = bias;
    for (std::size_t i = 0; i < support_vectors.size(); ++i) {
        f += support_labels[i] * alphas[i] * kernel(support_vectors[i], x);
    }
    return f;
}

double dual_objective(std::span<const Point2> samples, std::span<const int> labels, const Kernel& kernel,
                      std::span<const double> alphas) {
    double quad = 0.0;
    double linear = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        linear += alphas[i];
        if (alphas[i] == 0.0) continue;
        for (std::size_t j = 0; j < samples.size(); ++j) {
            quad += labels[i] * labels[j] * alphas[i] * alphas[j] * kernel(samples[i], samples[j]);
        }
    }
    return 0.5 * quad - linear;
}

namespace {

constexpr double kTau = 1e-12;

void check_binary_labels(std::span<const Point2> samples, std::span<const int> labels) {
    if (samples.size() != labels.size()) throw std::invalid_argument("svm: one label per sample is required");
    bool pos = false;
    bool neg = false;
    for (int y : labels) {
        if (y == 1) {
            pos = true;
        } else if (y == -1) {
            neg = true;
        } else {
            throw std::invalid_argument("svm: binary labels must be +1 or -1");
        }
    }
    if (!pos || !neg) throw TrainingError("svm: training data must contain both classes");
}

/// SMO state. Q holds y_i y_j K(x_i, x_j); G is the gradient Q a - 1.
class SmoSolver {
public:
    SmoSolver(std::span<const Point2> samples, std::span<const int> labels, const Kernel& kernel, double C)
        : n_(samples.size()), y_(labels.begin(), labels.end()), C_(C), Q_(n_ * n_), alpha_(n_, 0.0), G_(n_, -1.0) {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = i; j < n_; ++j) {
                const double q = y_[i] * y_[j] * kernel(samples[i], samples[j]);
                Q_[i * n_ + j] = q;
                Q_[j * n_ + i] = q;
            }
        }
    }

    DualSolution run(double eps, std::size_t max_iterations) {
        DualSolution out;
        std::size_t iter = 0;
        for (; iter < max_iterations; ++iter) {
            std::size_t i = 0;
            std::size_t j = 0;
            if (!select_working_set(eps, i, j)) {
                out.converged = true;
                break;
            }
            update_pair(i, j);
        }
        if (out.converged) {
            polish();
            // A polish step can free a bounded multiplier; let SMO settle any new violation.
            for (; iter < max_iterations; ++iter) {
                std::size_t i = 0;
                std::size_t j = 0;
                if (!select_working_set(eps, i, j)) break;
                update_pair(i, j);
            }
        }
        if (!out.converged || iter == max_iterations) {
            std::size_t i = 0;
            std::size_t j = 0;
            out.converged = !select_working_set(eps, i, j);
        }
        out.iterations = iter;
        out.alphas = alpha_;
        out.bias = bias();
        out.objective = objective();
        return out;
    }

private:
    bool upper(std::size_t t) const { return alpha_[t] >= C_; }
    bool lower(std::size_t t) const { return alpha_[t] <= 0.0; }
    double q(std::size_t i, std::size_t j) const { return Q_[i * n_ + j]; }

    /// Second-order working-set selection; false once the violation gap is below eps.
    bool select_working_set(double eps, std::size_t& out_i, std::size_t& out_j) const {
        double gmax = -std::numeric_limits<double>::infinity();
        double gmax2 = -std::numeric_limits<double>::infinity();
        std::size_t imax = n_;
        for (std::size_t t = 0; t < n_; ++t) {
            if (y_[t] == 1) {
                if (!upper(t) && -G_[t] > gmax) {
                    gmax = -G_[t];
                    imax = t;
                }
            } else if (!lower(t) && G_[t] > gmax) {
                gmax = G_[t];
                imax = t;
            }
        }
        if (imax == n_) return false;
        const std::size_t i = imax;

        std::size_t jmin = n_;
        double obj_diff_min = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n_; ++t) {
            if (y_[t] == 1) {
                if (lower(t)) continue;
                const double grad_diff = gmax + G_[t];
                gmax2 = std::max(gmax2, G_[t]);
                if (grad_diff > 0.0) {
                    double quad = q(i, i) + q(t, t) - 2.0 * y_[i] * q(i, t);
                    if (quad <= 0.0) quad = kTau;
                    const double obj_diff = -(grad_diff * grad_diff) / quad;
                    if (obj_diff < obj_diff_min) {
                        obj_diff_min = obj_diff;
                        jmin = t;
                    }
                }
            } else {
                if (upper(t)) continue;
                const double grad_diff = gmax - G_[t];
                gmax2 = std::max(gmax2, -G_[t]);
                if (grad_diff > 0.0) {
                    double quad = q(i, i) + q(t, t) + 2.0 * y_[i] * q(i, t);
                    if (quad <= 0.0) quad = kTau;
                    const double obj_diff = -(grad_diff * grad_diff) / quad;
                    if (obj_diff < obj_diff_min) {
                        obj_diff_min = obj_diff;
                        jmin = t;
                    }
                }
            }
        }
        if (gmax + gmax2 < eps || jmin == n_) return false;
        out_i = i;
        out_j = jmin;
        return true;
    }

    double objective() const {
        double obj = 0.0;
        for (std::size_t t = 0; t < n_; ++t) obj += alpha_[t] * (G_[t] - 1.0);
        return 0.5 * obj;
    }

    void recompute_gradient() {
        for (std::size_t t = 0; t < n_; ++t) {
            double g = -1.0;
            for (std::size_t s = 0; s < n_; ++s) g += q(t, s) * alpha_[s];
            G_[t] = g;
        }
    }

    /**
     * Newton steps on the face of free multipliers: solves
     *   Q_FF d - y_F rho = -G_F,  y_F . d = 0
     * and moves as far along d as the box allows. Stops when the face optimum
     * is inside the box or a step fails to lower the objective.
     */
    void polish() {
        for (int round = 0; round < 8; ++round) {
            std::vector<std::size_t> F;
            for (std::size_t t = 0; t < n_; ++t) {
                if (!upper(t) && !lower(t)) F.push_back(t);
            }
            if (F.empty()) return;
            const std::size_t m = F.size();
            const std::size_t w = m + 2;
            std::vector<double> A((m + 1) * w, 0.0);
            for (std::size_t a = 0; a < m; ++a) {
                for (std::size_t b = 0; b < m; ++b) A[a * w + b] = q(F[a], F[b]);
                A[a * w + m] = -y_[F[a]];
                A[a * w + m + 1] = -G_[F[a]];
                A[m * w + a] = y_[F[a]];
            }
            std::vector<double> d;
            if (!solve_dense(A, m + 1, d)) return;

            double step = 1.0;
            for (std::size_t a = 0; a < m; ++a) {
                const double al = alpha_[F[a]];
                if (d[a] > 0.0) step = std::min(step, (C_ - al) / d[a]);
                if (d[a] < 0.0) step = std::min(step, -al / d[a]);
            }
            const auto saved_alpha = alpha_;
            const auto saved_grad = G_;
            const double before = objective();
            for (std::size_t a = 0; a < m; ++a) {
                double& al = alpha_[F[a]];
                al = std::clamp(al + step * d[a], 0.0, C_);
                if (al < 1e-14 * C_) al = 0.0;
                if (al > C_ * (1.0 - 1e-14)) al = C_;
            }
            recompute_gradient();
            if (!(objective() <= before)) {
                alpha_ = saved_alpha;
                G_ = saved_grad;
                return;
            }
            if (step >= 1.0) return;
        }
    }

    /// Gaussian elimination with full pivoting on an augmented k x (k+1) row-major system.
    /// Unknowns with negligible pivots are set to zero. False if the result is not finite.
    static bool solve_dense(std::vector<double> A, std::size_t k, std::vector<double>& x) {
        const std::size_t w = k + 1;
        std::vector<std::size_t> col(k);
        for (std::size_t c = 0; c < k; ++c) col[c] = c;
        double scale = 0.0;
        for (double v : A) scale = std::max(scale, std::abs(v));
        const double eps = 1e-12 * std::max(scale, 1.0);
        std::size_t rank = 0;
        for (; rank < k; ++rank) {
            std::size_t pr = rank;
            std::size_t pc = rank;
            double best = 0.0;
            for (std::size_t r = rank; r < k; ++r) {
                for (std::size_t c = rank; c < k; ++c) {
                    if (std::abs(A[r * w + c]) > best) {
                        best = std::abs(A[r * w + c]);
                        pr = r;
                        pc = c;
                    }
                }
            }
            if (best <= eps) break;
            for (std::size_t c = 0; c < w; ++c) std::swap(A[rank * w + c], A[pr * w + c]);
            for (std::size_t r = 0; r < k; ++r) std::swap(A[r * w + rank], A[r * w + pc]);
            std::swap(col[rank], col[pc]);
            for (std::size_t r = rank + 1; r < k; ++r) {
                const double f = A[r * w + rank] / A[rank * w + rank];
                if (f == 0.0) continue;
                for (std::size_t c = rank; c < w; ++c) A[r * w + c] -= f * A[rank * w + c];
            }
        }
        std::vector<double> z(k, 0.0);
        for (std::size_t r = rank; r-- > 0;) {
            double v = A[r * w + k];
            for (std::size_t c = r + 1; c < rank; ++c) v -= A[r * w + c] * z[c];
            z[r] = v / A[r * w + r];
        }
        x.assign(k, 0.0);
        for (std::size_t c = 0; c < k; ++c) {
            if (!std::isfinite(z[c])) return false;
            x[col[c]] = z[c];
        }
        return true;
    }

    void update_pair(std::size_t i, std::size_t j) {
        const double old_ai = alpha_[i];
        const double old_aj = alpha_[j];
        double& ai = alpha_[i];
        double& aj = alpha_[j];
        if (y_[i] != y_[j]) {
            double quad = q(i, i) + q(j, j) + 2.0 * q(i, j);
            if (quad <= 0.0) quad = kTau;
            const double delta = (-G_[i] - G_[j]) / quad;
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
            double quad = q(i, i) + q(j, j) - 2.0 * q(i, j);
            if (quad <= 0.0) quad = kTau;
            const double delta = (G_[i] - G_[j]) / quad;
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
        const double dai = ai - old_ai;
        const double daj = aj - old_aj;
        for (std::size_t t = 0; t < n_; ++t) G_[t] += q(t, i) * dai + q(t, j) * daj;
    }

    /// Average of y_i G_i over free multipliers, else the midpoint of the feasible interval; b = -that.
    double bias() const {
        double ub = std::numeric_limits<double>::infinity();
        double lb = -std::numeric_limits<double>::infinity();
        double sum_free = 0.0;
        std::size_t n_free = 0;
        for (std::size_t t = 0; t < n_; ++t) {
            const double yg = y_[t] * G_[t];
            if (upper(t)) {
                if (y_[t] == -1) {
                    ub = std::min(ub, yg);
                } else {
                    lb = std::max(lb, yg);
                }
            } else if (lower(t)) {
                if (y_[t] == 1) {
                    ub = std::min(ub, yg);
                } else {
                    lb = std::max(lb, yg);
                }
            } else {
                ++n_free;
                sum_free += yg;
            }
        }
        const double r = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
        return -r;
    }

    std::size_t n_;
    std::vector<int> y_;
    double C_;
    std::vector<double> Q_;
    std::vector<double> alpha_;
    std::vector<double> G_;
};

}  // namespace

DualSolution solve_dual_full(std::span<const Point2> samples, std::span<const int> labels, const Kernel& kernel,
                             const SvmConfig& config) {
    config.validate();
    check_binary_labels(samples, labels);
    SmoSolver solver(samples, labels, kernel, config.C);
    return solver.run(config.kkt_tolerance, config.max_iterations);
}

BinarySvmModel solve_dual(std::span<const Point2> samples, std::span<const int> labels, const Kernel& kernel,
                          const SvmConfig& config) {
    const auto sol = solve_dual_full(samples, labels, kernel, config);
    BinarySvmModel model;
    model.kernel = kernel;
    model.C = config.C;
    model.bias = sol.bias;
    model.iterations = sol.iterations;
    model.converged = sol.converged;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (sol.alphas[i] > config.alpha_floor) {
            model.support_vectors.push_back(samples[i]);
            model.support_labels.push_back(labels[i]);
            model.alphas.push_back(sol.alphas[i]);
        }
    }
    return model;
}

std::vector<double> OvaSvmModel::decision_values(const Point2& x) const {
    const Point2 z = scaling.apply(x);
    std::vector<double> out;
    out.reserve(class_models.size());
    for (const auto& m : class_models) out.push_back(m.decision_value(z));
    return out;
}

int OvaSvmModel::predict(const Point2& x) const {
    const auto values = decision_values(x);
    std::size_t best = 0;
    for (std::size_t c = 1; c < values.size(); ++c) {
        if (values[c] > values[best]) best = c;
    }
    return class_ids.at(best);
}

std::vector<int> OvaSvmModel::predict(std::span<const Point2> xs) const {
    std::vector<int> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(predict(x));
    return out;
}

OvaSvmModel train_ova(std::span<const Point2> samples, std::span<const int> class_ids, const Kernel& kernel,
                      const SvmConfig& config, bool standardize_features) {
    config.validate();
    if (samples.size() != class_ids.size()) throw std::invalid_argument("train_ova: one class id per sample is required");
    const std::set<int> classes(class_ids.begin(), class_ids.end());
    if (classes.size() < 2) throw TrainingError("one-vs-all training needs at least 2 classes");

    OvaSvmModel model;
    model.class_ids.assign(classes.begin(), classes.end());
    model.kernel = kernel;
    model.C = config.C;
    if (standardize_features) model.scaling = fit_scaling(samples);
    const auto scaled = model.scaling.apply(samples);

    model.class_models.resize(model.class_ids.size());
    parallel_for(model.class_ids.size(), config.num_threads, [&](std::size_t c) {
        std::vector<int> binary(class_ids.size());
        for (std::size_t i = 0; i < class_ids.size(); ++i) binary[i] = class_ids[i] == model.class_ids[c] ? 1 : -1;
        model.class_models[c] = solve_dual(scaled, binary, kernel, config);
    });
    return model;
}

int predict_ova(const OvaSvmModel& model, const Point2& x) { return model.predict(x); }

}  // namespace sensorassoc
