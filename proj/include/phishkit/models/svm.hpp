#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "types.hpp"

namespace phishkit {

struct SvmTrainInfo {
    std::vector<double> alphas;  // one per training row, in input order
    std::uint64_t iterations = 0;
};

// "scale" heuristic: 1 / (dim * mean per-feature variance).
inline double svm_scale_gamma(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size(), dim = rows[0].size();
    double var_sum = 0.0;
    for (std::size_t f = 0; f < dim; ++f) {
        double mean = 0.0;
        for (const auto& r : rows) mean += r[f];
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (const auto& r : rows) var += (r[f] - mean) * (r[f] - mean);
        var_sum += var / static_cast<double>(n);
    }
    const double mean_var = var_sum / static_cast<double>(dim);
    if (mean_var <= 0.0) return 1.0 / static_cast<double>(dim);
    return 1.0 / (static_cast<double>(dim) * mean_var);
}

// Soft-margin dual via SMO over maximal-violating pairs with second-order
// working-set selection. With E_i = f(x_i) - b - y_i, a bias b satisfying
// every KKT condition within tol exists exactly when
//   max over I_low of E - min over I_up of E <= tol,
// where I_up = {alpha<C, y=+1} + {alpha>0, y=-1} and I_low is the mirror
// set; the loop runs until that gap closes and b is the midpoint. Exceeding
// the iteration budget refuses the model rather than returning a partial one.
inline TrainedModel train_svm(const std::vector<FeatureVector>& X, const std::vector<int>& y,
                              const TrainConfig& cfg, SvmTrainInfo* info = nullptr) {
    detail::check_training_input(X, y, true);
    const auto rows = detail::densify(X);
    const std::size_t n = rows.size();
    const double C = cfg.svm_C;
    const double tol = cfg.svm_tol;

    const double gamma = cfg.svm_kernel == SvmKernel::rbf
                             ? (cfg.svm_gamma > 0.0 ? cfg.svm_gamma : svm_scale_gamma(rows))
                             : 0.0;

    std::vector<double> yv(n);
    for (std::size_t i = 0; i < n; ++i) yv[i] = y[i] == 1 ? 1.0 : -1.0;

    // cache the Gram matrix at desk scale, recompute entries beyond it
    const bool cache = n <= 3000;
    std::vector<double> K;
    if (cache) {
        K.assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                K[i * n + j] = K[j * n + i] = kernel_value(cfg.svm_kernel, gamma, rows[i], rows[j]);
    }
    const auto kval = [&](std::size_t i, std::size_t j) {
        return cache ? K[i * n + j] : kernel_value(cfg.svm_kernel, gamma, rows[i], rows[j]);
    };

    std::vector<double> alpha(n, 0.0);
    std::vector<double> err(n);  // E_i = sum_j alpha_j y_j K(j,i) - y_i
    for (std::size_t i = 0; i < n; ++i) err[i] = -yv[i];

    const auto in_up = [&](std::size_t i) {
        return yv[i] > 0.0 ? alpha[i] < C - 1e-12 : alpha[i] > 1e-12;
    };
    const auto in_low = [&](std::size_t i) {
        return yv[i] > 0.0 ? alpha[i] > 1e-12 : alpha[i] < C - 1e-12;
    };

    std::uint64_t iterations = 0;
    while (true) {
        if (++iterations > cfg.svm_max_iterations)
            throw std::runtime_error("svm: SMO failed to converge within the iteration budget");

        std::size_t i_sel = n;
        double e_min_up = std::numeric_limits<double>::infinity();
        double e_max_low = -std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t) {
            if (in_up(t) && err[t] < e_min_up) {
                e_min_up = err[t];
                i_sel = t;
            }
            if (in_low(t)) e_max_low = std::max(e_max_low, err[t]);
        }
        if (i_sel == n || e_max_low - e_min_up <= tol) break;

        // second index: largest second-order gain among I_low above the gap
        const std::size_t i = i_sel;
        std::size_t j_sel = n;
        double best_gain = -1.0;
        const double kii = kval(i, i);
        for (std::size_t t = 0; t < n; ++t) {
            if (t == i || !in_low(t)) continue;
            const double diff = err[t] - err[i];
            if (diff <= 0.0) continue;
            const double eta = std::max(kii + kval(t, t) - 2.0 * kval(i, t), 1e-12);
            const double gain = diff * diff / eta;
            if (gain > best_gain) {
                best_gain = gain;
                j_sel = t;
            }
        }
        if (j_sel == n)
            throw std::runtime_error("svm: SMO stalled with an open KKT gap");
        const std::size_t j = j_sel;

        const double ai_old = alpha[i], aj_old = alpha[j];
        double lo, hi;
        if (yv[i] != yv[j]) {
            lo = std::max(0.0, aj_old - ai_old);
            hi = std::min(C, C + aj_old - ai_old);
        } else {
            lo = std::max(0.0, ai_old + aj_old - C);
            hi = std::min(C, ai_old + aj_old);
        }
        const double eta2 = 2.0 * kval(i, j) - kii - kval(j, j);
        if (lo >= hi || eta2 >= 0.0)
            throw std::runtime_error("svm: degenerate working pair in SMO");
        double aj = aj_old - yv[j] * (err[i] - err[j]) / eta2;
        aj = std::clamp(aj, lo, hi);
        const double ai = ai_old + yv[i] * yv[j] * (aj_old - aj);
        const double di = ai - ai_old, dj = aj - aj_old;
        if (std::abs(dj) < 1e-14)
            throw std::runtime_error("svm: SMO cannot make numerical progress");
        alpha[i] = ai;
        alpha[j] = aj;
        for (std::size_t t = 0; t < n; ++t)
            err[t] += yv[i] * di * kval(i, t) + yv[j] * dj * kval(j, t);
    }

    // feasible bias: midpoint of the admissible window
    double e_min_up = std::numeric_limits<double>::infinity();
    double e_max_low = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
        if (in_up(t)) e_min_up = std::min(e_min_up, err[t]);
        if (in_low(t)) e_max_low = std::max(e_max_low, err[t]);
    }
    const double b = -(e_min_up + e_max_low) / 2.0;

    SvmModel m;
    m.kernel = cfg.svm_kernel;
    m.gamma = gamma;
    m.C = C;
    m.b = b;
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] > 1e-8) {
            m.support_vectors.push_back(rows[i]);
            m.alpha_y.push_back(alpha[i] * yv[i]);
        }
    }
    if (info) {
        info->alphas = alpha;
        info->iterations = iterations;
    }

    TrainedModel out;
    out.impl = std::move(m);
    out.feature_dim = rows[0].size();
    return out;
}

}  // namespace phishkit
