#include "sarinv/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sarinv {

namespace {

std::vector<double> abs_errors(const std::vector<double>& preds, const std::vector<double>& truths,
                               bool circular) {
    if (preds.size() != truths.size() || preds.empty()) {
        throw std::invalid_argument("metrics: prediction/truth arrays must be equal and non-empty");
    }
    std::vector<double> e(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) e[i] = angular_error(preds[i], truths[i], circular);
    return e;
}

double lower_median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    return values[(values.size() - 1) / 2];
}

}  // namespace

double mae(const std::vector<double>& preds, const std::vector<double>& truths, bool circular) {
    const auto e = abs_errors(preds, truths, circular);
    double sum = 0.0;
    for (double v : e) sum += v;
    return sum / static_cast<double>(e.size());
}

double mape(const std::vector<double>& preds, const std::vector<double>& truths, bool circular) {
    const auto e = abs_errors(preds, truths, circular);
    double sum = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        sum += e[i] / std::max(std::abs(truths[i]), 1.0);
    }
    return sum / static_cast<double>(e.size());
}

double rmse(const std::vector<double>& preds, const std::vector<double>& truths, bool circular) {
    const auto e = abs_errors(preds, truths, circular);
    double sum = 0.0;
    for (double v : e) sum += v * v;
    return std::sqrt(sum / static_cast<double>(e.size()));
}

double medae(const std::vector<double>& preds, const std::vector<double>& truths, bool circular) {
    return lower_median(abs_errors(preds, truths, circular));
}

int count_outliers(const std::vector<double>& per_angle_abs_errors) {
    int n = 0;
    for (double e : per_angle_abs_errors) {
        if (e > 50.0) ++n;
    }
    return n;
}

MetricsRecord compute_metrics(const std::vector<EvalEpisode>& episodes, bool circular_beta) {
    if (episodes.empty()) throw std::invalid_argument("compute_metrics: no episodes");
    std::vector<double> pa, ta, pb, tb;
    double seconds = 0.0, steps = 0.0;
    for (const auto& ep : episodes) {
        pa.push_back(ep.estimate.alpha);
        ta.push_back(ep.truth.alpha);
        pb.push_back(ep.estimate.beta);
        tb.push_back(ep.truth.beta);
        seconds += ep.seconds;
        steps += ep.steps;
    }
    MetricsRecord m;
    m.n = static_cast<int>(episodes.size());
    m.mae_alpha = mae(pa, ta, false);
    m.mae_beta = mae(pb, tb, circular_beta);
    m.mae_mean = 0.5 * (m.mae_alpha + m.mae_beta);

    std::vector<double> pooled_err, pooled_truth;
    for (std::size_t i = 0; i < pa.size(); ++i) {
        pooled_err.push_back(angular_error(pa[i], ta[i], false));
        pooled_truth.push_back(ta[i]);
        pooled_err.push_back(angular_error(pb[i], tb[i], circular_beta));
        pooled_truth.push_back(tb[i]);
    }
    double mape_sum = 0.0, sq_sum = 0.0;
    for (std::size_t i = 0; i < pooled_err.size(); ++i) {
        mape_sum += pooled_err[i] / std::max(std::abs(pooled_truth[i]), 1.0);
        sq_sum += pooled_err[i] * pooled_err[i];
    }
    m.mape = mape_sum / static_cast<double>(pooled_err.size());
    m.rmse = std::sqrt(sq_sum / static_cast<double>(pooled_err.size()));
    m.medae = lower_median(pooled_err);
    m.outliers = count_outliers(pooled_err);
    m.runtime_s = seconds / static_cast<double>(episodes.size());
    m.mean_steps = steps / static_cast<double>(episodes.size());
    return m;
}

std::string metrics_csv_header() {
    return "method,mae_alpha,mae_beta,mae_mean,mape,rmse,medae,outliers,n,runtime_s,mean_steps";
}

std::string metrics_csv_row(const std::string& label, const MetricsRecord& m) {
    std::ostringstream ss;
    ss.precision(17);
    ss << label << ',' << m.mae_alpha << ',' << m.mae_beta << ',' << m.mae_mean << ',' << m.mape << ','
       << m.rmse << ',' << m.medae << ',' << m.outliers << ',' << m.n << ',' << m.runtime_s << ','
       << m.mean_steps;
    return ss.str();
}

}  // namespace sarinv
