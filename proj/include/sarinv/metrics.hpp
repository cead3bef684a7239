#pragma once

#include "sarinv/agent.hpp"

#include <string>
#include <vector>

namespace sarinv {

/// Mean absolute deviation; circular=true measures along the shorter arc.
double mae(const std::vector<double>& preds, const std::vector<double>& truths, bool circular);

/// Mean absolute percentage error with the denominator guarded by
/// max(|truth|, 1) degree so zero-valued truths stay finite.
double mape(const std::vector<double>& preds, const std::vector<double>& truths, bool circular);

double rmse(const std::vector<double>& preds, const std::vector<double>& truths, bool circular);

/// Median absolute deviation; lower median for even counts.
double medae(const std::vector<double>& preds, const std::vector<double>& truths, bool circular);

/// Entries strictly exceeding 50 degrees.
int count_outliers(const std::vector<double>& per_angle_abs_errors);

struct MetricsRecord {
    double mae_alpha = 0.0;
    double mae_beta = 0.0;
    double mae_mean = 0.0;
    double mape = 0.0;   // pooled over both angles
    double rmse = 0.0;   // pooled
    double medae = 0.0;  // pooled
    int outliers = 0;    // per-angle errors > 50 deg
    int n = 0;
    double runtime_s = 0.0;  // mean wall time per inversion
    double mean_steps = 0.0;
};

/// Aggregates evaluation episodes; incidence errors are linear, azimuth errors
/// circular when `circular_beta`. MAPE/RMSE/MedAE pool the two angle streams.
MetricsRecord compute_metrics(const std::vector<EvalEpisode>& episodes, bool circular_beta = true);

std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& label, const MetricsRecord& m);

}  // namespace sarinv
