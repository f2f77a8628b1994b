#pragma once

#include "sicvpr/simdata.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sicvpr {

// One matcher output for the evaluation: the retrieved reference and the
// confidence used for thresholding.
struct ScoredMatch {
  Index query = 0;
  Index match_index = 0;
  double confidence = 0.0;
};

struct PRPoint {
  double threshold = 0.0;
  double precision = 1.0;
  double recall = 0.0;
  Index tp = 0;
  Index fp = 0;
  Index fn = 0;
};

struct ExtendedPrecision {
  double ep = 0.0;
  double p_r0 = 0.0;
  double r_p100 = 0.0;
};

struct TimingStats {
  Index frames = 0;
  double mean_ms = 0.0;
  double median_ms = 0.0;
  double p95_ms = 0.0;
  double max_ms = 0.0;
};

struct EvalReport {
  std::vector<PRPoint> pr_points;  // descending threshold
  double auc = 0.0;
  double ep = 0.0;
  double p_r0 = 0.0;
  double r_p100 = 0.0;
  double top1_accuracy = 0.0;
  std::optional<TimingStats> timing;
};

// Sweeps every distinct confidence, highest first. At threshold t the
// decisions with confidence >= t are accepted: TP when within the allowance
// of the ground truth, FP otherwise. Labelled queries not accepted as TP are
// FN; unlabelled queries are ignored.
std::vector<PRPoint> pr_curve(std::span<const ScoredMatch> decisions, const GroundTruth& gt);

// Trapezoidal area over recall-ascending points, anchored at
// (recall 0, precision of the first point).
double auc(std::span<const PRPoint> points);

ExtendedPrecision extended_precision(std::span<const PRPoint> points);

// Fraction of labelled queries whose decision lies within the allowance.
double top1_accuracy(std::span<const ScoredMatch> decisions, const GroundTruth& gt);

EvalReport evaluate(std::span<const ScoredMatch> decisions, const GroundTruth& gt);

TimingStats summarize_timing(std::span<const double> per_frame_ms);

void write_pr_csv(std::span<const PRPoint> points, const std::filesystem::path& path);
// key=value lines.
void write_summary(const EvalReport& report, const std::filesystem::path& path);
// Header plus one data row, for aggregation across runs.
void write_summary_csv(const EvalReport& report, const std::filesystem::path& path);

}  // namespace sicvpr
