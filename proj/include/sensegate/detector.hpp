#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <vector>

#include "sensegate/error.hpp"
#include "sensegate/rng.hpp"
#include "sensegate/stream.hpp"

namespace sensegate {

// Confidence threshold applied to detector scores. Classification is strict:
// a frame is predicted FOI iff score > value.
struct Threshold {
  double value = 0.5;

  void validate() const {
    if (!(value >= 0.0 && value <= 1.0))
      throw ConfigError("Threshold.value: must lie in [0,1]");
  }
};

// Pluggable source of per-frame objectness-confidence scores (the per-frame
// maximum after the NMS-free reduction).
//
//   Ideal      1.0 for FOI frames, 0.0 for background.
//   Calibrated class-conditional Gaussian in latent space, mapped to [0,1] by
//              the logistic function. AUC has the closed binormal form, so a
//              model can be built for any target AUC.
//   Confusion  emits only {0,1}: 1.0 with probability tpr (FOI) / fpr
//              (background). Thresholds in (0,1) are irrelevant for it.
//   Replay     passes through the score already carried by the frame.
struct ScoreModel {
  enum class Kind { Ideal, Calibrated, Confusion, Replay };

  Kind kind = Kind::Ideal;
  double mu_bg = 0.0, sigma_bg = 1.0;
  double mu_foi = 0.0, sigma_foi = 1.0;
  double tpr = 1.0, fpr = 0.0;

  static ScoreModel ideal() { return {}; }

  static ScoreModel calibrated(double mu_bg, double sigma_bg, double mu_foi, double sigma_foi) {
    ScoreModel m;
    m.kind = Kind::Calibrated;
    m.mu_bg = mu_bg;
    m.sigma_bg = sigma_bg;
    m.mu_foi = mu_foi;
    m.sigma_foi = sigma_foi;
    m.validate();
    return m;
  }

  static ScoreModel confusion(double tpr, double fpr) {
    ScoreModel m;
    m.kind = Kind::Confusion;
    m.tpr = tpr;
    m.fpr = fpr;
    m.validate();
    return m;
  }

  static ScoreModel replay() {
    ScoreModel m;
    m.kind = Kind::Replay;
    return m;
  }

  void validate() const {
    switch (kind) {
      case Kind::Calibrated:
        if (!(sigma_bg > 0.0) || !(sigma_foi > 0.0))
          throw ConfigError("ScoreModel: sigma_bg and sigma_foi must be > 0");
        if (!(mu_foi > mu_bg)) throw ConfigError("ScoreModel: mu_foi must exceed mu_bg");
        break;
      case Kind::Confusion:
        if (!(tpr >= 0.0 && tpr <= 1.0)) throw ConfigError("ScoreModel.tpr: must lie in [0,1]");
        if (!(fpr >= 0.0 && fpr <= 1.0)) throw ConfigError("ScoreModel.fpr: must lie in [0,1]");
        break;
      case Kind::Ideal:
      case Kind::Replay:
        break;
    }
  }
};

namespace detail {

// Acklam's rational approximation of the standard normal quantile,
// |relative error| < 1.15e-9 — plenty for placing class means.
inline double probit(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("probit: p must lie in (0,1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

} // namespace detail

// Symmetric calibrated model (equal unit sigmas) hitting a target AUC:
// mu_foi - mu_bg = sqrt(2) * probit(auc).
inline ScoreModel calibrated_for_auc(double auc) {
  if (!(auc > 0.5 && auc < 1.0))
    throw ConfigError("calibrated_for_auc: target AUC must lie in (0.5, 1)");
  const double half_gap = detail::probit(auc) * std::numbers::sqrt2 / 2.0;
  return ScoreModel::calibrated(-half_gap, 1.0, half_gap, 1.0);
}

// One score draw for one frame. Pure given the rng handle.
inline double score_frame(const Frame& frame, const ScoreModel& model, Rng& rng) {
  switch (model.kind) {
    case ScoreModel::Kind::Ideal:
      return frame.truth == TruthClass::Foi ? 1.0 : 0.0;
    case ScoreModel::Kind::Calibrated: {
      const bool foi = frame.truth == TruthClass::Foi;
      const double latent = foi ? rng.normal(model.mu_foi, model.sigma_foi)
                                : rng.normal(model.mu_bg, model.sigma_bg);
      return detail::logistic(latent);
    }
    case ScoreModel::Kind::Confusion: {
      const double p = frame.truth == TruthClass::Foi ? model.tpr : model.fpr;
      return rng.bernoulli(p) ? 1.0 : 0.0;
    }
    case ScoreModel::Kind::Replay:
      if (!frame.score)
        throw std::invalid_argument("score_frame: replay model needs a frame score, frame " +
                                    std::to_string(frame.index));
      return *frame.score;
  }
  throw std::logic_error("score_frame: unreachable");
}

// Strict comparison: only scores exceeding the threshold are predicted FOI.
inline int classify(double score, Threshold threshold) {
  return score > threshold.value ? 1 : 0;
}

struct LabeledScore {
  TruthClass truth;
  double score;
};

struct RocPoint {
  double threshold;
  double fpr;
  double tpr;
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

// ROC over labeled scores. One step per distinct score (ties grouped); the
// point at threshold s counts predictions with score >= s, so the curve runs
// from the (0,0) anchor down to (1,1). AUC by trapezoidal integration.
inline RocCurve compute_roc(std::span<const LabeledScore> data) {
  std::uint64_t n_pos = 0, n_neg = 0;
  for (const auto& d : data) (d.truth == TruthClass::Foi ? n_pos : n_neg) += 1;
  if (n_pos == 0 || n_neg == 0)
    throw std::invalid_argument("compute_roc: need at least one FOI and one background entry");

  std::vector<LabeledScore> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const LabeledScore& a, const LabeledScore& b) { return a.score > b.score; });

  RocCurve curve;
  curve.points.push_back({1.0, 0.0, 0.0});
  std::uint64_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double s = sorted[i].score;
    while (i < sorted.size() && sorted[i].score == s) {
      (sorted[i].truth == TruthClass::Foi ? tp : fp) += 1;
      ++i;
    }
    curve.points.push_back({s, static_cast<double>(fp) / static_cast<double>(n_neg),
                            static_cast<double>(tp) / static_cast<double>(n_pos)});
  }

  double auc = 0.0;
  for (std::size_t j = 1; j < curve.points.size(); ++j) {
    const auto& lo = curve.points[j - 1];
    const auto& hi = curve.points[j];
    auc += (hi.fpr - lo.fpr) * (hi.tpr + lo.tpr) * 0.5;
  }
  curve.auc = auc;
  return curve;
}

inline void write_roc_csv(const std::filesystem::path& path, const RocCurve& curve) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open ROC file for writing: " + path.string());
  out << "threshold,fpr,tpr\n";
  char buf[128];
  for (const RocPoint& p : curve.points) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g\n", p.threshold, p.fpr, p.tpr);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "# auc=%.9g\n", curve.auc);
  out << buf;
  if (!out) throw IoError("failed writing ROC file: " + path.string());
}

} // namespace sensegate
