// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "evlive/liveness.hpp"

#include <algorithm>
#include <cmath>

#include "evlive/error.hpp"

namespace evlive {

namespace {

double logistic(double z) {
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace

std::string_view to_string(Verdict v) noexcept {
  return v == Verdict::genuine ? "genuine" : "replay";
}

Verdict verdict_from_string(std::string_view s) {
  if (s == "genuine") return Verdict::genuine;
  if (s == "replay") return Verdict::replay;
  throw Error(ErrorCode::ParseError, "unknown verdict '" + std::string(s) + "'");
}

Eigen::VectorXd FeatureClassifier::extract(const ClipFeatures& f) const {
  const auto all = feature_vector(f);
  Eigen::VectorXd x(static_cast<Eigen::Index>(feature_names.size()));
  for (std::size_t i = 0; i < feature_names.size(); ++i) {
    const auto it = std::find(kFeatureNames.begin(), kFeatureNames.end(), feature_names[i]);
    if (it == kFeatureNames.end()) {
      throw Error(ErrorCode::MissingFeature, "unknown feature '" + feature_names[i] + "'");
    }
    const auto& v = all[static_cast<std::size_t>(it - kFeatureNames.begin())];
    if (!v) throw Error(ErrorCode::MissingFeature, "clip lacks feature '" + feature_names[i] + "'");
    x(static_cast<Eigen::Index>(i)) = *v;
  }
  return x;
}

double FeatureClassifier::score(const Eigen::VectorXd& raw) const {
  const Eigen::VectorXd z = ((raw - means).array() / stds.array()).matrix();
  return logistic(weights.dot(z) + bias);
}

FeatureClassifier train_classifier(std::span<const LabeledFeatures> samples,
                                   const TrainOptions& options) {
  const auto n_genuine = std::count_if(samples.begin(), samples.end(), [](const LabeledFeatures& s) {
    return s.label == Verdict::genuine;
  });
  if (n_genuine == 0 || n_genuine == static_cast<long>(samples.size())) {
    throw Error(ErrorCode::OneClassOnly, "training needs genuine and replay samples");
  }
  if (!(options.threshold >= 0 && options.threshold <= 1)) {
    throw Error(ErrorCode::InvalidArgument, "threshold must lie in [0, 1]");
  }
  const auto n = static_cast<Eigen::Index>(samples.size());

  // Candidate features: those present in every training sample.
  std::vector<std::size_t> present;
  for (std::size_t k = 0; k < kFeatureNames.size(); ++k) {
    const bool everywhere = std::all_of(samples.begin(), samples.end(), [&](const LabeledFeatures& s) {
      return feature_vector(s.features)[k].has_value();
    });
    if (everywhere) present.push_back(k);
  }

  FeatureClassifier clf;
  clf.threshold = options.threshold;
  std::vector<Eigen::VectorXd> columns;
  std::vector<double> means, stds;
  for (std::size_t k : present) {
    Eigen::VectorXd col(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      col(i) = *feature_vector(samples[static_cast<std::size_t>(i)].features)[k];
    }
    const double mean = col.mean();
    const double sd = std::sqrt((col.array() - mean).square().mean());
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
      clf.dropped.emplace_back(kFeatureNames[k]);
      continue;
    }
    clf.feature_names.emplace_back(kFeatureNames[k]);
    columns.push_back(col);
    means.push_back(mean);
    stds.push_back(sd);
  }

  const auto d = static_cast<Eigen::Index>(columns.size());
  clf.means = Eigen::Map<Eigen::VectorXd>(means.data(), d);
  clf.stds = Eigen::Map<Eigen::VectorXd>(stds.data(), d);
  Eigen::MatrixXd z(n, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    z.col(j) = (columns[static_cast<std::size_t>(j)].array() - clf.means(j)) / clf.stds(j);
  }
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y(i) = samples[static_cast<std::size_t>(i)].label == Verdict::genuine ? 1.0 : 0.0;
  }

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double b = 0;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (int it = 0; it < options.iterations; ++it) {
    Eigen::VectorXd p = (z * w).array() + b;
    for (Eigen::Index i = 0; i < n; ++i) p(i) = logistic(p(i));
    const Eigen::VectorXd r = p - y;
    const Eigen::VectorXd grad_w = inv_n * (z.transpose() * r) + options.l2 * w;
    const double grad_b = inv_n * r.sum();
    w -= options.step * grad_w;
    b -= options.step * grad_b;
  }
  clf.weights = w;
  clf.bias = b;
  return clf;
}

LivenessDecision classify(const FeatureClassifier& clf, const ClipFeatures& features) {
  LivenessDecision d;
  d.score = clf.score(clf.extract(features));
  d.verdict = d.score >= clf.threshold ? Verdict::genuine : Verdict::replay;
  return d;
}

std::string_view to_string(ChallengeState s) noexcept {
  switch (s) {
    case ChallengeState::awaiting: return "awaiting";
    case ChallengeState::movement_ok: return "movement_ok";
    case ChallengeState::passed: return "passed";
    case ChallengeState::failed: return "failed";
  }
  return "failed";
}

std::string_view to_string(ChallengeReason r) noexcept {
  switch (r) {
    case ChallengeReason::ok: return "ok";
    case ChallengeReason::no_movement: return "no_movement";
    case ChallengeReason::late_movement: return "late_movement";
    case ChallengeReason::wrong_movement: return "wrong_movement";
    case ChallengeReason::liveness_failed: return "liveness_failed";
  }
  return "no_movement";
}

ChallengeSession ChallengeSession::issue(MovementLabel challenge, Micros issued_at,
                                         Micros response_time) {
  if (response_time <= 0) {
    throw Error(ErrorCode::InvalidArgument, "challenge deadline must follow its issue time");
  }
  return {challenge, issued_at, issued_at + response_time, ChallengeState::awaiting};
}

ChallengeResult run_challenge(ChallengeSession session,
                              std::span<const TemporalSegment> movements,
                              const LivenessDecision& liveness) {
  if (session.deadline <= session.issued_at) {
    throw Error(ErrorCode::InvalidArgument, "challenge deadline must follow its issue time");
  }
  bool in_time = false;
  bool late = false;
  bool other = false;
  for (const TemporalSegment& m : movements) {
    const bool inside = m.onset >= session.issued_at && m.onset <= session.deadline;
    if (m.label == session.challenge) {
      in_time = in_time || inside;
      late = late || m.onset > session.deadline;
    } else {
      other = other || inside;
    }
  }

  ChallengeResult result;
  if (!in_time) {
    result.reason = late    ? ChallengeReason::late_movement
                    : other ? ChallengeReason::wrong_movement
                            : ChallengeReason::no_movement;
    session.state = ChallengeState::failed;
  } else {
    session.state = ChallengeState::movement_ok;
    if (liveness.verdict == Verdict::genuine) {
      result.passed = true;
      result.reason = ChallengeReason::ok;
      session.state = ChallengeState::passed;
    } else {
      result.reason = ChallengeReason::liveness_failed;
      session.state = ChallengeState::failed;
    }
  }
  result.session = session;
  return result;
}

}  // namespace evlive
