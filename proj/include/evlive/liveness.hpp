// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "evlive/ocular.hpp"
#include "evlive/window_stats.hpp"

namespace evlive {

enum class Verdict { genuine, replay };

std::string_view to_string(Verdict v) noexcept;
Verdict verdict_from_string(std::string_view s);

struct LivenessDecision {
  Verdict verdict = Verdict::replay;
  double score = 0;  // higher = more genuine
};

struct LabeledFeatures {
  ClipFeatures features;
  Verdict label = Verdict::genuine;
};

struct TrainOptions {
  int iterations = 2000;
  double step = 0.5;
  double l2 = 1e-3;
  double threshold = 0.5;
};

/// Linear-logistic model over z-scored clip aggregates.
struct FeatureClassifier {
  std::vector<std::string> feature_names;
  Eigen::VectorXd means;
  Eigen::VectorXd stds;
  Eigen::VectorXd weights;
  double bias = 0;
  double threshold = 0.5;
  /// Features present in training but dropped for zero variance.
  std::vector<std::string> dropped;

  /// Raw feature values (in `feature_names` order) for one clip.
  Eigen::VectorXd extract(const ClipFeatures& f) const;
  double score(const Eigen::VectorXd& raw) const;
};

/// Full-batch gradient descent from zero with a fixed schedule, so the result
/// depends only on the input order. Needs at least one sample per class.
FeatureClassifier train_classifier(std::span<const LabeledFeatures> samples,
                                   const TrainOptions& options = {});

LivenessDecision classify(const FeatureClassifier& clf, const ClipFeatures& features);

enum class ChallengeState { awaiting, movement_ok, passed, failed };
enum class ChallengeReason { ok, no_movement, late_movement, wrong_movement, liveness_failed };

std::string_view to_string(ChallengeState s) noexcept;
std::string_view to_string(ChallengeReason r) noexcept;

inline constexpr Micros kDefaultDeadlineUs = 3'000'000;

struct ChallengeSession {
  MovementLabel challenge = MovementLabel::blink;
  Micros issued_at = 0;
  Micros deadline = kDefaultDeadlineUs;
  ChallengeState state = ChallengeState::awaiting;

  static ChallengeSession issue(MovementLabel challenge, Micros issued_at,
                                Micros response_time = kDefaultDeadlineUs);
};

struct ChallengeResult {
  bool passed = false;
  ChallengeReason reason = ChallengeReason::no_movement;
  ChallengeSession session;  // final state
};

/// Passes iff a segment of the challenged kind starts within
/// [issued_at, deadline] and the liveness verdict is genuine. Movement is
/// checked first, so the reason names the first failing condition.
ChallengeResult run_challenge(ChallengeSession session,
                              std::span<const TemporalSegment> movements,
                              const LivenessDecision& liveness);

}  // namespace evlive
