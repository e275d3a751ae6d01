#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "somnograph/error.hpp"

namespace somnograph {

// AASM stages with fixed ordinals. The ordinal doubles as the row/column
// index in every 5x5 matrix in the code base.
enum class SleepStage : int { Wake = 0, N1 = 1, N2 = 2, N3 = 3, Rem = 4 };

inline constexpr int kNumStages = 5;

inline constexpr std::array<const char*, kNumStages> kStageNames = {"W", "N1", "N2", "N3",
                                                                    "REM"};

inline int stage_index(SleepStage s) { return static_cast<int>(s); }

inline SleepStage stage_from_index(int i) {
  if (i < 0 || i >= kNumStages) throw ArgumentError("stage index out of range");
  return static_cast<SleepStage>(i);
}

inline const char* stage_name(SleepStage s) { return kStageNames[stage_index(s)]; }

inline SleepStage parse_stage(const std::string& token) {
  for (int i = 0; i < kNumStages; ++i)
    if (token == kStageNames[i]) return static_cast<SleepStage>(i);
  throw ParseError("unknown sleep stage token '" + token + "'");
}

// One-hot embedding in R^5 (a vertex of the probability simplex).
inline Eigen::VectorXd stage_one_hot(SleepStage s) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(kNumStages);
  y[stage_index(s)] = 1.0;
  return y;
}

using Hypnogram = std::vector<SleepStage>;

// Sidecar format: one stage token per line, line i = epoch i.
Hypnogram read_hypnogram(const std::string& path);
void write_hypnogram(const Hypnogram& stages, const std::string& path);

}  // namespace somnograph
