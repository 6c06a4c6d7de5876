#pragma once

// Bubbles: 6-connected regions where the field has the sign opposite to a
// reference sign, with per-component statistics, cubical Euler
// characteristic, and an event timeline across snapshots.

#include <Eigen/Core>
#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "kg/field.hpp"

namespace kg {

struct LabelGrid {
  int n = 0;
  std::vector<int> labels;  ///< 0 background, 1..count, x-fastest like Field3D
  int count = 0;
  double epsilon = 0;
  int reference_sign = 1;

  int operator()(int i, int j, int k) const { return labels[i + std::size_t(n) * (j + std::size_t(n) * k)]; }
};

/// +1 or -1 from the sign of the integral of psi0 (+1 when it vanishes).
int reference_sign_of(const Field3D& psi0);

/// 1e-6 max|psi0|, the default threshold.
double default_epsilon(const Field3D& psi0);

/// Marks voxels with sign(psi) = -reference_sign and |psi| > epsilon and
/// labels 6-connected components.  Ids are ordered by each component's
/// first voxel in storage order.
LabelGrid detect_sign_regions(const Field3D& psi, double epsilon, int reference_sign);

struct BubbleStats {
  int id = 0;
  long volume_voxels = 0;
  double volume = 0;
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  std::array<int, 3> bbox_lo{0, 0, 0};
  std::array<int, 3> bbox_hi{0, 0, 0};
  int euler_char = 0;
};

/// V - E + F - C of the union of closed unit cubes, one per marked voxel.
std::vector<BubbleStats> component_stats(const LabelGrid& grid, double dx);

enum class EventKind { formation, merge, split, topology_change, disappearance };

std::string to_string(EventKind k);

struct BubbleEvent {
  double t = 0;
  EventKind kind = EventKind::formation;
  std::vector<int> ids;
  bool ambiguous = false;  ///< overlap tie resolved by lowest id
};

struct SnapshotBubbles {
  double t = 0;
  std::vector<BubbleStats> bubbles;  ///< ids are tracked ids
};

struct BubbleTimeline {
  std::vector<SnapshotBubbles> snapshots;
  std::vector<BubbleEvent> events;

  /// Time of the first event of a kind, or NaN.
  double first(EventKind k) const;
};

/// Sequential fold over time-ordered snapshots.  Components are matched to
/// the previous snapshot by voxel overlap and keep a track id across time.
class TimelineBuilder {
 public:
  void add(double t, const LabelGrid& grid, const std::vector<BubbleStats>& stats);
  const BubbleTimeline& timeline() const { return timeline_; }

 private:
  BubbleTimeline timeline_;
  std::vector<int> prev_labels_;
  std::vector<int> prev_track_;  ///< track id per previous component (index label-1)
  std::vector<int> prev_euler_;
  double prev_t_ = -1;
  int next_track_ = 1;
};

/// Detects, measures and tracks all snapshots; labeling runs in parallel
/// over batches of snapshots fetched through `load(index)`.
BubbleTimeline build_timeline(std::size_t count, const std::function<Field3D(std::size_t)>& load,
                              double epsilon, int reference_sign);
BubbleTimeline build_timeline(const std::vector<Field3D>& snapshots, double epsilon, int reference_sign);

/// One JSON object per snapshot, each followed by its event records.
void write_timeline_jsonl(const BubbleTimeline& tl, std::ostream& out);

}  // namespace kg
