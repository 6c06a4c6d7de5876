#include "kg/bubbles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "kg/errors.hpp"
#include "kg/parallel.hpp"

namespace kg {

namespace {

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

int reference_sign_of(const Field3D& psi0) { return integrate_box(psi0) < 0 ? -1 : 1; }

double default_epsilon(const Field3D& psi0) {
  const double m = psi0.max_abs();
  return m > 0 ? 1e-6 * m : 1e-300;
}

LabelGrid detect_sign_regions(const Field3D& psi, double epsilon, int reference_sign) {
  if (!(epsilon > 0)) throw DomainError("bubbles: epsilon must be positive");
  if (reference_sign != 1 && reference_sign != -1) throw DomainError("bubbles: reference sign must be +1 or -1");
  LabelGrid g;
  g.n = psi.n;
  g.epsilon = epsilon;
  g.reference_sign = reference_sign;
  const int n = psi.n;
  const std::size_t total = psi.size();
  std::vector<char> marked(total, 0);
  for (std::size_t p = 0; p < total; ++p) {
    const double v = psi.values[p] * -reference_sign;
    marked[p] = v > epsilon;
  }
  // Union-find over voxel indices, linking each marked voxel to its marked
  // neighbours at -x, -y, -z.
  DisjointSet ds(total);
  const std::size_t sy = n, sz = std::size_t(n) * n;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::size_t p = psi.index(i, j, k);
        if (!marked[p]) continue;
        if (i > 0 && marked[p - 1]) ds.unite(int(p), int(p - 1));
        if (j > 0 && marked[p - sy]) ds.unite(int(p), int(p - sy));
        if (k > 0 && marked[p - sz]) ds.unite(int(p), int(p - sz));
      }
  // Roots are the smallest index of each set, so scanning in storage order
  // numbers components by their first voxel.
  g.labels.assign(total, 0);
  std::vector<int> root_label(total, 0);
  for (std::size_t p = 0; p < total; ++p) {
    if (!marked[p]) continue;
    const int r = ds.find(int(p));
    if (!root_label[r]) root_label[r] = ++g.count;
    g.labels[p] = root_label[r];
  }
  return g;
}

std::vector<BubbleStats> component_stats(const LabelGrid& grid, double dx) {
  const int n = grid.n;
  std::vector<BubbleStats> out(grid.count);
  std::vector<std::unordered_set<std::uint64_t>> cells(grid.count);
  const int big = std::numeric_limits<int>::max();
  for (int c = 0; c < grid.count; ++c) {
    out[c].id = c + 1;
    out[c].bbox_lo = {big, big, big};
    out[c].bbox_hi = {-1, -1, -1};
  }
  // Cells of the closed cubes in doubled coordinates: the voxel (i,j,k) is
  // the cube at (2i+1, 2j+1, 2k+1) and its faces, edges and vertices sit at
  // the neighbouring even/odd combinations.
  const std::uint64_t m = 2 * std::uint64_t(n) + 1;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const int l = grid(i, j, k);
        if (!l) continue;
        BubbleStats& s = out[l - 1];
        ++s.volume_voxels;
        s.centroid += Eigen::Vector3d(i, j, k);
        const int ijk[3] = {i, j, k};
        for (int a = 0; a < 3; ++a) {
          s.bbox_lo[a] = std::min(s.bbox_lo[a], ijk[a]);
          s.bbox_hi[a] = std::max(s.bbox_hi[a], ijk[a]);
        }
        auto& set = cells[l - 1];
        for (int c = 0; c < 3; ++c)
          for (int b = 0; b < 3; ++b)
            for (int a = 0; a < 3; ++a)
              set.insert((std::uint64_t(2 * i + a) * m + std::uint64_t(2 * j + b)) * m + std::uint64_t(2 * k + c));
      }
  for (int c = 0; c < grid.count; ++c) {
    BubbleStats& s = out[c];
    s.volume = double(s.volume_voxels) * dx * dx * dx;
    s.centroid = s.centroid / double(s.volume_voxels) * dx;
    long counts[4] = {0, 0, 0, 0};
    for (std::uint64_t key : cells[c]) {
      const std::uint64_t z = key % m, y = (key / m) % m, x = key / (m * m);
      counts[(x & 1) + (y & 1) + (z & 1)]++;
    }
    s.euler_char = int(counts[0] - counts[1] + counts[2] - counts[3]);
  }
  return out;
}

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::formation: return "formation";
    case EventKind::merge: return "merge";
    case EventKind::split: return "split";
    case EventKind::topology_change: return "topology_change";
    case EventKind::disappearance: return "disappearance";
  }
  return "?";
}

double BubbleTimeline::first(EventKind k) const {
  for (const auto& e : events)
    if (e.kind == k) return e.t;
  return std::numeric_limits<double>::quiet_NaN();
}

void TimelineBuilder::add(double t, const LabelGrid& grid, const std::vector<BubbleStats>& stats) {
  if (t < prev_t_) throw DomainError("bubbles: snapshots must be time-ordered");
  if (int(stats.size()) != grid.count) throw DomainError("bubbles: stats do not match the label grid");
  if (!prev_labels_.empty() && prev_labels_.size() != grid.labels.size())
    throw DomainError("bubbles: snapshots differ in grid size");
  const int nc = grid.count;
  const int np = int(prev_track_.size());
  // overlap[(cur, prev)] in voxels
  std::map<std::pair<int, int>, long> overlap;
  if (np > 0)
    for (std::size_t p = 0; p < grid.labels.size(); ++p)
      if (grid.labels[p] && prev_labels_[p]) ++overlap[{grid.labels[p] - 1, prev_labels_[p] - 1}];
  std::vector<std::vector<std::pair<long, int>>> by_cur(nc), by_prev(np);
  for (const auto& [key, v] : overlap) {
    by_cur[key.first].push_back({v, key.second});
    by_prev[key.second].push_back({v, key.first});
  }
  // Largest overlap first; ties keep the lower index and are flagged.
  auto order = [](auto& lst) {
    std::stable_sort(lst.begin(), lst.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    return lst.size() >= 2 && lst[0].first == lst[1].first;
  };
  std::vector<BubbleEvent> events;
  std::vector<int> track(nc, 0);
  std::vector<char> cur_tie(nc, 0), prev_tie(np, 0);
  for (int c = 0; c < nc; ++c) cur_tie[c] = order(by_cur[c]);
  for (int q = 0; q < np; ++q) prev_tie[q] = order(by_prev[q]);

  for (int c = 0; c < nc; ++c) {
    if (by_cur[c].empty()) continue;
    const int q = by_cur[c].front().second;
    // The previous component continues in the current one it overlaps most.
    if (by_prev[q].front().second == c) track[c] = prev_track_[q];
  }
  for (int c = 0; c < nc; ++c) {
    if (by_cur[c].empty()) {
      track[c] = next_track_++;
      events.push_back({t, EventKind::formation, {track[c]}, false});
      continue;
    }
    if (by_cur[c].size() >= 2) {
      BubbleEvent e{t, EventKind::merge, {}, bool(cur_tie[c])};
      for (const auto& [v, q] : by_cur[c]) e.ids.push_back(prev_track_[q]);
      if (!track[c]) track[c] = next_track_++;
      e.ids.push_back(track[c]);
      events.push_back(e);
    }
    if (!track[c]) track[c] = next_track_++;
  }
  for (int q = 0; q < np; ++q) {
    if (by_prev[q].empty()) {
      events.push_back({t, EventKind::disappearance, {prev_track_[q]}, false});
    } else if (by_prev[q].size() >= 2) {
      BubbleEvent e{t, EventKind::split, {prev_track_[q]}, bool(prev_tie[q])};
      for (const auto& [v, c] : by_prev[q]) e.ids.push_back(track[c]);
      events.push_back(e);
    }
  }
  for (int c = 0; c < nc; ++c) {
    if (by_cur[c].size() != 1) continue;
    const int q = by_cur[c].front().second;
    if (by_prev[q].size() == 1 && prev_euler_[q] != stats[c].euler_char)
      events.push_back({t, EventKind::topology_change, {track[c]}, false});
  }

  SnapshotBubbles snap;
  snap.t = t;
  snap.bubbles = stats;
  for (int c = 0; c < nc; ++c) snap.bubbles[c].id = track[c];
  timeline_.snapshots.push_back(std::move(snap));
  for (auto& e : events) timeline_.events.push_back(std::move(e));

  prev_labels_ = grid.labels;
  prev_track_ = track;
  prev_euler_.resize(nc);
  for (int c = 0; c < nc; ++c) prev_euler_[c] = stats[c].euler_char;
  prev_t_ = t;
}

BubbleTimeline build_timeline(std::size_t count, const std::function<Field3D(std::size_t)>& load,
                              double epsilon, int reference_sign) {
  TimelineBuilder builder;
  const std::size_t batch = std::max<std::size_t>(1, worker_count());
  for (std::size_t start = 0; start < count; start += batch) {
    const std::size_t len = std::min(batch, count - start);
    std::vector<double> times(len);
    std::vector<LabelGrid> grids(len);
    std::vector<std::vector<BubbleStats>> stats(len);
    parallel_for(len, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        const Field3D f = load(start + i);
        times[i] = f.time;
        grids[i] = detect_sign_regions(f, epsilon, reference_sign);
        stats[i] = component_stats(grids[i], f.dx);
      }
    });
    for (std::size_t i = 0; i < len; ++i) builder.add(times[i], grids[i], stats[i]);
  }
  return builder.timeline();
}

BubbleTimeline build_timeline(const std::vector<Field3D>& snapshots, double epsilon, int reference_sign) {
  return build_timeline(snapshots.size(), [&](std::size_t i) { return snapshots[i]; }, epsilon, reference_sign);
}

void write_timeline_jsonl(const BubbleTimeline& tl, std::ostream& out) {
  using nlohmann::json;
  std::size_t e = 0;
  for (const auto& s : tl.snapshots) {
    json bubbles = json::array();
    for (const auto& b : s.bubbles)
      bubbles.push_back({{"id", b.id},
                         {"volume_voxels", b.volume_voxels},
                         {"volume", b.volume},
                         {"centroid", {b.centroid(0), b.centroid(1), b.centroid(2)}},
                         {"euler_char", b.euler_char}});
    out << json{{"t", s.t}, {"n_bubbles", s.bubbles.size()}, {"bubbles", bubbles}}.dump() << '\n';
    for (; e < tl.events.size() && tl.events[e].t <= s.t; ++e) {
      const auto& ev = tl.events[e];
      json rec{{"t", ev.t}, {"kind", to_string(ev.kind)}, {"ids", ev.ids}};
      if (ev.ambiguous) rec["ambiguous"] = true;
      out << json{{"event", rec}}.dump() << '\n';
    }
  }
}

}  // namespace kg
