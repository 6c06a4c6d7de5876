#include "kg/sim3d.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <mutex>
#include <thread>

#include "kg/config.hpp"
#include "kg/errors.hpp"
#include "kg/parallel.hpp"
#include "kg/snapshot_io.hpp"

namespace kg {

Equation equation_from(const SimConfig& cfg) { return Equation{3.0, cfg.mu2, cfg.lambda, 1.0}; }

std::pair<Field3D, Field3D> make_initial_data(const SimConfig& cfg) {
  cfg.validate();
  Field3D psi0(cfg.n, cfg.dx), psi1(cfg.n, cfg.dx);
  psi0.mu2 = psi1.mu2 = cfg.mu2;
  psi0.lambda = psi1.lambda = cfg.lambda;
  if (cfg.init.type == "zero") return {psi0, psi1};
  const int n = cfg.n;
  for (int k = 1; k < n - 1; ++k)
    for (int j = 1; j < n - 1; ++j)
      for (int i = 1; i < n - 1; ++i) {
        const Eigen::Vector3d x = psi0.position(i, j, k);
        double v = 0;
        for (const auto& b : cfg.init.balls) {
          const double R2 = b.radius * b.radius;
          const double g = R2 - (x - b.center).squaredNorm();
          if (g > 0) v += std::exp(1 / R2 - 1 / g);
        }
        psi0(i, j, k) = v;
      }
  psi1.values = cfg.init.psi1_factor * psi0.values;
  return {psi0, psi1};
}

namespace {

// Neighbour offsets along one axis with odd reflection about the boundary
// nodes 0 and n-1.
struct AxisStencil {
  std::vector<std::array<int, 4>> idx;    // i-2, i-1, i+1, i+2 after reflection
  std::vector<std::array<double, 4>> sg;  // sign from the reflection

  explicit AxisStencil(int n) : idx(std::size_t(n)), sg(std::size_t(n)) {
    const int offs[4] = {-2, -1, 1, 2};
    for (int i = 0; i < n; ++i)
      for (int m = 0; m < 4; ++m) {
        int j = i + offs[m];
        double s = 1;
        if (j < 0) {
          j = -j;
          s = -1;
        } else if (j > n - 1) {
          j = 2 * (n - 1) - j;
          s = -1;
        }
        idx[std::size_t(i)][std::size_t(m)] = j;
        sg[std::size_t(i)][std::size_t(m)] = s;
      }
  }
};

constexpr double kC2 = -1.0 / 12.0;
constexpr double kC1 = 4.0 / 3.0;
constexpr double kC0 = -5.0 / 2.0;

// Laplacian at interior node (i,j,k) times dx^2.
inline double lap_point(const double* u, const AxisStencil& ax, int n, int i, int j, int k) {
  const std::size_t sn = std::size_t(n);
  const std::size_t base_jk = sn * (std::size_t(j) + sn * std::size_t(k));
  const std::size_t base_ik = std::size_t(i) + sn * sn * std::size_t(k);
  const std::size_t base_ij = std::size_t(i) + sn * std::size_t(j);
  const auto& xi = ax.idx[std::size_t(i)];
  const auto& xs = ax.sg[std::size_t(i)];
  const auto& yi = ax.idx[std::size_t(j)];
  const auto& ys = ax.sg[std::size_t(j)];
  const auto& zi = ax.idx[std::size_t(k)];
  const auto& zs = ax.sg[std::size_t(k)];
  const double c = u[base_jk + std::size_t(i)];
  double s = 3 * kC0 * c;
  s += kC2 * (xs[0] * u[base_jk + std::size_t(xi[0])] + xs[3] * u[base_jk + std::size_t(xi[3])]) +
       kC1 * (xs[1] * u[base_jk + std::size_t(xi[1])] + xs[2] * u[base_jk + std::size_t(xi[2])]);
  s += kC2 * (ys[0] * u[base_ik + sn * std::size_t(yi[0])] + ys[3] * u[base_ik + sn * std::size_t(yi[3])]) +
       kC1 * (ys[1] * u[base_ik + sn * std::size_t(yi[1])] + ys[2] * u[base_ik + sn * std::size_t(yi[2])]);
  s += kC2 * (zs[0] * u[base_ij + sn * sn * std::size_t(zi[0])] + zs[3] * u[base_ij + sn * sn * std::size_t(zi[3])]) +
       kC1 * (zs[1] * u[base_ij + sn * sn * std::size_t(zi[1])] + zs[2] * u[base_ij + sn * sn * std::size_t(zi[2])]);
  return s;
}

class Rk4Stepper {
 public:
  explicit Rk4Stepper(int n)
      : n_(n),
        ax_(n),
        b1p_(Eigen::ArrayXd::Zero(Eigen::Index(n) * n * n)),
        b1c_(b1p_),
        b2p_(b1p_),
        b2c_(b1p_),
        ap_(b1p_),
        ac_(b1p_) {}

  void step(FieldState& s, double dt, const Equation& eq, const SimSource* src, unsigned workers) {
    const int n = n_;
    if (s.psi.n != n || s.chi.n != n) throw DomainError("step_rk4: state size does not match the stepper");
    if (src && src->shape.n != n) throw DomainError("step_rk4: source shape size mismatch");
    const double inv_dx2 = 1.0 / (s.psi.dx * s.psi.dx);
    const double t0 = s.t;
    const double* p0 = s.psi.values.data();
    const double* c0 = s.chi.values.data();
    const double stage_c[4] = {0.0, 0.5, 0.5, 1.0};
    const double stage_w[4] = {1.0 / 6, 2.0 / 6, 2.0 / 6, 1.0 / 6};
    const double* in_p = p0;
    const double* in_c = c0;
    double* outs_p[3] = {b1p_.data(), b2p_.data(), b1p_.data()};
    double* outs_c[3] = {b1c_.data(), b2c_.data(), b1c_.data()};
    double* ap = ap_.data();
    double* ac = ac_.data();
    const double* f = src ? src->shape.values.data() : nullptr;

    for (int st = 0; st < 4; ++st) {
      const double ts = t0 + stage_c[st] * dt;
      const double wave = std::exp(-2 * eq.wave_decay * ts) * inv_dx2;
      const double amp = src ? src->amplitude(ts) : 0.0;
      const double w = stage_w[st] * dt;
      const double cnext = st < 3 ? stage_c[st + 1] * dt : 0.0;
      double* op = st < 3 ? outs_p[st] : nullptr;
      double* oc = st < 3 ? outs_c[st] : nullptr;
      parallel_for(
          std::size_t(n - 2),
          [&](std::size_t begin, std::size_t end) {
            for (std::size_t kk = begin; kk < end; ++kk) {
              const int k = int(kk) + 1;
              for (int j = 1; j < n - 1; ++j) {
                const std::size_t row = std::size_t(n) * (std::size_t(j) + std::size_t(n) * std::size_t(k));
                for (int i = 1; i < n - 1; ++i) {
                  const std::size_t id = row + std::size_t(i);
                  const double ps = in_p[id];
                  const double cs = in_c[id];
                  double kc = wave * lap_point(in_p, ax_, n, i, j, k) - eq.damping * cs + eq.mu2 * ps -
                              eq.lambda * ps * ps * ps;
                  if (f) kc += amp * f[id];
                  if (st == 0) {
                    ap[id] = p0[id] + w * cs;
                    ac[id] = c0[id] + w * kc;
                  } else {
                    ap[id] += w * cs;
                    ac[id] += w * kc;
                  }
                  if (op) {
                    op[id] = p0[id] + cnext * cs;
                    oc[id] = c0[id] + cnext * kc;
                  }
                }
              }
            }
          },
          workers);
      if (op) {
        in_p = op;
        in_c = oc;
      }
    }
    s.psi.values.swap(ap_);
    s.chi.values.swap(ac_);
    s.t = t0 + dt;
    s.psi.time = s.chi.time = s.t;
  }

 private:
  int n_;
  AxisStencil ax_;
  Eigen::ArrayXd b1p_, b1c_, b2p_, b2c_, ap_, ac_;
};

}  // namespace

void laplacian4(const Field3D& psi, Field3D& out, unsigned workers) {
  const int n = psi.n;
  if (!out.same_shape(psi)) out = Field3D(n, psi.dx);
  out.values.setZero();
  out.time = psi.time;
  const AxisStencil ax(n);
  const double inv = 1.0 / (psi.dx * psi.dx);
  const double* u = psi.values.data();
  parallel_for(
      std::size_t(n - 2),
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t kk = begin; kk < end; ++kk) {
          const int k = int(kk) + 1;
          for (int j = 1; j < n - 1; ++j)
            for (int i = 1; i < n - 1; ++i) out(i, j, k) = inv * lap_point(u, ax, n, i, j, k);
        }
      },
      workers);
}

void step_rk4(FieldState& state, double dt, const Equation& eq, const SimSource* source, unsigned workers) {
  Rk4Stepper stepper(state.psi.n);
  stepper.step(state, dt, eq, source, workers);
}

CflReport cfl_check(const FieldState& state, double dx, double dt, double c_cfl) {
  CflReport r;
  r.monitor_bound = dx / (std::sqrt(3.0) * dt);
  r.max_abs_psi = state.psi.max_abs();
  r.monitor_flagged = !(r.max_abs_psi < r.monitor_bound);
  r.wave_number = std::exp(-state.t) * std::sqrt(3.0) * dt / dx;
  r.wave_ok = r.wave_number <= c_cfl;
  return r;
}

double energy_monitor(const FieldState& state) {
  const Field3D& p = state.psi;
  const Field3D& c = state.chi;
  const int n = p.n;
  const double inv2h = 1 / (2 * p.dx);
  const double decay = std::exp(-2 * state.t);
  std::vector<double> slab(std::size_t(n), 0.0);
  for (int k = 1; k < n - 1; ++k) {
    double s = 0;
    for (int j = 1; j < n - 1; ++j)
      for (int i = 1; i < n - 1; ++i) {
        const double gx = (p(i + 1, j, k) - p(i - 1, j, k)) * inv2h;
        const double gy = (p(i, j + 1, k) - p(i, j - 1, k)) * inv2h;
        const double gz = (p(i, j, k + 1) - p(i, j, k - 1)) * inv2h;
        s += c(i, j, k) * c(i, j, k) + decay * (gx * gx + gy * gy + gz * gz);
      }
    slab[std::size_t(k)] = s;
  }
  double total = 0;
  for (double s : slab) total += s;
  return total * p.dx * p.dx * p.dx;
}

namespace {

// Background writer: stepping hands over copies and never waits on disk
// unless more than `kMaxPending` snapshots are queued.
class SnapshotWriter {
 public:
  SnapshotWriter() : thread_([this] { loop(); }) {}
  ~SnapshotWriter() { finish(); }

  void submit(Field3D f, double dt, std::filesystem::path base) {
    std::unique_lock lock(m_);
    cv_space_.wait(lock, [&] { return queue_.size() < kMaxPending; });
    queue_.push_back({std::move(f), dt, std::move(base)});
    cv_.notify_one();
  }

  // Waits for the queue to drain; rethrows the first write failure.
  void finish() {
    {
      std::lock_guard lock(m_);
      done_ = true;
      cv_.notify_one();
    }
    if (thread_.joinable()) thread_.join();
    if (error_) {
      auto e = error_;
      error_ = nullptr;
      std::rethrow_exception(e);
    }
  }

 private:
  struct Job {
    Field3D field;
    double dt;
    std::filesystem::path base;
  };
  static constexpr std::size_t kMaxPending = 4;

  void loop() {
    while (true) {
      Job job;
      {
        std::unique_lock lock(m_);
        cv_.wait(lock, [&] { return done_ || !queue_.empty(); });
        if (queue_.empty()) return;
        job = std::move(queue_.front());
        queue_.pop_front();
        cv_space_.notify_one();
      }
      try {
        if (!error_) write_snapshot(job.field, job.dt, job.base);
      } catch (...) {
        error_ = std::current_exception();
      }
    }
  }

  std::mutex m_;
  std::condition_variable cv_, cv_space_;
  std::deque<Job> queue_;
  bool done_ = false;
  std::exception_ptr error_;
  std::thread thread_;
};

std::string snapshot_name(const std::string& stem, int k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%05d", k);
  return stem + buf;
}

}  // namespace

RunSummary run_simulation(const SimConfig& cfg, const RunOptions& opt) {
  cfg.validate();
  const auto wall0 = std::chrono::steady_clock::now();
  if (opt.write_files) std::filesystem::create_directories(opt.out_dir);

  auto [psi0, psi1] = make_initial_data(cfg);
  FieldState state{std::move(psi0), std::move(psi1), 0.0};
  const Equation eq = equation_from(cfg);
  const long n_steps = std::max(1L, std::lround(cfg.t_end / cfg.dt));
  const long snap_stride = std::max(1L, std::lround(cfg.snapshot_every / cfg.dt));

  RunSummary sum;
  std::optional<SnapshotWriter> writer;
  if (opt.write_files) writer.emplace();

  auto record = [&] {
    const CflReport cr = cfl_check(state, cfg.dx, cfg.dt);
    sum.history_t.push_back(state.t);
    sum.history_max_abs.push_back(cr.max_abs_psi);
    sum.history_energy.push_back(energy_monitor(state));
    sum.history_cfl_wave.push_back(cr.wave_number);
    SnapshotRecord rec;
    rec.index = static_cast<int>(sum.snapshots.size());
    rec.time = state.t;
    if (opt.write_files) {
      const std::string name = snapshot_name(opt.stem, rec.index);
      rec.raw_file = name + ".raw";
      rec.meta_file = name + ".meta.json";
      writer->submit(state.psi, cfg.dt, opt.out_dir / name);
    }
    sum.snapshots.push_back(rec);
    if (opt.observer) opt.observer(state);
  };

  Rk4Stepper stepper(cfg.n);
  record();
  for (long step = 1; step <= n_steps; ++step) {
    const CflReport cr = cfl_check(state, cfg.dx, cfg.dt);
    if (!cr.wave_ok)
      throw NumericalError("CFL condition violated: e^{-t} sqrt(3) dt/dx = " + std::to_string(cr.wave_number));
    if (cr.monitor_flagged) ++sum.monitor_flags;
    stepper.step(state, cfg.dt, eq, opt.source, opt.workers);
    state.t = step * cfg.dt;
    state.psi.time = state.chi.time = state.t;
    ++sum.steps;
    if (!state.psi.all_finite() || !state.chi.all_finite()) {
      if (writer) writer->finish();
      if (opt.write_files) write_snapshot(state.psi, cfg.dt, opt.out_dir / (opt.stem + "_abort"));
      throw NumericalError("non-finite field value at t = " + std::to_string(state.t));
    }
    if (step % snap_stride == 0 || step == n_steps) record();
  }
  if (writer) writer->finish();
  sum.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();

  if (opt.write_files) {
    nlohmann::json snaps = nlohmann::json::array();
    for (const auto& s : sum.snapshots)
      snaps.push_back({{"index", s.index}, {"time", s.time}, {"raw", s.raw_file}, {"meta", s.meta_file}});
    nlohmann::json m = {{"config", to_json(cfg)},
                        {"steps", sum.steps},
                        {"snapshots", snaps},
                        {"history",
                         {{"t", sum.history_t},
                          {"max_abs_psi", sum.history_max_abs},
                          {"energy", sum.history_energy},
                          {"cfl_wave_number", sum.history_cfl_wave},
                          {"cfl_monitor_bound", cfg.dx / (std::sqrt(3.0) * cfg.dt)},
                          {"cfl_monitor_flags", sum.monitor_flags}}}};
    sum.manifest_file = opt.stem + "_manifest.json";
    std::ofstream out(opt.out_dir / sum.manifest_file);
    out << m.dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write " + (opt.out_dir / sum.manifest_file).string());
  }
  return sum;
}

}  // namespace kg
