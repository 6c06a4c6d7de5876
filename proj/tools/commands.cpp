#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <sstream>

#include "kg/bubbles.hpp"
#include "kg/config.hpp"
#include "kg/errors.hpp"
#include "kg/kernels.hpp"
#include "kg/semilinear.hpp"
#include "kg/sim3d.hpp"
#include "kg/snapshot_io.hpp"
#include "kg/specfun.hpp"
#include "kg/transform.hpp"
#include "profile_spec.hpp"

namespace kgcli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Output::set_command(std::string cmd, std::vector<std::string> args) {
  manifest_.command = std::move(cmd);
  manifest_.args = std::move(args);
}

bool Output::file_mode() const { return !out.empty() && fs::path(out).has_extension(); }

fs::path Output::directory() const {
  if (out.empty()) throw kg::DomainError("this command needs --out");
  if (file_mode()) return fs::path(out).parent_path().empty() ? fs::path(".") : fs::path(out).parent_path();
  return fs::path(out);
}

void Output::emit(const std::string& name, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  fs::path target;
  if (file_mode()) {
    target = fs::path(out);
    if (!target.parent_path().empty()) fs::create_directories(target.parent_path());
  } else {
    fs::create_directories(out);
    target = fs::path(out) / name;
  }
  std::ofstream f(target);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + target.string());
  add_file(target);
}

void Output::finish() const {
  if (manifest_.outputs.empty()) return;
  const fs::path m = file_mode() ? fs::path(out + ".manifest.json") : fs::path(out) / "manifest.json";
  manifest_.write(m);
}

namespace {

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string s;
  for (std::size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + header[i];
  s += '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + num(r[i]);
    s += '\n';
  }
  return s;
}

std::vector<double> grid(const std::string& spec) {
  // "v" or "lo:hi:n"
  std::vector<double> out;
  const auto c1 = spec.find(':');
  if (c1 == std::string::npos) return {std::stod(spec)};
  const auto c2 = spec.find(':', c1 + 1);
  if (c2 == std::string::npos) throw kg::DomainError("grid must be v or lo:hi:n, got '" + spec + "'");
  const double lo = std::stod(spec.substr(0, c1)), hi = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
  const int n = std::stoi(spec.substr(c2 + 1));
  if (n < 1) throw kg::DomainError("grid needs n >= 1");
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  return out;
}

std::vector<kg::Field3D> load_all(const fs::path& dir) {
  std::vector<kg::Field3D> v;
  for (const auto& p : kg::list_snapshots(dir)) v.push_back(kg::read_snapshot(p));
  if (v.empty()) throw kg::DomainError("no snapshots in " + dir.string());
  return v;
}

kg::CauchyData cauchy(kg::Dim dim, const std::string& u0, const std::string& u1) {
  auto d = kg::CauchyData::make(dim, parse_profile(u0), parse_profile(u1));
  d.phi0_zero = is_zero_spec(u0);
  d.phi1_zero = is_zero_spec(u1);
  return d;
}

void add_kernel(CLI::App& app, Output& output, std::function<int()>& run) {
  auto* k = app.add_subcommand("kernel", "evaluate or scan the kernels E, K0, K1");
  k->require_subcommand(1);

  struct EvalOpts {
    std::string kind = "E", precision = "double";
    double M = 0.5, t = 1, b = 0, z = 0;
  };
  auto e = std::make_shared<EvalOpts>();
  auto* ev = k->add_subcommand("eval", "kernel value at one point");
  ev->add_option("--kind", e->kind, "E, K0 or K1")->capture_default_str();
  ev->add_option("--M", e->M, "mass parameter")->required();
  ev->add_option("--t", e->t, "time")->required();
  ev->add_option("--b", e->b, "source time (E only)")->capture_default_str();
  ev->add_option("--z", e->z, "separation |x - x0|")->capture_default_str();
  ev->add_option("--precision", e->precision, "double or long")->check(CLI::IsMember({"double", "long"}));
  ev->callback([e, &run] {
    run = [e] {
      const auto kind = kg::kernel_kind_from_string(e->kind);
      if (e->precision == "long") {
        const long double v = kg::kernel_eval<long double>(kind, {e->z, e->t, e->b, e->M});
        std::printf("%.21Lg\n", v);
      } else {
        std::printf("%s\n", num(kg::kernel_eval<double>(kind, {e->z, e->t, e->b, e->M})).c_str());
      }
      return 0;
    };
  });

  auto s = std::make_shared<kg::PositivityScanSpec>();
  auto kind = std::make_shared<std::string>("K0");
  auto samples = std::make_shared<bool>(false);
  auto* sc = k->add_subcommand("scan", "sign scan over the light-cone interior");
  sc->add_option("--kind", *kind, "E, K0 or K1")->capture_default_str();
  sc->add_option("--M", s->M)->required();
  sc->add_option("--t-min", s->t_min, "exclusive lower bound of t")->capture_default_str();
  sc->add_option("--t-max", s->t_max)->required();
  sc->add_option("--nz", s->nz)->capture_default_str();
  sc->add_option("--nt", s->nt)->capture_default_str();
  sc->add_option("--nb", s->nb)->capture_default_str();
  sc->add_option("--tol", s->tol_scan)->capture_default_str();
  sc->add_flag("--samples", *samples, "also write samples.csv");
  sc->add_option("--out", output.out, "output file or directory");
  sc->callback([s, kind, samples, &output, &run] {
    run = [s, kind, samples, &output] {
      s->which = kg::kernel_kind_from_string(*kind);
      s->keep_samples = *samples;
      const auto r = kg::positivity_scan(*s);
      const json doc{{"kind", kg::to_string(r.which)},
                     {"M", r.M},
                     {"t_min", r.t_min},
                     {"t_max", r.t_max},
                     {"nz", r.nz},
                     {"nt", r.nt},
                     {"n_points", r.n_points},
                     {"n_failed", r.n_failed},
                     {"min", r.min_value},
                     {"argmin", {{"z", r.argmin.z}, {"t", r.argmin.t}, {"b", r.argmin.b}}},
                     {"max", r.max_value},
                     {"argmax", {{"z", r.argmax.z}, {"t", r.argmax.t}, {"b", r.argmax.b}}},
                     {"sign_change", r.sign_change}};
      output.emit("scan.json", doc.dump(2) + "\n");
      if (*samples) {
        std::vector<std::vector<double>> rows;
        for (const auto& p : r.samples) rows.push_back({p.z, p.t, p.b, p.value});
        output.emit("samples.csv", csv({"z", "t", "b", "value"}, rows));
      }
      return 0;
    };
  });
}

void add_verify(CLI::App& app, std::function<int()>& run) {
  auto* v = app.add_subcommand("verify", "numerical checks of the kernels");
  v->require_subcommand(1);
  struct Opts {
    double M = 1, t = 1, b = 0, tol = 1e-8;
  };
  auto o = std::make_shared<Opts>();
  auto* id = v->add_subcommand("identities", "integral identities of E, K0, K1 by quadrature");
  id->add_option("--M", o->M)->required();
  id->add_option("--t", o->t)->required();
  id->add_option("--b", o->b)->capture_default_str();
  id->add_option("--tol", o->tol, "pass threshold for every residual")->capture_default_str();
  id->callback([o, &run] {
    run = [o] {
      const auto r = kg::verify_kernel_identities(o->t, o->b, o->M, std::min(1e-10, o->tol / 10));
      std::printf("res_E %s\nres_K1 %s\nres_K0 %s\nquad_error %s\n", num(r.res_E).c_str(), num(r.res_K1).c_str(),
                  num(r.res_K0).c_str(), num(r.quad_error).c_str());
      const bool ok = r.converged && r.res_E < o->tol && r.res_K1 < o->tol && r.res_K0 < o->tol;
      if (!ok) std::fprintf(stderr, "identity residual above %s\n", num(o->tol).c_str());
      return ok ? 0 : 2;
    };
  });
}

void add_transform(CLI::App& app, Output& output, std::function<int()>& run) {
  auto* tr = app.add_subcommand("transform", "integral-transform solutions");
  tr->require_subcommand(1);
  struct Opts {
    std::string dim = "line", space = "desitter", u0 = "zero", u1 = "zero", f = "zero", xs = "0", ts = "1";
    double M = 1, rate = 0, tol = 1e-10;
  };
  auto o = std::make_shared<Opts>();
  for (const char* which : {"cauchy", "source"}) {
    const bool is_cauchy = std::string(which) == "cauchy";
    auto* c = tr->add_subcommand(which, is_cauchy ? "solution with Cauchy data" : "solution with a source, zero data");
    c->add_option("--dim", o->dim, "line or radial3")->capture_default_str();
    c->add_option("--space", o->space, "desitter or minkowski")->check(CLI::IsMember({"desitter", "minkowski"}));
    c->add_option("--M", o->M)->required();
    c->add_option("--x", o->xs, "point or lo:hi:n")->capture_default_str();
    c->add_option("--t", o->ts, "time or lo:hi:n")->capture_default_str();
    c->add_option("--tol", o->tol)->capture_default_str();
    c->add_option("--out", output.out, "output file or directory");
    if (is_cauchy) {
      c->add_option("--u0", o->u0, "profile of u(.,0)")->capture_default_str();
      c->add_option("--u1", o->u1, "profile of u_t(.,0)")->capture_default_str();
    } else {
      c->add_option("--f", o->f, "source profile in s")->required();
      c->add_option("--f-rate", o->rate, "source factor e^{-rate b}")->capture_default_str();
    }
    c->callback([o, is_cauchy, &output, &run] {
      run = [o, is_cauchy, &output] {
        const kg::Dim dim = kg::dim_from_string(o->dim);
        const auto data = is_cauchy ? cauchy(dim, o->u0, o->u1) : kg::CauchyData::zero(dim);
        const auto src = is_cauchy ? kg::SourceTerm::none() : parse_source(o->f, o->rate);
        std::vector<std::vector<double>> rows;
        for (double t : grid(o->ts))
          for (double x : grid(o->xs)) {
            const double u = o->space == "minkowski" ? kg::minkowski_kg_solution(data, src, o->M, x, t, o->tol)
                                                     : kg::desitter_solution(data, src, o->M, x, t, o->tol);
            rows.push_back({x, t, u});
          }
        output.emit("transform.csv", csv({"x", "t", "u"}, rows));
        return 0;
      };
    });
  }
}

void add_maxprinciple(CLI::App& app, Output& output, std::function<int()>& run) {
  struct Opts {
    std::string space = "desitter", dim = "line", u0, u1, f = "zero";
    double M = 2, rate = 0;
    kg::SampleSpec spec;
  };
  auto o = std::make_shared<Opts>();
  auto* c = app.add_subcommand("maxprinciple", "sample the maximum principle on the domain of dependence");
  c->add_option("--space", o->space)->check(CLI::IsMember({"desitter", "minkowski"}))->capture_default_str();
  c->add_option("--dim", o->dim)->capture_default_str();
  c->add_option("--M", o->M)->required();
  c->add_option("--u0", o->u0)->required();
  c->add_option("--u1", o->u1)->required();
  c->add_option("--f", o->f)->capture_default_str();
  c->add_option("--f-rate", o->rate)->capture_default_str();
  c->add_option("--n", o->spec.n_points)->capture_default_str();
  c->add_option("--x-lo", o->spec.x_lo)->capture_default_str();
  c->add_option("--x-hi", o->spec.x_hi)->capture_default_str();
  c->add_option("--t-lo", o->spec.t_lo)->capture_default_str();
  c->add_option("--t-hi", o->spec.t_hi)->capture_default_str();
  c->add_option("--d0-lo", o->spec.d0_lo);
  c->add_option("--d0-hi", o->spec.d0_hi);
  c->add_option("--seed", o->spec.seed)->capture_default_str();
  c->add_option("--out", output.out, "output file or directory");
  c->callback([o, &output, &run] {
    run = [o, &output] {
      const auto data = cauchy(kg::dim_from_string(o->dim), o->u0, o->u1);
      auto src = parse_source(o->f, o->rate);
      if (!src.zero) src.sign = kg::SignTag::nonpositive;
      const auto r = o->space == "minkowski" ? kg::check_max_principle_minkowski(data, src, o->M, o->spec)
                                             : kg::check_max_principle_desitter(data, src, o->M, o->spec);
      std::vector<std::vector<double>> rows;
      for (const auto& s : r.samples) rows.push_back({s.x, s.t, s.u, s.rhs, s.violation});
      output.emit("samples.csv", csv({"x", "t", "u", "rhs", "violation"}, rows));
      std::fprintf(stderr, "%s: worst violation %s, max(u - rhs) %s, threshold t %s\n", r.passed ? "passed" : "FAILED",
                   num(r.worst_violation).c_str(), num(r.max_u_minus_rhs).c_str(), num(r.t_threshold).c_str());
      return r.passed ? 0 : 2;
    };
  });
}

void add_picard(CLI::App& app, Output& output, std::function<int()>& run) {
  struct Opts {
    kg::PicardConfig cfg;
    std::string dim = "line", u0 = "const:0.4", u1 = "const:0.2", xs = "0";
    double mu2 = std::nan("");
  };
  auto o = std::make_shared<Opts>();
  auto* c = app.add_subcommand("picard", "Picard iteration for the semilinear integral equation");
  c->add_option("--M", o->cfg.M, "mass (or give --mu2)");
  c->add_option("--mu2", o->mu2, "sets M = sqrt(9/4 + mu2)");
  c->add_option("--lambda", o->cfg.lambda)->capture_default_str();
  c->add_option("--t-max", o->cfg.t_max)->capture_default_str();
  c->add_option("--nt", o->cfg.nt)->capture_default_str();
  c->add_option("--iters", o->cfg.n_iter)->capture_default_str();
  c->add_option("--x", o->xs, "single point (x-independent data) or lo:hi:n")->capture_default_str();
  c->add_option("--dim", o->dim)->capture_default_str();
  c->add_option("--u0", o->u0)->capture_default_str();
  c->add_option("--u1", o->u1)->capture_default_str();
  c->add_option("--tol", o->cfg.quad_tol)->capture_default_str();
  c->add_option("--out", output.out, "output file or directory");
  c->callback([o, &output, &run] {
    run = [o, &output] {
      if (!std::isnan(o->mu2)) o->cfg.M = kg::mass_from_mu2(o->mu2);
      o->cfg.dim = kg::dim_from_string(o->dim);
      o->cfg.xs = grid(o->xs);
      const auto res = kg::picard_weak_solution(cauchy(o->cfg.dim, o->u0, o->u1), o->cfg);
      const auto ts = o->cfg.times();
      std::vector<std::vector<double>> rows;
      for (std::size_t j = 0; j < ts.size(); ++j)
        for (std::size_t i = 0; i < o->cfg.xs.size(); ++i)
          rows.push_back({ts[j], o->cfg.xs[i], res.u(Eigen::Index(j), Eigen::Index(i)), res.u0(Eigen::Index(j), Eigen::Index(i))});
      output.emit("picard.csv", csv({"t", "x", "u", "u0"}, rows));
      std::vector<std::vector<double>> diffs;
      for (std::size_t k = 0; k < res.report.sup_differences.size(); ++k)
        diffs.push_back({double(k + 1), res.report.sup_differences[k]});
      if (output.out.empty() || fs::path(output.out).has_extension())
        for (const auto& d : diffs) std::fprintf(stderr, "iteration %g sup difference %s\n", d[0], num(d[1]).c_str());
      else
        output.emit("iterations.csv", csv({"iteration", "sup_difference"}, diffs));
      if (res.report.diverged) {
        std::fprintf(stderr, "Picard iteration diverged\n");
        return 2;
      }
      return 0;
    };
  });
}

void add_duffing(CLI::App& app, Output& output, std::function<int()>& run) {
  struct Opts {
    double psi0 = 0.1, psi1 = 0, mu2 = 0.1, lambda = 0.1, t_end = 10, dt = 1e-3, damping = 3;
  };
  auto o = std::make_shared<Opts>();
  auto* c = app.add_subcommand("duffing", "x-independent equation psi'' + 3 psi' = mu2 psi - lambda psi^3");
  c->add_option("--psi0", o->psi0)->capture_default_str();
  c->add_option("--psi1", o->psi1)->capture_default_str();
  c->add_option("--mu2", o->mu2)->capture_default_str();
  c->add_option("--lambda", o->lambda)->capture_default_str();
  c->add_option("--t-end", o->t_end)->capture_default_str();
  c->add_option("--dt", o->dt)->capture_default_str();
  c->add_option("--damping", o->damping)->capture_default_str();
  c->add_option("--out", output.out, "output file or directory");
  c->callback([o, &output, &run] {
    run = [o, &output] {
      const auto tr = kg::duffing_ode(o->psi0, o->psi1, o->mu2, o->lambda, o->t_end, o->dt, o->damping);
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < tr.t.size(); ++i) rows.push_back({tr.t[i], tr.psi[i], tr.dpsi[i]});
      output.emit("duffing.csv", csv({"t", "psi", "dpsi"}, rows));
      return 0;
    };
  });
}

void add_functional(CLI::App& app, Output& output, std::function<int()>& run) {
  struct Opts {
    std::string dir;
    kg::FunctionalOptions fo;
  };
  auto o = std::make_shared<Opts>();
  auto* c = app.add_subcommand("functional", "F(t) = int psi dx over snapshots and its ODE residual");
  c->add_option("--snapshots", o->dir)->required();
  c->add_option("--damping", o->fo.damping)->capture_default_str();
  c->add_option("--support-tol", o->fo.support_tol)->capture_default_str();
  c->add_option("--out", output.out, "output file or directory");
  c->callback([o, &output, &run] {
    run = [o, &output] {
      const auto snaps = load_all(o->dir);
      o->fo.mu2 = snaps.front().mu2;
      o->fo.lambda = snaps.front().lambda;
      const auto r = kg::f_functional(snaps, o->fo);
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < r.series.times.size(); ++i)
        rows.push_back({r.series.times[i], r.series.F_values[i], r.series.nu_lower[i]});
      output.emit("functional.csv", csv({"t", "F", "nu_lower"}, rows));
      std::fprintf(stderr, "sigma %d, max |residual| %s\n", r.series.sigma, num(r.max_abs_residual).c_str());
      return 0;
    };
  });
}

void add_signcond(CLI::App& app, std::function<int()>& run) {
  struct Opts {
    std::string config, form = "higgs";
    double int0 = std::nan(""), int1 = std::nan(""), mu = std::nan(""), M = std::nan("");
  };
  auto o = std::make_shared<Opts>();
  auto* c = app.add_subcommand("signcond", "sign-change condition for the initial data");
  c->add_option("--config", o->config, "simulation config; its initial data are integrated");
  c->add_option("--int0", o->int0, "integral of the first datum");
  c->add_option("--int1", o->int1, "integral of the second datum");
  c->add_option("--mu", o->mu, "mu (higgs form); defaults to sqrt(mu2) of the config");
  c->add_option("--M", o->M, "M (klein_gordon form)");
  c->add_option("--form", o->form)->check(CLI::IsMember({"higgs", "klein_gordon"}))->capture_default_str();
  c->callback([o, &run] {
    run = [o] {
      const auto form = o->form == "higgs" ? kg::SignForm::higgs : kg::SignForm::klein_gordon;
      double i0 = o->int0, i1 = o->int1, param = form == kg::SignForm::higgs ? o->mu : o->M;
      if (!o->config.empty()) {
        const auto cfg = kg::load_sim_config(o->config);
        const auto [p0, p1] = kg::make_initial_data(cfg);
        i0 = kg::integrate_box(p0);
        i1 = kg::integrate_box(p1);
        if (std::isnan(param) && form == kg::SignForm::higgs) param = std::sqrt(cfg.mu2);
      }
      if (std::isnan(i0) || std::isnan(i1) || std::isnan(param))
        throw kg::DomainError("signcond needs --config or --int0/--int1, and the form parameter");
      const auto r = kg::sign_change_condition(i0, i1, param, form);
      const json doc{{"int0", i0},        {"int1", i1},           {"coef0", r.coef0},
                     {"coef1", r.coef1},  {"lhs_plus", r.lhs_plus}, {"lhs_minus", r.lhs_minus},
                     {"satisfied_sigma", r.satisfied_sigma}};
      std::cout << doc.dump(2) << '\n';
      return 0;
    };
  });
}

void add_wall(CLI::App& app, Output& output, std::function<int()>& run) {
  struct Opts {
    kg::WallSpec w;
    std::string profile = "literal";
    std::vector<double> hs{0.2, 0.1, 0.05, 0.025};
  };
  auto o = std::make_shared<Opts>();
  auto* c = app.add_subcommand("wall-residual", "PDE residual of the tanh wall profile");
  c->add_option("--mu", o->w.mu)->capture_default_str();
  c->add_option("--lambda", o->w.lambda)->capture_default_str();
  c->add_option("--v", o->w.v, "boost velocity")->capture_default_str();
  c->add_option("--profile", o->profile)->check(CLI::IsMember({"literal", "standard"}))->capture_default_str();
  c->add_option("--step", o->hs, "difference steps")->expected(1, -1);
  c->add_option("--out", output.out, "output file or directory");
  c->callback([o, &output, &run] {
    run = [o, &output] {
      o->w.profile = o->profile == "literal" ? kg::WallProfile::literal : kg::WallProfile::standard;
      const auto c = kg::wall_convergence(o->w, o->hs);
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < c.h.size(); ++i)
        rows.push_back({c.h[i], c.residual[i], i ? c.observed_order[i - 1] : std::nan("")});
      output.emit("wall.csv", csv({"h", "residual", "order"}, rows));
      if (c.h_independent_floor)
        std::fprintf(stderr, "finding: residual does not decrease with h (%s); the profile does not solve the equation\n",
                     num(c.residual.back()).c_str());
      return 0;
    };
  });
}

void add_simulate(CLI::App& app, Output& output, std::function<int()>& run) {
  struct Opts {
    std::string config;
    std::string stem = "snap";
    unsigned workers = 0;
  };
  auto o = std::make_shared<Opts>();
  auto* c = app.add_subcommand("simulate", "3D simulation of the semilinear equation");
  c->add_option("--config", o->config, "JSON config")->required();
  c->add_option("--out", output.out, "snapshot directory")->capture_default_str();
  c->add_option("--stem", o->stem)->capture_default_str();
  c->add_option("--workers", o->workers, "0 = KG_THREADS or all cores");
  c->callback([o, &output, &run] {
    run = [o, &output] {
      const kg::SimConfig cfg = kg::load_sim_config(o->config);
      std::cout << kg::to_json(cfg).dump(2) << '\n';
      if (output.out.empty()) output.out = "out";
      kg::RunOptions opt;
      opt.out_dir = output.directory();
      opt.stem = o->stem;
      opt.workers = o->workers;
      const auto sum = kg::run_simulation(cfg, opt);
      for (const auto& s : sum.snapshots) {
        output.add_file(opt.out_dir / s.raw_file);
        output.add_file(opt.out_dir / s.meta_file);
      }
      output.add_file(opt.out_dir / sum.manifest_file);
      std::fprintf(stderr, "%ld steps, %zu snapshots, %.1f s, CFL monitor flags %ld\n", sum.steps, sum.snapshots.size(),
                   sum.wall_seconds, long(sum.monitor_flags));
      return 0;
    };
  });
}

void add_bubbles(CLI::App& app, Output& output, std::function<int()>& run) {
  struct Opts {
    std::string dir;
    double eps = 0;
    int ref = 0;
  };
  auto o = std::make_shared<Opts>();
  auto* c = app.add_subcommand("bubbles", "bubble detection and timeline over snapshots");
  c->add_option("--snapshots", o->dir)->required();
  c->add_option("--epsilon", o->eps, "threshold (default 1e-6 max|psi| of the first snapshot)");
  c->add_option("--reference-sign", o->ref, "+1 or -1 (default: sign of the first snapshot's integral)");
  c->add_option("--out", output.out, "timeline .jsonl file or directory");
  c->callback([o, &output, &run] {
    run = [o, &output] {
      const auto files = kg::list_snapshots(o->dir);
      if (files.empty()) throw kg::DomainError("no snapshots in " + o->dir);
      const kg::Field3D first = kg::read_snapshot(files.front());
      const double eps = o->eps > 0 ? o->eps : kg::default_epsilon(first);
      const int ref = o->ref ? o->ref : kg::reference_sign_of(first);
      const auto tl = kg::build_timeline(files.size(), [&](std::size_t i) { return kg::read_snapshot(files[i]); }, eps, ref);
      std::ostringstream s;
      kg::write_timeline_jsonl(tl, s);
      output.emit("timeline.jsonl", s.str());
      for (auto k : {kg::EventKind::formation, kg::EventKind::merge, kg::EventKind::split,
                     kg::EventKind::topology_change, kg::EventKind::disappearance}) {
        const auto n = std::count_if(tl.events.begin(), tl.events.end(), [k](const auto& e) { return e.kind == k; });
        if (n) std::fprintf(stderr, "%-16s first t=%s, %ld events\n", kg::to_string(k).c_str(), num(tl.first(k)).c_str(), long(n));
      }
      return 0;
    };
  });
}

void add_tail(CLI::App& app, Output& output, std::function<int()>& run) {
  struct Opts {
    std::string v = "tailexp:1.2", s = "0:0.95:20";
    double tol = 1e-12;
  };
  auto o = std::make_shared<Opts>();
  auto* c = app.add_subcommand("tail", "v(s) - (1/2) int_0^s v");
  c->add_option("--v", o->v, "profile")->capture_default_str();
  c->add_option("--s", o->s, "point or lo:hi:n")->capture_default_str();
  c->add_option("--tol", o->tol)->capture_default_str();
  c->add_option("--out", output.out, "output file or directory");
  c->callback([o, &output, &run] {
    run = [o, &output] {
      const kg::Profile v = parse_profile(o->v);
      std::vector<std::vector<double>> rows;
      for (double s : grid(o->s)) rows.push_back({s, kg::tail_functional(v.f, s, o->tol)});
      output.emit("tail.csv", csv({"s", "tail"}, rows));
      return 0;
    };
  });
}

void add_special(CLI::App& app, std::function<int()>& run) {
  struct Opts {
    double a = 0, b = 0, c = 1, z = 0, x = 0, tol = 1e-16;
  };
  auto o = std::make_shared<Opts>();
  auto* sp = app.add_subcommand("special", "special functions");
  sp->require_subcommand(1);
  auto* h = sp->add_subcommand("hyp2f1", "Gauss hypergeometric function");
  h->add_option("--a", o->a)->required();
  h->add_option("--b", o->b)->required();
  h->add_option("--c", o->c)->required();
  h->add_option("--z", o->z)->required();
  h->add_option("--tol", o->tol)->capture_default_str();
  h->callback([o, &run] {
    run = [o] {
      const auto r = kg::gauss_2f1(o->a, o->b, o->c, o->z, o->tol);
      std::printf("%s\n", num(r.value).c_str());
      std::fprintf(stderr, "terms %d, error estimate %s\n", r.terms_used, num(r.est_error).c_str());
      return 0;
    };
  });
  for (const char* name : {"i0", "i1"}) {
    auto* b = sp->add_subcommand(name, std::string("modified Bessel function ") + name);
    b->add_option("--x", o->x)->required();
    const bool zero = std::string(name) == "i0";
    b->callback([o, zero, &run] {
      run = [o, zero] {
        std::printf("%s\n", num(zero ? kg::bessel_i0(o->x) : kg::bessel_i1(o->x)).c_str());
        return 0;
      };
    });
  }
}

}  // namespace

void register_commands(CLI::App& app, Output& output, std::function<int()>& run) {
  add_kernel(app, output, run);
  add_verify(app, run);
  add_transform(app, output, run);
  add_maxprinciple(app, output, run);
  add_picard(app, output, run);
  add_duffing(app, output, run);
  add_functional(app, output, run);
  add_signcond(app, run);
  add_wall(app, output, run);
  add_simulate(app, output, run);
  add_bubbles(app, output, run);
  add_tail(app, output, run);
  add_special(app, run);
}

}  // namespace kgcli
