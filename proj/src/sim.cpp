// Copyright 2026 The agestruct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "agestruct/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "agestruct/error.hpp"

namespace agestruct {

HistoryBuffer::HistoryBuffer(const AgeProfile& history) : data_(history) {}

void HistoryBuffer::push(double value) {
  const Eigen::Index n = data_.size();
  head_ = (head_ + n - 1) % n;
  data_(head_) = value;
}

double HistoryBuffer::weighted_sum(const AgeProfile& w) const {
  const Eigen::Index n = data_.size();
  const Eigen::Index front = n - head_;
  double s = (w.head(front) * data_.tail(front)).sum();
  if (head_ > 0) s += (w.tail(head_) * data_.head(head_)).sum();
  return s;
}

AgeProfile HistoryBuffer::to_profile() const {
  const Eigen::Index n = data_.size();
  AgeProfile out(n);
  const Eigen::Index front = n - head_;
  out.head(front) = data_.tail(front);
  out.tail(head_) = data_.head(head_);
  return out;
}

IpdeStepper::IpdeStepper(const Discretization& disc) : disc_(disc) {
  const double h = disc_.grid.step();
  const Eigen::Index n = disc_.grid.size();
  for (Species s : kBothSpecies) {
    const SampledKernels& k = disc_.of(s);
    AgeProfile cell = AgeProfile::Ones(n);
    cell.tail(n - 1) =
        (-0.5 * h * (k.mortality.head(n - 1) + k.mortality.tail(n - 1))).exp();
    cell_survival_[index_of(s)] = cell;
    boundary_denominator_[index_of(s)] = 1.0 - disc_.weights(0) * k.birth(0);
  }
}

double IpdeStepper::renewal_boundary(Species s, const AgeProfile& x) const {
  const double denom = boundary_denominator_[index_of(s)];
  if (!(denom > 0))
    throw NumericalError("renewal boundary: 1 - w0 k(0) <= 0, grid too coarse");
  const Eigen::Index n = x.size();
  return (disc_.weights.tail(n - 1) * disc_.of(s).birth.tail(n - 1) *
          x.tail(n - 1))
             .sum() /
         denom;
}

double IpdeStepper::interaction_rate(Species s, const PopulationState& x) const {
  return (disc_.weights * disc_.of(s).interaction * x[index_of(other(s))]).sum();
}

PopulationState IpdeStepper::step(const PopulationState& x, double u) const {
  const double h = disc_.grid.step();
  const Eigen::Index n = disc_.grid.size();
  PopulationState next;
  for (Species s : kBothSpecies) {
    const int i = index_of(s);
    double rate = interaction_rate(s, x);
    if (s == Species::second) rate += u;
    AgeProfile& y = next[i];
    y.resize(n);
    y.tail(n - 1) =
        x[i].head(n - 1) * cell_survival_[i].tail(n - 1) * std::exp(-h * rate);
    y(0) = renewal_boundary(s, y);
  }
  return next;
}

PopulationState step_ipde(const Discretization& disc, const PopulationState& x,
                          double u) {
  return IpdeStepper(disc).step(x, u);
}

OdeIdeState to_ode_ide_state(const TransformedState& state) {
  OdeIdeState out;
  out.eta = state.eta;
  for (int i = 0; i < 2; ++i) out.psi[i] = HistoryBuffer(state.psi[i]);
  return out;
}

TransformedState to_transformed_state(const OdeIdeState& state) {
  TransformedState out;
  out.eta = state.eta;
  for (int i = 0; i < 2; ++i) out.psi[i] = state.psi[i].to_profile();
  return out;
}

OdeIdeStepper::OdeIdeStepper(std::shared_ptr<const StateTransform> transform)
    : tr_(std::move(transform)), ode_(ode_coefficients(tr_->equilibrium())) {
  for (Species s : kBothSpecies)
    moment_weight_[index_of(s)] =
        tr_->equilibrium().disc.weights * tr_->interaction_kernel(s);
}

Eigen::Vector2d OdeIdeStepper::rhs(const Eigen::Vector2d& eta,
                                   const Eigen::Vector2d& s, double u) const {
  return {-ode_.lambda2 * std::expm1(eta(1) + std::log1p(s(1))),
          -ode_.lambda1 * std::expm1(eta(0) + std::log1p(s(0))) + ode_.u_star -
              u};
}

double OdeIdeStepper::renewal_value(Species s, const HistoryBuffer& psi) const {
  return psi.weighted_sum(tr_->renewal_weights(s));
}

OdeIdeState OdeIdeStepper::step(const OdeIdeState& state, double u) const {
  const double h = step_size();
  const Eigen::Vector2d s(state.psi[0].weighted_sum(moment_weight_[0]),
                          state.psi[1].weighted_sum(moment_weight_[1]));
  if (!(s.array() > -1).all())
    throw NumericalError("ODE-IDE step: interaction moment <= -1");
  const Eigen::Vector2d& e = state.eta;
  const Eigen::Vector2d k1 = rhs(e, s, u);
  const Eigen::Vector2d k2 = rhs(e + 0.5 * h * k1, s, u);
  const Eigen::Vector2d k3 = rhs(e + 0.5 * h * k2, s, u);
  const Eigen::Vector2d k4 = rhs(e + h * k3, s, u);

  OdeIdeState next = state;
  next.eta = e + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  for (Species sp : kBothSpecies) {
    HistoryBuffer& psi = next.psi[index_of(sp)];
    psi.push(renewal_value(sp, state.psi[index_of(sp)]));
  }
  return next;
}

PopulationState underpopulated_profiles(const EquilibriumData& eq) {
  const AgeProfile factor = (-0.2 * (1.0 + eq.disc.ages)).exp();
  return {eq.profile[0] * factor, eq.profile[1] * factor};
}

SimContext SimContext::build(const ModelConfig& config) {
  SimContext ctx;
  ctx.config = config;
  ctx.transform =
      std::make_shared<const StateTransform>(assemble_equilibrium(config));
  ctx.ode = ode_coefficients(ctx.transform->equilibrium());
  try {
    ctx.certificates = build_certificates(*ctx.transform, config);
  } catch (const CertificateError&) {
    ctx.certificates.reset();
  }
  return ctx;
}

namespace {

class Recorder {
 public:
  Recorder(const SimContext& ctx, const SimOptions& opt, std::size_t steps)
      : ctx_(ctx), opt_(opt) {
    const double h = ctx.equilibrium().grid().step();
    for (double t : opt.snapshot_times) {
      const long long k = std::llround(t / h);
      if (k >= 0 && static_cast<std::size_t>(k) <= steps)
        snapshot_steps_.emplace_back(k, t);
    }
    std::sort(snapshot_steps_.begin(), snapshot_steps_.end());
    traj_.times.reserve(steps + 1);
  }

  bool wants_profiles(std::size_t n) const {
    if (opt_.observer) return true;
    for (const auto& [k, t] : snapshot_steps_)
      if (static_cast<std::size_t>(k) == n) return true;
    return false;
  }

  void record(std::size_t n, double t, const Eigen::Vector2d& eta, double u,
              const TransformedState& state, const PopulationState* x) {
    const StateTransform& tr = *ctx_.transform;
    const AgeGrid& grid = ctx_.equilibrium().grid();
    traj_.times.push_back(t);
    traj_.eta.push_back(eta);
    traj_.u.push_back(u);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const bool admissible = (state.psi[0] > -1).all() && (state.psi[1] > -1).all();
    if (!admissible) traj_.profiles_positive = false;
    if (x && (!((*x)[0] > 0).all() || !((*x)[1] > 0).all()))
      traj_.profiles_positive = false;
    if (ctx_.certificates && admissible) {
      const CertificateData& c = *ctx_.certificates;
      traj_.V.push_back(V_total(eta, state.psi[0], state.psi[1], c, grid));
      traj_.G1.push_back(G_functional(state.psi[0], c.sigma[0], grid));
      traj_.G2.push_back(G_functional(state.psi[1], c.sigma[1], grid));
    } else {
      traj_.V.push_back(nan);
      traj_.G1.push_back(nan);
      traj_.G2.push_back(nan);
    }
    traj_.psi_sup1.push_back(state.psi[0].abs().maxCoeff());
    traj_.psi_sup2.push_back(state.psi[1].abs().maxCoeff());
    traj_.p_residual1.push_back(tr.constraint_p(Species::first, state.psi[0]));
    traj_.p_residual2.push_back(tr.constraint_p(Species::second, state.psi[1]));
    traj_.boundary_residual1.push_back(
        tr.boundary_residual(Species::first, state.psi[0]));
    traj_.boundary_residual2.push_back(
        tr.boundary_residual(Species::second, state.psi[1]));
    if (x) {
      for (const auto& [k, ts] : snapshot_steps_)
        if (static_cast<std::size_t>(k) == n) traj_.snapshots.push_back({ts, *x});
      if (opt_.observer) opt_.observer(t, *x);
    }
  }

  Trajectory take() { return std::move(traj_); }
  const Trajectory& current() const { return traj_; }

 private:
  const SimContext& ctx_;
  const SimOptions& opt_;
  std::vector<std::pair<long long, double>> snapshot_steps_;
  Trajectory traj_;
};

void check_guard(const Eigen::Vector2d& eta, double t, double threshold,
                 Recorder& rec) {
  if (std::abs(eta(0)) <= threshold && std::abs(eta(1)) <= threshold) return;
  std::ostringstream os;
  os << "blow-up guard: |eta| exceeded " << threshold << " at t = " << t
     << " (eta = " << eta(0) << ", " << eta(1) << ")";
  throw SimulationGuardError(os.str(), rec.take());
}

}  // namespace

Trajectory run_closed_loop(const SimContext& ctx, const SimOptions& opt) {
  const EquilibriumData& eq = ctx.equilibrium();
  const StateTransform& tr = *ctx.transform;
  const double h = eq.grid().step();
  const double t_final = opt.t_final.value_or(ctx.config.t_final);
  const std::size_t steps =
      static_cast<std::size_t>(std::max(0LL, std::llround(t_final / h)));
  const Eigen::Index n = eq.grid().size();

  PopulationState x;
  TransformedState state;
  switch (opt.ic.kind) {
    case InitialCondition::Kind::underpopulated:
      x = underpopulated_profiles(eq);
      state = tr.forward(x[0], x[1]);
      break;
    case InitialCondition::Kind::equilibrium:
      x = eq.profile;
      state.psi = {AgeProfile::Zero(n), AgeProfile::Zero(n)};
      break;
    case InitialCondition::Kind::profiles:
      x = opt.ic.profiles;
      if (x[0].size() != n || x[1].size() != n)
        throw ConfigError("initial profiles do not match the age grid");
      state = tr.forward(x[0], x[1]);
      break;
    case InitialCondition::Kind::eta_psi: {
      state = opt.ic.state;
      if (state.psi[0].size() != n || state.psi[1].size() != n)
        throw ConfigError("initial psi histories do not match the age grid");
      auto [x1, x2] = tr.reconstruct(state);
      x = {std::move(x1), std::move(x2)};
      break;
    }
  }

  const auto feedback = [&](const Eigen::Vector2d& eta) {
    return opt.open_loop ? ctx.ode.u_star
                         : control_law(eta, ctx.ode, ctx.config.gains);
  };

  Recorder rec(ctx, opt, steps);
  if (opt.solver == SolverKind::ipde) {
    const IpdeStepper stepper(eq.disc);
    for (std::size_t k = 0;; ++k) {
      const double t = static_cast<double>(k) * h;
      if (k > 0) state = tr.forward(x[0], x[1]);
      check_guard(state.eta, t, opt.blowup_threshold, rec);
      const double u = feedback(state.eta);
      rec.record(k, t, state.eta, u, state, &x);
      if (k == steps) break;
      x = stepper.step(x, u);
    }
  } else {
    const OdeIdeStepper stepper(ctx.transform);
    OdeIdeState s = to_ode_ide_state(state);
    for (std::size_t k = 0;; ++k) {
      const double t = static_cast<double>(k) * h;
      if (k > 0) state = to_transformed_state(s);
      check_guard(state.eta, t, opt.blowup_threshold, rec);
      const double u = feedback(state.eta);
      if (rec.wants_profiles(k) && (state.psi[0] > -1).all() &&
          (state.psi[1] > -1).all()) {
        auto [x1, x2] = tr.reconstruct(state);
        const PopulationState xr = {std::move(x1), std::move(x2)};
        rec.record(k, t, state.eta, u, state, &xr);
      } else {
        rec.record(k, t, state.eta, u, state, nullptr);
      }
      if (k == steps) break;
      s = stepper.step(s, u);
    }
  }
  return rec.take();
}

Trajectory run_closed_loop(const ModelConfig& config, const SimOptions& opt) {
  return run_closed_loop(SimContext::build(config), opt);
}

ExponentialFit fit_exponential(const std::vector<double>& t,
                               const std::vector<double>& y, double lo,
                               double hi, double t_min) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  std::size_t m = 0;
  for (std::size_t k = 0; k < std::min(t.size(), y.size()); ++k) {
    if (!(y[k] > lo && y[k] < hi) || t[k] < t_min) continue;
    const double ly = std::log(y[k]);
    st += t[k];
    sy += ly;
    stt += t[k] * t[k];
    sty += t[k] * ly;
    ++m;
  }
  if (m < 2) throw NumericalError("exponential fit: window empty");
  const double denom = m * stt - st * st;
  if (!(denom > 0)) throw NumericalError("exponential fit: degenerate window");
  ExponentialFit fit;
  fit.rate = (m * sty - st * sy) / denom;
  fit.prefactor = std::exp((sy - fit.rate * st) / m);
  fit.points = m;
  return fit;
}

DecayFit fit_psi_decay(const Trajectory& traj, Species s) {
  const ExponentialFit f =
      fit_exponential(traj.times, traj.psi_sup(s), 1e-10,
                      std::numeric_limits<double>::infinity());
  return {f.prefactor, -f.rate, f.points};
}

}  // namespace agestruct
