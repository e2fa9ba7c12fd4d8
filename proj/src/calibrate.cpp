// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

#include "homog/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "homog/error.hpp"
#include "homog/parallel.hpp"

namespace homog {

std::vector<std::string> ConstraintReport::violated() const {
  std::vector<std::string> v;
  if (!peak_above_onset) v.emplace_back("fpc > f0c");
  if (!peak_strain_beyond_elastic) v.emplace_back("epc > f0c/E");
  if (!tension_no_snapback) v.emplace_back("l_RSE < 2 E Gt / f0t^2");
  if (!compression_no_snapback) v.emplace_back("Gc / l_RSE > pre-peak compressive energy");
  if (!deployable) v.emplace_back("energies regularisable at the deployment length");
  return v;
}

ConstraintReport constraints_check(const ThetaVector& theta, double E, double l_rse, double deploy_length,
                                   double deploy_margin) {
  ConstraintReport r;
  r.peak_above_onset = theta.fpc > theta.f0c;
  r.peak_strain_beyond_elastic = theta.epc > theta.f0c / E;
  r.tension_no_snapback = l_rse - 2.0 * E * theta.Gt / (theta.f0t * theta.f0t) < 0.0;
  // The compression curve only exists once the first two hold.
  r.compression_no_snapback = false;
  if (r.peak_above_onset && r.peak_strain_beyond_elastic && l_rse > 0.0) {
    try {
      const CompressionEnergy en = compression_energy(to_material(theta, E, 0.0));
      r.compression_no_snapback = theta.Gc / l_rse > en.pre_peak;
      if (deploy_length > 0.0) {
        r.deployable = theta.Gc / deploy_length > (1.0 + deploy_margin) * en.pre_peak &&
                       deploy_length < 2.0 * E * theta.Gt / (theta.f0t * theta.f0t);
      }
    } catch (const Error&) {
      r.compression_no_snapback = false;
    }
  }
  return r;
}

CostFunction::CostFunction(Campaign campaign_iso, double E, double nu, double l_rse, CostOptions opt)
    : campaign_(std::move(campaign_iso)), e_(E), nu_(nu), l_rse_(l_rse), opt_(opt) {
  if (!(E > 0.0) || !(l_rse > 0.0)) fail(ErrorKind::InvalidArgument, "cost needs E > 0 and l_RSE > 0");
  for (const auto& r : campaign_.records) {
    work_.push_back(internal_work(r));
    if (!work_.back().empty()) campaign_work_ += std::abs(work_.back().back());
  }
}

Campaign CostFunction::replay(const ThetaVector& theta) const {
  const DamageModel model(to_material(theta, e_, nu_), l_rse_);
  Campaign out = campaign_;
  parallel_for(out.records.size(), opt_.jobs, [&](std::size_t i) {
    DamageState st = DamageState::virgin(model.params());
    for (auto& step : out.records[i].steps) {
      const StressUpdate up = model.integrate(step.strain, st);
      step.stress = up.stress;
      st = up.state;
    }
  });
  return out;
}

CostReport CostFunction::evaluate(const ThetaVector& theta) const {
  CostReport rep;
  for (const auto& r : campaign_.records) rep.case_ids.push_back(r.case_id);
  rep.constraints = constraints_check(theta, e_, l_rse_, opt_.deploy_length, opt_.deploy_margin);
  rep.per_case.assign(campaign_.records.size(), 0.0);
  Campaign replayed;
  bool ok = rep.constraints.feasible();
  if (ok) {
    try {
      replayed = replay(theta);
    } catch (const Error&) {
      ok = false;
    }
  }
  if (!ok) {
    rep.feasible = false;
    rep.total = kInfeasibleCost;
    return rep;
  }
  for (std::size_t i = 0; i < replayed.records.size(); ++i) {
    const std::vector<double> w = internal_work(replayed.records[i]);
    const std::vector<double>& ref = work_[i];
    if (w.empty()) continue;
    if (opt_.all_steps) {
      for (std::size_t k = 0; k < w.size(); ++k) rep.per_case[i] += std::abs(w[k] - ref[k]);
    } else {
      rep.per_case[i] = std::abs(w.back() - ref.back());
    }
  }
  for (double d : rep.per_case) rep.total += d;
  return rep;
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::StepTolerance: return "step_tolerance";
    case StopReason::RadiusTolerance: return "radius_tolerance";
    case StopReason::Stationary: return "stationary";
    case StopReason::EpochCap: return "epoch_cap";
  }
  return "unknown";
}

namespace {

using MatN = Eigen::Matrix<double, kThetaSize, kThetaSize>;

bool usable(double v) { return std::isfinite(v) && v < kInfeasibleCost; }

double model_value(const ThetaArray& g, const MatN& b, const ThetaArray& s) { return g.dot(s) + 0.5 * s.dot(b * s); }

// Minimises g.s + s'Bs/2 over lo <= s <= hi by projected Newton steps on the
// free variables. B is kept positive definite by the caller.
ThetaArray box_qp(const ThetaArray& g, const MatN& b, const ThetaArray& lo, const ThetaArray& hi) {
  ThetaArray s = ThetaArray::Zero();
  double m = 0.0;
  for (int it = 0; it < 50; ++it) {
    const ThetaArray r = g + b * s;
    std::vector<int> free;
    for (int i = 0; i < kThetaSize; ++i) {
      const bool at_lo = s[i] <= lo[i] && r[i] > 0.0;
      const bool at_hi = s[i] >= hi[i] && r[i] < 0.0;
      if (!at_lo && !at_hi) free.push_back(i);
    }
    if (free.empty()) break;
    const Eigen::Index nf = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXd bff(nf, nf);
    Eigen::VectorXd rf(nf);
    for (Eigen::Index a = 0; a < nf; ++a) {
      rf[a] = r[free[a]];
      for (Eigen::Index c = 0; c < nf; ++c) bff(a, c) = b(free[a], free[c]);
    }
    const Eigen::VectorXd df = bff.ldlt().solve(-rf);
    ThetaArray d = ThetaArray::Zero();
    for (Eigen::Index a = 0; a < nf; ++a) d[free[a]] = df[a];
    // Fall back to steepest descent if the reduced Newton direction is unusable.
    if (!d.allFinite() || d.dot(r) >= 0.0) {
      d = -r;
      for (int i = 0; i < kThetaSize; ++i) {
        if (std::find(free.begin(), free.end(), i) == free.end()) d[i] = 0.0;
      }
    }
    bool moved = false;
    double alpha = 1.0;
    for (int k = 0; k < 40; ++k, alpha *= 0.5) {
      const ThetaArray trial = (s + alpha * d).cwiseMax(lo).cwiseMin(hi);
      const double mt = model_value(g, b, trial);
      if (mt < m) {
        moved = (trial - s).lpNorm<Eigen::Infinity>() > 1e-16;
        s = trial;
        m = mt;
        break;
      }
    }
    if (!moved) break;
  }
  return s;
}

struct Sampler {
  const UnitCost& f;
  int evaluations = 0;
  double operator()(const ThetaArray& xi) {
    ++evaluations;
    return f(xi);
  }
};

// Central differences inside the box, one-sided at a bound or next to an
// infeasible sample.
ThetaArray gradient(Sampler& f, const ThetaArray& x, double fx, double h) {
  ThetaArray g;
  for (int i = 0; i < kThetaSize; ++i) {
    const bool up_ok = x[i] + h <= 1.0;
    const bool down_ok = x[i] - h >= 0.0;
    double fp = 0.0, fm = 0.0;
    bool has_p = false, has_m = false;
    if (up_ok) {
      ThetaArray y = x;
      y[i] += h;
      fp = f(y);
      has_p = usable(fp);
    }
    if (down_ok) {
      ThetaArray y = x;
      y[i] -= h;
      fm = f(y);
      has_m = usable(fm);
    }
    if (has_p && has_m) {
      g[i] = (fp - fm) / (2.0 * h);
    } else if (has_p) {
      g[i] = (fp - fx) / h;
    } else if (has_m) {
      g[i] = (fx - fm) / h;
    } else {
      g[i] = 0.0;
    }
  }
  return g;
}

void bfgs_update(MatN& b, const ThetaArray& s, const ThetaArray& y, bool first) {
  if (first && s.dot(y) > 0.0) b = (y.dot(y) / s.dot(y)) * MatN::Identity();
  const ThetaArray bs = b * s;
  const double sbs = s.dot(bs);
  if (!(sbs > 0.0)) return;
  // Powell damping keeps B positive definite on non-convex pieces.
  const double sy = s.dot(y);
  const double phi = sy >= 0.2 * sbs ? 1.0 : 0.8 * sbs / (sbs - sy);
  const ThetaArray r = phi * y + (1.0 - phi) * bs;
  b += r * r.transpose() / s.dot(r) - bs * bs.transpose() / sbs;
  b = 0.5 * (b + b.transpose()).eval();
}

}  // namespace

OptimizerResult minimize_unit_box(const UnitCost& f, const ThetaArray& xi0, const OptimizerConfig& cfg) {
  Sampler sample{f};
  OptimizerResult res;
  ThetaArray x = xi0.cwiseMax(0.0).cwiseMin(1.0);
  double fx = sample(x);
  if (!usable(fx)) fail(ErrorKind::NoProgress, "cost is infeasible at the start point");
  ThetaArray g = gradient(sample, x, fx, cfg.fd_step);
  MatN b = MatN::Identity();
  bool first_update = true;
  double radius = cfg.initial_radius;
  int accepted = 0;
  res.trace.push_back({0, fx, 0.0, radius});
  res.reason = StopReason::EpochCap;
  int epoch = 0;
  while (epoch < cfg.max_epochs) {
    ++epoch;
    const ThetaArray projected = (x - g).cwiseMax(0.0).cwiseMin(1.0) - x;
    if (projected.lpNorm<Eigen::Infinity>() <= 1e-14) {
      res.reason = StopReason::Stationary;
      break;
    }
    const ThetaArray lo = (-x).cwiseMax(-radius);
    const ThetaArray hi = (ThetaArray::Ones() - x).cwiseMin(radius);
    const ThetaArray s = box_qp(g, b, lo, hi);
    const double pred = -model_value(g, b, s);
    const double step = s.lpNorm<Eigen::Infinity>();
    bool take = false;
    double ft = 0.0;
    ThetaArray xt = x;
    if (pred > 0.0 && step > 0.0) {
      xt = (x + s).cwiseMax(0.0).cwiseMin(1.0);
      ft = sample(xt);
      take = usable(ft) && ft < fx && (fx - ft) / pred > 1e-4;
    }
    if (take) {
      const double rho = (fx - ft) / pred;
      const ThetaArray gt = gradient(sample, xt, ft, cfg.fd_step);
      bfgs_update(b, xt - x, gt - g, first_update);
      first_update = false;
      x = xt;
      fx = ft;
      g = gt;
      ++accepted;
      if (rho > 0.75 && step > 0.8 * radius) radius = std::min(2.0 * radius, 1.0);
      if (rho < 0.25) radius = 0.5 * radius;
      res.trace.push_back({epoch, fx, step, radius});
      if (step < cfg.tol) {
        res.reason = StopReason::StepTolerance;
        break;
      }
    } else {
      radius = 0.25 * (step > 0.0 ? std::min(step, radius) : radius);
      if (radius < cfg.tol) {
        res.reason = StopReason::RadiusTolerance;
        break;
      }
    }
    if (accepted == 0 && sample.evaluations >= 3 * kThetaSize) {
      fail(ErrorKind::NoProgress, "no step accepted within the first " + std::to_string(3 * kThetaSize) +
                                      " cost evaluations");
    }
  }
  res.xi = x;
  res.cost = fx;
  res.evaluations = sample.evaluations;
  res.epochs = epoch;
  return res;
}

Calibration calibrate(const CostFunction& cost, const ThetaVector& theta0, const Bounds& bounds,
                      const OptimizerConfig& cfg) {
  bounds.validate();
  Calibration c;
  c.theta0 = theta0;
  c.bounds = bounds;
  c.campaign_work = cost.campaign_work();
  const ThetaArray xi0 = normalize(theta0, bounds);
  c.start = cost.evaluate(theta0);
  if (!c.start.feasible) {
    std::string names;
    for (const auto& v : c.start.constraints.violated()) names += (names.empty() ? "" : "; ") + v;
    fail(ErrorKind::NoProgress, "start point violates constraints: " + (names.empty() ? "replay failed" : names));
  }
  const auto to_theta = [&](const ThetaArray& xi) {
    ThetaArray a = denormalize(xi, bounds).array();
    return ThetaVector::from(a.cwiseMax(bounds.lower).cwiseMin(bounds.upper));
  };
  c.optimizer = minimize_unit_box([&](const ThetaArray& xi) { return cost(to_theta(xi)); }, xi0, cfg);
  c.theta_star = to_theta(c.optimizer.xi);
  c.final = cost.evaluate(c.theta_star);
  return c;
}

namespace {

Json to_json(const CostReport& r) {
  Json cases = Json::array();
  for (std::size_t i = 0; i < r.per_case.size(); ++i) cases.push_back({{"case", r.case_ids[i]}, {"abs_dW", r.per_case[i]}});
  Json violated = Json::array();
  for (const auto& v : r.constraints.violated()) violated.push_back(v);
  return Json{{"total", r.total}, {"feasible", r.feasible}, {"violated", violated}, {"per_case", cases}};
}

}  // namespace

Json to_json(const Calibration& c) {
  Json units = Json::object();
  for (int i = 0; i < kThetaSize; ++i) units[theta_names()[i]] = theta_units()[i];
  return Json{{"theta0", to_json(c.theta0)},
              {"bounds", to_json(c.bounds)},
              {"theta_star", to_json(c.theta_star)},
              {"units", units},
              {"campaign_work", c.campaign_work},
              {"start_cost", to_json(c.start)},
              {"final_cost", to_json(c.final)},
              {"relative_cost", c.campaign_work > 0.0 ? c.final.total / c.campaign_work : 0.0},
              {"evaluations", c.optimizer.evaluations},
              {"epochs", c.optimizer.epochs},
              {"accepted_steps", static_cast<int>(c.optimizer.trace.size()) - 1},
              {"stop_reason", to_string(c.optimizer.reason)}};
}

std::string trace_csv(const OptimizerResult& r) {
  std::ostringstream os;
  os.precision(17);
  os << "epoch,cost,step_norm,radius\n";
  for (const auto& t : r.trace) os << t.epoch << ',' << t.cost << ',' << t.step_norm << ',' << t.radius << '\n';
  return os.str();
}

}  // namespace homog
