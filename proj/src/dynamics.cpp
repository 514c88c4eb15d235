// Copyright 2026 The nambu-dyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nambu/dynamics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "nambu/matrix_io.hpp"

namespace nambu {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void add_flag(std::vector<std::string>& flags, const std::string& f) {
  if (std::find(flags.begin(), flags.end(), f) == flags.end()) flags.push_back(f);
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::array<double, kTrackedCasimirs> casimirs_of(const Matrix& y) {
  std::array<double, kTrackedCasimirs> c{};
  Matrix p = y;
  for (int k = 1; k <= kTrackedCasimirs; ++k) {
    if (k > 1) p = p * y;
    c[static_cast<std::size_t>(k - 1)] = p.trace().real();
  }
  return c;
}

// Accumulates recorded rows and running diagnostics.
class Recorder {
 public:
  Recorder(const IntegratorConfig& cfg, const std::vector<NamedObservable>& obs) : cfg_(cfg), obs_(obs) {
    for (const auto& [name, fn] : obs_) traj_.observable_names.push_back(name);
    traj_.diagnostics.min_eigenvalue = kInf;
  }

  void record(double t, const Matrix& y) {
    DensityMatrix state(y, kInf);
    std::vector<std::string> flags;
    Diagnostics& diag = traj_.diagnostics;
    if (cfg_.track_casimirs) {
      const auto c = casimirs_of(y);
      if (traj_.casimirs.empty()) c0_ = c;
      for (std::size_t k = 0; k < c.size(); ++k) {
        const double drift = std::abs(c[k] - c0_[k]);
        diag.max_casimir_drift[k] = std::max(diag.max_casimir_drift[k], drift);
        if (drift > cfg_.tolerances.casimir_tol) add_flag(flags, "casimir_drift");
      }
      traj_.casimirs.push_back(c);
    }
    if (cfg_.track_spectrum) {
      SpectrumRecord rec = spectrum(state, t);
      if (traj_.spectra.empty()) s0_ = rec.eigenvalues;
      const double drift = (rec.eigenvalues - s0_).cwiseAbs().maxCoeff();
      diag.max_spectrum_drift = std::max(diag.max_spectrum_drift, drift);
      if (drift > cfg_.tolerances.spectrum_tol) add_flag(flags, "spectrum_drift");
      const double lo = rec.eigenvalues.minCoeff();
      diag.min_eigenvalue = std::min(diag.min_eigenvalue, lo);
      if (lo < -cfg_.tolerances.herm_tol) add_flag(flags, "negative_eigenvalue");
      traj_.spectra.push_back(std::move(rec));
    }
    if (pending_herm_ > cfg_.tolerances.herm_tol) add_flag(flags, "hermiticity");
    pending_herm_ = 0.0;
    std::vector<double> values;
    values.reserve(obs_.size());
    for (const auto& [name, fn] : obs_) values.push_back(fn(state));
    traj_.observables.push_back(std::move(values));
    for (const std::string& f : flags) add_flag(diag.flags, f);
    traj_.row_flags.push_back(join(flags, ';'));
    traj_.times.push_back(t);
    traj_.states.push_back(std::move(state));
  }

  // Symmetrizes a freshly stepped state and logs its defect.
  Matrix accept(const Matrix& y) {
    if (!all_finite(y)) fail(ErrorCode::NonFiniteState, "state became non-finite during integration");
    const double defect = hermiticity_defect(y);
    traj_.diagnostics.max_hermiticity_defect = std::max(traj_.diagnostics.max_hermiticity_defect, defect);
    pending_herm_ = std::max(pending_herm_, defect);
    ++traj_.diagnostics.accepted_steps;
    return hermitize(y);
  }

  void reject() { ++traj_.diagnostics.rejected_steps; }

  Trajectory finish() {
    if (!cfg_.track_spectrum) traj_.diagnostics.min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
    return std::move(traj_);
  }

 private:
  const IntegratorConfig& cfg_;
  const std::vector<NamedObservable>& obs_;
  Trajectory traj_;
  std::array<double, kTrackedCasimirs> c0_{};
  RealVector s0_;
  double pending_herm_ = 0.0;
};

}  // namespace

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorCode::InvalidArgument, "dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) fail(ErrorCode::InvalidArgument, "t_end must be positive");
  if (!(dt < t_end)) fail(ErrorCode::InvalidArgument, "dt must be smaller than t_end");
  if (record_every < 1) fail(ErrorCode::InvalidArgument, "record_every must be a positive integer");
  if (!(tolerances.herm_tol > 0.0) || !(tolerances.casimir_tol > 0.0) || !(tolerances.spectrum_tol > 0.0)) {
    fail(ErrorCode::InvalidArgument, "tolerances must be positive");
  }
  if (method == Method::RK4Adaptive && !(adaptive_tol > 0.0)) {
    fail(ErrorCode::InvalidArgument, "adaptive_tol must be positive");
  }
}

Matrix rk4_step(const Rhs& f, const Matrix& y, double dt) {
  const Matrix k1 = f(y);
  const Matrix k2 = f(y + (0.5 * dt) * k1);
  const Matrix k3 = f(y + (0.5 * dt) * k2);
  const Matrix k4 = f(y + dt * k3);
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Matrix propagate(const Rhs& f, Matrix y, double t, double dt) {
  if (!(dt > 0.0)) fail(ErrorCode::InvalidArgument, "dt must be positive");
  if (t <= 0.0) return y;
  const long steps = static_cast<long>(std::ceil(t / dt * (1.0 - 1e-12)));
  const double h = t / static_cast<double>(steps);
  for (long s = 0; s < steps; ++s) y = rk4_step(f, y, h);
  if (!all_finite(y)) fail(ErrorCode::NonFiniteState, "propagated operator became non-finite");
  return y;
}

Rhs bracket_rhs(const BracketSpec& spec) {
  return [spec](const Matrix& rho) { return eom_rhs(spec, rho); };
}

Trajectory integrate(const Rhs& f, const DensityMatrix& rho0, const IntegratorConfig& cfg,
                     const std::vector<NamedObservable>& observables) {
  cfg.validate();
  Recorder rec(cfg, observables);
  Matrix y = rho0.matrix();
  rec.record(0.0, y);

  if (cfg.method == Method::RK4) {
    // Uniform steps that land exactly on t_end.
    const long steps = static_cast<long>(std::ceil(cfg.t_end / cfg.dt * (1.0 - 1e-12)));
    const double h = cfg.t_end / static_cast<double>(steps);
    for (long s = 1; s <= steps; ++s) {
      y = rec.accept(rk4_step(f, y, h));
      if (s % cfg.record_every == 0 || s == steps) {
        rec.record(s == steps ? cfg.t_end : h * static_cast<double>(s), y);
      }
    }
    return rec.finish();
  }

  // Step doubling: compare one step of h with two of h/2.
  const double h_min = 1e-14 * std::max(1.0, cfg.t_end);
  double t = 0.0;
  double h = cfg.dt;
  long accepted = 0;
  while (t < cfg.t_end) {
    const bool last = h >= cfg.t_end - t;
    const double step = last ? cfg.t_end - t : h;
    const Matrix full = rk4_step(f, y, step);
    const Matrix half = rk4_step(f, rk4_step(f, y, 0.5 * step), 0.5 * step);
    const bool finite = all_finite(full) && all_finite(half);
    const double err = finite ? max_abs(half - full) / 15.0 : kInf;
    if (err <= cfg.adaptive_tol) {
      y = rec.accept(half);
      t = last ? cfg.t_end : t + step;
      ++accepted;
      if (accepted % cfg.record_every == 0 || last) rec.record(t, y);
      const double grow = err > 0.0 ? 0.9 * std::pow(cfg.adaptive_tol / err, 0.2) : 2.0;
      h = step * std::clamp(grow, 0.2, 2.0);
    } else {
      rec.reject();
      const double shrink = finite ? 0.9 * std::pow(cfg.adaptive_tol / err, 0.2) : 0.25;
      h = step * std::clamp(shrink, 0.1, 0.5);
      if (h < h_min) {
        if (!finite) fail(ErrorCode::NonFiniteState, "state became non-finite during integration");
        fail(ErrorCode::StepRejected, "adaptive step size underflow at t=" + format_double(t));
      }
    }
  }
  return rec.finish();
}

Trajectory integrate(const BracketSpec& spec, const DensityMatrix& rho0, const IntegratorConfig& cfg,
                     const std::vector<NamedObservable>& observables) {
  for (const Generator& g : spec.generators()) {
    if (g.linear_part() && g.linear_part()->dim() != rho0.dim()) {
      fail(ErrorCode::DimensionMismatch, "generator and initial state dimensions differ");
    }
  }
  return integrate(bracket_rhs(spec), rho0, cfg, observables);
}

// ---------------------------------------------------------------------------
// Truncated power series in t.

namespace {

using MatSeries = std::vector<Matrix>;
using ScalarSeries = std::vector<cplx>;

MatSeries mul(const MatSeries& a, const MatSeries& b) {
  const std::size_t n = std::min(a.size(), b.size());
  MatSeries c(n, Matrix::Zero(a.front().rows(), a.front().cols()));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i <= k; ++i) c[k].noalias() += a[i] * b[k - i];
  return c;
}

ScalarSeries mul(const ScalarSeries& a, const ScalarSeries& b) {
  const std::size_t n = std::min(a.size(), b.size());
  ScalarSeries c(n, cplx(0.0));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i <= k; ++i) c[k] += a[i] * b[k - i];
  return c;
}

MatSeries scale(const ScalarSeries& s, const MatSeries& m) {
  const std::size_t n = std::min(s.size(), m.size());
  MatSeries c(n, Matrix::Zero(m.front().rows(), m.front().cols()));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i <= k; ++i) c[k] += s[i] * m[k - i];
  return c;
}

void add_into(MatSeries& acc, const MatSeries& m, cplx factor) {
  for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += factor * m[k];
}

ScalarSeries trace(const MatSeries& m) {
  ScalarSeries s(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) s[k] = m[k].trace();
  return s;
}

ScalarSeries scalar_power(const ScalarSeries& x, int p, std::size_t n) {
  ScalarSeries r(n, cplx(0.0));
  r[0] = 1.0;
  for (int i = 0; i < p; ++i) r = mul(r, x);
  return r;
}

// Gradient of one generator along the series, given powers[p] = rho^p.
MatSeries gradient_series(const Generator& g, const std::vector<MatSeries>& powers,
                          const std::vector<ScalarSeries>& cas, std::size_t n, Index d) {
  MatSeries grad(n, Matrix::Zero(d, d));
  if (g.linear_part()) grad[0] += g.linear_part()->matrix();
  for (const auto& [exps, coef] : g.polynomial_part().terms()) {
    for (std::size_t k = 0; k < exps.size(); ++k) {
      if (exps[k] == 0) continue;
      // d/dC_{k+1} of coef * prod_j C_j^{e_j}
      ScalarSeries partial(n, cplx(0.0));
      partial[0] = coef * static_cast<double>(exps[k]);
      for (std::size_t j = 0; j < exps.size(); ++j) {
        const int e = j == k ? exps[j] - 1 : exps[j];
        if (e > 0) partial = mul(partial, scalar_power(cas[j], e, n));
      }
      add_into(grad, scale(partial, powers[k]), static_cast<double>(k + 1));
    }
  }
  return grad;
}

void antisym_series(const std::vector<MatSeries>& ops, std::vector<bool>& used, const MatSeries& prefix,
                    int sign, std::size_t depth, MatSeries& acc) {
  int rank = 0;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (used[i]) continue;
    const int s = (rank % 2 == 0) ? sign : -sign;
    ++rank;
    const MatSeries next = mul(prefix, ops[i]);
    if (depth + 1 == ops.size()) {
      add_into(acc, next, static_cast<double>(s));
      continue;
    }
    used[i] = true;
    antisym_series(ops, used, next, s, depth + 1, acc);
    used[i] = false;
  }
}

// Series of the right-hand side from the known coefficients of rho.
MatSeries rhs_series(const BracketSpec& spec, const MatSeries& rho) {
  const std::size_t n = rho.size();
  const Index d = rho.front().rows();
  int max_order = 1;
  for (const Generator& g : spec.generators()) max_order = std::max(max_order, g.polynomial_part().max_order());
  std::vector<MatSeries> powers;
  MatSeries unit(n, Matrix::Zero(d, d));
  unit[0] = Matrix::Identity(d, d);
  powers.push_back(unit);
  for (int p = 1; p <= max_order; ++p) powers.push_back(mul(powers.back(), rho));
  std::vector<ScalarSeries> cas;
  for (int k = 1; k <= max_order; ++k) cas.push_back(trace(powers[static_cast<std::size_t>(k)]));

  std::vector<MatSeries> grads;
  for (const Generator& g : spec.generators()) grads.push_back(gradient_series(g, powers, cas, n, d));
  MatSeries acc(n, Matrix::Zero(d, d));
  std::vector<bool> used(grads.size(), false);
  antisym_series(grads, used, unit, 1, 0, acc);
  for (Matrix& m : acc) m *= spec.z();
  return acc;
}

MatSeries taylor_coefficients(const BracketSpec& spec, const DensityMatrix& rho0, int order) {
  if (order < 0 || order > 20) fail(ErrorCode::InvalidArgument, "taylor order must lie in [0, 20]");
  MatSeries rho{rho0.matrix()};
  for (int j = 0; j < order; ++j) {
    const MatSeries rhs = rhs_series(spec, rho);
    rho.push_back(rhs[static_cast<std::size_t>(j)] / static_cast<double>(j + 1));
  }
  return rho;
}

}  // namespace

std::vector<double> taylor_term_norms(const BracketSpec& spec, const DensityMatrix& rho0, double t, int order) {
  const MatSeries c = taylor_coefficients(spec, rho0, order);
  std::vector<double> norms;
  double tp = 1.0;
  for (const Matrix& m : c) {
    norms.push_back(tp * max_abs(m));
    tp *= t;
  }
  return norms;
}

DensityMatrix taylor_oracle(const BracketSpec& spec, const DensityMatrix& rho0, double t, int order) {
  if (t == 0.0) {
    if (order < 0 || order > 20) fail(ErrorCode::InvalidArgument, "taylor order must lie in [0, 20]");
    return rho0;
  }
  const MatSeries c = taylor_coefficients(spec, rho0, order);
  // Horner evaluation.
  Matrix sum = c.back();
  for (std::size_t j = c.size() - 1; j-- > 0;) sum = c[j] + t * sum;

  std::vector<double> norms;
  double tp = 1.0;
  for (const Matrix& m : c) {
    norms.push_back(std::abs(tp) * max_abs(m));
    tp *= t;
  }
  const double negligible = 1e-15 * std::max(1.0, max_abs(rho0.matrix()));
  std::vector<double> tail;
  for (std::size_t j = norms.size() >= 3 ? norms.size() - 3 : 0; j < norms.size(); ++j)
    if (norms[j] > negligible) tail.push_back(norms[j]);
  for (std::size_t j = 1; j < tail.size(); ++j) {
    if (tail[j] > tail[j - 1]) {
      fail(ErrorCode::SeriesDiverging, "term norms grow at the end of the series (|t| = " +
                                           format_double(std::abs(t)) + ", order " + std::to_string(order) + ")");
    }
  }
  return DensityMatrix(hermitize(sum), kInf);
}

PureTrajectory evolve_pure(const Operator& h, const Vector& psi0, const IntegratorConfig& cfg) {
  cfg.validate();
  if (h.dim() != psi0.size()) fail(ErrorCode::DimensionMismatch, "Hamiltonian and state dimensions differ");
  if (!h.is_hermitian(cfg.tolerances.herm_tol)) fail(ErrorCode::NonHermitianInput, "Hamiltonian is not Hermitian");
  const Matrix mh = -kI * h.matrix();
  auto f = [&mh](const Vector& v) -> Vector { return mh * v; };
  PureTrajectory out;
  Vector psi = psi0;
  const double n0 = psi0.norm();
  out.times.push_back(0.0);
  out.states.push_back(psi);
  const long steps = static_cast<long>(std::ceil(cfg.t_end / cfg.dt * (1.0 - 1e-12)));
  const double dt = cfg.t_end / static_cast<double>(steps);
  for (long s = 1; s <= steps; ++s) {
    const Vector k1 = f(psi);
    const Vector k2 = f(psi + (0.5 * dt) * k1);
    const Vector k3 = f(psi + (0.5 * dt) * k2);
    const Vector k4 = f(psi + dt * k3);
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!psi.allFinite()) fail(ErrorCode::NonFiniteState, "state vector became non-finite");
    out.max_norm_drift = std::max(out.max_norm_drift, std::abs(psi.norm() - n0));
    if (s % cfg.record_every == 0 || s == steps) {
      out.times.push_back(s == steps ? cfg.t_end : dt * static_cast<double>(s));
      out.states.push_back(psi);
    }
  }
  return out;
}

double spectrum_drift(const Trajectory& traj) {
  if (traj.spectra.empty()) fail(ErrorCode::InvalidArgument, "trajectory has no recorded spectra");
  double drift = 0.0;
  const RealVector& s0 = traj.spectra.front().eigenvalues;
  for (const SpectrumRecord& r : traj.spectra) drift = std::max(drift, (r.eigenvalues - s0).cwiseAbs().maxCoeff());
  return drift;
}

double casimir_drift(const Trajectory& traj, int k) {
  if (k < 1 || k > kTrackedCasimirs) fail(ErrorCode::InvalidArgument, "tracked Casimirs are C_1..C_5");
  if (traj.casimirs.empty()) fail(ErrorCode::InvalidArgument, "trajectory has no recorded Casimirs");
  const std::size_t i = static_cast<std::size_t>(k - 1);
  double drift = 0.0;
  for (const auto& c : traj.casimirs) drift = std::max(drift, std::abs(c[i] - traj.casimirs.front()[i]));
  return drift;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trajectory_csv_header(const Trajectory& traj) {
  std::vector<std::string> cols{"t"};
  if (!traj.casimirs.empty())
    for (int k = 1; k <= kTrackedCasimirs; ++k) cols.push_back("C" + std::to_string(k));
  if (!traj.spectra.empty())
    for (Index i = 1; i <= traj.spectra.front().eigenvalues.size(); ++i) cols.push_back("eig" + std::to_string(i));
  for (const std::string& name : traj.observable_names) cols.push_back(name);
  cols.push_back("flags");
  return join(cols, ',');
}

std::string trajectory_to_csv(const Trajectory& traj) {
  std::ostringstream out;
  out << trajectory_csv_header(traj) << '\n';
  for (std::size_t r = 0; r < traj.size(); ++r) {
    out << format_double(traj.times[r]);
    if (!traj.casimirs.empty())
      for (double c : traj.casimirs[r]) out << ',' << format_double(c);
    if (!traj.spectra.empty()) {
      const RealVector& e = traj.spectra[r].eigenvalues;
      for (Index i = 0; i < e.size(); ++i) out << ',' << format_double(e(i));
    }
    for (double v : traj.observables[r]) out << ',' << format_double(v);
    out << ',' << traj.row_flags[r] << '\n';
  }
  return out.str();
}

nlohmann::json trajectory_to_json(const Trajectory& traj, bool with_states) {
  using nlohmann::json;
  json j;
  j["times"] = traj.times;
  if (!traj.casimirs.empty()) {
    json c = json::array();
    for (const auto& row : traj.casimirs) c.push_back(row);
    j["casimirs"] = c;
  }
  if (!traj.spectra.empty()) {
    json s = json::array();
    for (const SpectrumRecord& r : traj.spectra)
      s.push_back(std::vector<double>(r.eigenvalues.data(), r.eigenvalues.data() + r.eigenvalues.size()));
    j["spectra"] = s;
  }
  json obs = json::object();
  for (std::size_t i = 0; i < traj.observable_names.size(); ++i) {
    json col = json::array();
    for (const auto& row : traj.observables) col.push_back(row[i]);
    obs[traj.observable_names[i]] = col;
  }
  j["observables"] = obs;
  j["flags"] = traj.row_flags;
  const Diagnostics& d = traj.diagnostics;
  json diag;
  diag["max_casimir_drift"] = d.max_casimir_drift;
  diag["max_spectrum_drift"] = d.max_spectrum_drift;
  diag["max_hermiticity_defect"] = d.max_hermiticity_defect;
  diag["min_eigenvalue"] = std::isnan(d.min_eigenvalue) ? json(nullptr) : json(d.min_eigenvalue);
  diag["accepted_steps"] = d.accepted_steps;
  diag["rejected_steps"] = d.rejected_steps;
  diag["flags"] = d.flags;
  j["diagnostics"] = diag;
  if (with_states) {
    json states = json::array();
    for (const DensityMatrix& s : traj.states) states.push_back(to_json(s.matrix()));
    j["states"] = states;
  }
  return j;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::InvalidArgument, "cannot open " + tmp.string() + " for writing");
    out << contents;
    if (!out) fail(ErrorCode::InvalidArgument, "failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace nambu
