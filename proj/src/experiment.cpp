#include "mmo/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "mmo/bench.hpp"
#include "mmo/error.hpp"
#include "mmo/multihop.hpp"
#include "mmo/random.hpp"
#include "mmo/unitary.hpp"

namespace mmo {

std::vector<std::vector<double>> run_trials(const TrialFn& fn, int trials, std::uint64_t base_seed, Exec exec) {
  std::vector<std::vector<double>> out(static_cast<size_t>(trials));
  if (exec == Exec::Serial) {
    for (int t = 0; t < trials; ++t) out[static_cast<size_t>(t)] = fn(base_seed + static_cast<std::uint64_t>(t));
    return out;
  }
  // exceptions must not cross the parallel region
  std::vector<std::string> failures(static_cast<size_t>(trials));
#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < trials; ++t) {
    try {
      out[static_cast<size_t>(t)] = fn(base_seed + static_cast<std::uint64_t>(t));
    } catch (const std::exception& e) {
      failures[static_cast<size_t>(t)] = e.what();
    }
  }
  for (int t = 0; t < trials; ++t)
    if (!failures[static_cast<size_t>(t)].empty())
      throw std::runtime_error("trial " + std::to_string(t) + ": " + failures[static_cast<size_t>(t)]);
  return out;
}

std::vector<Summary> summarize(const std::vector<std::vector<double>>& results) {
  if (results.empty()) return {};
  const size_t m = results.front().size();
  const double n = static_cast<double>(results.size());
  std::vector<Summary> out(m);
  for (size_t j = 0; j < m; ++j) {
    double s = 0.0;
    for (const auto& r : results) s += r[j];
    const double mean = s / n;
    double ss = 0.0;
    for (const auto& r : results) ss += (r[j] - mean) * (r[j] - mean);
    out[j].mean = mean;
    out[j].stderr_ = results.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  }
  return out;
}

ProblemSpec spec_from_draw(const ChannelDraw& draw, const Correlations& corr, double noise_var, double snr_db) {
  return {draw.h_bar, corr.psi, corr.sigma, noise_var, noise_var * db_to_linear(snr_db)};
}

namespace {

ChainSchur chain_schur(SchurClass c) {
  switch (c) {
    case SchurClass::AdditiveConvex: return ChainSchur::AdditiveConvex;
    case SchurClass::MultiplicativeConvex: return ChainSchur::MultiplicativeConvex;
    default: return ChainSchur::Concave;
  }
}

}  // namespace

ChainOutcome evaluate_chain_design(const std::vector<ProblemSpec>& truth, BoundMode mode, bool robust,
                                   const NamedObjective& objective) {
  std::vector<ProblemSpec> design;
  for (const auto& s : truth) design.push_back(robust ? s : nominal_spec(s));
  std::vector<HopSolution> hops;
  for (const auto& s : design) hops.push_back(solve_hop(s, robust ? mode : BoundMode::Exact, objective.allocation));
  const auto qs = chain_rotations(hops, chain_schur(objective.schur));
  std::vector<CMatrix> fwd, relay;
  for (size_t k = 0; k < hops.size(); ++k) {
    fwd.push_back(hops[k].f_k * qs[k]);
    relay.push_back(hops[k].relay_k);
  }
  // the destination designs its receiver from the same statistics as the relays
  const CMatrix g = lmmse_receiver(propagate_chain(design, fwd, relay));
  const ChainMoments actual = propagate_chain(truth, fwd, relay);
  const CMatrix e = chain_mse(actual, g);
  return {nats_to_bits(chain_capacity_nats(actual)), e.diagonal().real().maxCoeff(), e.trace().real()};
}

std::vector<std::string> metric_names(const ExperimentConfig& cfg) {
  std::vector<std::string> m;
  switch (cfg.experiment) {
    case ExperimentKind::BoundGap: {
      const Index d = std::min(cfg.model.n_t, cfg.model.n_r);
      for (Index i = 1; i <= d; ++i) m.push_back("lower_eig" + std::to_string(i));
      for (Index i = 1; i <= d; ++i) m.push_back("upper_eig" + std::to_string(i));
      m.push_back("upper_below_lower_fraction");
      break;
    }
    case ExperimentKind::SumMseCompare:
      m = {"sum_mse_lower", "sum_mse_upper", "sum_mse_iterative", "iterative_iterations"};
      break;
    case ExperimentKind::MultiHopCapacity:
      m = {"capacity_lower", "capacity_upper", "capacity_nonrobust", "capacity_gain"};
      break;
    case ExperimentKind::MultiHopMaxMse:
      m = {"max_mse_lower", "max_mse_upper", "max_mse_nonrobust", "max_mse_gain"};
      break;
    case ExperimentKind::Solve:
      m = {"objective"};
      break;
  }
  return m;
}

TrialFn make_trial(const ExperimentConfig& cfg, double snr_db) {
  auto sampler = std::make_shared<ChannelSampler>(cfg.model);
  const NamedObjective& obj = lookup_objective(cfg.effective_objective());
  const double nv = cfg.noise_var;
  switch (cfg.experiment) {
    case ExperimentKind::BoundGap:
      return [sampler, &obj, nv, snr_db](std::uint64_t seed) {
        const ProblemSpec spec = spec_from_draw(sampler->draw(seed), sampler->correlations(), nv, snr_db);
        const EigenmodeBasis lo = reduce_to_mmop(spec, BoundMode::Lower);
        const EigenmodeBasis up = reduce_to_mmop(spec, BoundMode::Upper);
        const RVector el = lo.gains().cwiseProduct(allocate(lo, obj.allocation));
        const RVector eu = up.gains().cwiseProduct(allocate(up, obj.allocation));
        std::vector<double> r(el.data(), el.data() + el.size());
        r.insert(r.end(), eu.data(), eu.data() + eu.size());
        r.push_back(static_cast<double>((eu.array() < el.array()).count()) / static_cast<double>(el.size()));
        return r;
      };
    case ExperimentKind::SumMseCompare: {
      const IterConfig ic{cfg.max_iters, cfg.tol, 0};
      return [sampler, nv, snr_db, ic](std::uint64_t seed) {
        const ProblemSpec spec = spec_from_draw(sampler->draw(seed), sampler->correlations(), nv, snr_db);
        const PrecoderSolution lo = solve(spec, BoundMode::Lower);
        const PrecoderSolution up = solve(spec, BoundMode::Upper);
        const Index d = spec.streams();
        const CMatrix init = std::sqrt(spec.power / static_cast<double>(d)) * CMatrix::Identity(spec.n_t(), d);
        const ObjectiveCase sum_mse = Case3{CMatrix::Identity(d, d)};
        const IterResult it = iterative_lmmse(spec, ic, sum_mse, init);
        return std::vector<double>{robust_sum_mse(lo.f_opt, spec), robust_sum_mse(up.f_opt, spec), it.trace.back(),
                                   static_cast<double>(it.iterations)};
      };
    }
    case ExperimentKind::MultiHopCapacity:
    case ExperimentKind::MultiHopMaxMse: {
      const bool cap = cfg.experiment == ExperimentKind::MultiHopCapacity;
      const int hops = cfg.hops;
      return [sampler, &obj, nv, snr_db, hops, cap](std::uint64_t seed) {
        std::vector<ProblemSpec> truth;
        for (int k = 0; k < hops; ++k)
          truth.push_back(spec_from_draw(sampler->draw(derive_seed(seed, 100 + static_cast<std::uint64_t>(k))),
                                         sampler->correlations(), nv, snr_db));
        const ChainOutcome lo = evaluate_chain_design(truth, BoundMode::Lower, true, obj);
        const ChainOutcome up = evaluate_chain_design(truth, BoundMode::Upper, true, obj);
        const ChainOutcome nr = evaluate_chain_design(truth, BoundMode::Exact, false, obj);
        if (cap) return std::vector<double>{lo.capacity_bits, up.capacity_bits, nr.capacity_bits,
                                            lo.capacity_bits - nr.capacity_bits};
        return std::vector<double>{lo.max_mse, up.max_mse, nr.max_mse, nr.max_mse - lo.max_mse};
      };
    }
    case ExperimentKind::Solve: {
      const BoundMode mode = cfg.mode;
      return [sampler, &obj, nv, snr_db, mode](std::uint64_t seed) {
        const ProblemSpec spec = spec_from_draw(sampler->draw(seed), sampler->correlations(), nv, snr_db);
        const EigenmodeBasis b = reduce_to_mmop(spec, mode);
        const PrecoderSolution s = assemble(b, allocate(b, obj.allocation));
        const ObjectiveCase c = make_case(obj);
        const CMatrix q = optimal_q(c, objective_matrix(s.f_opt, spec)).q;
        return std::vector<double>{eval_f_matrix(c, s.f_opt * q, spec)};
      };
    }
  }
  throw Error(Errc::NotApplicable, "unknown experiment");
}

std::vector<SweepRow> run_experiment(const ExperimentConfig& cfg, Exec exec) {
  cfg.validate();
  const auto names = metric_names(cfg);
  std::vector<SweepRow> rows;
  for (double snr : cfg.snr_db_grid) {
    const auto res = run_trials(make_trial(cfg, snr), cfg.trials, cfg.seed, exec);
    const auto sum = summarize(res);
    for (size_t j = 0; j < names.size(); ++j)
      rows.push_back({snr, names[j], sum[j].mean, sum[j].stderr_, cfg.trials, cfg.seed});
  }
  return rows;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "snr_db,metric,mean,stderr,trials,seed\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.12g,%s,%.12g,%.12g,%d,%llu\n", r.snr_db, r.metric.c_str(), r.mean, r.stderr_,
                  r.trials, static_cast<unsigned long long>(r.seed));
    out += buf;
  }
  return out;
}

void run(const ExperimentConfig& cfg, const std::string& path) {
  const std::string target = path.empty() ? cfg.output_path : path;
  if (target.empty()) throw Error(Errc::IoError, "no output path given");
  const std::string csv = to_csv(run_experiment(cfg));
  std::ofstream f(target, std::ios::binary);
  if (!f) throw Error(Errc::IoError, "cannot open '" + target + "' for writing");
  f << csv;
  if (!f) throw Error(Errc::IoError, "write to '" + target + "' failed");
}

namespace {

std::string fmt_matrix(const CMatrix& m) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed;
  for (Index i = 0; i < m.rows(); ++i) {
    os << "  ";
    for (Index j = 0; j < m.cols(); ++j) {
      os << (m(i, j).real() < 0 ? "" : " ") << m(i, j).real() << (m(i, j).imag() < 0 ? "-" : "+")
         << std::abs(m(i, j).imag()) << "i ";
    }
    os << "\n";
  }
  return os.str();
}

std::string fmt_vec(const RVector& v) {
  std::ostringstream os;
  os.precision(8);
  for (Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  return os.str();
}

}  // namespace

std::string solve_report(const ExperimentConfig& cfg) {
  cfg.validate();
  const double snr = cfg.snr_db_grid.front();
  const ChannelSampler sampler(cfg.model);
  const ProblemSpec spec = spec_from_draw(sampler.draw(cfg.seed), sampler.correlations(), cfg.noise_var, snr);
  const NamedObjective& obj = lookup_objective(cfg.effective_objective());
  const EigenmodeBasis b = reduce_to_mmop(spec, cfg.mode);
  const PrecoderSolution s = assemble(b, allocate(b, obj.allocation));
  const ObjectiveCase c = make_case(obj);
  const QSolution q = optimal_q(c, objective_matrix(s.f_opt, spec));
  const CMatrix x = s.f_opt * q.q;
  const RVector eigs = herm_eig(objective_matrix(x, spec), Order::Descending).values;

  std::ostringstream os;
  os.precision(10);
  os << "objective: " << obj.name << "  mode: " << to_string(cfg.mode) << "  snr_db: " << snr
     << "  seed: " << cfg.seed << "\n";
  os << "alpha: " << b.alpha << "\n";
  os << "lambda_pi: " << fmt_vec(b.lambda_pi) << "\n";
  os << "f_sq: " << fmt_vec(s.f_sq()) << "\n";
  os << "eta_f: " << s.eta_f << "\n";
  os << "power used: " << s.f_opt.squaredNorm() << " of " << spec.power << "\n";
  os << "F:\n" << fmt_matrix(s.f_opt);
  os << "Q:\n" << fmt_matrix(q.q);
  os << "eigenvalues of X^H H^H K_X^-1 H X: " << fmt_vec(eigs) << "\n";
  os << "objective value: " << eval_f_matrix(c, x, spec) << "\n";
  os << "capacity (bits/s/Hz): " << nats_to_bits(capacity_nats(eigs)) << "\n";
  os << "sum MSE (robust, exact): " << robust_sum_mse(x, spec) << "\n";
  os << "closed-form path: " << closed_form_op_tally().describe() << "\n";
  return os.str();
}

}  // namespace mmo
