#include "commands.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "matrix_io.hpp"
#include "nlra/approximators.hpp"
#include "nlra/errors.hpp"
#include "nlra/gap_analysis.hpp"
#include "nlra/kernels.hpp"
#include "nlra/learning.hpp"
#include "nlra/lfai.hpp"
#include "nlra/risk.hpp"

namespace nlra::cli {
namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct Common {
  std::uint64_t seed = 0;
  bool no_timing = false;
  std::string activation = "relu";
};

struct ApproxFlags {
  std::string input;
  Index rank = 1;
  std::string method;
  std::size_t mc_samples = 0;
  std::uint64_t subset_cap = kDefaultSubsetCap;
  std::string output_y;
  std::string output_u;
  std::string output_v;
  LfaiOptions lfai;
};

struct SweepFlags {
  std::string dims;
  std::string scales;
  double width_exponent = 1.5;
  double width_coeff = 1.0;
  double dim_fraction = 0.2;
  int trials = 1;
  std::string output;
};

struct LearnFlags {
  Index d = 0;
  Index m = 0;
  Index rank = 1;
  std::size_t n_w = 10'000;
  std::size_t n_k = 10'000;
  double radius = 0.0;
  int iters = 60;
  std::string kernel_mode = "estimated";
  std::string output_y;
};

struct RiskFlags {
  std::string w;
  std::string y;
  std::size_t mc_samples = 0;
};

struct KernelFlags {
  std::string w;
  std::size_t estimate_samples = 0;
  int quad_order = kDefaultQuadOrder;
  std::string output;
};

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

json risk_mc_json(const RiskReport& r) {
  return json{{"value", r.value}, {"std_error", r.std_error.value_or(0.0)}, {"n_samples", r.n_samples.value_or(0)}};
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    T v{};
    const char* b = item.data();
    const char* e = item.data() + item.size();
    while (b < e && *b == ' ') ++b;
    while (e > b && e[-1] == ' ') --e;
    const auto [ptr, ec] = std::from_chars(b, e, v);
    if (b == e || ec != std::errc() || ptr != e) {
      throw InputError(std::string("malformed value '") + item + "' in " + flag);
    }
    out.push_back(v);
  }
  if (out.empty() || (!text.empty() && text.back() == ',')) {
    throw InputError(std::string("malformed list for ") + flag);
  }
  return out;
}

std::string format_g(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

void finish(json& report, const Common& c, Clock::time_point start, std::ostream& out) {
  report["wall_time_ms"] = c.no_timing ? 0.0 : elapsed_ms(start);
  report["seed"] = c.seed;
  out << report.dump(2) << '\n';
}

int cmd_approx(const ApproxFlags& f, const Common& c, std::ostream& out) {
  const auto start = Clock::now();
  const Activation act = Activation::parse(c.activation);
  const Matrix w = load_matrix(f.input);
  const Index r = f.rank;
  std::vector<std::string> warnings;
  Matrix y;
  std::optional<FactorPair> factors;
  json extra = json::object();

  auto factor_of = [&](const Matrix& m) {
    return spectral_init(m, std::min({r, m.rows(), m.cols()}));
  };
  if (f.method == "spectral") {
    factors = spectral_init(w, r);
    y = factors->product();
  } else if (f.method == "nkp") {
    NkpResult res = nkp(w, r, act);
    y = std::move(res.y);
    warnings = std::move(res.warnings);
    factors = factor_of(y);
  } else if (f.method == "relu-svd") {
    if (act.kind() != ActivationKind::relu) {
      throw InputError("relu-svd requires --activation relu");
    }
    const ReluSvdResult res = relu_svd(w, r, f.subset_cap);
    y = res.y;
    extra["mask"] = res.mask.selected();
    extra["score"] = res.score;
    factors = factor_of(y);
  } else {
    LfaiOptions opts = f.lfai;
    opts.warm_start = f.method == "lfai-ws";
    opts.seed = RngSeed{c.seed};
    const LfaiResult res = lfai(w, r, act, opts);
    factors = res.factors;
    y = res.factors.product();
    extra["eval_trace"] = res.eval_trace;
    extra["best_epoch"] = res.best_epoch;
  }

  save_matrix(f.output_y, y);
  if (!f.output_u.empty()) {
    save_matrix(f.output_u, factors->u);
  }
  if (!f.output_v.empty()) {
    save_matrix(f.output_v, factors->v);
  }

  json report;
  report["method"] = f.method;
  report["rank"] = r;
  report["activation"] = act.name();
  report["risk_exact"] = act.kind() == ActivationKind::relu ? json(risk_relu_exact(w, y).value) : json(nullptr);
  if (f.mc_samples > 0) {
    report["risk_mc"] = risk_mc_json(risk_mc(w, y, act, f.mc_samples, derive_seed(RngSeed{c.seed}, {7})));
  }
  for (const auto& [k, v] : extra.items()) {
    report[k] = v;
  }
  report["warnings"] = warnings;
  finish(report, c, start, out);
  return kExitOk;
}

int cmd_gap_sweep(const SweepFlags& f, const Common& c, std::ostream& err) {
  SweepConfig cfg;
  for (long long n : parse_list<long long>(f.dims, "--dims")) {
    if (n < 1) {
      throw InputError("--dims entries must be positive");
    }
    cfg.dims.push_back(static_cast<Index>(n));
  }
  cfg.rank_scales = parse_list<double>(f.scales, "--rank-scales");
  for (double s : cfg.rank_scales) {
    if (!(s > 0.0)) {
      throw InputError("--rank-scales entries must be positive");
    }
  }
  cfg.width_exponent = f.width_exponent;
  cfg.width_coeff = f.width_coeff;
  cfg.dim_fraction = f.dim_fraction;
  cfg.trials = f.trials;
  cfg.seed = RngSeed{c.seed};
  const auto rows = spherical_sweep(cfg, [&](const std::string& msg) { err << "notice: " << msg << '\n'; });

  std::string csv = "n,d,m,r,trial,mean_rho,max_rho,gap_bound\n";
  for (const SweepRow& row : rows) {
    csv += std::to_string(row.n) + ',' + std::to_string(row.d) + ',' + std::to_string(row.m) + ',' +
           std::to_string(row.r) + ',' + std::to_string(row.trial) + ',' + format_g(row.mean_rho, 10) + ',' +
           format_g(row.max_rho, 10) + ',' + format_g(row.gap_bound, 10) + '\n';
  }
  write_file_atomic(f.output, csv);
  return kExitOk;
}

int cmd_learn(const LearnFlags& f, const Common& c, std::ostream& out) {
  const auto start = Clock::now();
  if (f.d < 1 || f.m < 1) {
    throw InputError("--d and --m must be positive");
  }
  if (f.rank < 1 || f.rank > std::min(f.d, f.m)) {
    throw InputError("--rank must lie in [1, min(d, m)]");
  }
  const RngSeed seed{c.seed};
  SampleOracle oracle(sample_spherical_w(f.d, f.m, derive_seed(seed, {0})), derive_seed(seed, {1}));
  LearnOptions opts;
  opts.rank = f.rank;
  opts.n_w = f.n_w;
  opts.n_k = f.n_k;
  opts.radius = f.radius;
  opts.iters = f.iters;
  opts.kernel_mode = f.kernel_mode == "plugin" ? KernelMode::plugin : KernelMode::estimated;
  const LearnResult res = shallow_learn(oracle, opts);
  if (!f.output_y.empty()) {
    save_matrix(f.output_y, res.y_hat);
  }
  const LearnReport& rep = res.report;
  json report;
  report["method"] = "shallow-learn";
  report["rank"] = f.rank;
  report["d"] = f.d;
  report["m"] = f.m;
  report["n_w"] = f.n_w;
  report["n_k"] = f.n_k;
  report["kernel_mode"] = f.kernel_mode;
  report["w_error"] = rep.w_error;
  report["k_error"] = rep.k_error;
  report["learned_risk"] = rep.learned_risk;
  report["oracle_risk"] = rep.oracle_risk;
  report["suboptimality"] = rep.suboptimality;
  report["risk_exact"] = rep.learned_risk;
  report["warnings"] = rep.warnings;
  finish(report, c, start, out);
  return kExitOk;
}

int cmd_risk(const RiskFlags& f, const Common& c, std::ostream& out) {
  const auto start = Clock::now();
  const Activation act = Activation::parse(c.activation);
  const Matrix w = load_matrix(f.w);
  const Matrix y = f.y.empty() ? Matrix(Matrix::Zero(w.rows(), w.cols())) : load_matrix(f.y);
  if (y.rows() != w.rows() || y.cols() != w.cols()) {
    throw InputError("shape mismatch: W is " + std::to_string(w.rows()) + "x" + std::to_string(w.cols()) +
                     ", Y is " + std::to_string(y.rows()) + "x" + std::to_string(y.cols()));
  }
  json report;
  report["method"] = "risk";
  report["activation"] = act.name();
  report["risk_exact"] = act.kind() == ActivationKind::relu ? json(risk_relu_exact(w, y).value) : json(nullptr);
  if (f.mc_samples > 0) {
    report["risk_mc"] = risk_mc_json(risk_mc(w, y, act, f.mc_samples, derive_seed(RngSeed{c.seed}, {7})));
  }
  report["warnings"] = json::array();
  finish(report, c, start, out);
  return kExitOk;
}

int cmd_kernel(const KernelFlags& f, const Common& c, std::ostream& out) {
  const auto start = Clock::now();
  const Activation act = Activation::parse(c.activation);
  const Matrix w = load_matrix(f.w);
  const bool estimated = f.estimate_samples > 0;
  const KernelMatrix k = estimated ? estimate_kernel(w, f.estimate_samples, derive_seed(RngSeed{c.seed}, {8}), act)
                                   : kernel_matrix(w, act, f.quad_order);
  json report;
  report["method"] = estimated ? "estimated" : (act.kind() == ActivationKind::relu ? "closed-form" : "quadrature");
  report["activation"] = act.name();
  report["m"] = k.size();
  if (estimated) {
    report["n_samples"] = f.estimate_samples;
  }
  if (f.output.empty()) {
    out << format_matrix(k.values());
    return kExitOk;
  }
  save_matrix(f.output, k.values());
  report["output"] = f.output;
  report["warnings"] = json::array();
  finish(report, c, start, out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nonlinear low-rank approximation of ReLU layer weights", "nlra"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_flag("--no-timing", common.no_timing, "Report wall_time_ms as 0 so output is reproducible");

  auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", common.seed, "Random seed"); };
  auto add_activation = [&](CLI::App* sub) {
    sub->add_option("--activation", common.activation, "relu | identity | leaky:A | swish:B");
  };

  ApproxFlags approx;
  auto* a = app.add_subcommand("approx", "Rank-r approximation of a weight matrix");
  a->add_option("--input", approx.input, "Weight matrix file")->required();
  a->add_option("--rank", approx.rank, "Target rank")->required();
  a->add_option("--method", approx.method, "spectral | nkp | relu-svd | lfai | lfai-ws")
      ->required()
      ->check(CLI::IsMember({"spectral", "nkp", "relu-svd", "lfai", "lfai-ws"}));
  add_activation(a);
  add_seed(a);
  a->add_option("--mc-samples", approx.mc_samples, "Also report a Monte Carlo risk estimate");
  a->add_option("--subset-cap", approx.subset_cap, "Largest C(d, r) relu-svd may enumerate");
  a->add_option("--output-y", approx.output_y, "Where to write Y")->required();
  a->add_option("--output-u", approx.output_u, "Where to write the left factor");
  a->add_option("--output-v", approx.output_v, "Where to write the right factor");
  a->add_option("--lr", approx.lfai.step_size, "LFAI step size");
  a->add_option("--batch-size", approx.lfai.batch_size, "LFAI batch size");
  a->add_option("--epochs", approx.lfai.max_epochs, "LFAI epochs");
  a->add_option("--steps-per-epoch", approx.lfai.steps_per_epoch, "LFAI steps per epoch");

  SweepFlags sweep;
  auto* g = app.add_subcommand("gap-sweep", "Gap bound sweep over spherical weights, as CSV");
  g->add_option("--dims", sweep.dims, "Comma separated n values")->required();
  g->add_option("--rank-scales", sweep.scales, "Comma separated rank scales")->required();
  g->add_option("--width-exponent", sweep.width_exponent, "m = coeff * n^exponent");
  g->add_option("--width-coeff", sweep.width_coeff, "m = coeff * n^exponent");
  g->add_option("--dim-fraction", sweep.dim_fraction, "d = fraction * n");
  g->add_option("--trials", sweep.trials, "Trials per cell")->check(CLI::PositiveNumber);
  add_seed(g);
  g->add_option("--output", sweep.output, "CSV path")->required();

  LearnFlags learn;
  auto* l = app.add_subcommand("learn", "Learn a low-rank ReLU layer from synthetic samples");
  l->add_option("--d", learn.d, "Input dimension")->required();
  l->add_option("--m", learn.m, "Output dimension")->required();
  l->add_option("--rank", learn.rank, "Target rank")->required();
  l->add_option("--n-w", learn.n_w, "Samples for recovering W")->required();
  l->add_option("--n-k", learn.n_k, "Samples for the kernel estimate")->required();
  l->add_option("--radius", learn.radius, "Projection radius (default: estimated from samples)");
  l->add_option("--iters", learn.iters, "Gradient steps per column");
  l->add_option("--kernel-mode", learn.kernel_mode, "estimated | plugin")
      ->check(CLI::IsMember({"estimated", "plugin"}));
  l->add_option("--output-y", learn.output_y, "Where to write Y_hat");
  add_seed(l);

  RiskFlags risk;
  auto* rk = app.add_subcommand("risk", "Population risk of Y against W");
  rk->add_option("--w", risk.w, "Weight matrix file")->required();
  rk->add_option("--y", risk.y, "Approximation file (default: zero)");
  rk->add_option("--mc-samples", risk.mc_samples, "Monte Carlo samples");
  add_activation(rk);
  add_seed(rk);

  KernelFlags kern;
  auto* k = app.add_subcommand("kernel", "Nonlinearity kernel matrix of the columns of W");
  k->add_option("--w", kern.w, "Weight matrix file")->required();
  k->add_option("--estimate-samples", kern.estimate_samples, "Estimate from samples instead of the closed form");
  k->add_option("--quad-order", kern.quad_order, "Quadrature order for non-ReLU activations");
  k->add_option("--output", kern.output, "Matrix file (default: stdout)");
  add_activation(k);
  add_seed(k);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInput;
  }

  try {
    if (a->parsed()) return cmd_approx(approx, common, out);
    if (g->parsed()) return cmd_gap_sweep(sweep, common, err);
    if (l->parsed()) return cmd_learn(learn, common, out);
    if (rk->parsed()) return cmd_risk(risk, common, out);
    if (k->parsed()) return cmd_kernel(kern, common, out);
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace nlra::cli
