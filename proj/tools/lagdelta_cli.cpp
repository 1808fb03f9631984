// lagdelta: command-line front end over the header library.
//
// Exit codes: 0 ok, 1 a bound or round-trip check failed, 2 bad input.
// Errors go to stderr as {"error": <code>, "message": <text>}.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lagdelta/lagdelta.hpp"

using namespace lagdelta;
using io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInput = 2;

void print_error(const std::string& code, const std::string& message) {
  std::cerr << json{{"error", code}, {"message", message}}.dump() << "\n";
}

std::optional<std::uint64_t> env_seed() {
  const char* env = std::getenv("LAGDELTA_SEED");
  if (!env) return std::nullopt;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    fail(ErrorCode::ParseError, "LAGDELTA_SEED is not an unsigned integer");
  }
}

struct OptimizerFlags {
  int restarts = OptimizerOptions{}.restarts;
  int max_iters = OptimizerOptions{}.max_iters;
  double tol = OptimizerOptions{}.tol;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* cmd) {
    cmd->add_option("--restarts", restarts, "random optimizer starts")->capture_default_str();
    cmd->add_option("--max-iters", max_iters, "iterations per start")->capture_default_str();
    cmd->add_option("--tol", tol, "stationarity tolerance")->capture_default_str();
    cmd->add_option("--seed", seed, "optimizer seed (default $LAGDELTA_SEED)");
  }

  OptimizerOptions resolve() const {
    const std::uint64_t s = seed ? *seed : env_seed().value_or(OptimizerOptions{}.seed);
    json j{{"restarts", restarts}, {"max_iters", max_iters}, {"tol", tol}, {"seed", s}};
    return io::optimizer_options_from_json(j);
  }
};

PartitionSpec partition_for(int n, const std::string& text) { return PartitionSpec(n, io::parse_blocks(text)); }

CubicForm load_tensor(const std::string& path) { return io::cubic_form_from_json(io::read_json_file(path)); }

// ---- subcommands

int cmd_delta(const std::string& tensor, const std::string& partition, double c, const OptimizerFlags& flags,
              const std::string& format) {
  CubicForm h = load_tensor(tensor);
  PartitionSpec P = partition_for(h.n(), partition);
  DeltaResult d = delta_invariant(h, AmbientConstant(c), P, flags.resolve());
  if (format == "csv") {
    std::cout << "partition,c,delta,certified_lower,tau_total,converged\n"
              << "\"" << P.to_string() << "\"," << io::format_double(c) << "," << io::format_double(d.value) << ","
              << io::format_double(d.certified_lower) << "," << io::format_double(d.tau_total) << ","
              << (d.converged ? "true" : "false") << "\n";
  } else {
    json out{{"n", h.n()}, {"partition", P.blocks()}, {"c", c}};
    out["delta"] = io::to_json(d);
    std::cout << out.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_verify(const std::string& tensor, const std::string& partition, double c, const OptimizerFlags& flags,
               const std::string& format) {
  CubicForm h = load_tensor(tensor);
  PartitionSpec P = partition_for(h.n(), partition);
  InequalityReport r = evaluate(h, AmbientConstant(c), P, flags.resolve());
  if (format == "csv") {
    std::cout << io::to_csv(r);
  } else {
    std::cout << io::to_json(r).dump(2) << "\n";
  }
  for (const auto& row : r.rows)
    if (row.coefficients && row.coefficients->applicable && row.verdict == Verdict::Violated) return kExitCheckFailed;
  return kExitOk;
}

int cmd_matrix(int n, const std::string& partition, int ell, std::optional<int> t, const std::string& C_text) {
  PartitionSpec P = partition_for(n, partition);
  const Rational C = io::parse_rational(C_text);
  QuadraticFormBundle b = t ? build_M_statement2(P, *t, C) : build_M(P, ell, C);
  std::cout << io::to_json(b).dump(2) << "\n";
  return kExitOk;
}

int cmd_construct(int theorem, std::optional<int> n_flag, const std::string& partition, const std::string& params_path) {
  json params = params_path.empty() ? json::object() : io::read_json_file(params_path);
  if (params.contains("theorem") && params["theorem"] != theorem) {
    fail(ErrorCode::ParseError, "params file is for a different theorem");
  }
  std::optional<int> n = n_flag;
  if (!n && params.contains("n")) n = params["n"].get<int>();
  if (!n) fail(ErrorCode::ParseError, "dimension missing: pass --n or put \"n\" in the params file");
  std::string blocks = partition;
  if (blocks.empty() && params.contains("partition")) {
    for (int m : params["partition"]) blocks += std::to_string(m) + ",";
  }
  PartitionSpec P = partition_for(*n, blocks);

  CubicForm h(*n);
  std::vector<Violation> violations;
  if (theorem == 1) {
    if (P.covers()) fail(ErrorCode::CaseMismatch, "Theorem 1 needs n_1+...+n_k < n");
    auto p = io::params_t1_from_json(params, P);
    if (p.lambda.empty()) p.lambda.assign(P.residual(), 0.0);
    h = build_t1(p);
    violations = check_t1(h, P);
  } else if (theorem == 2) {
    if (!P.covers()) fail(ErrorCode::CaseMismatch, "Theorem 2 needs n_1+...+n_k = n");
    h = build_t2(io::params_t2_from_json(params, P));
    violations = check_t2(h, P);
  } else {
    fail(ErrorCode::ParseError, "--theorem must be 1 or 2");
  }
  if (!violations.empty()) fail(ErrorCode::InvariantViolation, "constructed tensor fails its own equality check");
  std::cout << io::to_json(h).dump(2) << "\n";
  return kExitOk;
}

Eigen::VectorXd load_point(const std::string& path, int n) {
  if (path.empty()) return Eigen::VectorXd::Zero(n);
  json j = io::read_json_file(path);
  if (j.is_object()) j = j.value("x", json::array());
  std::vector<double> x;
  try {
    x = j.get<std::vector<double>>();
  } catch (const json::exception& ex) {
    fail(ErrorCode::ParseError, ex.what());
  }
  if (static_cast<int>(x.size()) != n) fail(ErrorCode::DimensionMismatch, "point has the wrong dimension");
  return Eigen::Map<Eigen::VectorXd>(x.data(), n);
}

int cmd_immersion(const std::string& tensor, const std::string& at, bool fd) {
  CubicForm a = load_tensor(tensor);
  Eigen::VectorXd x = load_point(at, a.n());
  CubicPotential f = potential_from_tensor(a);
  const double roundtrip = second_fundamental_form_numeric(f, x).max_abs_diff(a);
  const double defect = lagrangian_check(f, x);
  const double limit = x.isZero(0) ? 1e-8 : 1e-6;
  json out{{"n", a.n()}, {"x", std::vector<double>(x.data(), x.data() + x.size())},
           {"roundtrip_error", roundtrip}, {"lagrangian_defect", defect}, {"tolerance", limit}};
  bool ok = roundtrip <= limit && defect <= 1e-12;
  if (fd) {
    const double fd_err = second_fundamental_form_fd(f, x).max_abs_diff(a);
    out["fd_roundtrip_error"] = fd_err;
    ok = ok && fd_err <= 1e-6;
  }
  out["ok"] = ok;
  std::cout << out.dump(2) << "\n";
  return ok ? kExitOk : kExitCheckFailed;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(io::parse_rational(item)));
  return out;
}

CampaignConfig campaign_from_json(const json& j, CampaignConfig cfg) {
  try {
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("samples")) cfg.samples = j["samples"].get<int>();
    if (j.contains("n_range")) {
      auto r = j["n_range"].get<std::vector<int>>();
      if (r.size() != 2) fail(ErrorCode::ParseError, "n_range needs two entries");
      cfg.n_min = r[0];
      cfg.n_max = r[1];
    }
    if (j.contains("partitions") && !(j["partitions"].is_string() && j["partitions"] == "ALL")) {
      cfg.partitions = j["partitions"].get<std::vector<std::vector<int>>>();
    }
    if (j.contains("c_values")) cfg.c_values = j["c_values"].get<std::vector<double>>();
    if (j.contains("tensor_scale")) cfg.tensor_scale = j["tensor_scale"].get<double>();
  } catch (const json::exception& ex) {
    fail(ErrorCode::ParseError, ex.what());
  }
  return cfg;
}

struct SampleFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples, n_min, n_max;
  std::string partitions;
  std::string c_values;
  std::optional<double> tensor_scale;
  std::string out;
};

int cmd_sample(const SampleFlags& flags) {
  CampaignConfig cfg;
  cfg.seed = env_seed().value_or(cfg.seed);
  if (!flags.config.empty()) cfg = campaign_from_json(io::read_json_file(flags.config), cfg);
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.samples) cfg.samples = *flags.samples;
  if (flags.n_min) cfg.n_min = *flags.n_min;
  if (flags.n_max) cfg.n_max = *flags.n_max;
  if (!flags.partitions.empty() && flags.partitions != "ALL") {
    cfg.partitions.clear();
    std::stringstream ss(flags.partitions);
    std::string item;
    while (std::getline(ss, item, ';')) cfg.partitions.push_back(io::parse_blocks(item));
  }
  if (!flags.c_values.empty()) cfg.c_values = parse_doubles(flags.c_values);
  if (flags.tensor_scale) cfg.tensor_scale = *flags.tensor_scale;
  cfg.validate();

  CampaignSummary s;
  if (flags.out.empty()) {
    s = run_campaign(cfg, &std::cout);
  } else {
    std::ofstream csv(flags.out);
    if (!csv) fail(ErrorCode::ParseError, "cannot write " + flags.out);
    s = run_campaign(cfg, &csv);
  }
  json summary{{"seed", cfg.seed},
               {"samples", s.samples},
               {"min_gap", s.min_gap},
               {"argmin_sample", s.argmin_index},
               {"argmin_seed", s.argmin_seed},
               {"violations", s.violations}};
  // keep stdout pure CSV when it carries the rows
  (flags.out.empty() ? std::cerr : std::cout) << summary.dump() << "\n";
  return s.violations == 0 ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"delta-invariant bounds for Lagrangian submanifolds"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "json";
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  std::string tensor, partition, params, at, C_text;
  double c = 0.0;
  int ell = 1, theorem = 1;
  std::optional<int> n, t;
  bool fd = false;
  OptimizerFlags opt_delta, opt_verify;
  SampleFlags sample;

  auto* delta = app.add_subcommand("delta", "compute delta(n_1,...,n_k) for a tensor");
  delta->add_option("--tensor", tensor, "tensor JSON file")->required();
  delta->add_option("--partition", partition, "block sizes, e.g. 2,2")->required();
  delta->add_option("-c,--c", c, "ambient constant c")->capture_default_str();
  opt_delta.attach(delta);

  auto* verify = app.add_subcommand("verify", "compare delta with every bound");
  verify->add_option("--tensor", tensor, "tensor JSON file")->required();
  verify->add_option("--partition", partition, "block sizes, e.g. 2,2")->required();
  verify->add_option("-c,--c", c, "ambient constant c")->capture_default_str();
  opt_verify.attach(verify);

  auto* matrix = app.add_subcommand("matrix", "dump M, M', minors and thresholds");
  matrix->add_option("--n", n, "dimension")->required();
  matrix->add_option("--partition", partition, "block sizes")->required();
  matrix->add_option("--ell", ell, "distinguished block (1-based)")->capture_default_str();
  matrix->add_option("--t", t, "residual index for the statement-II form (replaces --ell)");
  matrix->add_option("--C", C_text, "coefficient, e.g. 1/6 or 0.25")->required();

  auto* construct = app.add_subcommand("construct-equality", "build an equality-case tensor");
  construct->add_option("--theorem", theorem, "1 or 2")->required()->check(CLI::IsMember({1, 2}));
  construct->add_option("--n", n, "dimension (or \"n\" in the params file)");
  construct->add_option("--partition", partition, "block sizes (or \"partition\" in the params file)");
  construct->add_option("--params", params, "parameter JSON file");

  auto* immersion_cmd = app.add_subcommand("immersion-check", "recover a tensor from its gradient-graph immersion");
  immersion_cmd->add_option("--tensor", tensor, "tensor JSON file")->required();
  immersion_cmd->add_option("--at", at, "point JSON file ([x1,...] or {\"x\": [...]}); default origin");
  immersion_cmd->add_flag("--fd-crosscheck", fd, "also run the finite-difference route");

  auto* sample_cmd = app.add_subcommand("sample", "randomized inequality campaign");
  sample_cmd->add_option("--config", sample.config, "campaign JSON file");
  sample_cmd->add_option("--seed", sample.seed, "campaign seed (default $LAGDELTA_SEED, else 42)");
  sample_cmd->add_option("--samples", sample.samples, "number of samples");
  sample_cmd->add_option("--n-min", sample.n_min, "smallest n");
  sample_cmd->add_option("--n-max", sample.n_max, "largest n");
  sample_cmd->add_option("--partitions", sample.partitions, "ALL or e.g. \"2;2,2\"");
  sample_cmd->add_option("--c-values", sample.c_values, "comma list, e.g. -1,0,1");
  sample_cmd->add_option("--tensor-scale", sample.tensor_scale, "entries uniform on [-s, s]");
  sample_cmd->add_option("--out", sample.out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("ParseError", e.what());
    return kExitInput;
  }

  try {
    if (*delta) return cmd_delta(tensor, partition, c, opt_delta, format);
    if (*verify) return cmd_verify(tensor, partition, c, opt_verify, format);
    if (*matrix) return cmd_matrix(*n, partition, ell, t, C_text);
    if (*construct) return cmd_construct(theorem, n, partition, params);
    if (*immersion_cmd) return cmd_immersion(tensor, at, fd);
    if (*sample_cmd) return cmd_sample(sample);
  } catch (const Error& e) {
    std::string message = e.what();
    const std::string prefix = std::string(to_string(e.code())) + ": ";
    if (message.rfind(prefix, 0) == 0) message.erase(0, prefix.size());
    print_error(std::string(to_string(e.code())), message);
    return kExitInput;
  }
  return kExitInput;
}
