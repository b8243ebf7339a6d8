#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pfsic/constructions.hpp"
#include "pfsic/fisher.hpp"
#include "pfsic/io.hpp"
#include "pfsic/povm.hpp"
#include "pfsic/rng.hpp"
#include "pfsic/tomography.hpp"
#include "pfsic/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Exit codes are a scripting contract: 0 success, 1 domain failure
// (validation or verdict), 2 I/O or parse failure.
constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitIo = 2;

struct RunContext {
  std::vector<std::string> argv;
  std::chrono::steady_clock::time_point start;
};

fs::path manifest_path(const fs::path& output) {
  fs::path p = output;
  p.replace_extension();
  p += ".manifest.json";
  return p;
}

// Every output file gets a sidecar manifest recording how to reproduce it.
// The volatile duration field lives only here, so outputs themselves are
// byte-identical across re-runs.
void write_manifest(const RunContext& ctx, const std::string& command,
                    const json& options,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs,
                    std::optional<std::uint64_t> seed) {
  if (outputs.empty()) {
    return;
  }
  const double duration =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    ctx.start)
          .count();
  json manifest{{"command", command},
                {"argv", ctx.argv},
                {"options", options},
                {"toolkit_version", pfsic::kVersion},
                {"inputs", inputs},
                {"outputs", outputs},
                {"duration_seconds", duration}};
  if (seed) {
    manifest["seed"] = *seed;
  }
  const fs::path path = manifest_path(outputs.front());
  std::ofstream out(path);
  if (!out) {
    throw std::ios_base::failure("cannot write manifest: " + path.string());
  }
  out << manifest.dump(2) << '\n';
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag_seed) {
  if (flag_seed) {
    return *flag_seed;
  }
  std::random_device device;
  const std::uint64_t seed =
      (static_cast<std::uint64_t>(device()) << 32) ^ device();
  std::cerr << "pfsic: no --seed given; drew seed " << seed << '\n';
  return seed;
}

int env_thread_cap() {
  const char* raw = std::getenv("PFSIC_THREADS");
  if (raw == nullptr || *raw == '\0') {
    return 0;
  }
  return std::max(0, std::atoi(raw));
}

int resolve_threads(int flag_threads) {
  const int cap = env_thread_cap();
  if (cap > 0) {
    return flag_threads > 0 ? std::min(flag_threads, cap) : cap;
  }
  return flag_threads;
}

void emit_json(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) {
    throw std::ios_base::failure("cannot write output: " + out_path);
  }
  out << j.dump(2) << '\n';
}

struct ConstructOptions {
  std::string kind;
  int d = 0;
  double p_chi = 0.5;
  std::string out;
};

int run_construct(const RunContext& ctx, const ConstructOptions& opt) {
  pfsic::RankOnePOVM povm = [&] {
    if (opt.kind == "minimal") {
      return pfsic::minimal_pfsic(opt.d);
    }
    if (opt.kind == "two-basis" || opt.kind == "two_basis") {
      return pfsic::two_basis_pfsic(opt.d, opt.p_chi);
    }
    throw std::invalid_argument("unknown construction kind: " + opt.kind);
  }();

  const json options{{"kind", opt.kind}, {"d", opt.d}, {"p_chi", opt.p_chi},
                     {"out", opt.out}};
  if (opt.out.empty()) {
    std::cout << pfsic::povm_to_json(povm).dump(2) << '\n';
  } else {
    pfsic::save_povm(povm, opt.out);
    write_manifest(ctx, "construct", options, {}, {opt.out}, std::nullopt);
  }
  return kExitOk;
}

struct VerifyOptions {
  std::string povm_path;
  bool pfsic = false;
  bool strict = false;
  double tol = pfsic::kAlgebraTol;
  std::string out;
};

int run_verify(const RunContext& ctx, const VerifyOptions& opt) {
  std::ifstream in(opt.povm_path);
  if (!in) {
    throw std::ios_base::failure("cannot open POVM file: " + opt.povm_path);
  }
  const std::vector<pfsic::CVector> vectors =
      pfsic::povm_vectors_from_json(json::parse(in));

  json report{{"path", opt.povm_path},
              {"dim", static_cast<int>(vectors.front().size())},
              {"n", static_cast<int>(vectors.size())},
              {"tolerance", opt.tol}};
  int exit_code = kExitOk;
  const double residual = pfsic::completeness_residual(vectors);
  report["completeness_residual"] = residual;
  report["valid"] = residual <= opt.tol;
  if (residual > opt.tol) {
    report["reason"] = "completeness violated";
    exit_code = kExitDomain;
  } else {
    const pfsic::RankOnePOVM povm =
        pfsic::gauge_fix(pfsic::povm_from_vectors(vectors, opt.tol));
    const pfsic::RealDecomposition rd = pfsic::real_decomposition(povm);
    report["gram_residual"] = pfsic::gram_residual(rd);
    const std::vector<int> orthogonal = pfsic::orthogonal_outcomes(povm);
    report["orthogonal_outcomes"] = orthogonal;
    if (opt.strict && !orthogonal.empty()) {
      report["reason"] = "outcomes orthogonal to the fiducial state";
      exit_code = kExitDomain;
    }
    if (opt.pfsic) {
      const pfsic::PfsicVerdict verdict = pfsic::is_pfsic(povm);
      report["pfsic"] = pfsic::pfsic_verdict_to_json(verdict);
      if (!verdict.pfsic) {
        report["reason"] = "not a PFSIC: classical Fisher matrix differs "
                           "from 2I or an outcome is orthogonal to the "
                           "fiducial state";
        exit_code = kExitDomain;
      }
    }
  }

  emit_json(report, opt.out);
  if (!opt.out.empty()) {
    const json options{{"povm", opt.povm_path}, {"pfsic", opt.pfsic},
                       {"strict", opt.strict}, {"tol", opt.tol},
                       {"out", opt.out}};
    write_manifest(ctx, "verify", options, {opt.povm_path}, {opt.out},
                   std::nullopt);
  }
  return exit_code;
}

struct FisherCmdOptions {
  std::string povm_path;
  bool fd_check = false;
  double fd_step = 1e-5;
  std::string out;
};

int run_fisher(const RunContext& ctx, const FisherCmdOptions& opt) {
  const pfsic::RankOnePOVM povm = pfsic::gauge_fix(pfsic::load_povm(opt.povm_path));
  pfsic::FisherOptions fisher_opts;
  fisher_opts.fd_check = opt.fd_check;
  fisher_opts.fd_step = opt.fd_step;
  const pfsic::FisherReport report = pfsic::fisher_report(povm, fisher_opts);

  emit_json(pfsic::fisher_report_to_json(report), opt.out);
  if (!opt.out.empty()) {
    const json options{{"povm", opt.povm_path}, {"fd_check", opt.fd_check},
                       {"fd_step", opt.fd_step}, {"out", opt.out}};
    write_manifest(ctx, "fisher", options, {opt.povm_path}, {opt.out},
                   std::nullopt);
  }
  return kExitOk;
}

struct SimulateOptions {
  std::string config_path;
  std::string povm_path;
  std::vector<double> x;
  std::int64_t shots = 0;
  int trials = 0;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string out_prefix;
};

int run_simulate(const RunContext& ctx, const SimulateOptions& opt) {
  json descriptor;
  std::vector<double> x = opt.x;
  std::int64_t shots = opt.shots;
  int trials = opt.trials;
  std::optional<std::uint64_t> seed = opt.seed;
  int threads = opt.threads;
  std::vector<std::string> inputs;

  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) {
      throw std::ios_base::failure("cannot open config file: " +
                                   opt.config_path);
    }
    const json config = json::parse(in);
    descriptor = config.at("povm");
    if (config.contains("true_params")) {
      x = config.at("true_params").get<std::vector<double>>();
    }
    shots = config.at("shots_per_trial").get<std::int64_t>();
    trials = config.at("trials").get<int>();
    if (!seed && config.contains("seed")) {
      seed = config.at("seed").get<std::uint64_t>();
    }
    if (threads == 0 && config.contains("threads")) {
      threads = config.at("threads").get<int>();
    }
    inputs.push_back(opt.config_path);
  } else {
    if (opt.povm_path.empty()) {
      throw std::invalid_argument("simulate needs --config or --povm");
    }
    descriptor = json{{"kind", "file"}, {"path", opt.povm_path}};
    inputs.push_back(opt.povm_path);
  }

  const pfsic::RankOnePOVM povm =
      pfsic::gauge_fix(pfsic::povm_from_descriptor(descriptor));
  const int d = povm.dim();
  if (x.empty()) {
    x.assign(static_cast<std::size_t>(2 * d - 2), 0.0);
  }
  pfsic::Vector params(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    params[static_cast<Eigen::Index>(i)] = x[i];
  }

  const std::uint64_t run_seed = resolve_seed(seed);
  pfsic::SimConfig config{povm,
                          pfsic::LocalParams(d, params),
                          shots,
                          trials,
                          run_seed,
                          resolve_threads(threads)};
  const pfsic::SimReport report = pfsic::run_trials(config);

  const std::string json_path = opt.out_prefix + ".json";
  const std::string csv_path = opt.out_prefix + ".csv";
  emit_json(pfsic::sim_report_to_json(report), json_path);
  std::ofstream csv(csv_path);
  if (!csv) {
    throw std::ios_base::failure("cannot write output: " + csv_path);
  }
  pfsic::write_estimates_csv(report, csv);

  const json options{{"povm", descriptor},
                     {"true_params", x},
                     {"shots_per_trial", shots},
                     {"trials", trials},
                     {"threads", config.threads},
                     {"out", opt.out_prefix}};
  write_manifest(ctx, "simulate", options, inputs, {json_path, csv_path},
                 run_seed);
  return kExitOk;
}

struct MixOptions {
  std::string povm_path;
  std::optional<std::uint64_t> seed;
  int size = 0;
  bool identity = false;
  std::string matrix_path;
  bool lenient = false;
  std::string out;
};

int run_mix(const RunContext& ctx, const MixOptions& opt) {
  const pfsic::RankOnePOVM povm = pfsic::load_povm(opt.povm_path);
  const int size = opt.size > 0 ? opt.size : povm.n_outcomes();

  std::optional<std::uint64_t> used_seed;
  const pfsic::OrthogonalMatrix mix = [&] {
    if (!opt.matrix_path.empty()) {
      std::ifstream in(opt.matrix_path);
      if (!in) {
        throw std::ios_base::failure("cannot open matrix file: " +
                                     opt.matrix_path);
      }
      return pfsic::OrthogonalMatrix(pfsic::matrix_from_json(json::parse(in)));
    }
    if (opt.identity) {
      return pfsic::OrthogonalMatrix::identity(size);
    }
    used_seed = resolve_seed(opt.seed);
    pfsic::SplitMix64 rng(*used_seed);
    return pfsic::OrthogonalMatrix(pfsic::random_orthogonal(size, rng));
  }();

  const pfsic::RankOnePOVM mixed =
      pfsic::orthogonal_mix(povm, mix, /*strict=*/!opt.lenient);

  const json options{{"povm", opt.povm_path}, {"size", size},
                     {"identity", opt.identity},
                     {"matrix", opt.matrix_path}, {"lenient", opt.lenient},
                     {"out", opt.out}};
  if (opt.out.empty()) {
    std::cout << pfsic::povm_to_json(mixed).dump(2) << '\n';
  } else {
    pfsic::save_povm(mixed, opt.out);
    std::vector<std::string> inputs{opt.povm_path};
    if (!opt.matrix_path.empty()) {
      inputs.push_back(opt.matrix_path);
    }
    write_manifest(ctx, "mix", options, inputs, {opt.out}, used_seed);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  RunContext ctx;
  ctx.start = std::chrono::steady_clock::now();
  for (int i = 0; i < argc; ++i) {
    ctx.argv.emplace_back(argv[i]);
  }

  CLI::App app{"PFSIC toolkit: construct, verify, analyze, and simulate "
               "Fisher-symmetric informationally complete measurements"};
  app.set_version_flag("--version", pfsic::kVersion);
  app.require_subcommand(1);
  int exit_code = kExitOk;

  ConstructOptions construct_opt;
  CLI::App* construct = app.add_subcommand(
      "construct", "Build a PFSIC and write it as a POVM JSON file");
  construct->add_option("--kind", construct_opt.kind,
                        "Construction kind: minimal | two-basis")
      ->required();
  construct->add_option("--d", construct_opt.d, "Hilbert-space dimension")
      ->required();
  construct->add_option("--p-chi", construct_opt.p_chi,
                        "Coin weight of the chi basis (two-basis only)");
  construct->add_option("--out", construct_opt.out,
                        "Output POVM path (stdout when omitted)");
  construct->callback(
      [&] { exit_code = run_construct(ctx, construct_opt); });

  VerifyOptions verify_opt;
  CLI::App* verify = app.add_subcommand(
      "verify", "Validate a POVM file (completeness, Gram conditions, "
                "optionally the PFSIC conditions)");
  verify->add_option("povm", verify_opt.povm_path, "POVM JSON file")
      ->required();
  verify->add_flag("--pfsic", verify_opt.pfsic,
                   "Require the PFSIC conditions to hold");
  verify->add_flag("--strict", verify_opt.strict,
                   "Fail when any outcome is orthogonal to the fiducial state");
  verify->add_option("--tol", verify_opt.tol, "Completeness tolerance");
  verify->add_option("--out", verify_opt.out,
                     "Report path (stdout when omitted)");
  verify->callback([&] { exit_code = run_verify(ctx, verify_opt); });

  FisherCmdOptions fisher_opt;
  CLI::App* fisher = app.add_subcommand(
      "fisher", "Fisher analysis of a POVM at the fiducial state");
  fisher->add_option("povm", fisher_opt.povm_path, "POVM JSON file")
      ->required();
  fisher->add_flag("--fd-check", fisher_opt.fd_check,
                   "Cross-check the Gram-form matrix against the "
                   "finite-difference route");
  fisher->add_option("--fd-step", fisher_opt.fd_step,
                     "Central-difference step (in [1e-7, 1e-3])");
  fisher->add_option("--out", fisher_opt.out,
                     "Report path (stdout when omitted)");
  fisher->callback([&] { exit_code = run_fisher(ctx, fisher_opt); });

  SimulateOptions sim_opt;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo local tomography against the Fisher "
                  "prediction");
  simulate->add_option("--config", sim_opt.config_path,
                       "Config JSON (povm descriptor, true_params, "
                       "shots_per_trial, trials, seed)");
  simulate->add_option("--povm", sim_opt.povm_path, "POVM JSON file");
  simulate->add_option("--x", sim_opt.x,
                       "True local parameters (comma-separated, default 0)")
      ->delimiter(',');
  simulate->add_option("--shots", sim_opt.shots, "Shots per trial (N)");
  simulate->add_option("--trials", sim_opt.trials, "Trial count (M)");
  simulate->add_option("--seed", sim_opt.seed,
                       "Master seed (drawn and printed when omitted)");
  simulate->add_option("--threads", sim_opt.threads,
                       "Worker threads (0 = auto; PFSIC_THREADS caps this)");
  simulate->add_option("--out", sim_opt.out_prefix,
                       "Output prefix; writes <prefix>.json and <prefix>.csv")
      ->required();
  simulate->callback([&] { exit_code = run_simulate(ctx, sim_opt); });

  MixOptions mix_opt;
  CLI::App* mix = app.add_subcommand(
      "mix", "Apply a random orthogonal mixing to a POVM");
  mix->add_option("povm", mix_opt.povm_path, "POVM JSON file")->required();
  mix->add_option("--seed", mix_opt.seed,
                  "Seed for the random orthogonal matrix");
  mix->add_option("--size", mix_opt.size,
                  "Mix size m >= n; pads the POVM with zero vectors");
  mix->add_flag("--identity", mix_opt.identity, "Use the identity mix");
  mix->add_option("--matrix", mix_opt.matrix_path,
                  "Read the mixing matrix from a JSON file");
  mix->add_flag("--lenient", mix_opt.lenient,
                "Allow outcomes orthogonal to the fiducial state");
  mix->add_option("--out", mix_opt.out,
                  "Output POVM path (stdout when omitted)");
  mix->callback([&] { exit_code = run_mix(ctx, mix_opt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitIo;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "pfsic: parse error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "pfsic: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "pfsic: error: " << e.what() << '\n';
    return kExitDomain;
  }
  return exit_code;
}
