// dpgp: command-line driver for the DP+GP classifier.
//
// Exit codes: 0 success, 1 validation/domain error, 2 usage error, 3 I/O error.

#include "dpgp/error.hpp"
#include "dpgp/experiment.hpp"
#include "dpgp/io.hpp"
#include "dpgp/serialize.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>

namespace {

using namespace dpgp;
using nlohmann::json;

// Model and inference settings shared by fit / predict / grid.
struct ModelFlags {
  std::string config;
  std::optional<std::string> backend;
  std::optional<double> signal_variance, lengthscale, jitter, gp_mean;
  std::optional<double> surrogate_noise;
  std::optional<std::size_t> warmup, samples, leapfrog, chains;
  std::optional<std::uint64_t> hmc_seed;
  std::optional<double> alpha, base_loc, base_scale;
  std::optional<double> level;
  std::optional<std::uint64_t> predict_seed;
  std::optional<std::string> link_mode;

  void add_model(CLI::App* cmd) {
    cmd->add_option("--config", config, "Experiment config JSON (defaults for all settings)");
    cmd->add_option("--backend", backend, "Latent backend: hmc or analytic");
    cmd->add_option("--signal-variance", signal_variance, "Kernel signal variance");
    cmd->add_option("--lengthscale", lengthscale, "Kernel lengthscale");
    cmd->add_option("--jitter", jitter, "Kernel nugget");
    cmd->add_option("--gp-mean", gp_mean, "Constant GP mean");
    cmd->add_option("--surrogate-noise", surrogate_noise, "Analytic backend noise variance");
    cmd->add_option("--warmup", warmup, "HMC warmup iterations");
    cmd->add_option("--samples", samples, "HMC posterior samples");
    cmd->add_option("--leapfrog", leapfrog, "HMC leapfrog steps");
    cmd->add_option("--chains", chains, "HMC chains");
    cmd->add_option("--hmc-seed", hmc_seed, "HMC seed");
  }

  void add_link(CLI::App* cmd) {
    if (cmd->get_option_no_throw("--config") == nullptr)
      cmd->add_option("--config", config, "Experiment config JSON");
    cmd->add_option("--alpha", alpha, "DP concentration");
    cmd->add_option("--base-loc", base_loc, "Logistic base measure location");
    cmd->add_option("--base-scale", base_scale, "Logistic base measure scale");
    cmd->add_option("--level", level, "Credible level in (0, 1)");
    cmd->add_option("--seed", predict_seed, "Prediction seed");
    cmd->add_option("--link-mode", link_mode, "sample or mean");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig cfg;
    if (!config.empty()) cfg = load_experiment_config(config);
    if (backend) cfg.backend.kind = parse_backend_kind(*backend);
    if (signal_variance) cfg.gp.signal_variance = *signal_variance;
    if (lengthscale) cfg.gp.lengthscale = *lengthscale;
    if (jitter) cfg.gp.jitter = *jitter;
    if (gp_mean) cfg.gp.mean = *gp_mean;
    if (surrogate_noise) cfg.backend.surrogate_noise = *surrogate_noise;
    if (warmup) cfg.backend.hmc.warmup = *warmup;
    if (samples) cfg.backend.hmc.samples = *samples;
    if (leapfrog) cfg.backend.hmc.leapfrog_steps = *leapfrog;
    if (chains) cfg.backend.hmc.chains = *chains;
    if (hmc_seed) cfg.backend.hmc.seed = *hmc_seed;
    if (alpha) cfg.dp.alpha = *alpha;
    if (base_loc) cfg.dp.base_location = *base_loc;
    if (base_scale) cfg.dp.base_scale = *base_scale;
    if (level) cfg.predict.level = *level;
    if (predict_seed) cfg.predict.seed = *predict_seed;
    if (link_mode) cfg.predict.link_mode = parse_link_mode(*link_mode);
    return cfg;
  }
};

std::string model_kind(const json& j) { return j.value("kind", std::string{}); }

int run(int argc, char** argv) {
  CLI::App app{"DP+GP Bayesian nonparametric binary classifier"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a synthetic dataset");
  std::string gen_kind = "moons", gen_out;
  std::size_t gen_n = 1000;
  double gen_noise = 0.3, gen_factor = 0.5;
  std::uint64_t gen_seed = 42;
  gen->add_option("--kind", gen_kind, "moons or circles")->capture_default_str();
  gen->add_option("--n", gen_n, "Number of points")->capture_default_str();
  gen->add_option("--noise", gen_noise, "Gaussian noise sd")->capture_default_str();
  gen->add_option("--factor", gen_factor, "Inner circle radius (circles)")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Noise seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output CSV")->required();

  // split
  auto* spl = app.add_subcommand("split", "Seeded train/test split of a dataset CSV");
  std::string spl_data, spl_train, spl_test;
  double spl_fraction = 0.7;
  std::uint64_t spl_seed = 42;
  spl->add_option("--data", spl_data, "Input dataset CSV")->required();
  spl->add_option("--fraction", spl_fraction, "Training fraction")->capture_default_str();
  spl->add_option("--seed", spl_seed, "Split seed")->capture_default_str();
  spl->add_option("--train-out", spl_train, "Training CSV")->required();
  spl->add_option("--test-out", spl_test, "Test CSV")->required();

  // fit
  auto* fitc = app.add_subcommand("fit", "Fit the DP+GP latent posterior or the LogReg baseline");
  ModelFlags fit_flags;
  std::string fit_train, fit_out, fit_model = "dpgp";
  fitc->add_option("--train", fit_train, "Training CSV")->required();
  fitc->add_option("--model", fit_model, "dpgp or logreg")->capture_default_str();
  fitc->add_option("--out", fit_out, "Model JSON (dpgp also writes <out>.draws.csv)")->required();
  fit_flags.add_model(fitc);

  // predict
  auto* pred = app.add_subcommand("predict", "Posterior predictive probabilities at test points");
  ModelFlags pred_flags;
  std::string pred_train, pred_model, pred_test, pred_out;
  pred->add_option("--train", pred_train, "Training CSV the model was fitted on");
  pred->add_option("--model", pred_model, "Model JSON from fit")->required();
  pred->add_option("--test", pred_test, "Test CSV")->required();
  pred->add_option("--out", pred_out, "Predictions CSV")->required();
  pred_flags.add_link(pred);

  // evaluate
  auto* evalc = app.add_subcommand("evaluate", "AUC, Brier score and log loss of a predictions file");
  std::string eval_pred, eval_test, eval_out, eval_name = "model";
  evalc->add_option("--pred", eval_pred, "Predictions CSV")->required();
  evalc->add_option("--test", eval_test, "Test CSV with labels")->required();
  evalc->add_option("--name", eval_name, "Model name recorded in the report")->capture_default_str();
  evalc->add_option("--out", eval_out, "Metrics JSON (stdout when omitted)");

  // grid
  auto* gridc = app.add_subcommand("grid", "Predictive fields over a regular 2-D mesh");
  ModelFlags grid_flags;
  std::string grid_train, grid_model, grid_out;
  std::vector<double> grid_bounds;
  std::optional<std::size_t> grid_res;
  gridc->add_option("--train", grid_train, "Training CSV the model was fitted on")->required();
  gridc->add_option("--model", grid_model, "DP+GP model JSON from fit")->required();
  gridc->add_option("--bounds", grid_bounds, "x1_min x1_max x2_min x2_max")->expected(4);
  gridc->add_option("--resolution", grid_res, "Points per axis");
  gridc->add_option("--out", grid_out, "Grid CSV")->required();
  grid_flags.add_link(gridc);

  // run-experiment
  auto* exp = app.add_subcommand("run-experiment", "Full pipeline from one config file");
  std::string exp_config, exp_out;
  exp->add_option("--config", exp_config, "Experiment config JSON")->required();
  exp->add_option("--out-dir", exp_out, "Output directory (overrides config and $DPGP_OUTPUT_DIR)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*gen) {
    DatasetSpec spec;
    spec.kind = parse_dataset_kind(gen_kind);
    spec.n = gen_n;
    spec.noise = gen_noise;
    spec.seed = gen_seed;
    spec.inner_radius_factor = gen_factor;
    write_csv(generate(spec), gen_out);
  } else if (*spl) {
    const Dataset data = read_csv(spl_data);
    const SplitDataset parts = split(data, spl_fraction, spl_seed);
    write_csv(parts.train, spl_train);
    write_csv(parts.test, spl_test);
  } else if (*fitc) {
    const ExperimentConfig cfg = fit_flags.resolve();
    const Dataset train = read_csv(fit_train);
    if (fit_model == "dpgp") {
      const LatentPosterior post = fit(train, cfg.gp, cfg.backend);
      save_posterior(post, cfg.backend, fit_out);
      if (post.backend == LatentBackendKind::hmc)
        std::cerr << "hmc acceptance rate " << post.accept_rate << "\n";
    } else if (fit_model == "logreg") {
      io::write_file(fit_out, dump(logreg_to_json(fit_logreg(train, cfg.logreg))));
    } else {
      throw ValidationError("unknown model '" + fit_model + "' (expected dpgp or logreg)");
    }
  } else if (*pred) {
    const ExperimentConfig cfg = pred_flags.resolve();
    const Dataset test = read_csv(pred_test);
    const json model = parse_json_file(pred_model);
    PredictiveSummary summary;
    if (model_kind(model) == "dpgp-logreg") {
      summary = logreg_summary(logreg_from_json(model), test.inputs(), cfg.predict.level);
    } else {
      if (pred_train.empty())
        throw ValidationError("--train is required for DP+GP predictions");
      const LatentPosterior post = load_posterior(pred_model, read_csv(pred_train).inputs());
      summary = predict(test.inputs(), post, cfg.dp, cfg.predict);
    }
    io::write_file(pred_out, predictions_to_csv(summary));
  } else if (*evalc) {
    const PredictiveSummary summary = predictions_from_csv(io::read_file(eval_pred));
    const Dataset test = read_csv(eval_test);
    if (summary.p_mean.size() != static_cast<Eigen::Index>(test.size()))
      throw ValidationError("predictions and test set differ in length");
    const std::string doc = dump(metrics_document(eval_name, evaluate(summary.p_mean, test.labels())));
    if (eval_out.empty())
      std::cout << doc;
    else
      io::write_file(eval_out, doc);
  } else if (*gridc) {
    ExperimentConfig cfg = grid_flags.resolve();
    if (!grid_bounds.empty())
      cfg.grid.bounds = std::array<double, 4>{grid_bounds[0], grid_bounds[1], grid_bounds[2], grid_bounds[3]};
    if (grid_res) cfg.grid.resolution = *grid_res;
    const Eigen::MatrixXd x_train = read_csv(grid_train).inputs();
    const LatentPosterior post = load_posterior(grid_model, x_train);
    const GridSpec spec = resolve_grid(cfg.grid, x_train);
    io::write_file(grid_out, grid_to_csv(grid(spec, post, cfg.dp, cfg.predict)));
  } else if (*exp) {
    const ExperimentConfig cfg = load_experiment_config(exp_config);
    std::filesystem::path out = exp_out;
    if (out.empty()) out = cfg.output_dir;
    if (out.empty()) {
      const char* env = std::getenv(kOutputDirEnv);
      out = env && *env ? env : ".";
    }
    const ExperimentResult r = run_experiment(cfg, out);
    std::cout << format_table(r, "Performance comparison on " +
                                     std::string(to_string(cfg.dataset.kind)) +
                                     " (" + out.string() + ")");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const dpgp::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
