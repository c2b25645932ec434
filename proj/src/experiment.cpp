#include "dpgp/experiment.hpp"

#include "dpgp/error.hpp"
#include "dpgp/io.hpp"
#include "dpgp/serialize.hpp"

#include <cstdio>

namespace dpgp {

using nlohmann::json;

namespace {

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

json dataset_json(const DatasetSpec& d) {
  return json{{"kind", std::string(to_string(d.kind))},
              {"n", d.n},
              {"noise", d.noise},
              {"seed", d.seed},
              {"inner_radius_factor", d.inner_radius_factor},
              {"train_fraction", d.train_fraction},
              {"split_seed", d.split_seed}};
}

// Re-throws any failure inside `body` with the stage name prepended,
// keeping the exception type.
template <typename F>
auto stage(const char* name, F&& body) {
  auto prefix = [&](const std::exception& e) {
    return std::string("stage '") + name + "': " + e.what();
  };
  try {
    return body();
  } catch (const IoError& e) {
    throw IoError(prefix(e));
  } catch (const FormatError& e) {
    throw FormatError(prefix(e));
  } catch (const NumericalError& e) {
    throw NumericalError(prefix(e));
  } catch (const ValidationError& e) {
    throw ValidationError(prefix(e));
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (dataset.n < 4 || dataset.n % 2)
    throw ValidationError("dataset.n must be an even number >= 4");
  if (!(dataset.train_fraction > 0.0 && dataset.train_fraction < 1.0))
    throw ValidationError("dataset.train_fraction must lie in (0, 1)");
  gp.validate();
  backend.validate();
  dp.validate();
  predict.validate();
  logreg.validate();
  if (grid.enabled) {
    if (grid.resolution < 2) throw ValidationError("grid.resolution must be >= 2");
    if (grid.bounds) GridSpec{*grid.bounds, grid.resolution}.validate();
  }
}

void to_json(json& j, const ExperimentConfig& c) {
  j = json::object();
  j["format_version"] = kFormatVersion;
  j["kind"] = "dpgp-experiment";
  j["dataset"] = dataset_json(c.dataset);
  j["gp"] = c.gp;
  j["backend"] = json{{"kind", std::string(to_string(c.backend.kind))},
                      {"surrogate_noise", c.backend.surrogate_noise}};
  j["hmc"] = c.backend.hmc;
  j["dp"] = c.dp;
  j["predict"] = json{{"level", c.predict.level},
                      {"seed", c.predict.seed},
                      {"link_mode", std::string(to_string(c.predict.link_mode))},
                      {"block_size", c.predict.block_size}};
  json grid{{"enabled", c.grid.enabled},
            {"resolution", c.grid.resolution},
            {"pad", c.grid.pad}};
  grid["bounds"] = c.grid.bounds ? json(*c.grid.bounds) : json(nullptr);
  j["grid"] = grid;
  j["logreg"] = c.logreg;
  j["output_dir"] = c.output_dir;
}

void from_json(const json& j, ExperimentConfig& c) {
  check_format(j, "", "experiment config");
  if (auto it = j.find("dataset"); it != j.end()) {
    const json& d = *it;
    if (d.contains("kind"))
      c.dataset.kind = parse_dataset_kind(d.at("kind").get<std::string>());
    read_opt(d, "n", c.dataset.n);
    read_opt(d, "noise", c.dataset.noise);
    read_opt(d, "seed", c.dataset.seed);
    read_opt(d, "inner_radius_factor", c.dataset.inner_radius_factor);
    read_opt(d, "train_fraction", c.dataset.train_fraction);
    read_opt(d, "split_seed", c.dataset.split_seed);
  }
  read_opt(j, "gp", c.gp);
  if (auto it = j.find("backend"); it != j.end()) {
    if (it->contains("kind"))
      c.backend.kind = parse_backend_kind(it->at("kind").get<std::string>());
    read_opt(*it, "surrogate_noise", c.backend.surrogate_noise);
  }
  read_opt(j, "hmc", c.backend.hmc);
  read_opt(j, "dp", c.dp);
  if (auto it = j.find("predict"); it != j.end()) {
    read_opt(*it, "level", c.predict.level);
    read_opt(*it, "seed", c.predict.seed);
    read_opt(*it, "block_size", c.predict.block_size);
    if (it->contains("link_mode"))
      c.predict.link_mode = parse_link_mode(it->at("link_mode").get<std::string>());
  }
  if (auto it = j.find("grid"); it != j.end()) {
    read_opt(*it, "enabled", c.grid.enabled);
    read_opt(*it, "resolution", c.grid.resolution);
    read_opt(*it, "pad", c.grid.pad);
    if (auto b = it->find("bounds"); b != it->end() && !b->is_null())
      c.grid.bounds = b->get<std::array<double, 4>>();
  }
  read_opt(j, "logreg", c.logreg);
  read_opt(j, "output_dir", c.output_dir);
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  const json j = parse_json_file(path);
  try {
    return j.get<ExperimentConfig>();
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

Dataset generate(const DatasetSpec& spec) {
  return spec.kind == DatasetKind::moons
             ? make_moons(spec.n, spec.noise, spec.seed)
             : make_circles(spec.n, spec.noise, spec.inner_radius_factor,
                            spec.seed);
}

PredictiveSummary logreg_summary(const LogRegModel& model,
                                 const Eigen::MatrixXd& inputs, double level) {
  PredictiveSummary s;
  s.level = level;
  s.p_mean = predict_logreg(model, inputs);
  s.p_lo = s.p_mean;
  s.p_hi = s.p_mean;
  return s;
}

GridSpec resolve_grid(const GridOptions& opts,
                      const Eigen::MatrixXd& train_inputs) {
  GridSpec spec;
  spec.resolution = opts.resolution;
  spec.bounds = opts.bounds ? *opts.bounds : padded_bounds(train_inputs, opts.pad);
  spec.validate();
  return spec;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::filesystem::path& out_dir) {
  cfg.validate();
  ExperimentResult result;
  result.output_dir = out_dir;

  io::write_file(out_dir / "config.json", dump(json(cfg)));

  const Dataset data = stage("generate", [&] {
    Dataset d = generate(cfg.dataset);
    write_csv(d, out_dir / "dataset.csv");
    return d;
  });
  const SplitDataset parts = stage("split", [&] {
    SplitDataset s = split(data, cfg.dataset.train_fraction, cfg.dataset.split_seed);
    write_csv(s.train, out_dir / "train.csv");
    write_csv(s.test, out_dir / "test.csv");
    return s;
  });

  const Eigen::MatrixXd x_train = parts.train.inputs();
  const Eigen::MatrixXd x_test = parts.test.inputs();
  const Eigen::VectorXd y_test = parts.test.labels();

  const LatentPosterior post = stage("fit", [&] {
    LatentPosterior p = fit(parts.train, cfg.gp, cfg.backend);
    save_posterior(p, cfg.backend, out_dir / "posterior.json");
    return p;
  });
  result.accept_rate = post.accept_rate;
  const LogRegModel lr = stage("fit-logreg", [&] {
    LogRegModel m = fit_logreg(parts.train, cfg.logreg);
    io::write_file(out_dir / "logreg.json", dump(logreg_to_json(m)));
    return m;
  });

  const PredictiveSummary dp_pred = stage("predict", [&] {
    PredictiveSummary s = predict(x_test, post, cfg.dp, cfg.predict);
    io::write_file(out_dir / "predictions_dpgp.csv", predictions_to_csv(s));
    return s;
  });
  const PredictiveSummary lr_pred = stage("predict-logreg", [&] {
    PredictiveSummary s = logreg_summary(lr, x_test, cfg.predict.level);
    io::write_file(out_dir / "predictions_logreg.csv", predictions_to_csv(s));
    return s;
  });

  stage("evaluate", [&] {
    result.dpgp = evaluate(dp_pred.p_mean, y_test);
    result.logreg = evaluate(lr_pred.p_mean, y_test);
    io::write_file(out_dir / "metrics_dpgp.json",
                   dump(metrics_document("dpgp", result.dpgp)));
    io::write_file(out_dir / "metrics_logreg.json",
                   dump(metrics_document("logreg", result.logreg)));
    json summary{{"format_version", kFormatVersion},
                 {"kind", "dpgp-experiment-metrics"},
                 {"dataset", std::string(to_string(cfg.dataset.kind))},
                 {"backend", std::string(to_string(post.backend))},
                 {"models", {{"dpgp", result.dpgp}, {"logreg", result.logreg}}}};
    if (post.backend == LatentBackendKind::hmc)
      summary["hmc_accept_rate"] = post.accept_rate;
    io::write_file(out_dir / "metrics.json", dump(summary));
  });

  if (cfg.grid.enabled) {
    stage("grid", [&] {
      const GridSpec spec = resolve_grid(cfg.grid, x_train);
      const GridResult g = grid(spec, post, cfg.dp, cfg.predict);
      io::write_file(out_dir / "grid.csv", grid_to_csv(g));
    });
  }
  return result;
}

std::string format_table(const ExperimentResult& r, const std::string& title) {
  std::string out = title + "\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-22s %8s %12s %9s\n", "Model", "AUC",
                "Brier Score", "LogLoss");
  out += buf;
  auto row = [&](const char* name, const MetricsReport& m) {
    std::snprintf(buf, sizeof buf, "%-22s %8.4f %12.4f %9.4f\n", name, m.auc,
                  m.brier, m.logloss);
    out += buf;
  };
  row("DP+GP", r.dpgp);
  row("Logistic Regression", r.logreg);
  return out;
}

}  // namespace dpgp
