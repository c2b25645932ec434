#include "dpgp/serialize.hpp"

#include "dpgp/error.hpp"
#include "dpgp/io.hpp"

#include <sstream>

namespace dpgp {

using nlohmann::json;

namespace {

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

std::string expect_prefix(std::string_view line, std::string_view prefix,
                          const std::string& what) {
  if (line.substr(0, prefix.size()) != prefix)
    throw FormatError("not a " + what + " file (expected first line '" +
                      std::string(prefix) + " format_version=" +
                      std::to_string(kFormatVersion) + " ...')");
  return std::string(line.substr(prefix.size()));
}

// Parses "key=value" tokens following the magic prefix.
std::string header_value(const std::string& rest, const std::string& key) {
  std::istringstream in(rest);
  std::string tok;
  while (in >> tok) {
    auto eq = tok.find('=');
    if (eq != std::string::npos && tok.substr(0, eq) == key)
      return tok.substr(eq + 1);
  }
  return {};
}

}  // namespace

void to_json(json& j, const GpConfig& c) {
  j = json{{"signal_variance", c.signal_variance},
           {"lengthscale", c.lengthscale},
           {"jitter", c.jitter},
           {"mean", c.mean}};
}

void from_json(const json& j, GpConfig& c) {
  read_opt(j, "signal_variance", c.signal_variance);
  read_opt(j, "lengthscale", c.lengthscale);
  read_opt(j, "jitter", c.jitter);
  read_opt(j, "mean", c.mean);
}

void to_json(json& j, const HmcConfig& c) {
  j = json{{"warmup", c.warmup},
           {"samples", c.samples},
           {"leapfrog_steps", c.leapfrog_steps},
           {"target_accept", c.target_accept},
           {"initial_step_size", c.initial_step_size},
           {"chains", c.chains},
           {"seed", c.seed}};
}

void from_json(const json& j, HmcConfig& c) {
  read_opt(j, "warmup", c.warmup);
  read_opt(j, "samples", c.samples);
  read_opt(j, "leapfrog_steps", c.leapfrog_steps);
  read_opt(j, "target_accept", c.target_accept);
  read_opt(j, "initial_step_size", c.initial_step_size);
  read_opt(j, "chains", c.chains);
  read_opt(j, "seed", c.seed);
}

void to_json(json& j, const DpLinkConfig& c) {
  j = json{{"alpha", c.alpha},
           {"base_location", c.base_location},
           {"base_scale", c.base_scale}};
}

void from_json(const json& j, DpLinkConfig& c) {
  read_opt(j, "alpha", c.alpha);
  read_opt(j, "base_location", c.base_location);
  read_opt(j, "base_scale", c.base_scale);
}

void to_json(json& j, const LogRegOptions& c) {
  j = json{{"max_iter", c.max_iter},
           {"tol", c.tol},
           {"ridge", c.ridge},
           {"standardize", c.standardize}};
}

void from_json(const json& j, LogRegOptions& c) {
  read_opt(j, "max_iter", c.max_iter);
  read_opt(j, "tol", c.tol);
  read_opt(j, "ridge", c.ridge);
  read_opt(j, "standardize", c.standardize);
}

void to_json(json& j, const MetricsReport& r) {
  j = json{{"auc", r.auc},
           {"brier", r.brier},
           {"logloss", r.logloss},
           {"n_test", r.n_test}};
}

void from_json(const json& j, MetricsReport& r) {
  j.at("auc").get_to(r.auc);
  j.at("brier").get_to(r.brier);
  j.at("logloss").get_to(r.logloss);
  j.at("n_test").get_to(r.n_test);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json parse_json_file(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": invalid JSON: " + e.what());
  }
}

void check_format(const json& j, const std::string& kind,
                  const std::string& source) {
  if (!j.is_object() || !j.contains("format_version"))
    throw FormatError(source + ": missing format_version (expected " +
                      std::to_string(kFormatVersion) + ")");
  const auto v = j.at("format_version");
  if (!v.is_number_integer() || v.get<int>() != kFormatVersion)
    throw FormatError(source + ": unsupported format_version " + v.dump() +
                      " (expected " + std::to_string(kFormatVersion) + ")");
  if (!kind.empty() && j.value("kind", std::string{}) != kind)
    throw FormatError(source + ": expected a '" + kind + "' document, got '" +
                      j.value("kind", std::string{}) + "'");
}

std::filesystem::path draws_path_for(const std::filesystem::path& sidecar) {
  auto p = sidecar;
  p.replace_extension(".draws.csv");
  return p;
}

void save_posterior(const LatentPosterior& post, const LatentBackend& backend,
                    const std::filesystem::path& sidecar) {
  const auto draws = draws_path_for(sidecar);
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "dpgp-latent-posterior";
  j["backend"] = std::string(to_string(post.backend));
  j["n_train"] = post.num_train();
  j["n_draws"] = post.num_draws();
  j["gp"] = post.chol.config();
  j["jitter_used"] = post.chol.jitter_used();
  if (post.backend == LatentBackendKind::hmc) {
    j["hmc"] = backend.hmc;
    j["accept_rate"] = post.accept_rate;
    j["chain_accept_rates"] = post.chain_accept_rates;
    j["chain_step_sizes"] = post.chain_step_sizes;
  } else {
    j["surrogate_noise"] = backend.surrogate_noise;
  }
  j["draws_file"] = draws.filename().string();
  io::write_file(draws, io::matrix_to_csv(post.draws));
  io::write_file(sidecar, dump(j));
}

LatentPosterior load_posterior(const std::filesystem::path& sidecar,
                               const Eigen::MatrixXd& train_inputs) {
  const json j = parse_json_file(sidecar);
  check_format(j, "dpgp-latent-posterior", sidecar.string());
  const auto n_train = j.at("n_train").get<Eigen::Index>();
  const auto n_draws = j.at("n_draws").get<Eigen::Index>();
  if (n_train != train_inputs.rows())
    throw ValidationError(sidecar.string() + ": posterior was fitted on " +
                          std::to_string(n_train) +
                          " training points but the training data has " +
                          std::to_string(train_inputs.rows()));

  LatentPosterior post;
  post.backend = parse_backend_kind(j.at("backend").get<std::string>());
  const auto draws_file =
      sidecar.parent_path() / j.at("draws_file").get<std::string>();
  try {
    post.draws = io::matrix_from_csv(io::read_file(draws_file));
  } catch (const FormatError& e) {
    throw FormatError(draws_file.string() + ": " + e.what());
  }
  if (post.draws.rows() != n_draws || post.draws.cols() != n_train)
    throw FormatError(draws_file.string() + ": expected " +
                      std::to_string(n_draws) + " x " +
                      std::to_string(n_train) + " draws");
  post.chol = gram(train_inputs, j.at("gp").get<GpConfig>());
  if (post.backend == LatentBackendKind::hmc) {
    post.accept_rate = j.value("accept_rate", 1.0);
    read_opt(j, "chain_accept_rates", post.chain_accept_rates);
    read_opt(j, "chain_step_sizes", post.chain_step_sizes);
  }
  return post;
}

json logreg_to_json(const LogRegModel& model) {
  std::vector<double> w(model.weights.data(),
                        model.weights.data() + model.weights.size());
  return json{{"format_version", kFormatVersion},
              {"kind", "dpgp-logreg"},
              {"weights", w},
              {"converged", model.converged},
              {"iterations", model.iterations},
              {"gradient_norm", model.gradient_norm}};
}

LogRegModel logreg_from_json(const json& j) {
  check_format(j, "dpgp-logreg", "logreg model");
  LogRegModel m;
  const auto w = j.at("weights").get<std::vector<double>>();
  m.weights = Eigen::Map<const Eigen::VectorXd>(w.data(),
                                                static_cast<Eigen::Index>(w.size()));
  m.converged = j.value("converged", false);
  m.iterations = j.value("iterations", std::size_t{0});
  m.gradient_norm = j.value("gradient_norm", 0.0);
  return m;
}

std::string predictions_to_csv(const PredictiveSummary& s) {
  std::string out = "# dpgp-predictions format_version=" +
                    std::to_string(kFormatVersion) +
                    " level=" + io::format_double(s.level) + "\n";
  out += "index,p_mean,p_lo,p_hi\n";
  for (Eigen::Index i = 0; i < s.p_mean.size(); ++i) {
    out += std::to_string(i);
    for (double v : {s.p_mean(i), s.p_lo(i), s.p_hi(i)}) {
      out += ',';
      io::append_double(out, v);
    }
    out += '\n';
  }
  return out;
}

PredictiveSummary predictions_from_csv(std::string_view text) {
  auto lines = io::split_lines(text);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw FormatError("empty predictions file");
  const std::string rest =
      expect_prefix(lines[0], "# dpgp-predictions", "predictions");
  if (header_value(rest, "format_version") != std::to_string(kFormatVersion))
    throw FormatError("predictions file has unsupported format_version (expected " +
                      std::to_string(kFormatVersion) + ")");
  if (lines.size() < 2 || lines[1] != "index,p_mean,p_lo,p_hi")
    throw FormatError("line 2: expected header 'index,p_mean,p_lo,p_hi'");

  PredictiveSummary s;
  if (auto lvl = io::parse_double(header_value(rest, "level"))) s.level = *lvl;
  const auto m = static_cast<Eigen::Index>(lines.size() - 2);
  s.p_mean.resize(m);
  s.p_lo.resize(m);
  s.p_hi.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto lineno = std::to_string(i + 3);
    auto f = io::split_fields(lines[static_cast<std::size_t>(i) + 2]);
    if (f.size() != 4)
      throw FormatError("line " + lineno + ": expected 4 fields");
    if (f[0] != std::to_string(i))
      throw FormatError("line " + lineno + ": expected index " + std::to_string(i));
    double vals[3];
    for (int k = 0; k < 3; ++k) {
      auto v = io::parse_double(f[k + 1]);
      if (!v) throw FormatError("line " + lineno + ": non-numeric probability");
      vals[k] = *v;
    }
    s.p_mean(i) = vals[0];
    s.p_lo(i) = vals[1];
    s.p_hi(i) = vals[2];
  }
  return s;
}

std::string grid_to_csv(const GridResult& g) {
  std::string out = "# dpgp-grid format_version=" +
                    std::to_string(kFormatVersion) +
                    " resolution=" + std::to_string(g.grid_x1.size()) +
                    " level=" + io::format_double(g.level) + "\n";
  out += "x1,x2,p_mean,p_lo,p_hi\n";
  out.reserve(out.size() + static_cast<std::size_t>(g.p_mean.size()) * 100);
  for (Eigen::Index i = 0; i < g.grid_x2.size(); ++i) {
    for (Eigen::Index jj = 0; jj < g.grid_x1.size(); ++jj) {
      io::append_double(out, g.grid_x1(jj));
      out += ',';
      io::append_double(out, g.grid_x2(i));
      for (double v : {g.p_mean(i, jj), g.p_lo(i, jj), g.p_hi(i, jj)}) {
        out += ',';
        io::append_double(out, v);
      }
      out += '\n';
    }
  }
  return out;
}

json metrics_document(const std::string& model, const MetricsReport& r) {
  json j = r;
  j["format_version"] = kFormatVersion;
  j["kind"] = "dpgp-metrics";
  j["model"] = model;
  return j;
}

}  // namespace dpgp
