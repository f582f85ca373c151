#include "pcp/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace pcp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error("config: " + path + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown key");
}

double get_num(const json& obj, const std::string& path, const char* key,
               double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) fail(path + "." + key, "expected a number");
  return obj[key].get<double>();
}

std::vector<double> get_vec(const json& obj, const std::string& path,
                            const char* key, std::vector<double> fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_array()) fail(path + "." + key, "expected an array");
  std::vector<double> out;
  for (const auto& v : obj[key]) {
    if (!v.is_number()) fail(path + "." + key, "expected numeric entries");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string get_str(const json& obj, const std::string& path, const char* key,
                    std::string fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) fail(path + "." + key, "expected a string");
  return obj[key].get<std::string>();
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) fail("$", "top level must be an object");
  check_keys(j, "$",
             {"schema_version", "model", "experiment", "seed", "out_dir"});
  ExperimentConfig cfg;
  if (j.contains("schema_version")) {
    if (!j["schema_version"].is_number_integer())
      fail("$.schema_version", "expected an integer");
    cfg.schema_version = j["schema_version"].get<int>();
    if (cfg.schema_version != 1)
      fail("$.schema_version", "unsupported schema version");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
      fail("$.seed", "expected a nonnegative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  cfg.out_dir = get_str(j, "$", "out_dir", cfg.out_dir);
  if (j.contains("experiment")) {
    if (!j["experiment"].is_object()) fail("$.experiment", "expected an object");
    cfg.experiment = j["experiment"];
  }

  if (!j.contains("model")) fail("$.model", "missing required block");
  const json& m = j["model"];
  if (!m.is_object()) fail("$.model", "expected an object");
  check_keys(m, "$.model",
             {"dimension", "intensity", "cluster", "numerics"});

  cfg.dimension = static_cast<int>(get_num(m, "$.model", "dimension", 1));
  if (cfg.dimension < 1 || cfg.dimension > 3)
    fail("$.model.dimension", "must be 1, 2, or 3");

  if (m.contains("intensity")) {
    const json& in = m["intensity"];
    if (!in.is_object()) fail("$.model.intensity", "expected an object");
    check_keys(in, "$.model.intensity",
               {"kind", "scale", "center", "radius", "amplitude"});
    cfg.intensity = get_str(in, "$.model.intensity", "kind", "lebesgue");
    cfg.intensity_scale = get_num(in, "$.model.intensity", "scale", 1.0);
    cfg.bump_center = get_vec(in, "$.model.intensity", "center",
                              std::vector<double>(
                                  static_cast<std::size_t>(cfg.dimension), 0.0));
    cfg.bump_radius = get_num(in, "$.model.intensity", "radius", 1.0);
    cfg.bump_amplitude = get_num(in, "$.model.intensity", "amplitude", 1.0);
    if (cfg.intensity != "lebesgue" && cfg.intensity != "exp_weight" &&
        cfg.intensity != "bump")
      fail("$.model.intensity.kind", "unknown intensity kind");
  } else {
    cfg.bump_center.assign(static_cast<std::size_t>(cfg.dimension), 0.0);
  }

  if (m.contains("cluster")) {
    const json& cl = m["cluster"];
    if (!cl.is_object()) fail("$.model.cluster", "expected an object");
    check_keys(cl, "$.model.cluster",
               {"kind", "size_probs", "sigma", "base", "base_param", "sigma_n",
                "offsets"});
    cfg.cluster = get_str(cl, "$.model.cluster", "kind", "product_gaussian");
    cfg.size_probs = get_vec(cl, "$.model.cluster", "size_probs",
                             cfg.size_probs);
    cfg.sigma = get_num(cl, "$.model.cluster", "sigma", 1.0);
    cfg.base = get_str(cl, "$.model.cluster", "base", "gaussian");
    cfg.base_param = get_num(cl, "$.model.cluster", "base_param", 1.0);
    cfg.sigma_n = get_vec(cl, "$.model.cluster", "sigma_n", {});
    if (cl.contains("offsets")) {
      if (!cl["offsets"].is_array())
        fail("$.model.cluster.offsets", "expected an array");
      for (const auto& per_size : cl["offsets"]) {
        std::vector<std::vector<double>> pts;
        for (const auto& pt : per_size) {
          std::vector<double> coords;
          for (const auto& c : pt) coords.push_back(c.get<double>());
          pts.push_back(coords);
        }
        cfg.offsets.push_back(pts);
      }
    }
    if (cfg.cluster != "product_gaussian" && cfg.cluster != "iid_points" &&
        cfg.cluster != "per_size_density" && cfg.cluster != "dirac_offsets")
      fail("$.model.cluster.kind", "unknown cluster kind");
    if (cfg.base != "gaussian" && cfg.base != "heavy_tail")
      fail("$.model.cluster.base", "unknown base density");
  }

  if (m.contains("numerics")) {
    const json& nu = m["numerics"];
    if (!nu.is_object()) fail("$.model.numerics", "expected an object");
    check_keys(nu, "$.model.numerics",
               {"quad_abs_tol", "tail_sigmas", "eps_trunc", "r_trunc",
                "merge_tol", "n_max", "density_floor", "mc_default_n",
                "mc_se_factor", "dt_default"});
    Numerics& n = cfg.numerics;
    n.quad_abs_tol = get_num(nu, "$.model.numerics", "quad_abs_tol",
                             n.quad_abs_tol);
    n.tail_sigmas = get_num(nu, "$.model.numerics", "tail_sigmas",
                            n.tail_sigmas);
    n.eps_trunc = get_num(nu, "$.model.numerics", "eps_trunc", n.eps_trunc);
    n.r_trunc = get_num(nu, "$.model.numerics", "r_trunc", n.r_trunc);
    n.merge_tol = get_num(nu, "$.model.numerics", "merge_tol", n.merge_tol);
    n.n_max = static_cast<int>(get_num(nu, "$.model.numerics", "n_max",
                                       n.n_max));
    n.density_floor = get_num(nu, "$.model.numerics", "density_floor",
                              n.density_floor);
    n.mc_default_n = static_cast<long>(get_num(nu, "$.model.numerics",
                                               "mc_default_n",
                                               static_cast<double>(
                                                   n.mc_default_n)));
    n.mc_se_factor = get_num(nu, "$.model.numerics", "mc_se_factor",
                             n.mc_se_factor);
    n.dt_default = get_num(nu, "$.model.numerics", "dt_default", n.dt_default);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("config: " + path + ": " + e.what());
  }
  return parse_config(j);
}

IntensityModel build_intensity(const ExperimentConfig& cfg) {
  if (cfg.intensity == "lebesgue")
    return IntensityModel::lebesgue(cfg.dimension, cfg.intensity_scale);
  if (cfg.intensity == "exp_weight") {
    if (cfg.dimension != 1)
      throw std::runtime_error("config: exp_weight intensity requires d = 1");
    return IntensityModel::exp_weight();
  }
  Vec c;
  c.dim = cfg.dimension;
  for (int i = 0; i < cfg.dimension; ++i)
    c[i] = (static_cast<std::size_t>(i) < cfg.bump_center.size())
               ? cfg.bump_center[static_cast<std::size_t>(i)]
               : 0.0;
  return IntensityModel::bump_density(
      SmoothFn::bump(c, cfg.bump_radius, cfg.bump_amplitude));
}

ClusterLaw build_cluster_law(const ExperimentConfig& cfg) {
  if (cfg.cluster == "product_gaussian")
    return ClusterLaw::product_gaussian(cfg.dimension, cfg.size_probs,
                                        cfg.sigma);
  if (cfg.cluster == "iid_points") {
    if (cfg.dimension != 1)
      throw std::runtime_error("config: iid_points law requires d = 1");
    const BaseDensity b = (cfg.base == "gaussian") ? BaseDensity::gaussian
                                                   : BaseDensity::heavy_tail;
    return ClusterLaw::iid_points(cfg.size_probs, b, cfg.base_param);
  }
  if (cfg.cluster == "per_size_density")
    return ClusterLaw::per_size_density(cfg.dimension, cfg.size_probs,
                                        cfg.sigma_n);
  std::vector<std::vector<Vec>> offsets;
  for (const auto& per_size : cfg.offsets) {
    std::vector<Vec> pts;
    for (const auto& coords : per_size) {
      if (static_cast<int>(coords.size()) != cfg.dimension)
        throw std::runtime_error(
            "config: dirac offset with wrong coordinate count");
      Vec p;
      p.dim = cfg.dimension;
      for (int i = 0; i < cfg.dimension; ++i)
        p[i] = coords[static_cast<std::size_t>(i)];
      pts.push_back(p);
    }
    offsets.push_back(pts);
  }
  return ClusterLaw::dirac_offsets(cfg.dimension, cfg.size_probs, offsets);
}

ClusterProcessModel build_model(const ExperimentConfig& cfg) {
  return ClusterProcessModel(build_intensity(cfg), build_cluster_law(cfg),
                             cfg.numerics, cfg.seed);
}

nlohmann::json echo_config(const ExperimentConfig& cfg) {
  nlohmann::json m;
  m["dimension"] = cfg.dimension;
  m["intensity"] = {{"kind", cfg.intensity}, {"scale", cfg.intensity_scale}};
  if (cfg.intensity == "bump") {
    m["intensity"]["center"] = cfg.bump_center;
    m["intensity"]["radius"] = cfg.bump_radius;
    m["intensity"]["amplitude"] = cfg.bump_amplitude;
  }
  m["cluster"] = {{"kind", cfg.cluster}, {"size_probs", cfg.size_probs}};
  if (cfg.cluster == "product_gaussian") m["cluster"]["sigma"] = cfg.sigma;
  if (cfg.cluster == "iid_points") {
    m["cluster"]["base"] = cfg.base;
    m["cluster"]["base_param"] = cfg.base_param;
  }
  if (cfg.cluster == "per_size_density") m["cluster"]["sigma_n"] = cfg.sigma_n;
  if (cfg.cluster == "dirac_offsets") m["cluster"]["offsets"] = cfg.offsets;
  const Numerics& n = cfg.numerics;
  m["numerics"] = {{"quad_abs_tol", n.quad_abs_tol},
                   {"tail_sigmas", n.tail_sigmas},
                   {"eps_trunc", n.eps_trunc},
                   {"r_trunc", n.r_trunc},
                   {"merge_tol", n.merge_tol},
                   {"n_max", n.n_max},
                   {"density_floor", n.density_floor},
                   {"mc_default_n", n.mc_default_n},
                   {"mc_se_factor", n.mc_se_factor},
                   {"dt_default", n.dt_default}};
  nlohmann::json out;
  out["schema_version"] = cfg.schema_version;
  out["model"] = m;
  out["experiment"] = cfg.experiment;
  out["seed"] = cfg.seed;
  out["out_dir"] = cfg.out_dir;
  return out;
}

}  // namespace pcp
