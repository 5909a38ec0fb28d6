#include "trc/run_config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <type_traits>

#include "shortest.hpp"
#include "trc/error.hpp"

namespace trc {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
}

std::size_t to_size(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const unsigned long long n = std::stoull(v, &used);
    if (used == v.size() && v.find('-') == std::string::npos) return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
  }
  throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("key '" + key + "': expected a boolean, got '" + v + "'");
}

std::vector<std::size_t> to_sizes(const std::string& key, const std::string& v) {
  std::vector<std::size_t> out;
  if (v.empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_size(key, trim(item)));
  return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  if (v.empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  return out;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    os << (i ? "," : "");
    if constexpr (std::is_floating_point_v<T>) {
      os << detail::shortest(v[i]);
    } else {
      os << v[i];
    }
  }
  return os.str();
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"mu0", [](RunConfig& c, auto& k, auto& v) { c.solver.mu0 = to_double(k, v); }},
      {"lambda_factor", [](RunConfig& c, auto& k, auto& v) { c.solver.lambda_factor = to_double(k, v); }},
      {"lambda_mode",
       [](RunConfig& c, auto& k, auto& v) {
         if (v == "factor") {
           c.solver.lambda_mode = LambdaMode::factor_of_mu_n;
         } else if (v == "absolute") {
           c.solver.lambda_mode = LambdaMode::absolute;
         } else {
           throw ConfigError("key '" + k + "': expected factor or absolute");
         }
       }},
      {"alpha", [](RunConfig& c, auto& k, auto& v) { c.solver.alpha = to_double(k, v); }},
      {"d", [](RunConfig& c, auto& k, auto& v) { c.solver.d = to_size(k, v); }},
      {"ranks", [](RunConfig& c, auto& k, auto& v) { c.solver.ranks = to_sizes(k, v); }},
      {"epsilon", [](RunConfig& c, auto& k, auto& v) { c.solver.epsilon = to_double(k, v); }},
      {"max_iters", [](RunConfig& c, auto& k, auto& v) { c.solver.max_iters = to_size(k, v); }},
      {"min_iters", [](RunConfig& c, auto& k, auto& v) { c.solver.min_iters = to_size(k, v); }},
      {"estimator", [](RunConfig& c, auto&, auto& v) { c.solver.estimator = parse_loss_family(v); }},
      {"eta", [](RunConfig& c, auto& k, auto& v) { c.solver.adaptive.eta = to_double(k, v); }},
      {"c_min", [](RunConfig& c, auto& k, auto& v) { c.solver.adaptive.c_min = to_double(k, v); }},
      {"quantile_mode",
       [](RunConfig& c, auto& k, auto& v) {
         if (v == "magnitude") {
           c.solver.adaptive.mode = QuantileMode::magnitude;
         } else if (v == "signed") {
           c.solver.adaptive.mode = QuantileMode::signed_max;
         } else {
           throw ConfigError("key '" + k + "': expected magnitude or signed");
         }
       }},
      {"unit_weights", [](RunConfig& c, auto& k, auto& v) { c.solver.unit_weights = to_bool(k, v); }},
      {"beta", [](RunConfig& c, auto& k, auto& v) { c.solver.beta = to_doubles(k, v); }},
      {"patch_m", [](RunConfig& c, auto& k, auto& v) { c.plan.m = to_size(k, v); }},
      {"patch_o", [](RunConfig& c, auto& k, auto& v) { c.plan.o = to_size(k, v); }},
      {"jitter_l", [](RunConfig& c, auto& k, auto& v) { c.plan.l = to_size(k, v); }},
      {"sigma_w", [](RunConfig& c, auto& k, auto& v) { c.plan.sigma_w = to_double(k, v); }},
      {"w0", [](RunConfig& c, auto& k, auto& v) { c.plan.w0 = to_double(k, v); }},
      {"aggregate_shifted", [](RunConfig& c, auto& k, auto& v) { c.plan.aggregate_shifted = to_bool(k, v); }},
      {"global_coeff", [](RunConfig& c, auto& k, auto& v) { c.rule.global_coeff = to_double(k, v); }},
      {"local_coeff", [](RunConfig& c, auto& k, auto& v) { c.rule.local_coeff = to_double(k, v); }},
      {"global_rank", [](RunConfig& c, auto& k, auto& v) { c.global_rank = to_size(k, v); }},
      {"local_rank", [](RunConfig& c, auto& k, auto& v) { c.local_rank = to_size(k, v); }},
      {"global_reshape", [](RunConfig& c, auto& k, auto& v) { c.global_reshape = to_sizes(k, v); }},
      {"mask", [](RunConfig& c, auto&, auto& v) { c.corruption.mask = parse_mask(v); }},
      {"noise", [](RunConfig& c, auto&, auto& v) { c.corruption.noise = parse_noise(v); }},
      {"seed", [](RunConfig& c, auto& k, auto& v) { c.corruption.seed = to_size(k, v); }},
      {"input", [](RunConfig& c, auto&, auto& v) { c.input = v; }},
      {"output", [](RunConfig& c, auto&, auto& v) { c.output = v; }},
      {"threads", [](RunConfig& c, auto& k, auto& v) { c.threads = static_cast<int>(to_size(k, v)); }},
      {"timing", [](RunConfig& c, auto& k, auto& v) { c.timing = to_bool(k, v); }},
  };
  return table;
}

}  // namespace

C2fOptions RunConfig::c2f_options() const {
  C2fOptions o;
  o.global_reshape = global_reshape;
  o.global_rank = global_rank;
  o.local_rank = local_rank;
  o.threads = threads;
  return o;
}

RunConfig parse_run_config(std::string_view text) {
  RunConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    it->second(cfg, key, value);
  }
  validate(cfg.plan);
  validate(cfg.corruption);
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

std::string to_text(const RunConfig& c) {
  std::ostringstream os;
  const auto& s = c.solver;
  os << "mu0 = " << detail::shortest(s.mu0) << "\n"
     << "lambda_factor = " << detail::shortest(s.lambda_factor) << "\n"
     << "lambda_mode = " << (s.lambda_mode == LambdaMode::factor_of_mu_n ? "factor" : "absolute") << "\n"
     << "alpha = " << detail::shortest(s.alpha) << "\n"
     << "d = " << s.d << "\n"
     << "ranks = " << join(s.ranks) << "\n"
     << "epsilon = " << detail::shortest(s.epsilon) << "\n"
     << "max_iters = " << s.max_iters << "\n"
     << "min_iters = " << s.min_iters << "\n"
     << "estimator = " << to_string(s.estimator) << "\n"
     << "eta = " << detail::shortest(s.adaptive.eta) << "\n"
     << "c_min = " << detail::shortest(s.adaptive.c_min) << "\n"
     << "quantile_mode = " << (s.adaptive.mode == QuantileMode::magnitude ? "magnitude" : "signed") << "\n"
     << "unit_weights = " << (s.unit_weights ? "true" : "false") << "\n"
     << "beta = " << join(s.beta) << "\n"
     << "patch_m = " << c.plan.m << "\n"
     << "patch_o = " << c.plan.o << "\n"
     << "jitter_l = " << c.plan.l << "\n"
     << "sigma_w = " << detail::shortest(c.plan.sigma_w) << "\n"
     << "w0 = " << detail::shortest(c.plan.w0) << "\n"
     << "aggregate_shifted = " << (c.plan.aggregate_shifted ? "true" : "false") << "\n"
     << "global_coeff = " << detail::shortest(c.rule.global_coeff) << "\n"
     << "local_coeff = " << detail::shortest(c.rule.local_coeff) << "\n"
     << "global_rank = " << c.global_rank << "\n"
     << "local_rank = " << c.local_rank << "\n"
     << "global_reshape = " << join(c.global_reshape) << "\n"
     << "mask = " << to_string(c.corruption.mask) << "\n"
     << "noise = " << to_string(c.corruption.noise) << "\n"
     << "seed = " << c.corruption.seed << "\n"
     << "input = " << c.input << "\n"
     << "output = " << c.output << "\n"
     << "threads = " << c.threads << "\n"
     << "timing = " << (c.timing ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace trc
