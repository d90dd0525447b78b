#include "lhv/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace lhv {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(where.empty() ? "/" : where, "expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.contains(key)) fail(where + "/" + key, "unknown key");
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(where, "expected a finite number");
  return x;
}

std::uint64_t count(const json& v, const std::string& where) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    fail(where, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::vector<double> number_list(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "/" + std::to_string(i)));
  return out;
}

struct Reader {
  double angle_scale = 1.0;  // radians per config unit

  double angle(const json& v, const std::string& where) const { return number(v, where) * angle_scale; }

  std::vector<double> angles(const json& v, const std::string& where) const {
    auto xs = number_list(v, where);
    for (auto& x : xs) x *= angle_scale;
    return xs;
  }
};

template <typename F>
auto guarded(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const InvalidParameter& e) {
    fail(where, e.what());
  }
}

}  // namespace

std::string to_string(Subcommand s) {
  switch (s) {
    case Subcommand::predict:
      return "predict";
    case Subcommand::simulate:
      return "simulate";
    case Subcommand::fair_sampling:
      return "fair-sampling";
    case Subcommand::factorization:
      return "factorization";
    case Subcommand::hardy:
      return "hardy";
  }
  return "unknown";
}

std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

OutputFormat parse_output_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw ConfigError("format: expected csv or json, got '" + s + "'");
}

RunConfig parse_config(const std::string& text, Subcommand command) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  reject_unknown(doc, "",
                 {"angle_unit", "beam_splitter", "C", "epsilon", "N", "settings", "angle_grid", "hardy",
                  "fair_sampling", "monte_carlo", "quadrature", "output"});

  RunConfig cfg;
  cfg.command = command;
  Reader rd;

  if (doc.contains("angle_unit")) {
    const auto& u = doc["angle_unit"];
    if (u == "rad") {
      rd.angle_scale = 1.0;
    } else if (u == "deg") {
      rd.angle_scale = kPi / 180.0;
    } else {
      fail("/angle_unit", "expected \"rad\" or \"deg\"");
    }
  }

  if (doc.contains("beam_splitter")) {
    const auto& bs = doc["beam_splitter"];
    reject_unknown(bs, "/beam_splitter", {"r_sq", "t_sq"});
    if (!bs.contains("r_sq") || !bs.contains("t_sq")) fail("/beam_splitter", "needs r_sq and t_sq");
    cfg.beam_splitter = {number(bs["r_sq"], "/beam_splitter/r_sq"), number(bs["t_sq"], "/beam_splitter/t_sq")};
  }
  if (doc.contains("C")) cfg.C = number(doc["C"], "/C");
  if (doc.contains("N")) {
    cfg.N = number(doc["N"], "/N");
    if (!(cfg.N > 0.0)) fail("/N", "must be positive");
  }
  if (doc.contains("epsilon")) {
    const auto& e = doc["epsilon"];
    cfg.epsilons = e.is_array() ? number_list(e, "/epsilon") : std::vector<double>{number(e, "/epsilon")};
    if (cfg.epsilons.empty()) fail("/epsilon", "needs at least one value");
  }

  std::vector<Setting> raw_settings;
  if (doc.contains("settings")) {
    const auto& s = doc["settings"];
    if (!s.is_array()) fail("/settings", "expected an array of [theta1, theta2] pairs");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string where = "/settings/" + std::to_string(i);
      const auto pair = rd.angles(s[i], where);
      if (pair.size() != 2) fail(where, "expected [theta1, theta2]");
      raw_settings.emplace_back(pair[0], pair[1]);
    }
  }
  if (doc.contains("angle_grid")) {
    const auto& g = doc["angle_grid"];
    reject_unknown(g, "/angle_grid", {"theta1", "theta2"});
    if (!g.contains("theta1") || !g.contains("theta2")) fail("/angle_grid", "needs theta1 and theta2 arrays");
    const auto t1 = rd.angles(g["theta1"], "/angle_grid/theta1");
    const auto t2 = rd.angles(g["theta2"], "/angle_grid/theta2");
    for (double a : t1)
      for (double b : t2) raw_settings.emplace_back(a, b);
  }

  std::optional<HardySettings> raw_hardy;
  if (doc.contains("hardy")) {
    const auto& h = doc["hardy"];
    reject_unknown(h, "/hardy", {"theta1", "theta2", "theta10", "theta20", "zero_from_theta1", "layout", "fit"});
    if (h.contains("zero_from_theta1")) {
      if (h.contains("theta2") || h.contains("theta10") || h.contains("theta20") || h.contains("theta1"))
        fail("/hardy", "zero_from_theta1 excludes explicit angles");
      cfg.hardy_zero_theta1 = rd.angle(h["zero_from_theta1"], "/hardy/zero_from_theta1");
    } else {
      for (const char* k : {"theta1", "theta2", "theta10", "theta20"})
        if (!h.contains(k)) fail("/hardy", std::string("missing ") + k);
      raw_hardy = HardySettings{rd.angle(h["theta1"], "/hardy/theta1"), rd.angle(h["theta2"], "/hardy/theta2"),
                                rd.angle(h["theta10"], "/hardy/theta10"),
                                rd.angle(h["theta20"], "/hardy/theta20")};
    }
    if (h.contains("layout")) {
      if (h["layout"] == "hardy") {
        cfg.hardy_layout = HardyLayout::hardy;
      } else if (h["layout"] == "grid") {
        cfg.hardy_layout = HardyLayout::grid;
      } else {
        fail("/hardy/layout", "expected \"hardy\" or \"grid\"");
      }
    }
    if (h.contains("fit")) {
      if (h["fit"] == "max") {
        cfg.fit = NormalizationFit::max_entry;
      } else if (h["fit"] == "least-squares") {
        cfg.fit = NormalizationFit::least_squares;
      } else {
        fail("/hardy/fit", "expected \"max\" or \"least-squares\"");
      }
    }
  }

  std::vector<SumRuleTuple> raw_tuples;
  if (doc.contains("fair_sampling")) {
    const auto& f = doc["fair_sampling"];
    reject_unknown(f, "/fair_sampling", {"tuples"});
    if (!f.contains("tuples") || !f["tuples"].is_array())
      fail("/fair_sampling/tuples", "expected an array of [theta1, theta2, theta20]");
    const auto& ts = f["tuples"];
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const std::string where = "/fair_sampling/tuples/" + std::to_string(i);
      const auto t = rd.angles(ts[i], where);
      if (t.size() != 3) fail(where, "expected [theta1, theta2, theta20]");
      raw_tuples.push_back({t[0], t[1], t[2]});
    }
  }

  if (doc.contains("monte_carlo")) {
    const auto& m = doc["monte_carlo"];
    reject_unknown(m, "/monte_carlo", {"n_samples", "seed", "n_chunks"});
    if (m.contains("n_samples")) cfg.mc.n_samples = count(m["n_samples"], "/monte_carlo/n_samples");
    if (m.contains("seed")) cfg.mc.seed = count(m["seed"], "/monte_carlo/seed");
    if (m.contains("n_chunks")) cfg.mc.n_chunks = count(m["n_chunks"], "/monte_carlo/n_chunks");
  }
  if (doc.contains("quadrature")) {
    const auto& q = doc["quadrature"];
    reject_unknown(q, "/quadrature", {"n_radial", "n_azimuthal"});
    if (q.contains("n_radial"))
      cfg.quad.n_radial = static_cast<int>(count(q["n_radial"], "/quadrature/n_radial"));
    if (q.contains("n_azimuthal"))
      cfg.quad.n_azimuthal = static_cast<int>(count(q["n_azimuthal"], "/quadrature/n_azimuthal"));
  }
  if (doc.contains("output")) {
    const auto& o = doc["output"];
    reject_unknown(o, "/output", {"format", "path"});
    if (o.contains("format")) {
      if (!o["format"].is_string()) fail("/output/format", "expected a string");
      try {
        cfg.format = parse_output_format(o["format"].get<std::string>());
      } catch (const ConfigError& e) {
        fail("/output/format", e.what());
      }
    }
    if (o.contains("path")) {
      if (!o["path"].is_string()) fail("/output/path", "expected a string");
      cfg.out_path = o["path"].get<std::string>();
    }
  }

  // Downstream invariants.
  const auto norm = guarded("/beam_splitter", [&] { return normalize_params(cfg.beam_splitter, raw_settings); });
  cfg.gamma = norm.gamma;
  cfg.phi = norm.phi;
  cfg.swapped = norm.swapped;
  cfg.settings = norm.settings;
  const auto map = [&](double t) { return cfg.swapped ? kPi / 2.0 - t : t; };
  if (raw_hardy)
    cfg.hardy = HardySettings{map(raw_hardy->theta1), map(raw_hardy->theta2), map(raw_hardy->theta10),
                              map(raw_hardy->theta20)}
                    .canonical();
  if (cfg.hardy_zero_theta1) cfg.hardy = hardy_zero_settings(map(*cfg.hardy_zero_theta1), cfg.gamma);
  for (const auto& t : raw_tuples)
    cfg.sum_rule_tuples.push_back(
        {canonical_angle(map(t.theta1)), canonical_angle(map(t.theta2)), canonical_angle(map(t.theta20))});

  guarded("/C", [&] { return ModelParams::make(cfg.gamma, cfg.C, kSmallCapEpsilon); });
  for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
    const std::string where = doc.contains("epsilon") && doc["epsilon"].is_array() ? "/epsilon/" + std::to_string(i)
                                                                                    : std::string("/epsilon");
    guarded(where, [&] { return cfg.params(cfg.epsilons[i]); });
  }
  guarded("/monte_carlo", [&] {
    cfg.mc.validate();
    return 0;
  });
  guarded("/quadrature", [&] {
    cfg.quad.validate();
    return 0;
  });

  switch (command) {
    case Subcommand::predict:
    case Subcommand::simulate:
      break;
    case Subcommand::fair_sampling:
      if (cfg.sum_rule_tuples.empty()) fail("/fair_sampling/tuples", "fair-sampling needs at least one tuple");
      for (std::size_t i = 1; i < cfg.epsilons.size(); ++i)
        if (!(cfg.epsilons[i] < cfg.epsilons[i - 1]))
          fail("/epsilon/" + std::to_string(i), "fair-sampling needs a strictly decreasing epsilon list");
      break;
    case Subcommand::factorization:
    case Subcommand::hardy:
      if (!cfg.hardy) fail("/hardy", to_string(command) + " needs hardy settings");
      break;
  }
  return cfg;
}

RunConfig load_config(const std::string& path, Subcommand command) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), command);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace lhv
