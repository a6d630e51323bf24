// Batch entry point: builds a Coxeter system from config or flags, runs one
// computation, and emits a deterministic artifact. Exit status is zero only
// when the command succeeded and, for compare/accept, found no difference
// or failure; module errors print a machine-readable record and exit 1.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <klcells/acceptance.hpp>
#include <klcells/io.hpp>

namespace {

using namespace klcells;

struct RunConfig {
  std::vector<std::vector<int>> matrix{{1, 6, 2}, {6, 1, 3}, {2, 3, 1}};
  std::vector<long> weights{5, 1, 1};
  std::vector<std::string> labels{"s1", "s2", "s3"};
  int radius = 8;
  long seed = 12345;
  std::string datum_text;
  std::string golden_dir = std::string(KLCELLS_SOURCE_DIR) + "/tests/golden";
};

RunConfig load_config(const std::string& path) {
  RunConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in)
    throw KlError(ErrorCode::ConfigError, "cannot open config file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
    if (!doc.is_object())
      throw KlError(ErrorCode::ConfigError, "config must be a JSON object");
    if (doc.contains("matrix"))
      cfg.matrix = doc["matrix"].get<std::vector<std::vector<int>>>();
    if (doc.contains("weights"))
      cfg.weights = doc["weights"].get<std::vector<long>>();
    if (doc.contains("labels"))
      cfg.labels = doc["labels"].get<std::vector<std::string>>();
    if (doc.contains("radius")) cfg.radius = doc["radius"].get<int>();
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<long>();
    if (doc.contains("datum")) cfg.datum_text = doc["datum"].dump();
    if (doc.contains("golden_dir"))
      cfg.golden_dir = doc["golden_dir"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw KlError(ErrorCode::ConfigError,
                  std::string("malformed config: ") + e.what());
  }
  return cfg;
}

std::vector<long> parse_weight_list(const std::string& text) {
  std::vector<long> out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    try {
      out.push_back(std::stol(text.substr(pos, comma - pos)));
    } catch (const std::exception&) {
      throw KlError(ErrorCode::ConfigError,
                    "weights must be a comma-separated integer list, got " +
                        text);
    }
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  return out;
}

void write_artifact(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out)
    throw KlError(ErrorCode::ConfigError,
                  "cannot open output path " + out_path);
  out << text;
}

std::string strip_call(const std::string& token, const std::string& prefix) {
  if (token.size() < prefix.size() + 1 || token.back() != ')')
    throw KlError(ErrorCode::ConfigError, "malformed preset " + token);
  return token.substr(prefix.size(), token.size() - prefix.size() - 1);
}

std::string trim(const std::string& s) {
  size_t lo = s.find_first_not_of(' ');
  if (lo == std::string::npos) return "";
  size_t hi = s.find_last_not_of(' ');
  return s.substr(lo, hi - lo + 1);
}

InductionDatum build_preset(KLCache& kl, const std::string& name,
                            std::optional<G2Geometry>& geo) {
  auto need_geo = [&]() -> const G2Geometry& {
    if (!geo) geo.emplace(kl.ball());
    return *geo;
  };
  if (name.rfind("parabolic(", 0) == 0) {
    uint32_t J = detail::parse_generator_set(kl.ball().system(),
                                             strip_call(name, "parabolic("));
    return parabolic_datum(kl, J);
  }
  if (name.rfind("heavy_generator(", 0) == 0) {
    std::string inner = strip_call(name, "heavy_generator(");
    size_t semi = inner.find(';');
    if (semi == std::string::npos)
      throw KlError(ErrorCode::ConfigError,
                    "heavy_generator needs \"subset; generator\", got " +
                        name);
    uint32_t J = detail::parse_generator_set(kl.ball().system(),
                                             inner.substr(0, semi));
    int t = kl.ball().system().generator_index(trim(inner.substr(semi + 1)));
    return heavy_generator_datum(kl, J, t);
  }
  if (name == "g2_c_sets") return g2_c_sets_datum(kl, need_geo());
  if (name == "g2_b1") return g2_b1_datum(kl, need_geo());
  if (name == "g2_b3") return g2_b3_datum(kl, need_geo());
  throw KlError(ErrorCode::ConfigError, "unknown preset " + name);
}

const std::map<std::string, std::vector<std::string>>& allowed_formats() {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"ball", {"json", "text"}},   {"kl", {"json", "text"}},
      {"mu", {"json"}},             {"cbasis", {"json"}},
      {"cells", {"json"}},          {"compare", {"json"}},
      {"induct", {"json"}},         {"g2-svg", {"svg"}},
      {"hasse", {"dot"}},           {"accept", {"text"}}};
  return table;
}

std::string resolve_format(const std::string& command,
                           const std::string& requested) {
  const auto& allowed = allowed_formats().at(command);
  if (requested.empty()) return allowed.front();
  for (const std::string& f : allowed)
    if (f == requested) return f;
  throw KlError(ErrorCode::ConfigError,
                "format " + requested + " is not available for " + command);
}

int dispatch(const std::string& command, const RunConfig& cfg,
             const std::string& format, const std::string& out_path,
             const std::string& preset) {
  if (cfg.radius < 0)
    throw KlError(ErrorCode::ConfigError, "radius must be nonnegative");
  for (long w : cfg.weights)
    if (w <= 0)
      throw KlError(ErrorCode::ConfigError, "weights must be positive");

  if (command == "accept") {
    std::ostringstream lines;
    int failures = run_acceptance(lines, cfg.golden_dir, cfg.seed);
    write_artifact(lines.str(), out_path);
    return failures == 0 ? 0 : 1;
  }

  CoxeterSystem sys = build_system(cfg.matrix, cfg.weights, cfg.labels);
  BallTable ball(sys, cfg.radius);

  if (command == "ball") {
    write_artifact(format == "text" ? render_ball_text(ball)
                                    : dump_json(render_ball(ball)),
                   out_path);
    return 0;
  }

  KLCache kl(ball);
  std::optional<G2Geometry> geo;

  if (command == "kl") {
    write_artifact(format == "text" ? render_kl_text(kl)
                                    : dump_json(render_kl(kl)),
                   out_path);
    return 0;
  }
  if (command == "mu") {
    write_artifact(dump_json(render_mu(kl)), out_path);
    return 0;
  }
  if (command == "cbasis") {
    write_artifact(dump_json(render_cbasis(kl)), out_path);
    return 0;
  }
  if (command == "cells") {
    write_artifact(dump_json(render_cells(kl)), out_path);
    return 0;
  }
  if (command == "compare") {
    geo.emplace(ball);
    OrderedJson doc = render_compare(kl, *geo);
    write_artifact(dump_json(doc), out_path);
    return doc["match"].get<bool>() ? 0 : 1;
  }
  if (command == "induct") {
    InductionDatum datum = [&]() {
      if (!preset.empty()) return build_preset(kl, preset, geo);
      if (!cfg.datum_text.empty()) {
        try {
          geo.emplace(ball);
        } catch (const KlError&) {
        }
        return datum_from_json(kl, cfg.datum_text, geo ? &*geo : nullptr);
      }
      throw KlError(ErrorCode::ConfigError,
                    "induct needs --preset or a datum in the config");
    }();
    write_artifact(dump_json(render_induct(datum)), out_path);
    return 0;
  }
  if (command == "g2-svg") {
    geo.emplace(ball);
    write_artifact(render_g2_svg(*geo), out_path);
    return 0;
  }
  if (command == "hasse") {
    write_artifact(render_hasse_dot(kl), out_path);
    return 0;
  }
  throw KlError(ErrorCode::ConfigError, "unknown command " + command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact Hecke-algebra tables, cell partitions, and diagrams "
               "for weighted Coxeter systems"};
  app.fallthrough();

  std::string config_path, weights_text, out_path, format, preset;
  int radius = 0;
  long seed = 0;
  app.add_option("--config", config_path, "JSON run configuration");
  CLI::Option* radius_opt =
      app.add_option("--radius", radius, "ball radius override");
  app.add_option("--weights", weights_text,
                 "weight override, comma-separated per generator");
  app.add_option("--out", out_path, "artifact path (default stdout)");
  app.add_option("--format", format, "artifact format: json, text, dot, svg");
  app.add_option("--preset", preset,
                 "induction datum preset: parabolic(...), "
                 "heavy_generator(...; t), g2_c_sets, g2_b1, g2_b3");
  CLI::Option* seed_opt =
      app.add_option("--seed", seed, "seed recorded for randomized suites");

  static const char* commands[] = {"ball", "kl",     "mu",     "cbasis",
                                   "cells", "compare", "induct", "g2-svg",
                                   "hasse", "accept"};
  static const char* descriptions[] = {
      "enumerate the ball with lengths and descent sets",
      "table of canonical-basis correction coefficients",
      "table of edge polynomials",
      "standard-basis expansion of every canonical element",
      "left/right/two-sided cell partitions and the left order",
      "computed left cells versus the alcove-region prediction",
      "run an induction datum through the condition checks",
      "SVG drawing of the alcove tiling colored by region",
      "DOT diagram of the left-cell order",
      "run the acceptance suite"};
  for (size_t i = 0; i < std::size(commands); ++i)
    app.add_subcommand(commands[i], descriptions[i])->fallthrough();
  app.require_subcommand(0, 1);

  CLI11_PARSE(app, argc, argv);

  const auto subs = app.get_subcommands();
  if (subs.empty()) {
    std::cerr << app.help();
    return 1;
  }
  const std::string command = subs.front()->get_name();

  try {
    RunConfig cfg = load_config(config_path);
    if (radius_opt->count()) cfg.radius = radius;
    if (!weights_text.empty()) cfg.weights = parse_weight_list(weights_text);
    if (seed_opt->count()) cfg.seed = seed;
    return dispatch(command, cfg, resolve_format(command, format), out_path,
                    preset);
  } catch (const KlError& e) {
    std::cout << dump_json(error_record(e));
    return 1;
  }
}
