#pragma once

#include <iostream>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crosscov/catalog.hpp"
#include "crosscov/cones.hpp"
#include "crosscov/covariogram.hpp"
#include "crosscov/io.hpp"
#include "crosscov/reconstruct.hpp"
#include "crosscov/synisothesis.hpp"

namespace crosscov::cli {

using nlohmann::json;

/// Everything a subcommand needs, filled in by the argument parser.
struct RunConfig {
  std::string subcommand;
  std::vector<std::string> inputs;
  std::string output;  // empty: standard output
  size_t probes = 1000;
  uint64_t seed = 1;
  size_t resolution = 200;
  std::string point;  // "x,y"
  std::string family;
  std::string params;
  std::string recipe = "heatmap";
  std::string config;
  std::optional<int> decimal;
};

namespace detail {

inline Point2 parse_point(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos || s.find(',', comma + 1) != std::string::npos)
    throw Error(ErrorKind::ParseError, "point '" + s + "' must be written x,y");
  return {parse_rational(s.substr(0, comma)), parse_rational(s.substr(comma + 1))};
}

/// Rewrites every exact rational string of a JSON document as a decimal.
inline void decimalize(json& j, int digits) {
  static const std::regex rational_re("-?[0-9]+(/[0-9]+)?");
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (std::regex_match(s, rational_re)) j = to_decimal(parse_rational(s), digits);
  } else if (j.is_array() || j.is_object()) {
    for (auto& v : j) decimalize(v, digits);
  }
}

class Runner {
 public:
  Runner(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

  void run() {
    const std::string& c = cfg_.subcommand;
    if (c == "eval") return eval();
    if (c == "support") return emit(io::to_json(support(body(0), body(1))));
    if (c == "ssets") return ssets();
    if (c == "grid") return grid();
    if (c == "render") return render();
    if (c == "cone-eval") return cone_eval();
    if (c == "cone-recover") return cone_recover();
    if (c == "reconstruct") return reconstruct();
    if (c == "catalog") return catalog();
    if (c == "verify") return verify();
    if (c == "symcheck") return symcheck();
    throw Error(ErrorKind::BadParams, "unknown subcommand '" + c + "'");
  }

  int status() const { return status_; }

 private:
  ConvexPolygon body(size_t i) const { return io::polygon_from_json(io::read_json(input(i))); }
  const std::string& input(size_t i) const {
    if (i >= cfg_.inputs.size()) throw Error(ErrorKind::BadParams, "missing input file");
    return cfg_.inputs[i];
  }

  std::string number(const Rational& q) const { return cfg_.decimal ? to_decimal(q, *cfg_.decimal) : to_string(q); }

  void write(const std::string& text) {
    if (cfg_.output.empty())
      out_ << text;
    else
      io::write_file(cfg_.output, text);
  }

  void emit(json j) {
    if (cfg_.decimal) decimalize(j, *cfg_.decimal);
    write(j.dump(2) + "\n");
  }

  void eval() {
    const CrossCovariogram g(body(0), body(1));
    write(number(g(parse_point(cfg_.point))) + "\n");
  }

  void ssets() {
    const SingularSet s = second_singular_set(body(0), body(1));
    json segs = json::array();
    for (const auto& seg : s.segments) segs.push_back(json::array({io::to_json(seg.a), io::to_json(seg.b)}));
    emit({{"segments", segs}, {"raw_count", s.raw_count}});
  }

  void grid() {
    const GridSample g = sample_grid(body(0), body(1), cfg_.resolution, cfg_.resolution);
    write(io::grid_csv(g, cfg_.decimal.value_or(6)));
  }

  io::RenderConfig render_config() const {
    return cfg_.config.empty() ? io::RenderConfig{} : io::RenderConfig::parse(io::read_file(cfg_.config));
  }

  void render() {
    const io::RenderConfig rc = render_config();
    if (cfg_.recipe == "heatmap") {
      const ConvexPolygon k = body(0), l = body(1);
      const auto n = static_cast<size_t>(rc.number("grid"));
      const GridSample g = sample_grid(k, l, n, n);
      return write(io::render_heatmap(g, support(k, l), second_singular_set(k, l), rc));
    }
    if (cfg_.recipe == "cones") {
      const auto [p, q] = make_cone_counterexample();
      return write(io::render_cone_pairs(p, q, rc));
    }
    if (cfg_.recipe == "parall") return write(io::render_pairs(make_pair(1, Parall12Params{}), make_pair(2, Parall12Params{}), rc));
    if (cfg_.recipe == "parall_due")
      return write(io::render_pairs(make_pair(3, Parall34Params{}), make_pair(4, Parall34Params{}), rc));
    throw Error(ErrorKind::BadParams, "unknown recipe '" + cfg_.recipe + "'");
  }

  void cone_eval() {
    const ConePair p = io::cone_pair_from_json(io::read_json(input(0)));
    write(number(cone_cov_eval(p, parse_point(cfg_.point))) + "\n");
  }

  void cone_recover() {
    const ConePair p = io::cone_pair_from_json(io::read_json(input(0)));
    const ConeRecoveryResult r = recover_cone_pair(ConeOracle::from_pair(p));
    json rays = json::array(), sols = json::array();
    for (const auto& d : r.rays) rays.push_back(io::to_json(d.vec()));
    for (const auto& s : r.solutions) sols.push_back(io::to_json(s.as_pair()));
    json j{{"kind", r.kind == ConeRecoveryResult::Kind::Unique ? "unique" : "ambiguous"},
           {"case", case_name(r.label)},
           {"rays", rays},
           {"solutions", sols}};
    j["transform"] = r.transform ? io::to_json(*r.transform) : json(nullptr);
    emit(j);
  }

  void reconstruct() {
    const PairOfBodies hidden = io::pair_from_json(io::read_json(input(0)));
    const ReconstructionResult r =
        assemble(PolygonCovOracle::from_pair(hidden.first, hidden.second), {cfg_.probes, cfg_.seed});
    json pairs = json::array();
    for (const auto& p : r.pairs) {
      json pj = io::to_json(p);
      if (auto w = trivial_associates(p, hidden))
        pj["witness"] = {{"x", io::to_json(w->x)}, {"branch", branch_name(w->branch)}};
      else
        pj["witness"] = nullptr;
      pairs.push_back(pj);
    }
    json j{{"kind", kind_name(r.kind)},
           {"pairs", pairs},
           {"oracle_queries", r.oracle_queries},
           {"assemblies_tested", r.assemblies_tested}};
    j["transform"] = r.transform ? io::to_json(*r.transform) : json(nullptr);
    if (r.params12) j["params"] = io::to_json(*r.params12);
    if (r.params34) j["params"] = io::to_json(*r.params34);
    emit(j);
  }

  void catalog() {
    const std::string& f = cfg_.family;
    const json params = cfg_.params.empty() ? json::object() : io::read_json(cfg_.params);
    if (f == "cones") {
      const auto [p, q] = make_cone_counterexample();
      return emit({{"first", io::to_json(p)}, {"second", io::to_json(q)}});
    }
    if (f == "1" || f == "2") return emit(io::to_json(make_pair(std::stoi(f), io::params_from_json<Parall12Params>(params))));
    if (f == "3" || f == "4") return emit(io::to_json(make_pair(std::stoi(f), io::params_from_json<Parall34Params>(params))));
    throw Error(ErrorKind::BadParams, "family must be 1, 2, 3, 4 or cones");
  }

  void verify() {
    const PairOfBodies p = io::pair_from_json(io::read_json(input(0)));
    const PairOfBodies q = io::pair_from_json(io::read_json(input(1)));
    const VerifyResult r = verify_equal_covariogram(p, q, cfg_.probes, cfg_.seed);
    if (r.equal) return write("EQUAL\n");
    status_ = 1;
    write("DIFFERENT at " + number(r.witness->x) + "," + number(r.witness->y) + ": " + number(r.first_value) +
          " != " + number(r.second_value) + "\n");
  }

  void symcheck() {
    const auto s = symmetry_point(body(0), body(1));
    json j{{"found", s.has_value()}};
    j["z"] = s ? io::to_json(s->z) : json(nullptr);
    j["branch"] = s ? json(branch_name(s->branch)) : json(nullptr);
    emit(j);
  }

  const RunConfig& cfg_;
  std::ostream& out_;
  int status_ = 0;
};

}  // namespace detail

/// Parses argv, runs one subcommand and returns the exit code: 0 on
/// success, 1 on a domain or file error, 2 on a usage error.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Exact cross covariograms of convex polygons", "crosscov"};
  app.require_subcommand(1);
  RunConfig cfg;
  int decimal = -1;
  app.add_option("--decimal", decimal, "print rationals as decimals with N digits")->check(CLI::Range(0, 1000));

  auto positional = [&](CLI::App* s, size_t n, const std::string& what) {
    s->add_option("inputs", cfg.inputs, what)->required()->expected(static_cast<int>(n));
  };
  auto with_out = [&](CLI::App* s) { s->add_option("-o,--out", cfg.output, "output file"); };
  auto with_probes = [&](CLI::App* s) {
    s->add_option("--probes", cfg.probes, "random probe count")->check(CLI::PositiveNumber);
    s->add_option("--seed", cfg.seed, "random seed");
  };

  auto* eval = app.add_subcommand("eval", "value of g_{K,L} at a point");
  positional(eval, 2, "K.json L.json");
  eval->add_option("--x", cfg.point, "point x,y")->required();

  auto* supp = app.add_subcommand("support", "support polygon K + (-L)");
  positional(supp, 2, "K.json L.json");
  with_out(supp);

  auto* ss = app.add_subcommand("ssets", "second singular set");
  positional(ss, 2, "K.json L.json");
  with_out(ss);

  auto* grid = app.add_subcommand("grid", "CSV grid of values over the support box");
  positional(grid, 2, "K.json L.json");
  grid->add_option("--resolution", cfg.resolution, "samples per axis")->check(CLI::Range(size_t{2}, size_t{100000}));
  with_out(grid);

  auto* render = app.add_subcommand("render", "SVG figure");
  render->add_option("inputs", cfg.inputs, "K.json L.json (heatmap only)")->expected(0, 2);
  render->add_option("--recipe", cfg.recipe, "heatmap, cones, parall or parall_due")
      ->check(CLI::IsMember({"heatmap", "cones", "parall", "parall_due"}));
  render->add_option("--config", cfg.config, "key = value colour file");
  with_out(render);

  auto* ceval = app.add_subcommand("cone-eval", "cone covariogram at a point");
  positional(ceval, 1, "cones.json");
  ceval->add_option("--x", cfg.point, "point x,y")->required();

  auto* crec = app.add_subcommand("cone-recover", "recover a cone pair from its covariogram");
  crec->add_option("--oracle-pair", cfg.inputs, "cones.json used as hidden oracle")->required()->expected(1);
  with_out(crec);

  auto* rec = app.add_subcommand("reconstruct", "recover a polygon pair from its covariogram");
  rec->add_option("--hidden", cfg.inputs, "pair.json used as hidden oracle")->required()->expected(1);
  with_probes(rec);
  with_out(rec);

  auto* cat = app.add_subcommand("catalog", "exceptional pairs");
  cat->add_option("--family", cfg.family, "1, 2, 3, 4 or cones")->required()->check(CLI::IsMember({"1", "2", "3", "4", "cones"}));
  cat->add_option("--params", cfg.params, "params.json");
  with_out(cat);

  auto* ver = app.add_subcommand("verify", "compare two covariograms on stratified probes");
  positional(ver, 2, "p.json q.json");
  with_probes(ver);

  auto* sym = app.add_subcommand("symcheck", "point of central symmetry of g_{K,L}");
  positional(sym, 2, "K.json L.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (decimal >= 0) cfg.decimal = decimal;

  try {
    detail::Runner r(cfg, out);
    r.run();
    return r.status();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    err << "error: " << error_name(ErrorKind::ParseError) << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace crosscov::cli
