#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "crosscov/catalog.hpp"
#include "crosscov/cones.hpp"
#include "crosscov/covariogram.hpp"
#include "json.hpp"

namespace crosscov::io {

using nlohmann::json;

inline json to_json(const Rational& q) { return to_string(q); }

inline Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number_float()) return parse_rational(j.dump());
  throw Error(ErrorKind::ParseError, "expected a rational, got " + j.dump());
}

inline json to_json(const Point2& p) { return json::array({to_string(p.x), to_string(p.y)}); }

inline Point2 point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::ParseError, "a point is a two-element array");
  return {rational_from_json(j[0]), rational_from_json(j[1])};
}

inline json to_json(const ConvexPolygon& p) {
  json v = json::array();
  for (const auto& q : p.vertices()) v.push_back(to_json(q));
  return {{"vertices", v}};
}

inline ConvexPolygon polygon_from_json(const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
    throw Error(ErrorKind::ParseError, "polygon needs a \"vertices\" array");
  std::vector<Point2> v;
  for (const auto& p : j["vertices"]) v.push_back(point_from_json(p));
  return validate_polygon(v);
}

inline json to_json(const PairOfBodies& p) { return {{"K", to_json(p.first)}, {"L", to_json(p.second)}}; }

inline PairOfBodies pair_from_json(const json& j) {
  if (!j.is_object() || !j.contains("K") || !j.contains("L"))
    throw Error(ErrorKind::ParseError, "pair needs \"K\" and \"L\"");
  return {polygon_from_json(j["K"]), polygon_from_json(j["L"])};
}

inline json to_json(const PlanarCone& c) {
  switch (c.kind()) {
    case PlanarCone::Kind::Origin: return {{"kind", "origin"}};
    case PlanarCone::Kind::Ray: return {{"kind", "ray"}, {"lower", to_json(c.lower().vec())}};
    case PlanarCone::Kind::Halfplane: return {{"kind", "halfplane"}, {"lower", to_json(c.lower().vec())}};
    case PlanarCone::Kind::Pointed: break;
  }
  return {{"lower", to_json(c.lower().vec())}, {"upper", to_json(c.upper().vec())}};
}

inline PlanarCone cone_from_json(const json& j) {
  if (!j.is_object() || !j.contains("lower") || !j.contains("upper"))
    throw Error(ErrorKind::ParseError, "cone needs \"lower\" and \"upper\" rays");
  return PlanarCone::spanned(point_from_json(j["lower"]), point_from_json(j["upper"]));
}

inline json to_json(const ConePair& p) { return {{"a", to_json(p.a())}, {"b", to_json(p.b())}}; }

inline ConePair cone_pair_from_json(const json& j) {
  if (!j.is_object() || !j.contains("a") || !j.contains("b"))
    throw Error(ErrorKind::ParseError, "cone pair needs \"a\" and \"b\"");
  return ConePair(cone_from_json(j["a"]), cone_from_json(j["b"]));
}

inline json to_json(const Parall12Params& p) {
  return {{"alpha", to_json(p.alpha)}, {"beta", to_json(p.beta)}, {"gamma", to_json(p.gamma)},
          {"delta", to_json(p.delta)}, {"y", to_json(p.y)}};
}

inline json to_json(const Parall34Params& p) {
  return {{"alpha", to_json(p.alpha)}, {"beta", to_json(p.beta)}, {"gamma", to_json(p.gamma)},
          {"delta", to_json(p.delta)}, {"m", to_json(p.m)},         {"y", to_json(p.y)}};
}

template <class Params>
Params params_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "parameters must be an object");
  Params p;
  if (j.contains("alpha")) p.alpha = rational_from_json(j["alpha"]);
  if (j.contains("beta")) p.beta = rational_from_json(j["beta"]);
  if (j.contains("gamma")) p.gamma = rational_from_json(j["gamma"]);
  if (j.contains("delta")) p.delta = rational_from_json(j["delta"]);
  if (j.contains("y")) p.y = point_from_json(j["y"]);
  if constexpr (requires { p.m; }) {
    if (j.contains("m")) p.m = rational_from_json(j["m"]);
  }
  return p;
}

inline json to_json(const Matrix2& t) {
  return json::array({json::array({to_string(t.a), to_string(t.b)}), json::array({to_string(t.c), to_string(t.d)})});
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::FileError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::FileError, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::FileError, "write to '" + path + "' failed");
}

inline json read_json(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
}

/// x,y,value as decimals followed by the exact p/q columns.
inline std::string grid_csv(const GridSample& g, int digits) {
  std::ostringstream os;
  os << "x,y,value,x_exact,y_exact,value_exact\n";
  for (size_t j = 0; j < g.ny; ++j)
    for (size_t i = 0; i < g.nx; ++i) {
      const Point2 p = g.location(i, j);
      const Rational& v = g.at(i, j);
      os << to_decimal(p.x, digits) << ',' << to_decimal(p.y, digits) << ',' << to_decimal(v, digits) << ','
         << to_string(p.x) << ',' << to_string(p.y) << ',' << to_string(v) << '\n';
    }
  return os.str();
}

/// Rendering options, read from `key = value` lines; '#' starts a comment.
struct RenderConfig {
  std::map<std::string, std::string> values{
      {"background", "#ffffff"}, {"heat_low", "#ffffff"}, {"heat_high", "#000000"}, {"outline", "#1f4e9c"},
      {"singular", "#d62728"},   {"fill_a", "#8fb3e6"},   {"fill_b", "#f2b880"},    {"stroke_width", "1.5"},
      {"size", "800"},           {"grid", "120"}};

  const std::string& get(const std::string& key) const { return values.at(key); }
  double number(const std::string& key) const {
    try {
      return std::stod(get(key));
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "config value '" + key + "' is not a number");
    }
  }

  static RenderConfig parse(const std::string& text) {
    RenderConfig c;
    std::istringstream in(text);
    std::string line;
    int no = 0;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
      ++no;
      if (auto h = line.find('#'); h != std::string::npos && line.find('"') == std::string::npos) line = line.substr(0, h);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "config line " + std::to_string(no) + ": expected key = value");
      std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
      if (!c.values.count(key)) throw Error(ErrorKind::ParseError, "config line " + std::to_string(no) + ": unknown key '" + key + "'");
      c.values[key] = value;
    }
    return c;
  }
};

namespace detail {

/// Maps a rational box to a square viewport with equal scale on both axes.
class Viewport {
 public:
  Viewport(const BoundingBox& box, double size, double margin = 20) : size_(size), margin_(margin) {
    x0_ = to_double(box.lo.x);
    y0_ = to_double(box.lo.y);
    const double w = to_double(box.hi.x - box.lo.x), h = to_double(box.hi.y - box.lo.y);
    const double extent = std::max(w, h) > 0 ? std::max(w, h) : 1;
    scale_ = (size - 2 * margin) / extent;
    ox_ = margin + ((size - 2 * margin) - w * scale_) / 2;
    oy_ = margin + ((size - 2 * margin) - h * scale_) / 2;
    h_ = h;
  }
  double x(const Rational& v) const { return ox_ + (to_double(v) - x0_) * scale_; }
  double y(const Rational& v) const { return oy_ + (h_ - (to_double(v) - y0_)) * scale_; }
  double scale() const { return scale_; }
  double size() const { return size_; }

 private:
  double size_, margin_, x0_, y0_, scale_, ox_, oy_, h_;
};

inline std::string fmt(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

inline std::string points_attr(const std::vector<Point2>& pts, const Viewport& vp) {
  std::string s;
  for (const auto& p : pts) s += (s.empty() ? "" : " ") + fmt(vp.x(p.x)) + "," + fmt(vp.y(p.y));
  return s;
}

inline std::string svg_open(double size, const RenderConfig& cfg) {
  const std::string sz = fmt(size);
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + sz + "\" height=\"" + sz + "\" viewBox=\"0 0 " + sz +
         " " + sz + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"" + cfg.get("background") + "\"/>\n";
}

inline int hex_channel(const std::string& color, int k) {
  if (color.size() != 7 || color[0] != '#') throw Error(ErrorKind::ParseError, "colour '" + color + "' is not #rrggbb");
  return std::stoi(color.substr(1 + 2 * k, 2), nullptr, 16);
}

inline std::string mix(const std::string& lo, const std::string& hi, double t) {
  char buf[8];
  int c[3];
  for (int k = 0; k < 3; ++k)
    c[k] = static_cast<int>(std::lround(hex_channel(lo, k) + t * (hex_channel(hi, k) - hex_channel(lo, k))));
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
  return buf;
}

inline std::string polygon_element(const ConvexPolygon& p, const Viewport& vp, const std::string& fill,
                                   const std::string& stroke, const RenderConfig& cfg, double opacity = 1.0) {
  return "<polygon points=\"" + points_attr(p.vertices(), vp) + "\" fill=\"" + fill + "\" fill-opacity=\"" +
         fmt(opacity) + "\" stroke=\"" + stroke + "\" stroke-width=\"" + cfg.get("stroke_width") + "\"/>\n";
}

}  // namespace detail

/// Heat map of a grid with the support outline and the singular set.
inline std::string render_heatmap(const GridSample& g, const ConvexPolygon& supp, const SingularSet& sing,
                                  const RenderConfig& cfg) {
  const double size = cfg.number("size");
  BoundingBox box{g.origin, g.location(g.nx - 1, g.ny - 1)};
  const detail::Viewport vp(box, size);
  Rational vmax = 0;
  for (const auto& v : g.values) vmax = std::max(vmax, v);
  std::string s = detail::svg_open(size, cfg);
  const double cw = to_double(g.x_step) * vp.scale(), ch = to_double(g.y_step) * vp.scale();
  for (size_t j = 0; j < g.ny; ++j)
    for (size_t i = 0; i < g.nx; ++i) {
      const Point2 p = g.location(i, j);
      const double t = sgn(vmax) > 0 ? to_double(g.at(i, j) / vmax) : 0.0;
      s += "<rect x=\"" + detail::fmt(vp.x(p.x) - cw / 2) + "\" y=\"" + detail::fmt(vp.y(p.y) - ch / 2) +
           "\" width=\"" + detail::fmt(cw) + "\" height=\"" + detail::fmt(ch) + "\" fill=\"" +
           detail::mix(cfg.get("heat_low"), cfg.get("heat_high"), t) + "\"/>\n";
    }
  s += "<polygon points=\"" + detail::points_attr(supp.vertices(), vp) + "\" fill=\"none\" stroke=\"" +
       cfg.get("outline") + "\" stroke-width=\"" + cfg.get("stroke_width") + "\"/>\n";
  for (const auto& seg : sing.segments)
    s += "<line x1=\"" + detail::fmt(vp.x(seg.a.x)) + "\" y1=\"" + detail::fmt(vp.y(seg.a.y)) + "\" x2=\"" +
         detail::fmt(vp.x(seg.b.x)) + "\" y2=\"" + detail::fmt(vp.y(seg.b.y)) + "\" stroke=\"" + cfg.get("singular") +
         "\" stroke-width=\"" + cfg.get("stroke_width") + "\"/>\n";
  return s + "</svg>\n";
}

/// Two panels side by side, each showing the bodies of one pair.
inline std::string render_pairs(const PairOfBodies& p, const PairOfBodies& q, const RenderConfig& cfg) {
  const double size = cfg.number("size");
  BoundingBox box = bounding_box(p.first);
  for (const ConvexPolygon* s : {&p.second, &q.first, &q.second})
    box = crosscov::detail::box_union(box, bounding_box(*s));
  std::string s = detail::svg_open(size, cfg);
  s += "<g transform=\"scale(0.5,0.5) translate(0," + detail::fmt(size / 2) + ")\">\n";
  const detail::Viewport vp(box, size);
  s += detail::polygon_element(p.first, vp, cfg.get("fill_a"), cfg.get("outline"), cfg, 0.6);
  s += detail::polygon_element(p.second, vp, cfg.get("fill_b"), cfg.get("outline"), cfg, 0.6);
  s += "</g>\n<g transform=\"translate(" + detail::fmt(size / 2) + ",0) scale(0.5,0.5) translate(0," +
       detail::fmt(size / 2) + ")\">\n";
  s += detail::polygon_element(q.first, vp, cfg.get("fill_a"), cfg.get("outline"), cfg, 0.6);
  s += detail::polygon_element(q.second, vp, cfg.get("fill_b"), cfg.get("outline"), cfg, 0.6);
  return s + "</g>\n</svg>\n";
}

/// Two panels with the sectors A and −B of each cone pair, clipped to a box.
inline std::string render_cone_pairs(const ConePair& p, const ConePair& q, const RenderConfig& cfg) {
  const double size = cfg.number("size");
  const BoundingBox box{{-1, -1}, {1, 1}};
  const detail::Viewport vp(box, size);
  auto sector = [&](const PlanarCone& c) {
    // The sector truncated to the unit square: apex plus the square's
    // boundary between the two rays.
    const ConvexPolygon sq = validate_polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
    const ConvexPolygon tri = ConvexPolygon::hull_of({Point2(0, 0), 4 * c.lower().vec(), 4 * c.upper().vec()});
    return *intersect_convex(tri, sq).polygon;
  };
  std::string s = detail::svg_open(size, cfg);
  int panel = 0;
  for (const ConePair* cp : {&p, &q}) {
    s += "<g transform=\"translate(" + detail::fmt(panel * size / 2) + "," + detail::fmt(size / 4) +
         ") scale(0.5,0.5)\">\n";
    s += detail::polygon_element(sector(cp->a()), vp, cfg.get("fill_a"), cfg.get("outline"), cfg, 0.6);
    s += detail::polygon_element(sector(-cp->b()), vp, cfg.get("fill_b"), cfg.get("outline"), cfg, 0.6);
    s += "</g>\n";
    ++panel;
  }
  return s + "</svg>\n";
}

}  // namespace crosscov::io
