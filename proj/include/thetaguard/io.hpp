#pragma once

// Input parsing (CSV and JSON guard sets, angle strings) and output writers
// (region JSON, SVG, PGM rasters, lower-bound instance JSON).

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "thetaguard/lower_bound.hpp"
#include "thetaguard/region_wide.hpp"

namespace thetaguard {

class input_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// "1.25", "0.5pi", or "90deg" -> radians
inline double parse_theta(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
  double mult = 1.0;
  if (s.size() > 3 && s.substr(s.size() - 3) == "deg") {
    mult = kPi / 180.0;
    s.resize(s.size() - 3);
  } else if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
    mult = kPi;
    s.resize(s.size() - 2);
    if (s.empty()) s = "1";
  }
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw input_error("trailing characters in angle: " + s);
    return v * mult;
  } catch (const std::exception&) {
    throw input_error("cannot parse angle: " + s);
  }
}

inline GuardSet read_guards(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw input_error("empty guard set");
  std::vector<Point> pts;
  if (text[first] == '{' || text[first] == '[') {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw input_error("invalid JSON in " + path);
    const nlohmann::json& arr = j.is_object() ? j.at("guards") : j;
    for (const auto& item : arr) {
      if (!item.is_array() || item.size() != 2)
        throw input_error("guard entries must be [x, y] pairs");
      pts.push_back({item[0].get<double>(), item[1].get<double>()});
    }
  } else {
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      std::size_t h = line.find('#');
      if (h != std::string::npos) line.resize(h);
      for (char& c : line)
        if (c == ',' || c == ';' || c == '\t') c = ' ';
      std::istringstream ls(line);
      double x, y;
      if (ls >> x >> y) pts.push_back({x, y});
    }
  }
  if (pts.empty()) throw input_error("empty guard set");
  return GuardSet(std::move(pts));
}

inline nlohmann::json point_json(Point p) { return nlohmann::json::array({p.x, p.y}); }

inline nlohmann::json region_to_json(const Region& region, double theta,
                                     const std::string& regime) {
  nlohmann::json j;
  j["theta"] = theta;
  j["regime"] = regime;
  j["whole_plane"] = region.whole_plane;
  j["empty"] = region.empty();
  j["component_count"] = region.components.size();
  nlohmann::json comps = nlohmann::json::array();
  for (const RegionComponent& c : region.components) {
    nlohmann::json edges = nlohmann::json::array();
    for (const RegionEdge& e : c.edges) {
      nlohmann::json je;
      je["from"] = point_json(e.from);
      je["to"] = point_json(e.to);
      if (e.kind == RegionEdge::Kind::Arc) {
        je["type"] = "arc";
        je["center"] = point_json(e.center);
        je["radius"] = e.radius;
        je["ccw"] = e.ccw;
      } else {
        je["type"] = "segment";
      }
      edges.push_back(std::move(je));
    }
    nlohmann::json jc;
    jc["edges"] = std::move(edges);
    comps.push_back(std::move(jc));
  }
  j["components"] = std::move(comps);
  return j;
}

namespace detail {

inline std::string svg_path(const RegionComponent& c, double ymax) {
  // y is flipped into screen coordinates, so ccw arcs use sweep flag 0
  std::ostringstream os;
  os.precision(10);
  if (c.edges.empty()) return "";
  os << "M " << c.edges[0].from.x << " " << ymax - c.edges[0].from.y;
  for (const RegionEdge& e : c.edges) {
    if (e.kind == RegionEdge::Kind::Segment) {
      os << " L " << e.to.x << " " << ymax - e.to.y;
    } else {
      int large = e.sweep() > kPi ? 1 : 0;
      int flag = e.ccw ? 0 : 1;
      os << " A " << e.radius << " " << e.radius << " 0 " << large << " " << flag << " "
         << e.to.x << " " << ymax - e.to.y;
    }
  }
  os << " Z";
  return os.str();
}

}  // namespace detail

inline std::string region_to_svg(const Region& region, const GuardSet& G) {
  BBox box = G.bbox();
  for (const RegionComponent& c : region.components) box.merge(c.bbox());
  box.pad(0.05 * std::max(box.diameter(), 1.0));
  std::ostringstream os;
  os.precision(10);
  double ymax = box.hi.y + box.lo.y;  // flip within the viewbox
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << box.lo.x << " " << box.lo.y
     << " " << box.width() << " " << box.height() << "\">\n";
  for (const RegionComponent& c : region.components)
    os << "  <path d=\"" << detail::svg_path(c, ymax)
       << "\" fill=\"#7fb3d5\" fill-opacity=\"0.6\" stroke=\"#1a5276\" stroke-width=\""
       << 0.002 * box.diameter() << "\"/>\n";
  double r = 0.004 * box.diameter();
  for (const Point& g : G.guards())
    os << "  <circle cx=\"" << g.x << "\" cy=\"" << ymax - g.y << "\" r=\"" << r
       << "\" fill=\"#c0392b\"/>\n";
  os << "</svg>\n";
  return os.str();
}

// ASCII PGM of f scaled to 0..255 (or the binary guarded mask).
inline std::string raster_to_pgm(const Raster& r, bool mask = false) {
  std::ostringstream os;
  os << "P2\n" << r.cols << " " << r.rows << "\n255\n";
  for (int cy = r.rows - 1; cy >= 0; --cy) {
    for (int cx = 0; cx < r.cols; ++cx) {
      int v;
      if (mask)
        v = r.guarded[r.index(cx, cy)] ? 255 : 0;
      else
        v = static_cast<int>(std::lround(r.f[r.index(cx, cy)] / kTau * 255.0));
      os << std::clamp(v, 0, 255) << (cx + 1 == r.cols ? "" : " ");
    }
    os << "\n";
  }
  return os.str();
}

inline std::string raster_to_svg(const Raster& r) {
  std::ostringstream os;
  os.precision(10);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << r.cols << " " << r.rows
     << "\">\n";
  for (int cy = 0; cy < r.rows; ++cy)
    for (int cx = 0; cx < r.cols; ++cx) {
      int v = static_cast<int>(std::lround(r.f[r.index(cx, cy)] / kTau * 255.0));
      v = std::clamp(v, 0, 255);
      os << "  <rect x=\"" << cx << "\" y=\"" << r.rows - 1 - cy << "\" width=\"1\" height=\"1\""
         << " fill=\"rgb(" << v << "," << v << "," << v << ")\"/>\n";
    }
  os << "</svg>\n";
  return os.str();
}

inline nlohmann::json arcs_to_json(const CandidateArcSet& cset) {
  nlohmann::json j;
  j["count"] = cset.arcs.size();
  j["region_provably_empty"] = cset.region_provably_empty;
  j["sources"] = {{"hull_edges", cset.stats.hull_edges},
                  {"slide_right", cset.stats.slide_right},
                  {"slide_left", cset.stats.slide_left}};
  nlohmann::json arcs = nlohmann::json::array();
  for (const CircularArc& a : cset.arcs) {
    nlohmann::json ja;
    ja["center"] = point_json(a.center);
    ja["radius"] = a.radius;
    ja["start_angle"] = a.start_angle;
    ja["sweep"] = a.sweep;
    if (a.provenance) {
      ja["l"] = point_json(a.provenance->l);
      ja["r"] = point_json(a.provenance->r);
      ja["inscribed"] = a.provenance->inscribed;
    }
    arcs.push_back(std::move(ja));
  }
  j["arcs"] = std::move(arcs);
  return j;
}

inline nlohmann::json instance_to_json(const LowerBoundInstance& inst) {
  nlohmann::json j;
  j["i"] = inst.i;
  j["theta"] = inst.theta;
  j["n"] = inst.guards.size();
  j["first_step_guards"] = inst.first_step_count;
  j["blockers"] = inst.blocker_count;
  j["expected_components"] = inst.expected_components;
  j["boxes"] = {{"b_i", inst.b_i}, {"b_2i", inst.b_2i}, {"b_4i", inst.b_4i}, {"b_x", inst.b_x}};
  nlohmann::json guards = nlohmann::json::array();
  for (const Point& g : inst.guards.guards()) guards.push_back(point_json(g));
  j["guards"] = std::move(guards);
  return j;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write " + path);
  out << content;
}

// Regime dispatch covering every theta in (0, 2pi].
inline Region compute_region(const GuardSet& G, double theta, PipelineOptions opts = {}) {
  if (!(theta > 0.0 && theta <= kTau)) throw std::invalid_argument("theta out of range");
  if (theta == kTau) {
    Region r;
    r.whole_plane = true;
    return r;
  }
  if (theta < kPi) return region_theta_lt_pi(G, theta, opts);
  if (G.size() < 2) return Region{};  // a single guard never theta-guards anything
  return region_theta_ge_pi(G, theta);
}

inline std::string regime_name(double theta) {
  if (theta == kTau) return "whole_plane";
  if (theta == kPi) return "eq_pi";
  return theta < kPi ? "lt_pi" : "gt_pi";
}

}  // namespace thetaguard
