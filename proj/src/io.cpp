#include "grushin/io.hpp"

#include <charconv>
#include <sstream>

namespace grushin {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json to_json(const Point& p) { return json::array({p.x1, p.x2}); }

json to_json(const Polyline& p) {
  json verts = json::array();
  for (const Point& v : p.vertices) verts.push_back(to_json(v));
  return json{{"params", p.params}, {"vertices", verts}};
}

json to_json(const DistanceResult& r) {
  json j{{"distance", r.value},
         {"converged", r.converged},
         {"refinements", r.refinement_history},
         {"evaluations", r.evaluations}};
  if (r.path.size() >= 2) j["polyline"] = to_json(r.path);
  return j;
}

json to_json(const DensityGrid& g) {
  return json{{"bbox", {g.bbox.x_min, g.bbox.x_max, g.bbox.y_min, g.bbox.y_max}},
              {"nx", g.nx},
              {"ny", g.ny},
              {"values", g.values}};
}

json to_json(const ModulusResult& r) {
  return json{{"value", r.value},
              {"residual", r.residual},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"coarse_value", r.coarse_value},
              {"richardson", r.richardson},
              {"grid",
               {{"nx", r.density.nx},
                {"ny", r.density.ny},
                {"bbox",
                 {r.density.bbox.x_min, r.density.bbox.x_max,
                  r.density.bbox.y_min, r.density.bbox.y_max}}}}};
}

json to_json(const RectifiabilityReport& r) {
  const char* verdict = r.verdict == RectifiabilityVerdict::Convergent
                            ? "convergent"
                        : r.verdict == RectifiabilityVerdict::Divergent
                            ? "divergent"
                            : "inconclusive";
  json lens = json::array();
  for (double v : r.lengths)
    lens.push_back(std::isfinite(v) ? json(v) : json("inf"));
  return json{
      {"verdict", verdict}, {"ks", r.ks}, {"lengths", lens},
      {"length", std::isfinite(r.length) ? json(r.length) : json("inf")}};
}

json to_json(const CantorCurveResult& r) {
  json levels = json::array();
  for (const CantorLevel& l : r.levels)
    levels.push_back(json{{"level", l.level},
                          {"count", l.count},
                          {"gap_length", l.gap_length},
                          {"arc_length", l.arc_length},
                          {"contribution", l.contribution}});
  return json{{"s", r.s},
              {"ratio_predicted", r.ratio_predicted},
              {"convergent", r.convergent},
              {"levels", levels},
              {"partial_sums", r.partial_sums}};
}

json to_json(const DilatationReport& r) {
  json samples = json::array();
  for (const DilatationSample& s : r.per_radius)
    samples.push_back(json{{"radius", s.radius},
                           {"ratio", s.ratio},
                           {"rays_ok", s.rays_ok},
                           {"rays_total", s.rays_total}});
  return json{{"point", to_json(r.point)},
              {"samples", samples},
              {"estimate", r.estimate},
              {"reliable", r.reliable}};
}

json to_json(const std::vector<EtaSample>& profile) {
  json bins = json::array();
  for (const EtaSample& s : profile)
    bins.push_back(json{{"t_lo", s.t_lo},
                        {"t_hi", s.t_hi},
                        {"t_at_max", s.t_at_max},
                        {"max_ratio", s.max_ratio},
                        {"count", s.count}});
  return bins;
}

json curve_spec_json(const std::string& label, const std::string& family,
                     const json& parameters) {
  return json{{"label", label}, {"family", family}, {"parameters", parameters}};
}

json curve_spec_json(const CantorCurveSpec& spec) {
  return curve_spec_json("cantor(L=" + format_double(spec.L) + ")", "cantor",
                         json{{"L", spec.L},
                              {"depth", spec.depth},
                              {"alpha", spec.alpha},
                              {"s", spec.s()}});
}

json nonrectifiable_spec_json(double a, Alpha alpha, bool image) {
  return curve_spec_json(
      image ? "gamma_tilde(a=" + format_double(a) + ")"
            : "gamma(a=" + format_double(a) + ")",
      image ? "nonrectifiable-image" : "nonrectifiable",
      json{{"a", a}, {"alpha", alpha.value()}});
}

json to_json(const DistortionReport& r) {
  json hs = json::array();
  for (const DistortionReport::HEstimate& h : r.H_estimates)
    hs.push_back(json{{"point", to_json(h.point)},
                      {"radius", h.radius},
                      {"ratio", h.ratio}});
  json j{{"H_estimates", hs}, {"eta_samples", to_json(r.eta_samples)}};
  if (r.K_geometric) j["K_geometric"] = *r.K_geometric;
  if (r.beltrami_sup) j["beltrami_sup"] = *r.beltrami_sup;
  return j;
}

std::string polyline_csv(const Polyline& p) {
  std::string out = "param,x1,x2\n";
  for (std::size_t i = 0; i < p.vertices.size(); ++i) {
    out += format_double(p.params[i]);
    out += ',';
    out += format_double(p.vertices[i].x1);
    out += ',';
    out += format_double(p.vertices[i].x2);
    out += '\n';
  }
  return out;
}

Polyline polyline_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> params;
  std::vector<Point> verts;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string a, b, c;
    std::getline(ls, a, ',');
    std::getline(ls, b, ',');
    std::getline(ls, c, ',');
    params.push_back(std::stod(a));
    verts.push_back({std::stod(b), std::stod(c)});
  }
  return Polyline::make(std::move(verts), std::move(params));
}

std::string density_csv(const DensityGrid& g) {
  std::string out = "i,j,x1,x2,value\n";
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Point c = g.cell_center(i, j);
      out += std::to_string(i);
      out += ',';
      out += std::to_string(j);
      out += ',';
      out += format_double(c.x1);
      out += ',';
      out += format_double(c.x2);
      out += ',';
      out += format_double(g.values[g.index(i, j)]);
      out += '\n';
    }
  }
  return out;
}

std::string profile_csv(const std::vector<EtaSample>& profile) {
  std::string out = "t_lo,t_hi,t_at_max,max_ratio,count\n";
  for (const EtaSample& s : profile) {
    out += format_double(s.t_lo);
    out += ',';
    out += format_double(s.t_hi);
    out += ',';
    out += format_double(s.t_at_max);
    out += ',';
    out += format_double(s.max_ratio);
    out += ',';
    out += std::to_string(s.count);
    out += '\n';
  }
  return out;
}

}  // namespace grushin
