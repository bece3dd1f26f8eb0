#include "grushin/maps.hpp"

#include <cmath>
#include <sstream>

namespace grushin {

MapSpec MapSpec::identity(Alpha alpha) {
  return MapSpec(GrushinConformal{1.0, 0.0, +1}, alpha);
}
MapSpec MapSpec::phi(Alpha alpha) { return MapSpec(CanonicalPhi{}, alpha); }
MapSpec MapSpec::phi_inverse(Alpha alpha) {
  return MapSpec(CanonicalPhiInverse{}, alpha);
}
MapSpec MapSpec::conformal(GrushinConformal f, Alpha alpha) {
  if (!(f.lambda > 0.0)) throw std::invalid_argument("conformal map needs lambda > 0");
  if (f.sign != +1 && f.sign != -1)
    throw std::invalid_argument("conformal map sign must be +-1");
  return MapSpec(f, alpha);
}
MapSpec MapSpec::affine(EuclideanAffine f, Alpha alpha) {
  return MapSpec(f, alpha);
}
MapSpec MapSpec::compose(std::vector<MapSpec> factors) {
  if (factors.empty()) throw std::invalid_argument("empty composition");
  const Alpha alpha = factors.front().alpha();
  return MapSpec(std::move(factors), alpha);
}

Point MapSpec::operator()(Point p) const {
  const double a = alpha_.value();
  if (std::holds_alternative<CanonicalPhi>(node_)) return canonical_phi(p, alpha_);
  if (std::holds_alternative<CanonicalPhiInverse>(node_))
    return canonical_phi_inverse(p, alpha_);
  if (const auto* g = std::get_if<GrushinConformal>(&node_)) {
    const double s = g->sign;
    return {s * g->lambda * p.x1,
            s * std::pow(g->lambda, 1.0 + a) * p.x2 + g->a};
  }
  if (const auto* e = std::get_if<EuclideanAffine>(&node_)) {
    return {e->m11 * p.x1 + e->m12 * p.x2 + e->tx,
            e->m21 * p.x1 + e->m22 * p.x2 + e->ty};
  }
  const auto& factors = std::get<std::vector<MapSpec>>(node_);
  Point q = p;
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) q = (*it)(q);
  return q;
}

bool MapSpec::is_conformal_family() const {
  return std::holds_alternative<GrushinConformal>(node_);
}

const GrushinConformal* MapSpec::as_conformal() const {
  return std::get_if<GrushinConformal>(&node_);
}

std::optional<GrushinConformal> MapSpec::simplified_conformal() const {
  if (const auto* g = std::get_if<GrushinConformal>(&node_)) return *g;
  const auto* factors = std::get_if<std::vector<MapSpec>>(&node_);
  if (!factors) return std::nullopt;
  // compose right-to-left: f1 o f2 with parameters (l1,a1,s1),(l2,a2,s2)
  // collapses to (l1 l2, s1 l1^{1+alpha} a2 + a1, s1 s2)
  std::optional<GrushinConformal> acc;
  const double e = 1.0 + alpha_.value();
  for (auto it = factors->rbegin(); it != factors->rend(); ++it) {
    const std::optional<GrushinConformal> g = it->simplified_conformal();
    if (!g) return std::nullopt;
    if (!acc) {
      acc = *g;
      continue;
    }
    GrushinConformal out;
    out.lambda = g->lambda * acc->lambda;
    out.sign = g->sign * acc->sign;
    out.a = g->sign * std::pow(g->lambda, e) * acc->a + g->a;
    acc = out;
  }
  return acc;
}

std::string MapSpec::text() const {
  std::ostringstream os;
  if (std::holds_alternative<CanonicalPhi>(node_)) {
    os << "phi";
  } else if (std::holds_alternative<CanonicalPhiInverse>(node_)) {
    os << "phi_inv";
  } else if (const auto* g = std::get_if<GrushinConformal>(&node_)) {
    os << "gconf(l=" << g->lambda << ",a=" << g->a << ",s="
       << (g->sign > 0 ? "++" : "--") << ")";
  } else if (const auto* e = std::get_if<EuclideanAffine>(&node_)) {
    os << "affine(" << e->m11 << "," << e->m12 << "," << e->m21 << ","
       << e->m22 << "," << e->tx << "," << e->ty << ")";
  } else {
    const auto& factors = std::get<std::vector<MapSpec>>(node_);
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i) os << " . ";
      os << factors[i].text();
    }
  }
  return os.str();
}

namespace {

std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  std::size_t e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_num(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad number: " + s);
  return v;
}

MapSpec parse_atom(const std::string& raw, Alpha alpha) {
  const std::string s = strip(raw);
  if (s == "id") return MapSpec::identity(alpha);
  if (s == "phi") return MapSpec::phi(alpha);
  if (s == "phi_inv" || s == "phi^-1") return MapSpec::phi_inverse(alpha);
  const std::size_t par = s.find('(');
  if (par == std::string::npos || s.back() != ')')
    throw std::invalid_argument("cannot parse map term: " + s);
  const std::string head = strip(s.substr(0, par));
  const std::string body = s.substr(par + 1, s.size() - par - 2);
  if (head == "gconf") {
    GrushinConformal g;
    for (const std::string& kvs : split_top(body, ',')) {
      const std::size_t eq = kvs.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("gconf needs key=value parts");
      const std::string k = strip(kvs.substr(0, eq));
      const std::string v = strip(kvs.substr(eq + 1));
      if (k == "l" || k == "lambda") {
        g.lambda = parse_num(v);
      } else if (k == "a") {
        g.a = parse_num(v);
      } else if (k == "s") {
        if (v == "++")
          g.sign = +1;
        else if (v == "--")
          g.sign = -1;
        else
          throw std::invalid_argument("gconf signs must be ++ or --");
      } else {
        throw std::invalid_argument("unknown gconf key: " + k);
      }
    }
    return MapSpec::conformal(g, alpha);
  }
  if (head == "affine") {
    const std::vector<std::string> parts = split_top(body, ',');
    if (parts.size() != 6)
      throw std::invalid_argument("affine(m11,m12,m21,m22,tx,ty) needs 6 values");
    EuclideanAffine e;
    e.m11 = parse_num(strip(parts[0]));
    e.m12 = parse_num(strip(parts[1]));
    e.m21 = parse_num(strip(parts[2]));
    e.m22 = parse_num(strip(parts[3]));
    e.tx = parse_num(strip(parts[4]));
    e.ty = parse_num(strip(parts[5]));
    return MapSpec::affine(e, alpha);
  }
  throw std::invalid_argument("unknown map kind: " + head);
}

}  // namespace

MapSpec MapSpec::parse(const std::string& text, Alpha alpha) {
  const std::vector<std::string> parts = split_top(text, '.');
  std::vector<MapSpec> factors;
  factors.reserve(parts.size());
  for (const std::string& p : parts) factors.push_back(parse_atom(p, alpha));
  if (factors.size() == 1) return factors.front();
  return MapSpec::compose(std::move(factors));
}

Point eval_map(const MapSpec& m, Point p) { return m(p); }

}  // namespace grushin
