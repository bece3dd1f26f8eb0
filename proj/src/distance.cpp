#include "grushin/distance.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <mutex>

namespace grushin {

namespace {

constexpr double kPi = 3.14159265358979323846;

class PathOptimizer {
 public:
  struct StartResult {
    double value = kInf;
    std::vector<Point> vertices;
    std::vector<double> history;
    bool refined_out = false;  // ladder ended because improvement < tol
    long evals = 0;
  };

  PathOptimizer(Alpha alpha, const DistanceOptions& opts)
      : alpha_(alpha), opts_(opts) {}

  StartResult run(std::vector<Point> verts) {
    v_ = std::move(verts);
    p0_ = v_.front();
    p1_ = v_.back();
    amp_step_ = 0.15;
    init_segments();
    StartResult out;
    descend();
    out.history.push_back(total_);
    double prev = total_;
    bool tol_reached = false;
    while (static_cast<int>(v_.size()) < opts_.max_vertices) {
      if (!std::isfinite(total_)) break;  // refining an infinite path is useless
      insert_midpoints();
      descend();
      out.history.push_back(total_);
      const double improvement = (prev - total_) / std::max(total_, 1e-300);
      prev = total_;
      if (improvement < opts_.rel_tol) {
        tol_reached = true;
        break;
      }
    }
    out.refined_out = tol_reached ||
                      (out.history.size() == 1 && std::isfinite(total_));
    out.value = total_;
    out.vertices = v_;
    out.evals = evals_;
    return out;
  }

 private:
  double seg_cost(const Point& a, const Point& b) {
    ++evals_;
    if (a.x1 == b.x1 && a.x2 == b.x2) return 0.0;
    const LengthResult r = segment_grushin_length(a, b, alpha_);
    return r.finite_ok() ? r.value : kInf;
  }

  void init_segments() {
    const std::size_t n = v_.size();
    seg_.assign(n - 1, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) seg_[i] = seg_cost(v_[i], v_[i + 1]);
    recompute_total();
    step_.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i)
      step_[i] = 0.25 * 0.5 *
                 (euclidean_distance(v_[i - 1], v_[i]) +
                  euclidean_distance(v_[i], v_[i + 1]));
    pair_step_ = step_;
  }

  void recompute_total() {
    total_ = 0.0;
    for (double s : seg_) total_ += s;
  }

  void insert_midpoints() {
    std::vector<Point> nv;
    nv.reserve(2 * v_.size() - 1);
    for (std::size_t i = 0; i + 1 < v_.size(); ++i) {
      nv.push_back(v_[i]);
      nv.push_back({0.5 * (v_[i].x1 + v_[i + 1].x1),
                    0.5 * (v_[i].x2 + v_[i + 1].x2)});
    }
    nv.push_back(v_.back());
    v_ = std::move(nv);
    init_segments();
  }

  // move one coordinate of one interior vertex; accept improvements only,
  // riding an improving direction a few extra steps
  bool improve_vertex(std::size_t i, bool x1_coord) {
    const double h = step_[i];
    bool improved = false;
    for (int dir : {+1, -1}) {
      for (int ride = 0; ride < 4; ++ride) {
        Point cand = v_[i];
        (x1_coord ? cand.x1 : cand.x2) += dir * h;
        const double l1 = seg_cost(v_[i - 1], cand);
        const double l2 = seg_cost(cand, v_[i + 1]);
        if (!(l1 + l2 < seg_[i - 1] + seg_[i])) break;
        total_ += l1 + l2 - (seg_[i - 1] + seg_[i]);
        seg_[i - 1] = l1;
        seg_[i] = l2;
        v_[i] = cand;
        improved = true;
      }
      if (improved) break;
    }
    return improved;
  }

  // shift both endpoints of segment i vertically together; lets horizontal
  // crossings of the singular line slide in height (moving either endpoint
  // alone is rejected because a tilted crossing has infinite length)
  bool improve_pair(std::size_t i) {
    if (i == 0 || i + 2 >= v_.size()) return false;
    const double h = pair_step_[i];
    bool improved = false;
    for (int dir : {+1, -1}) {
      for (int ride = 0; ride < 8; ++ride) {
        Point ca = v_[i];
        Point cb = v_[i + 1];
        ca.x2 += dir * h;
        cb.x2 += dir * h;
        const double l0 = seg_cost(v_[i - 1], ca);
        const double l1 = seg_cost(ca, cb);
        const double l2 = seg_cost(cb, v_[i + 2]);
        const double cur = seg_[i - 1] + seg_[i] + seg_[i + 1];
        if (!(l0 + l1 + l2 < cur)) break;
        total_ += l0 + l1 + l2 - cur;
        seg_[i - 1] = l0;
        seg_[i] = l1;
        seg_[i + 1] = l2;
        v_[i] = ca;
        v_[i + 1] = cb;
        improved = true;
      }
      if (improved) break;
    }
    return improved;
  }

  bool crosses_Y(std::size_t i) const {
    return (v_[i].x1 <= 0.0 && v_[i + 1].x1 >= 0.0) ||
           (v_[i].x1 >= 0.0 && v_[i + 1].x1 <= 0.0);
  }

  // rescale the whole path's x1-deviation from the endpoint chord; fixes
  // wrong-amplitude starts much faster than vertex-local moves
  bool improve_amplitude() {
    const std::size_t n = v_.size();
    bool improved = false;
    for (int dir : {+1, -1}) {
      for (int ride = 0; ride < 6; ++ride) {
        const double gamma = dir > 0 ? 1.0 + amp_step_ : 1.0 / (1.0 + amp_step_);
        std::vector<Point> cand(v_);
        for (std::size_t i = 1; i + 1 < n; ++i) {
          const double t = static_cast<double>(i) / (n - 1);
          const double chord = p0_.x1 + t * (p1_.x1 - p0_.x1);
          cand[i].x1 = chord + gamma * (v_[i].x1 - chord);
        }
        double cand_total = 0.0;
        std::vector<double> cand_seg(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
          cand_seg[i] = seg_cost(cand[i], cand[i + 1]);
          cand_total += cand_seg[i];
        }
        if (!(cand_total < total_)) break;
        v_ = std::move(cand);
        seg_ = std::move(cand_seg);
        total_ = cand_total;
        improved = true;
      }
      if (improved) break;
    }
    if (improved)
      amp_step_ = std::min(0.7, amp_step_ * 1.8);
    else
      amp_step_ = std::max(1e-6, amp_step_ * 0.5);
    return improved;
  }

  void descend() {
    const std::size_t n = v_.size();
    if (n < 3) return;
    const double sweep_tol = std::max(1e-7, 0.01 * opts_.rel_tol);
    for (int sweep = 0; sweep < opts_.max_sweeps; ++sweep) {
      const double before = total_;
      bool any = improve_amplitude();
      const bool forward = (sweep % 2 == 0);
      for (std::size_t k = 1; k + 1 < n; ++k) {
        const std::size_t i = forward ? k : n - 1 - k;
        const bool a = improve_vertex(i, true);
        const bool b = improve_vertex(i, false);
        if (a || b)
          step_[i] *= 1.8;
        else
          step_[i] *= 0.5;
        step_[i] = std::clamp(step_[i], 1e-15, 1e6);
        any = any || a || b;
      }
      for (std::size_t i = 1; i + 2 < n; ++i) {
        if (!crosses_Y(i)) continue;
        const bool c = improve_pair(i);
        if (c)
          pair_step_[i] *= 1.8;
        else
          pair_step_[i] *= 0.5;
        pair_step_[i] = std::clamp(pair_step_[i], 1e-15, 1e6);
        any = any || c;
      }
      recompute_total();  // kill accumulation drift
      if (!any) break;
      if (std::isfinite(before) && std::isfinite(total_)) {
        const double gain = (before - total_) / std::max(total_, 1e-300);
        if (gain < sweep_tol) break;
      }
    }
  }

  Alpha alpha_;
  DistanceOptions opts_;
  std::vector<Point> v_;
  std::vector<double> seg_;
  std::vector<double> step_;
  std::vector<double> pair_step_;
  Point p0_{}, p1_{};
  double amp_step_ = 0.15;
  double total_ = kInf;
  long evals_ = 0;
};

double smooth_ramp(double t) { return t - std::sin(2.0 * kPi * t) / (2.0 * kPi); }

// Straight interpolation with horizontal stubs at endpoints on the singular
// line. Only valid as a start when p and q are not strictly on opposite
// sides (a transversal crossing has infinite length for alpha >= 1).
std::vector<Point> straight_template(Point p, Point q, int n) {
  std::vector<Point> v(n);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    v[i] = {p.x1 + t * (q.x1 - p.x1), p.x2 + t * (q.x2 - p.x2)};
  }
  if (p.x1 == 0.0) v[1].x2 = p.x2;
  if (q.x1 == 0.0) v[n - 2].x2 = q.x2;
  return v;
}

// Arc pushed to one side of the singular line. Both endpoints on the closed
// halfplane of that side.
std::vector<Point> bulge_template(Point p, Point q, int n, double side,
                                  Alpha alpha) {
  const double a = alpha.value();
  const double dy = std::fabs(q.x2 - p.x2);
  const double base = std::max(std::fabs(p.x1), std::fabs(q.x1));
  const double snow =
      0.5 * std::pow((1.0 + a) * std::max(dy, 1e-12), 1.0 / (1.0 + a));
  const double w = side * std::max({base, snow, 0.25 * euclidean_distance(p, q)});
  std::vector<Point> v(n);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    v[i] = {p.x1 + t * (q.x1 - p.x1) + w * std::sin(kPi * t),
            p.x2 + smooth_ramp(t) * (q.x2 - p.x2)};
  }
  // leave the singular line horizontally: otherwise the first segment has
  // infinite length for alpha >= 1
  if (p.x1 == 0.0) v[1].x2 = p.x2;
  if (q.x1 == 0.0) v[n - 2].x2 = q.x2;
  for (int i = 1; i + 1 < n; ++i)
    if (v[i].x1 == 0.0) v[i].x1 = 1e-3 * w;
  return v;
}

// Start for endpoints on strictly opposite sides: straight run to the
// singular line at crossing height yc, a horizontal jog across, straight run
// onward. The jog height is the extra degree of freedom the paired descent
// move later optimizes.
std::vector<Point> cross_template(Point p, Point q, int n, double yc) {
  const double h = 0.05 * std::max(euclidean_distance(p, q), 1e-6);
  const Point c1{std::copysign(h, p.x1), yc};
  const Point c2{std::copysign(h, q.x1), yc};
  const double l1 = euclidean_distance(p, c1);
  const double l2 = euclidean_distance(c2, q);
  const int interior = n - 2;
  int n1 = std::max(1, static_cast<int>(std::lround(
                           interior * l1 / std::max(l1 + l2, 1e-12))));
  n1 = std::min(n1, interior - 1);
  const int n2 = interior - n1;
  std::vector<Point> v;
  v.reserve(n);
  v.push_back(p);
  for (int i = 1; i <= n1; ++i) {
    const double t = static_cast<double>(i) / n1;
    v.push_back({p.x1 + t * (c1.x1 - p.x1), p.x2 + t * (c1.x2 - p.x2)});
  }
  for (int i = 0; i < n2; ++i) {
    const double t = static_cast<double>(i) / n2;
    v.push_back({c2.x1 + t * (q.x1 - c2.x1), c2.x2 + t * (q.x2 - c2.x2)});
  }
  v.push_back(q);
  return v;
}

Polyline to_polyline(const std::vector<Point>& verts) {
  std::vector<Point> clean;
  clean.reserve(verts.size());
  for (const Point& p : verts)
    if (clean.empty() || p.x1 != clean.back().x1 || p.x2 != clean.back().x2)
      clean.push_back(p);
  if (clean.size() < 2) clean.push_back({clean.front().x1 + 1e-15, clean.front().x2});
  return Polyline::through(std::move(clean));
}

// For endpoints on strictly opposite sides the geodesic touches the singular
// line at exactly one point (0, y*): locate y* by coarse scan plus
// golden-section over the sum of the two one-sided solves, then return the
// concatenated path as a descent start.
std::vector<Point> composite_cross_start(Point p, Point q, Alpha alpha,
                                         const DistanceOptions& opts,
                                         long* evals) {
  DistanceOptions sub;
  sub.rel_tol = std::max(opts.rel_tol, 5e-3);
  sub.min_vertices = 9;
  sub.max_vertices = 17;
  sub.max_sweeps = 30;
  sub.multistart = true;
  sub.parallel_starts = false;

  auto piece_sum = [&](double y) {
    const Point m{0.0, y};
    const DistanceResult r1 = grushin_distance(p, m, alpha, sub);
    const DistanceResult r2 = grushin_distance(m, q, alpha, sub);
    *evals += r1.evaluations + r2.evaluations;
    return r1.value + r2.value;
  };

  const double y_lo_pts = std::min(p.x2, q.x2);
  const double y_hi_pts = std::max(p.x2, q.x2);
  const double pad = 0.5 * (y_hi_pts - y_lo_pts) + 0.5 * euclidean_distance(p, q);
  double lo = y_lo_pts - pad, hi = y_hi_pts + pad;

  const int kScan = 7;
  double best_y = lo, best_v = kInf;
  for (int i = 0; i < kScan; ++i) {
    const double y = lo + (hi - lo) * i / (kScan - 1);
    const double v = piece_sum(y);
    if (v < best_v) {
      best_v = v;
      best_y = y;
    }
  }
  const double h = (hi - lo) / (kScan - 1);
  lo = best_y - h;
  hi = best_y + h;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = piece_sum(c), fd = piece_sum(d);
  for (int it = 0; it < 12 && (hi - lo) > 3e-3 * (std::fabs(best_y) + 1.0);
       ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = piece_sum(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = piece_sum(d);
    }
  }
  const double y_star = fc < fd ? c : d;

  DistanceOptions fin = sub;
  fin.rel_tol = std::max(opts.rel_tol, 1e-3);
  fin.max_vertices = std::max(17, opts.max_vertices / 8);
  fin.max_sweeps = opts.max_sweeps;
  const Point m{0.0, y_star};
  const DistanceResult r1 = grushin_distance(p, m, alpha, fin);
  const DistanceResult r2 = grushin_distance(m, q, alpha, fin);
  *evals += r1.evaluations + r2.evaluations;
  std::vector<Point> joined;
  if (r1.path.size() >= 2 && r2.path.size() >= 2) {
    joined = r1.path.vertices;
    joined.insert(joined.end(), r2.path.vertices.begin() + 1,
                  r2.path.vertices.end());
  }
  return joined;
}

}  // namespace

DistanceResult grushin_distance(Point p, Point q, Alpha alpha,
                                const DistanceOptions& opts) {
  if (!finite(p) || !finite(q)) throw std::invalid_argument("points must be finite");
  DistanceResult result;
  if (p.x1 == q.x1 && p.x2 == q.x2) {
    result.value = 0.0;
    result.converged = true;
    return result;
  }

  const int n0 = std::max(3, std::min(opts.min_vertices, opts.max_vertices));
  std::vector<std::vector<Point>> starts;
  if (opts.warm_start) {
    const Polyline& w = *opts.warm_start;
    if (w.size() >= 2 && w.vertices.front().x1 == p.x1 &&
        w.vertices.front().x2 == p.x2 && w.vertices.back().x1 == q.x1 &&
        w.vertices.back().x2 == q.x2)
      starts.push_back(w.vertices);
  }
  const bool opposite = (p.x1 < 0.0 && q.x1 > 0.0) || (p.x1 > 0.0 && q.x1 < 0.0);
  long pre_evals = 0;
  if (opposite) {
    const double tc = -p.x1 / (q.x1 - p.x1);
    const double y_straight = p.x2 + tc * (q.x2 - p.x2);
    starts.push_back(cross_template(p, q, n0, y_straight));
    if (opts.multistart) {
      std::vector<Point> comp = composite_cross_start(p, q, alpha, opts, &pre_evals);
      if (comp.size() >= 3) starts.push_back(std::move(comp));
    }
  } else {
    starts.push_back(straight_template(p, q, n0));
    if (opts.multistart) {
      const bool both_on_Y = p.x1 == 0.0 && q.x1 == 0.0;
      const double side = (p.x1 + q.x1) > 0.0 ? 1.0
                          : (p.x1 + q.x1) < 0.0 ? -1.0
                                                : 1.0;
      starts.push_back(bulge_template(p, q, n0, side, alpha));
      if (both_on_Y) starts.push_back(bulge_template(p, q, n0, -side, alpha));
    }
  }

  auto run_one = [&](const std::vector<Point>& init) {
    PathOptimizer opt(alpha, opts);
    return opt.run(init);
  };

  std::vector<PathOptimizer::StartResult> outs(starts.size());
  if (opts.parallel_starts && starts.size() > 1) {
    std::vector<std::future<PathOptimizer::StartResult>> futs;
    futs.reserve(starts.size());
    for (const auto& s : starts)
      futs.push_back(std::async(std::launch::async, run_one, s));
    for (std::size_t i = 0; i < futs.size(); ++i) outs[i] = futs[i].get();
  } else {
    for (std::size_t i = 0; i < starts.size(); ++i) outs[i] = run_one(starts[i]);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < outs.size(); ++i)
    if (outs[i].value < outs[best].value) best = i;

  result.value = outs[best].value;
  result.converged = outs[best].refined_out && std::isfinite(result.value);
  result.refinement_history = outs[best].history;
  result.evaluations = pre_evals;
  for (const auto& o : outs) result.evaluations += o.evals;
  if (!outs[best].vertices.empty()) result.path = to_polyline(outs[best].vertices);
  return result;
}

namespace {

struct YConstantCache {
  std::mutex mu;
  std::map<double, std::pair<double, Polyline>> entries;
};

YConstantCache& y_cache() {
  static YConstantCache cache;
  return cache;
}

const std::pair<double, Polyline>& y_constant_entry(Alpha alpha) {
  YConstantCache& cache = y_cache();
  std::scoped_lock lock(cache.mu);
  auto it = cache.entries.find(alpha.value());
  if (it != cache.entries.end()) return it->second;
  DistanceOptions opts;
  opts.rel_tol = 2e-4;
  opts.min_vertices = 17;
  opts.max_vertices = 257;
  opts.max_sweeps = 400;
  const DistanceResult r = grushin_distance({0, 0}, {0, 1}, alpha, opts);
  auto [pos, inserted] =
      cache.entries.emplace(alpha.value(), std::make_pair(r.value, r.path));
  (void)inserted;
  return pos->second;
}

}  // namespace

double snowflake_constant(Alpha alpha) { return y_constant_entry(alpha).first; }

const Polyline& unit_Y_geodesic(Alpha alpha) {
  return y_constant_entry(alpha).second;
}

GrushinBallSample grushin_sphere_sample(Point center, double r, int n,
                                        Alpha alpha,
                                        const SphereOptions& opts) {
  if (n < 8) throw std::invalid_argument("sphere sample needs n >= 8");
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  GrushinBallSample out;
  out.center = center;
  out.radius = r;
  out.boundary_points.resize(n);
  out.ray_ok.assign(n, false);
  out.achieved.assign(n, 0.0);

  const double a = alpha.value();
  for (int k = 0; k < n; ++k) {
    const double theta = 2.0 * kPi * k / n;
    Point dir{std::cos(theta), std::sin(theta)};
    // snap axis directions exactly so points meant to sit on the singular
    // line land on it
    if (std::fabs(dir.x1) < 1e-12) dir = {0.0, dir.x2 > 0 ? 1.0 : -1.0};
    if (std::fabs(dir.x2) < 1e-12) dir = {dir.x1 > 0 ? 1.0 : -1.0, 0.0};

    // initial scale along the ray from the local frame (off Y) or from the
    // snowflake law (on Y)
    double s0 = r;
    if (center.x1 != 0.0) {
      const double sp = grushin_speed(center, dir, alpha);
      if (std::isfinite(sp) && sp > 0.0) s0 = r / sp;
    } else if (std::fabs(dir.x1) < 1e-12) {
      s0 = std::pow(r / snowflake_constant(alpha), 1.0 + a);
    }

    DistanceOptions dopts = opts.solver;
    std::optional<Polyline> warm;
    auto eval = [&](double s) {
      const Point q{center.x1 + s * dir.x1, center.x2 + s * dir.x2};
      dopts.warm_start = warm;
      const DistanceResult res = grushin_distance(center, q, alpha, dopts);
      if (res.converged && res.path.size() >= 2) warm = res.path;
      return std::make_pair(res.value, q);
    };

    double lo = 0.0, hi = s0;
    auto [d_hi, q_hi] = eval(hi);
    int guard = 0;
    while (d_hi < r && guard++ < 60) {
      lo = hi;
      hi *= 2.0;
      std::tie(d_hi, q_hi) = eval(hi);
    }
    if (d_hi < r) {
      out.boundary_points[k] = q_hi;
      out.achieved[k] = d_hi;
      ++out.failures;
      continue;
    }

    Point best_q = q_hi;
    double best_d = d_hi;
    for (int it = 0; it < opts.max_bisect; ++it) {
      if (std::fabs(best_d - r) <= opts.rel_tol * r) break;
      const double mid = 0.5 * (lo + hi);
      auto [d_mid, q_mid] = eval(mid);
      if (std::fabs(d_mid - r) < std::fabs(best_d - r)) {
        best_d = d_mid;
        best_q = q_mid;
      }
      if (d_mid < r)
        lo = mid;
      else
        hi = mid;
    }
    out.boundary_points[k] = best_q;
    out.achieved[k] = best_d;
    out.ray_ok[k] = std::fabs(best_d - r) <= opts.rel_tol * r;
    if (!out.ray_ok[k]) ++out.failures;
  }
  return out;
}

}  // namespace grushin
