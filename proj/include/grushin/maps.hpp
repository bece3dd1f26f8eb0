#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "grushin/geometry.hpp"

namespace grushin {

/// f(x,y) = (s lambda x, s lambda^{1+alpha} y + a), s in {+1,-1}: the
/// conformal self-maps of the plane (dilation, vertical translation,
/// half-turn), signs paired.
struct GrushinConformal {
  double lambda = 1.0;
  double a = 0.0;
  int sign = +1;
};

struct EuclideanAffine {
  double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;
  double tx = 0.0, ty = 0.0;
};

/// Symbolic planar homeomorphism: the canonical map, its inverse, the
/// conformal family, affine maps, and finite compositions (applied
/// right-to-left).
class MapSpec {
 public:
  struct CanonicalPhi {};
  struct CanonicalPhiInverse {};

  static MapSpec identity(Alpha alpha);
  static MapSpec phi(Alpha alpha);
  static MapSpec phi_inverse(Alpha alpha);
  static MapSpec conformal(GrushinConformal f, Alpha alpha);
  static MapSpec affine(EuclideanAffine f, Alpha alpha);
  static MapSpec compose(std::vector<MapSpec> factors);  // right-to-left

  Point operator()(Point p) const;
  Alpha alpha() const { return alpha_; }

  bool is_conformal_family() const;
  const GrushinConformal* as_conformal() const;

  /// Closure of the conformal family under composition: when every factor is
  /// grushin-conformal, the whole composition collapses to one member.
  std::optional<GrushinConformal> simplified_conformal() const;

  std::string text() const;

  /// Parse the compact text form, e.g.
  ///   "phi . gconf(l=2,a=0,s=++) . phi_inv"
  ///   "affine(2,0,0,1,0,0)", "id"
  static MapSpec parse(const std::string& text, Alpha alpha);

 private:
  using Node = std::variant<CanonicalPhi, CanonicalPhiInverse, GrushinConformal,
                            EuclideanAffine, std::vector<MapSpec>>;
  MapSpec(Node node, Alpha alpha) : node_(std::move(node)), alpha_(alpha) {}
  Node node_;
  Alpha alpha_;
};

Point eval_map(const MapSpec& m, Point p);

}  // namespace grushin
