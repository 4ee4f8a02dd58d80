#pragma once

#include <initializer_list>
#include <memory>
#include <vector>

#include "nframe/frames.hpp"
#include "nframe/nspace.hpp"

namespace fixtures {

using namespace nframe;

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline std::vector<AmbientVector> vecs(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<AmbientVector> out;
  for (auto r : rows) out.push_back(vec(r));
  return out;
}

inline std::shared_ptr<const InducedSpace> space(std::initializer_list<std::initializer_list<double>> anchors) {
  return std::make_shared<const InducedSpace>(build_induced_space(AnchorSet(vecs(anchors))));
}

// {e1, e2, (1,1,0)} with anchor e3: frame operator [[2,1],[1,2]], bounds (1, 3).
inline FrameSystem basic() { return FrameSystem(space({{0, 0, 1}}), vecs({{1, 0, 0}, {0, 1, 0}, {1, 1, 0}})); }

inline FrameSystem orthonormal() { return FrameSystem(space({{0, 0, 1}}), vecs({{1, 0, 0}, {0, 1, 0}})); }

// Orthonormal pair with anchor (0,0,2), gamma = 4.
inline FrameSystem scaled_anchor() { return FrameSystem(space({{0, 0, 2}}), vecs({{1, 0, 0}, {0, 1, 0}})); }

inline FrameSystem single() { return FrameSystem(space({{0, 0, 1}}), vecs({{1, 0, 0}})); }

inline FrameSystem in_span() { return FrameSystem(space({{0, 0, 1}}), vecs({{0, 0, 1}})); }

}  // namespace fixtures
