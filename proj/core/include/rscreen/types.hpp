#pragma once

#include <Eigen/Core>

namespace rscreen {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

// Slow amplitudes (A1C, A1S, A2C, A2S). A1C and A2C multiply the sine
// columns of the generating basis, A1S and A2S the cosine columns.
using Amplitudes = Vec4;

// Generating-system coordinates (x1, x2, y1, y2), with y the momenta.
using PhaseVector = Vec4;

}  // namespace rscreen
