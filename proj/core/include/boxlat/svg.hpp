#pragma once

#include <string>

#include "boxlat/model.hpp"

namespace boxlat {

// SVG drawing of a 2-D model: the support as a frame, one labelled rectangle
// per concept with opacity proportional to its marginal. Throws
// InvalidArgument unless the model is 2-D with a bounded support.
std::string render_svg(const Model& model, int size_px = 480);

}  // namespace boxlat
