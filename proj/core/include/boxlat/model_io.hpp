#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "boxlat/model.hpp"

namespace boxlat {

inline constexpr int kModelFormatVersion = 1;

// Model checkpoint text format:
//
//   boxlat-model<TAB>version=1<TAB>dimension=N<TAB>measure=uniform|exponential
//               [<TAB>max_coordinate=X]<TAB>poe=true|false<TAB>concepts=K
//   <id><TAB>min_1 ... min_N<TAB>delta_1 ... delta_N     (one line per concept)
//
// All reals use 17 significant digits, so load(save(m)) reproduces every
// coordinate bit-exactly and save(load(save(m))) is byte-identical.
std::string serialize_model(const Model& model);
Model parse_model(std::string_view text, std::string_view source = "<model>");

void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace boxlat
