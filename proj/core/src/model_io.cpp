#include "boxlat/model_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "boxlat/error.hpp"
#include "boxlat/tsv.hpp"

namespace boxlat {

std::string serialize_model(const Model& model) {
  const ProductMeasure& m = model.measure();
  if (m.kind() == MeasureKind::custom) throw InvalidArgument("custom measures cannot be serialized");
  std::string out = "boxlat-model\tversion=" + std::to_string(kModelFormatVersion) +
                    "\tdimension=" + std::to_string(model.dimension()) + "\tmeasure=" + std::string(to_token(m.kind()));
  if (m.kind() == MeasureKind::exponential) out += "\tmax_coordinate=" + tsv::format(m.upper(0), 17);
  out += std::string("\tpoe=") + (model.poe() ? "true" : "false");
  out += "\tconcepts=" + std::to_string(model.size()) + "\n";
  for (std::size_t c = 0; c < model.size(); ++c) {
    const Box& b = model.box(c);
    out += model.vocabulary().id(c);
    for (double v : b.mins()) out += "\t" + tsv::format(v, 17);
    for (double v : b.deltas()) out += "\t" + tsv::format(v, 17);
    out += "\n";
  }
  return out;
}

Model parse_model(std::string_view text, std::string_view source) {
  const auto rows = tsv::read_text(text);
  const std::string where(source);
  if (rows.empty() || rows.front().fields.front() != "boxlat-model") {
    throw DataError(where + ": missing boxlat-model header");
  }
  std::map<std::string, std::string> header;
  for (std::size_t k = 1; k < rows.front().fields.size(); ++k) {
    const std::string& field = rows.front().fields[k];
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw DataError(where + ":1: malformed header field '" + field + "'");
    header[field.substr(0, eq)] = field.substr(eq + 1);
  }
  auto require = [&](const std::string& key) -> const std::string& {
    auto it = header.find(key);
    if (it == header.end()) throw DataError(where + ":1: header lacks '" + key + "'");
    return it->second;
  };
  const std::size_t line1 = rows.front().line;
  if (tsv::parse_size(require("version"), where, line1) != static_cast<std::size_t>(kModelFormatVersion)) {
    throw DataError(where + ":1: unsupported model format version " + require("version"));
  }
  const std::size_t dim = tsv::parse_size(require("dimension"), where, line1);
  const MeasureKind kind = parse_measure_token(require("measure"));
  const std::string& poe_token = require("poe");
  if (poe_token != "true" && poe_token != "false") throw DataError(where + ":1: poe must be true or false");
  const std::size_t count = tsv::parse_size(require("concepts"), where, line1);
  if (dim == 0) throw DataError(where + ":1: dimension must be positive");

  ProductMeasure measure = kind == MeasureKind::uniform
                               ? ProductMeasure::uniform(dim)
                               : ProductMeasure::exponential(
                                     dim, header.contains("max_coordinate")
                                              ? tsv::parse_double(header["max_coordinate"], where, line1)
                                              : kDefaultExponentialMax);

  if (rows.size() - 1 != count) {
    throw DataError(where + ": header declares " + std::to_string(count) + " concepts, found " +
                    std::to_string(rows.size() - 1));
  }
  Vocabulary vocab;
  std::vector<Box> boxes;
  boxes.reserve(count);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != 1 + 2 * dim) {
      throw DataError(where + ":" + std::to_string(row.line) + ": expected " + std::to_string(1 + 2 * dim) +
                      " fields, found " + std::to_string(row.fields.size()));
    }
    if (vocab.find(row.fields[0])) {
      throw DataError(where + ":" + std::to_string(row.line) + ": duplicate concept '" + row.fields[0] + "'");
    }
    vocab.add(row.fields[0]);
    std::vector<double> mins(dim);
    std::vector<double> deltas(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      mins[i] = tsv::parse_double(row.fields[1 + i], where, row.line);
      deltas[i] = tsv::parse_double(row.fields[1 + dim + i], where, row.line);
    }
    try {
      boxes.emplace_back(std::move(mins), std::move(deltas));
    } catch (const InvalidArgument& e) {
      throw DataError(where + ":" + std::to_string(row.line) + ": " + e.what());
    }
  }
  try {
    return Model(std::move(vocab), std::move(boxes), std::move(measure), poe_token == "true");
  } catch (const InvalidArgument& e) {
    throw DataError(where + ": " + e.what());
  }
}

void save_model(const Model& model, const std::filesystem::path& path) {
  tsv::write_file(path, serialize_model(model));
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str(), path.string());
}

}  // namespace boxlat
