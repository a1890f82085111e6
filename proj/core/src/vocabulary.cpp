#include "boxlat/vocabulary.hpp"

#include "boxlat/error.hpp"

namespace boxlat {

Vocabulary::Vocabulary(std::vector<std::string> ids) {
  ids_.reserve(ids.size());
  for (auto& id : ids) {
    if (index_.contains(id)) throw DataError("duplicate concept id '" + id + "'");
    index_.emplace(id, ids_.size());
    ids_.push_back(std::move(id));
  }
}

std::size_t Vocabulary::add(std::string_view id) {
  std::string key(id);
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  const std::size_t next = ids_.size();
  index_.emplace(key, next);
  ids_.push_back(std::move(key));
  return next;
}

std::optional<std::size_t> Vocabulary::find(std::string_view id) const {
  if (auto it = index_.find(std::string(id)); it != index_.end()) return it->second;
  return std::nullopt;
}

std::size_t Vocabulary::index_of(std::string_view id) const {
  if (auto found = find(id)) return *found;
  throw DataError("unknown concept '" + std::string(id) + "'");
}

}  // namespace boxlat
