#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace boxlat {

// Bidirectional concept-id <-> dense index map. Indices follow insertion order.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> ids);

  // Returns the index of `id`, inserting it if absent.
  std::size_t add(std::string_view id);

  std::optional<std::size_t> find(std::string_view id) const;

  // Throws DataError naming the concept when it is unknown.
  std::size_t index_of(std::string_view id) const;

  const std::string& id(std::size_t index) const { return ids_.at(index); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }

  bool operator==(const Vocabulary& other) const { return ids_ == other.ids_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace boxlat
