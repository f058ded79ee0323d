#ifndef KPA_CANONICAL_TAGS_HPP
#define KPA_CANONICAL_TAGS_HPP

#include <span>
#include <string>
#include <string_view>

namespace kpa::canonical {

/// Frozen mapping from internal relation keys to report tags. Every tag the
/// tool prints comes from this table.
struct TagInfo {
  std::string_view key;
  std::string_view tag;
  std::string_view claim;
};

std::span<const TagInfo> tag_table();

/// Report tag for a key; throws on unknown keys.
std::string tag(std::string_view key);

/// Claim text of the first entry carrying a report tag; empty if none.
std::string claim_for_tag(std::string_view tag);

}  // namespace kpa::canonical

#endif  // KPA_CANONICAL_TAGS_HPP
