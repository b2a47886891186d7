#pragma once

#include <array>
#include <string_view>

namespace mmwcov {

enum class LinkState { kLos, kNlos };

inline constexpr std::array<LinkState, 2> kLinkStates{LinkState::kLos, LinkState::kNlos};

constexpr LinkState opposite(LinkState s) noexcept {
  return s == LinkState::kLos ? LinkState::kNlos : LinkState::kLos;
}

constexpr std::string_view suffix(LinkState s) noexcept {
  return s == LinkState::kLos ? "L" : "N";
}

constexpr int index_of(LinkState s) noexcept { return s == LinkState::kLos ? 0 : 1; }

}  // namespace mmwcov
