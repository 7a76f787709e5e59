#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace seal {

template <class Tag>
struct Id {
  std::uint64_t value = 0;

  constexpr Id() = default;
  constexpr explicit Id(std::uint64_t v) : value(v) {}
  constexpr auto operator<=>(const Id&) const = default;
};

using CitizenId = Id<struct CitizenTag>;
using FamilyId = Id<struct FamilyTag>;
using HouseId = Id<struct HouseTag>;
using FirmId = Id<struct FirmTag>;

// Municipality codes come from input data, so regions are keyed by text.
using RegionId = std::string;
using ClusterId = std::string;

}  // namespace seal

template <class Tag>
struct std::hash<seal::Id<Tag>> {
  std::size_t operator()(const seal::Id<Tag>& id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};
