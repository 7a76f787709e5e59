#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "seal/geo.hpp"
#include "seal/ids.hpp"

namespace seal {

inline constexpr int kDaysPerMonth = 21;
inline constexpr int kMinWorkingAge = 16;
inline constexpr int kMaxWorkingAge = 69;

enum class Gender : std::uint8_t { male, female };

struct Citizen {
  CitizenId id;
  Gender gender = Gender::male;
  int month_of_birth = 1;  // 1..12
  int age = 0;
  double qualification = 1.0;
  double money = 0.0;
  double savings = 0.0;
  std::optional<FirmId> firm_id;
  double utility = 0.0;
  Point address;
  std::optional<double> distance;  // home to workplace, set iff employed
  RegionId region_id;
  FamilyId family_id;

  bool employed() const { return firm_id.has_value(); }
  bool in_workforce() const { return age >= kMinWorkingAge && age <= kMaxWorkingAge; }

  bool operator==(const Citizen&) const = default;
};

struct Family {
  FamilyId id;
  std::set<CitizenId> members;
  double balance = 0.0;
  // House-transaction account. Member savings live on the citizens; see total_savings().
  double savings = 0.0;
  std::optional<HouseId> household_id;
  std::set<HouseId> owned_houses;
  Point address;
  RegionId region_id;

  bool operator==(const Family&) const = default;
};

struct Household {
  HouseId id;
  Point address;
  double size = 0.0;
  int quality = 1;  // 1..4
  RegionId region_id;
  double price = 0.0;
  std::optional<FamilyId> occupant;
  FamilyId owner;

  bool occupied() const { return occupant.has_value(); }
  bool operator==(const Household&) const = default;
};

struct Product {
  int product_id = 0;
  double price = 1.0;
  double quantity = 0.0;

  bool operator==(const Product&) const = default;
};

struct Firm {
  FirmId id;
  Point address;
  RegionId region_id;
  double total_balance = 0.0;
  double last_qtr_balance = 0.0;
  double profit = 1.0;
  std::set<CitizenId> employees;
  // Homogeneous single product; product_index counts products ever created.
  std::optional<Product> product;
  int product_index = 0;
  double amount_sold = 0.0;
  double amount_produced = 0.0;

  bool operator==(const Firm&) const = default;
};

struct Region {
  RegionId id;
  std::string name;
  RegionBoundary boundary;
  double index = 1.0;  // quality of life index, seeded from HDI
  double treasure = 0.0;
  std::size_t pop = 0;
  double total_commute = 0.0;
  double region_gdp = 0.0;
  ClusterId fiscal_cluster;
  std::optional<std::string> acp_id;
  double urban_share = 0.0;

  bool operator==(const Region&) const = default;
};

// The unit that collects consumption tax and converts it into quality of life:
// a single municipality, or every municipality of a merged concentration area.
struct FiscalCluster {
  ClusterId id;
  std::vector<RegionId> members;
  double index = 1.0;
  double treasure = 0.0;
  std::size_t pop_prev = 0;

  bool operator==(const FiscalCluster&) const = default;
};

// Creates the firm's product. A firm gets exactly one, before the first day.
void create_product(Firm& firm);

double production_quantity(std::span<const double> qualifications, double alpha);

// Daily production. No-op unless the firm has employees, positive cash and a product.
// Returns the quantity added.
double produce(Firm& firm, std::span<const double> qualifications, double alpha);

// Monthly markup rule on inventory against the threshold. Throws InputError unless 0 < markup < 1.
void update_prices(Firm& firm, double threshold, double markup);

double wage_base(const Firm& firm);

struct Payroll {
  std::vector<double> salaries;  // parallel to the qualifications passed in
  double bill = 0.0;             // what full salaries would have cost
  double paid = 0.0;
};

// Computes salaries wage_base * 21 * q^alpha and debits them from the firm.
// When the bill exceeds cash every salary is scaled by balance / bill.
Payroll pay_salaries(Firm& firm, std::span<const double> qualifications, double alpha);

// Pools family balance and member money, then splits equally among members.
void pool_and_split(Family& family, std::span<const std::reference_wrapper<Citizen>> members);

void reprice_house(Household& house, double region_index);

// Converts the treasury into quality of life, diluted by population change.
// With n_now == 0 the index is frozen and the treasury carried over.
// Returns the amount spent.
double fiscal_spend(FiscalCluster& cluster, double treasure_into_services, std::size_t n_prev,
                    std::size_t n_now);

void quarterly_rebase(Firm& firm);

}  // namespace seal
