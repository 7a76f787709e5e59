#include "doctest.h"
#include "seal/errors.hpp"
#include "seal/markets.hpp"
#include "support.hpp"

using namespace seal;

TEST_CASE("decide_spending bounds and mean") {
  Rng rng(1);
  CHECK_FALSE(decide_spending(0.0, 0.8, rng).has_value());
  CHECK_FALSE(decide_spending(-1.0, 0.8, rng).has_value());
  for (int i = 0; i < 1000; ++i) {
    const double s = *decide_spending(0.5, 0.8, rng);
    CHECK(s >= 0.0);
    CHECK(s <= 0.5);
  }
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double s = *decide_spending(100.0, 0.8, rng);
    REQUIRE(s <= 100.0);
    sum += s;
  }
  CHECK(std::abs(sum / n - 80.0) < 0.8);
  double small = 0.0;
  for (int i = 0; i < 10000; ++i) small += *decide_spending(100.0, 0.01, rng);
  CHECK(small / 10000 < 2.0);
}

TEST_CASE("choose_firm: cheapest, closest and degenerate sample") {
  SimulationState s = test::empty_state();
  auto& f0 = test::add_firm(s, 0, {5, 0});
  auto& f1 = test::add_firm(s, 1, {1, 0});
  auto& f2 = test::add_firm(s, 2, {9, 0});
  f0.product->price = 2;
  f1.product->price = 1;
  f2.product->price = 3;
  const std::vector<const Firm*> firms{&f0, &f1, &f2};
  Rng rng(1);
  CHECK(choose_firm({0, 0}, firms, 10, rng, FirmChoice::cheapest) == FirmId{1});
  f1.product->price = 5;
  CHECK(choose_firm({0, 0}, firms, 10, rng, FirmChoice::cheapest) == FirmId{0});
  CHECK(choose_firm({0, 0}, firms, 10, rng, FirmChoice::closest) == FirmId{1});
  for (int i = 0; i < 50; ++i) {
    const std::vector<const Firm*> one{&f2};
    CHECK(choose_firm({0, 0}, one, 1, rng) == FirmId{2});
  }
  CHECK_FALSE(choose_firm({0, 0}, std::vector<const Firm*>{}, 3, rng).has_value());
  // Equal prices: lowest id wins.
  f0.product->price = f1.product->price = f2.product->price = 1;
  CHECK(choose_firm({0, 0}, firms, 10, rng, FirmChoice::cheapest) == FirmId{0});
}

TEST_CASE("sale: ample stock, rationing and tax split") {
  FiscalCluster t;
  Firm f;
  create_product(f);
  f.product->quantity = 100;
  SaleReceipt r = sale(f, 10, 0.0, t);
  CHECK(r.quantity == 10.0);
  CHECK(r.change == 0.0);
  CHECK(f.total_balance == 10.0);

  Firm g;
  create_product(g);
  g.product->price = 2;
  g.product->quantity = 3;
  r = sale(g, 10, 0.0, t);
  CHECK(r.quantity == 3.0);
  CHECK(r.gross == 6.0);
  CHECK(r.change == 4.0);
  CHECK(g.product->quantity == 0.0);

  Firm h;
  create_product(h);
  h.product->price = 2;
  h.product->quantity = 3;
  FiscalCluster treasury;
  r = sale(h, 10, 0.2, treasury);
  CHECK(r.gross == 6.0);
  CHECK(h.total_balance == doctest::Approx(4.8).epsilon(1e-15));
  CHECK(treasury.treasure == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(h.amount_sold == 6.0);
  CHECK(r.gross == 10 - r.change);
  CHECK(r.quantity == r.gross / h.product->price);

  CHECK_THROWS_AS(sale(h, 10, 1.0, treasury), InputError);
  CHECK_THROWS_AS(sale(h, 0, 0.1, treasury), InputError);
}

TEST_CASE("consume_step: leftover money moves to savings") {
  SimulationState s = test::empty_state();
  test::add_family(s, 0);
  auto& c = test::add_citizen(s, 0, 0);
  c.money = 3.0;
  auto& f = test::add_firm(s, 0);
  f.product->quantity = 0.0;  // nothing to buy: the whole spend comes back as change
  Params p;
  Rng rng(1);
  const ConsumptionTotals t = consume_step(s, FamilyId{0}, p, rng);
  CHECK(s.citizen(CitizenId{0}).money == 0.0);
  CHECK(s.citizen(CitizenId{0}).savings == 3.0);
  CHECK(t.spend == t.net_credit + t.tax + t.change);

  auto& idle = test::add_citizen(s, 1, 0);
  idle.money = 0.0;
  f.product->quantity = 1000;
  const double u0 = s.citizen(CitizenId{0}).utility;
  consume_step(s, FamilyId{0}, p, rng);
  CHECK(s.citizen(CitizenId{1}).utility == 0.0);
  CHECK(s.citizen(CitizenId{1}).savings == 0.0);
  CHECK(s.citizen(CitizenId{0}).utility >= u0);
}

TEST_CASE("consume_step conserves money and books taxes to the firm's cluster") {
  SimulationState s = test::empty_state({"R", "S"});
  test::add_family(s, 0);
  for (std::uint64_t i = 0; i < 5; ++i) test::add_citizen(s, i, 0).money = 50;
  test::add_firm(s, 0, {15, 5}, 100, "S").product->quantity = 1000;
  Params p;
  Rng rng(7);
  const double before = total_money(s);
  const ConsumptionTotals t = consume_step(s, FamilyId{0}, p, rng);
  CHECK(total_money(s) == doctest::Approx(before).epsilon(1e-12));
  CHECK(t.spend == doctest::Approx(t.net_credit + t.tax + t.change).epsilon(1e-12));
  CHECK(s.clusters.at("S").treasure == doctest::Approx(t.tax).epsilon(1e-12));
  CHECK(s.clusters.at("R").treasure == 0.0);
  CHECK(t.purchases == 5);
}

TEST_CASE("same-region scope only contacts local firms") {
  SimulationState s = test::empty_state({"R", "S"});
  test::add_family(s, 0);
  test::add_citizen(s, 0, 0).money = 50;
  test::add_firm(s, 0, {15, 5}, 100, "S").product->quantity = 1000;
  Params p;
  Rng rng(7);
  const ConsumptionTotals t = consume_step(s, FamilyId{0}, p, rng, FirmSearchScope::same_region);
  CHECK(t.purchases == 0);
  CHECK(s.firm(FirmId{0}).amount_sold == 0.0);
}

TEST_CASE("assign_post basics") {
  Rng rng(1);
  Posting one;
  one.hiring_firms.push_back({FirmId{0}, 1.0, {0, 0}});
  one.candidates.push_back({CitizenId{5}, 1.0, {3, 3}});
  one.sort();
  CHECK(assign_post(one, rng).size() == 1);

  Posting two;
  two.hiring_firms.push_back({FirmId{0}, 1.0, {0, 0}});
  two.hiring_firms.push_back({FirmId{1}, 1.5, {0, 0}});
  two.candidates.push_back({CitizenId{5}, 1.0, {3, 3}});
  two.sort();
  const auto m = assign_post(two, rng);
  REQUIRE(m.size() == 1);
  CHECK(m[0].first == FirmId{1});

  Posting near;
  near.hiring_firms.push_back({FirmId{0}, 1.0, {0, 0}});
  near.candidates.push_back({CitizenId{1}, 5.0, {9, 9}});
  near.candidates.push_back({CitizenId{2}, 1.0, {1, 1}});
  near.sort();
  Posting copy = near;
  CHECK(assign_post(near, rng, CandidateChoice::closest)[0].second == CitizenId{2});
  CHECK(assign_post(copy, rng, CandidateChoice::most_qualified)[0].second == CitizenId{1});
}

TEST_CASE("labor_step: no entry at LABOUR_MARKET=1; loss-making firm fires exactly one") {
  SimulationState s = test::empty_state();
  test::add_family(s, 0);
  for (std::uint64_t i = 0; i < 5; ++i) test::add_citizen(s, i, 0);
  test::add_firm(s, 0);
  Params p;
  p.labour_market = 1.0;
  Rng rng(1);
  for (int i = 0; i < 100; ++i) CHECK(labor_step(s, p, rng).entered.empty());

  auto& f = s.firm(FirmId{0});
  f.profit = -5;
  for (std::uint64_t i = 0; i < 3; ++i) test::employ(s, 0, i);
  p.labour_market = 0.0;
  const LaborReport r = labor_step(s, p, rng);
  CHECK(r.fires.size() == 1);
  CHECK(r.hires.empty());
  CHECK(s.firm(FirmId{0}).employees.size() == 2);
  CHECK_FALSE(s.citizen(r.fires[0].second).firm_id.has_value());
  CHECK_FALSE(s.citizen(r.fires[0].second).distance.has_value());
  check_consistency(s);
}

TEST_CASE("labor_step: eligibility 16..69") {
  SimulationState s = test::empty_state();
  test::add_family(s, 0);
  test::add_citizen(s, 0, 0, 15);
  test::add_citizen(s, 1, 0, 17);
  test::add_citizen(s, 2, 0, 70);
  test::add_citizen(s, 3, 0, 69);
  test::add_firm(s, 0);
  Params p;
  p.labour_market = 0.0;
  Rng rng(2);
  const LaborReport r = labor_step(s, p, rng);
  CHECK(r.candidates == 2);
  REQUIRE(r.hires.size() == 1);
  const CitizenId hired = r.hires[0].second;
  CHECK((hired == CitizenId{1} || hired == CitizenId{3}));
  CHECK(s.citizen(hired).distance.has_value());
}

TEST_CASE("firm entry frequency is 1 - LABOUR_MARKET") {
  SimulationState s = test::empty_state();
  for (std::uint64_t i = 0; i < 100; ++i) test::add_firm(s, i).profit = 0.0;
  Params p;
  Rng rng(99);
  std::size_t entered = 0;
  for (int m = 0; m < 100; ++m) entered += labor_step(s, p, rng).entered.size();
  CHECK(std::abs(static_cast<double>(entered) / 10000.0 - 0.25) < 0.02);
}

namespace {

// A family ready to buy: one member, savings as given, living in house 0 (owned).
SimulationState market_world(double buyer_savings, std::vector<double> sizes) {
  SimulationState s = test::empty_state();
  s.region("R").index = 1.0;
  s.clusters.at("R").index = 1.0;
  test::add_family(s, 0);
  test::add_family(s, 1);
  test::add_citizen(s, 0, 0).savings = buyer_savings;
  test::add_citizen(s, 1, 1);
  test::add_house(s, 0, 0, 1, 1);
  test::occupy(s, 0, 0);
  std::uint64_t id = 1;
  for (double size : sizes) test::add_house(s, id++, 1, size, 1);
  return s;
}

}  // namespace

TEST_CASE("real estate: buys the most expensive affordable house") {
  SimulationState s = market_world(100, {120, 90, 50});
  Params p;
  p.percentage_check_new_location = 1.0;
  Rng rng(1);
  const double before = total_money(s);
  const RealEstateReport r = real_estate_step(s, p, rng);
  REQUIRE(r.sales.size() == 1);
  CHECK(s.house(r.sales[0].house).price == 90.0);
  CHECK(r.sales[0].seller == FamilyId{1});
  CHECK(s.house(r.sales[0].house).owner == FamilyId{0});
  CHECK(family_total_savings(s, s.family(FamilyId{0})) == 10.0);
  CHECK(s.family(FamilyId{1}).savings == 90.0);
  CHECK(total_money(s) == before);
  check_consistency(s);
}

TEST_CASE("real estate: nothing affordable") {
  SimulationState s = market_world(10, {50});
  Params p;
  p.percentage_check_new_location = 1.0;
  Rng rng(1);
  CHECK(real_estate_step(s, p, rng).sales.empty());
}

TEST_CASE("real estate: every house carries the current price after the step") {
  SimulationState s = market_world(100, {120, 90, 50});
  s.region("R").index = 0.9;
  Params p;
  Rng rng(1);
  real_estate_step(s, p, rng);
  for (const auto& [id, h] : s.houses) CHECK(h.price == h.size * h.quality * 0.9);
}

TEST_CASE("move rule") {
  // Owns quality 4 (occupied) and 3, nobody employed: moves to the quality 3 house.
  SimulationState s = test::empty_state();
  test::add_family(s, 0);
  test::add_citizen(s, 0, 0);
  test::add_house(s, 0, 0, 50, 4);
  test::add_house(s, 1, 0, 50, 3, {8, 8});
  test::occupy(s, 0, 0);
  auto mv = apply_move_rule(s, FamilyId{0});
  REQUIRE(mv.has_value());
  CHECK(mv->to == HouseId{1});
  CHECK(s.citizen(CitizenId{0}).address == Point{8, 8});
  CHECK_FALSE(s.house(HouseId{0}).occupied());

  // Someone employed and not in the best house: moves to the best, distance updated.
  test::add_firm(s, 0, {0, 0});
  test::employ(s, 0, 0);
  mv = apply_move_rule(s, FamilyId{0});
  REQUIRE(mv.has_value());
  CHECK(mv->to == HouseId{0});
  CHECK(*s.citizen(CitizenId{0}).distance == distance({2, 2}, {0, 0}));
  // In the best house with a job: stays.
  CHECK_FALSE(apply_move_rule(s, FamilyId{0}).has_value());
  check_consistency(s);
}

TEST_CASE("empty families release their house") {
  SimulationState s = test::empty_state();
  test::add_family(s, 0);
  test::add_house(s, 0, 0, 50, 2);
  test::occupy(s, 0, 0);
  Params p;
  Rng rng(1);
  const RealEstateReport r = real_estate_step(s, p, rng);
  CHECK(r.released == std::vector<HouseId>{HouseId{0}});
  CHECK_FALSE(s.house(HouseId{0}).occupied());
  CHECK(r.houses_listed == 1);
}
