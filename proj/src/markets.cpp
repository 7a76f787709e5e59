#include "seal/markets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/core.h>

#include "seal/domain.hpp"
#include "seal/errors.hpp"
#include "seal/genesis.hpp"

namespace seal {

// ---- goods and services -------------------------------------------------------------

std::optional<double> decide_spending(double money, double beta, Rng& rng) {
  if (!(money > 0.0)) return std::nullopt;
  if (money < 1.0) return rng.uniform() * money;
  const double b = (1.0 - beta) / beta;
  return rng.beta_one(b) * money;
}

std::optional<FirmId> choose_firm(Point consumer, std::span<const Firm* const> firms, int size_market, Rng& rng,
                                  std::optional<FirmChoice> forced) {
  if (firms.empty()) return std::nullopt;
  std::vector<const Firm*> pool(firms.begin(), firms.end());
  const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(std::max(size_market, 1)), pool.size());
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + rng.index(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(m);
  const bool coin_cheapest = rng.bernoulli(0.5);
  const FirmChoice choice = forced.value_or(coin_cheapest ? FirmChoice::cheapest : FirmChoice::closest);

  auto key = [&](const Firm* f) {
    return choice == FirmChoice::cheapest ? (f->product ? f->product->price : 0.0) : distance(consumer, f->address);
  };
  const Firm* best = pool.front();
  for (const Firm* f : pool) {
    const double kf = key(f);
    const double kb = key(best);
    if (kf < kb || (kf == kb && f->id < best->id)) best = f;
  }
  return best->id;
}

SaleReceipt sale(Firm& firm, double spend, double tax_rate, FiscalCluster& treasury) {
  if (!(tax_rate >= 0.0 && tax_rate < 1.0)) throw InputError("TAX_CONSUMPTION must lie in [0, 1)");
  if (!(spend > 0.0)) throw InputError("sale requires a positive amount");
  SaleReceipt r;
  if (!firm.product) {
    r.change = spend;
    return r;
  }
  Product& p = *firm.product;
  const double demand = spend / p.price;
  if (p.quantity >= demand) {
    r.quantity = demand;
    r.gross = spend;
    r.change = 0.0;
    p.quantity -= demand;
  } else {
    r.quantity = p.quantity;
    r.gross = p.quantity * p.price;
    r.change = spend - r.gross;
    p.quantity = 0.0;
  }
  r.tax = r.gross * tax_rate;
  firm.total_balance += r.gross - r.tax;
  treasury.treasure += r.tax;
  firm.amount_sold += r.gross;
  return r;
}

ConsumptionTotals& ConsumptionTotals::operator+=(const ConsumptionTotals& o) {
  spend += o.spend;
  net_credit += o.net_credit;
  tax += o.tax;
  change += o.change;
  quantity += o.quantity;
  purchases += o.purchases;
  return *this;
}

ConsumptionTotals consume_step(SimulationState& state, FamilyId family_id, const Params& params, Rng& rng,
                               FirmSearchScope scope) {
  ConsumptionTotals totals;
  Family& family = state.family(family_id);
  std::vector<const Firm*> all_firms;
  all_firms.reserve(state.firms.size());
  for (const auto& [id, f] : state.firms) all_firms.push_back(&f);

  for (CitizenId mid : family.members) {
    Citizen& c = state.citizen(mid);
    const auto spend = decide_spending(c.money, params.beta, rng);
    if (!spend || !(*spend > 0.0)) continue;
    std::optional<FirmId> chosen;
    if (scope == FirmSearchScope::same_region) {
      std::vector<const Firm*> local;
      for (const Firm* f : all_firms) {
        if (f->region_id == c.region_id) local.push_back(f);
      }
      chosen = choose_firm(c.address, local, params.size_market, rng);
    } else {
      chosen = choose_firm(c.address, all_firms, params.size_market, rng);
    }
    if (!chosen) continue;
    Firm& firm = state.firm(*chosen);
    const SaleReceipt r = sale(firm, *spend, params.tax_consumption, state.cluster_of(firm.region_id));
    c.money -= *spend;
    c.money += r.change;
    c.utility += r.quantity * params.consumption_satisfaction;
    totals.spend += *spend;
    totals.net_credit += r.gross - r.tax;
    totals.tax += r.tax;
    totals.change += r.change;
    totals.quantity += r.quantity;
    ++totals.purchases;
  }
  for (CitizenId mid : family.members) {
    Citizen& c = state.citizen(mid);
    c.savings += c.money;
    c.money = 0.0;
  }
  return totals;
}

// ---- labor ------------------------------------------------------------------------

void Posting::sort() {
  std::sort(hiring_firms.begin(), hiring_firms.end(), [](const PostingFirm& a, const PostingFirm& b) {
    if (a.wage_base != b.wage_base) return a.wage_base > b.wage_base;
    return a.id < b.id;
  });
  std::sort(candidates.begin(), candidates.end(), [](const PostingCandidate& a, const PostingCandidate& b) {
    if (a.qualification != b.qualification) return a.qualification > b.qualification;
    return a.id < b.id;
  });
}

std::vector<std::pair<FirmId, CitizenId>> assign_post(Posting& posting, Rng& rng,
                                                      std::optional<CandidateChoice> forced) {
  std::vector<std::pair<FirmId, CitizenId>> matches;
  std::size_t next_firm = 0;
  while (next_firm < posting.hiring_firms.size() && !posting.candidates.empty()) {
    const PostingFirm& firm = posting.hiring_firms[next_firm++];
    const bool coin_closest = rng.bernoulli(0.5);
    const CandidateChoice choice =
        forced.value_or(coin_closest ? CandidateChoice::closest : CandidateChoice::most_qualified);
    std::size_t pick = 0;
    if (choice == CandidateChoice::closest) {
      double best = distance(firm.address, posting.candidates[0].address);
      for (std::size_t i = 1; i < posting.candidates.size(); ++i) {
        const double d = distance(firm.address, posting.candidates[i].address);
        if (d < best) {
          best = d;
          pick = i;
        }
      }
    }
    matches.emplace_back(firm.id, posting.candidates[pick].id);
    posting.candidates.erase(posting.candidates.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  posting.hiring_firms.erase(posting.hiring_firms.begin(),
                             posting.hiring_firms.begin() + static_cast<std::ptrdiff_t>(next_firm));
  return matches;
}

void hire(SimulationState& state, FirmId firm_id, CitizenId citizen_id) {
  Firm& firm = state.firm(firm_id);
  Citizen& c = state.citizen(citizen_id);
  if (c.firm_id) throw ConsistencyError(fmt::format("citizen {} already employed", citizen_id.value));
  firm.employees.insert(citizen_id);
  c.firm_id = firm_id;
  c.distance = distance(c.address, firm.address);
}

void fire(SimulationState& state, FirmId firm_id, CitizenId citizen_id) {
  Firm& firm = state.firm(firm_id);
  if (firm.employees.erase(citizen_id) != 1) {
    throw ConsistencyError(fmt::format("firm {} does not employ {}", firm_id.value, citizen_id.value));
  }
  Citizen& c = state.citizen(citizen_id);
  c.firm_id.reset();
  c.distance.reset();
}

LaborReport labor_step(SimulationState& state, const Params& params, Rng& rng, std::optional<CandidateChoice> forced) {
  LaborReport report;
  Posting posting;
  const double entry_prob = 1.0 - params.labour_market;
  for (auto& [id, firm] : state.firms) {
    if (!rng.bernoulli(entry_prob)) continue;
    report.entered.push_back(id);
    if (firm.profit > 0.0) {
      posting.hiring_firms.push_back({id, wage_base(firm), firm.address});
    } else if (!firm.employees.empty()) {
      auto it = firm.employees.begin();
      std::advance(it, static_cast<std::ptrdiff_t>(rng.index(firm.employees.size())));
      const CitizenId victim = *it;
      fire(state, id, victim);
      report.fires.emplace_back(id, victim);
    }
  }
  for (const auto& [id, c] : state.citizens) {
    if (!c.employed() && c.in_workforce()) posting.candidates.push_back({id, c.qualification, c.address});
  }
  report.candidates = posting.candidates.size();
  posting.sort();
  report.hires = assign_post(posting, rng, forced);
  for (const auto& [firm, citizen] : report.hires) hire(state, firm, citizen);
  posting.clear();
  return report;
}

// ---- real estate ------------------------------------------------------------------

std::vector<HouseId> rank_owned_houses(const SimulationState& state, const Family& family) {
  std::vector<HouseId> ranked(family.owned_houses.begin(), family.owned_houses.end());
  std::sort(ranked.begin(), ranked.end(), [&](HouseId a, HouseId b) {
    const Household& ha = state.house(a);
    const Household& hb = state.house(b);
    if (ha.quality != hb.quality) return ha.quality > hb.quality;
    if (ha.price != hb.price) return ha.price > hb.price;
    return a < b;
  });
  return ranked;
}

void move_family(SimulationState& state, FamilyId family_id, HouseId to) {
  Family& family = state.family(family_id);
  Household& target = state.house(to);
  if (target.occupant && *target.occupant != family_id) {
    throw ConsistencyError(fmt::format("house {} is occupied by another family", to.value));
  }
  if (family.household_id) state.house(*family.household_id).occupant.reset();
  target.occupant = family_id;
  family.household_id = to;
  family.address = target.address;
  family.region_id = target.region_id;
  for (CitizenId m : family.members) {
    Citizen& c = state.citizen(m);
    c.address = target.address;
    c.region_id = target.region_id;
    if (c.firm_id) c.distance = distance(c.address, state.firm(*c.firm_id).address);
  }
}

std::optional<Move> apply_move_rule(SimulationState& state, FamilyId family_id) {
  Family& family = state.family(family_id);
  const std::vector<HouseId> ranked = rank_owned_houses(state, family);
  if (ranked.empty()) return std::nullopt;
  const bool anyone_employed = std::any_of(family.members.begin(), family.members.end(),
                                           [&](CitizenId m) { return state.citizen(m).employed(); });
  const std::optional<HouseId> current = family.household_id;
  std::optional<HouseId> target;
  if (!current) {
    target = ranked.front();
  } else if (*current == ranked.front()) {
    if (!anyone_employed && ranked.size() >= 2) target = ranked[1];
  } else if (anyone_employed) {
    target = ranked.front();
  }
  if (!target) return std::nullopt;
  move_family(state, family_id, *target);
  return Move{family_id, current, *target};
}

RealEstateReport real_estate_step(SimulationState& state, const Params& params, Rng& rng) {
  RealEstateReport report;

  for (auto& [fid, family] : state.families) {
    if (family.members.empty() && family.household_id) {
      state.house(*family.household_id).occupant.reset();
      report.released.push_back(*family.household_id);
      family.household_id.reset();
    }
  }

  for (auto& [hid, house] : state.houses) reprice_house(house, state.region(house.region_id).index);

  std::vector<HouseId> listed;
  for (const auto& [hid, house] : state.houses) {
    if (!house.occupied()) listed.push_back(hid);
  }
  report.houses_listed = listed.size();

  std::vector<FamilyId> eligible;
  std::map<FamilyId, double> savings;
  for (const auto& [fid, family] : state.families) {
    if (family.members.empty()) continue;
    const double s = family_total_savings(state, family);
    if (s > 0.0) {
      eligible.push_back(fid);
      savings[fid] = s;
    }
  }
  const std::size_t wanted = ceil_count(params.percentage_check_new_location * static_cast<double>(state.families.size()));
  const std::size_t k = std::min(wanted, eligible.size());
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.index(eligible.size() - i);
    std::swap(eligible[i], eligible[j]);
  }
  eligible.resize(k);
  report.buyers = k;

  std::sort(listed.begin(), listed.end(), [&](HouseId a, HouseId b) {
    const double pa = state.house(a).price;
    const double pb = state.house(b).price;
    if (pa != pb) return pa > pb;
    return a < b;
  });
  std::sort(eligible.begin(), eligible.end(), [&](FamilyId a, FamilyId b) {
    if (savings[a] != savings[b]) return savings[a] > savings[b];
    return a < b;
  });

  for (FamilyId buyer_id : eligible) {
    Family& buyer = state.family(buyer_id);
    const double budget = savings[buyer_id];
    auto it = std::find_if(listed.begin(), listed.end(), [&](HouseId h) {
      const Household& house = state.house(h);
      return house.price <= budget && house.owner != buyer_id;
    });
    if (it == listed.end()) continue;
    Household& house = state.house(*it);
    Family& seller = state.family(house.owner);

    // Pool member savings into the family account, then pay from it.
    for (CitizenId m : buyer.members) {
      Citizen& c = state.citizen(m);
      buyer.savings += c.savings;
      c.savings = 0.0;
    }
    buyer.savings -= house.price;
    seller.savings += house.price;
    seller.owned_houses.erase(house.id);
    buyer.owned_houses.insert(house.id);
    report.sales.push_back({house.id, buyer_id, house.owner, house.price});
    house.owner = buyer_id;
    listed.erase(it);

    if (auto move = apply_move_rule(state, buyer_id)) report.moves.push_back(*move);
  }
  return report;
}

}  // namespace seal
