#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "seal/params.hpp"
#include "seal/random.hpp"
#include "seal/state.hpp"

namespace seal {

// ---- goods and services -------------------------------------------------------------

// Monthly amount a consumer with money M spends: U(0, M) below one unit, otherwise
// Beta(1, (1 - beta) / beta) * M, whose mean is beta * M. Empty when M <= 0 (the consumer
// stays out of the market).
std::optional<double> decide_spending(double money, double beta, Rng& rng);

enum class FirmChoice { cheapest, closest };

// Which firms a consumer may contact.
enum class FirmSearchScope { global, same_region };

// Contacts min(size_market, |firms|) firms drawn without replacement, then with
// probability 0.5 buys from the cheapest, otherwise from the closest. Ties go to the
// lowest id. Empty when there are no firms. `forced` pins the coin for tests.
std::optional<FirmId> choose_firm(Point consumer, std::span<const Firm* const> firms, int size_market, Rng& rng,
                                  std::optional<FirmChoice> forced = {});

struct SaleReceipt {
  double quantity = 0.0;
  double gross = 0.0;   // amount paid to the firm, tax included
  double tax = 0.0;
  double change = 0.0;  // returned to the consumer when stock runs short
};

// Converts `spend` into product at the current price, rationing to the stock on hand.
// The firm is credited net of tax; the tax goes to the treasury of its fiscal cluster.
// Throws InputError when the tax rate is outside [0, 1) or spend <= 0.
SaleReceipt sale(Firm& firm, double spend, double tax_rate, FiscalCluster& treasury);

struct ConsumptionTotals {
  double spend = 0.0;
  double net_credit = 0.0;
  double tax = 0.0;
  double change = 0.0;
  double quantity = 0.0;
  std::size_t purchases = 0;

  ConsumptionTotals& operator+=(const ConsumptionTotals& o);
};

// Every member with money goes shopping once; change comes back to the member and
// whatever is left unspent moves to the member's savings.
ConsumptionTotals consume_step(SimulationState& state, FamilyId family, const Params& params, Rng& rng,
                               FirmSearchScope scope = FirmSearchScope::global);

// ---- labor ------------------------------------------------------------------------

enum class CandidateChoice { closest, most_qualified };

struct PostingFirm {
  FirmId id;
  double wage_base = 1.0;
  Point address;
};

struct PostingCandidate {
  CitizenId id;
  double qualification = 1.0;
  Point address;
};

// The announcement board: firms with an opening and job seekers. Emptied every month.
struct Posting {
  std::vector<PostingFirm> hiring_firms;
  std::vector<PostingCandidate> candidates;

  // Firms by wage base (desc), candidates by qualification (desc); ties by id.
  void sort();
  void clear() {
    hiring_firms.clear();
    candidates.clear();
  }
};

// Walks the sorted lists: the head firm takes, with probability 0.5, the candidate living
// closest to it, otherwise the head (most qualified) candidate. Returns (firm, citizen)
// pairs in match order and leaves the posting emptied of matched entries.
std::vector<std::pair<FirmId, CitizenId>> assign_post(Posting& posting, Rng& rng,
                                                      std::optional<CandidateChoice> forced = {});

void hire(SimulationState& state, FirmId firm, CitizenId citizen);
void fire(SimulationState& state, FirmId firm, CitizenId citizen);

struct LaborReport {
  std::vector<FirmId> entered;
  std::vector<std::pair<FirmId, CitizenId>> hires;
  std::vector<std::pair<FirmId, CitizenId>> fires;
  std::size_t candidates = 0;
};

// Each firm enters with probability 1 - LABOUR_MARKET. Entering firms with positive
// profit post one opening; the others lay off one random employee. Unemployed citizens
// aged 16..69 are candidates. Matches are applied to the state.
LaborReport labor_step(SimulationState& state, const Params& params, Rng& rng,
                       std::optional<CandidateChoice> forced = {});

// ---- real estate ------------------------------------------------------------------

struct HouseSale {
  HouseId house;
  FamilyId buyer;
  FamilyId seller;
  double price = 0.0;
};

struct Move {
  FamilyId family;
  std::optional<HouseId> from;
  HouseId to;
};

struct RealEstateReport {
  std::vector<HouseSale> sales;
  std::vector<Move> moves;
  std::vector<HouseId> released;  // houses vacated by families with no members left
  std::size_t houses_listed = 0;
  std::size_t buyers = 0;
};

// Owned houses ranked best first: quality, then price, then lowest id.
std::vector<HouseId> rank_owned_houses(const SimulationState& state, const Family& family);

// Moves a family (and its members) into one of its houses, vacating the current one.
void move_family(SimulationState& state, FamilyId family, HouseId to);

// After a purchase: a family in its best house with nobody employed moves to the second
// best; a family outside its best house with someone employed moves into the best; a
// family with no house moves into the best. Returns the move if one happened.
std::optional<Move> apply_move_rule(SimulationState& state, FamilyId family);

// Reprices every house, lists the unoccupied ones and lets a sample of families with
// savings buy, richest first, the most expensive house each can afford.
RealEstateReport real_estate_step(SimulationState& state, const Params& params, Rng& rng);

}  // namespace seal
