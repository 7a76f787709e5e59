#include "seal/demographics.hpp"

#include <fmt/core.h>

#include "seal/errors.hpp"
#include "seal/genesis.hpp"

namespace seal {

DemographicsReport check_demographics(SimulationState& state, const VitalTables& tables,
                                      const QualificationTable& qualification, int year_to_start, Rng& rng) {
  DemographicsReport report;
  const int month = state.clock.calendar_month();
  const int year = year_to_start + state.clock.year_offset();

  std::vector<Citizen> newborns;
  for (auto& [id, c] : state.citizens) {
    if (c.month_of_birth != month) continue;
    ++c.age;
    const bool dies = rng.bernoulli(tables.mortality(year, c.gender, c.age));
    if (c.gender == Gender::female && c.age >= kMinFertileAge && c.age <= kMaxFertileAge &&
        rng.bernoulli(tables.fertility(year, c.age))) {
      Citizen baby;
      baby.gender = rng.bernoulli(0.5) ? Gender::male : Gender::female;
      baby.age = 0;
      baby.month_of_birth = month;
      baby.qualification = draw_qualification(rng, qualification, c.region_id);
      baby.money = 0.0;
      baby.family_id = c.family_id;
      baby.address = c.address;
      baby.region_id = c.region_id;
      newborns.push_back(std::move(baby));
    }
    if (dies) report.deaths.push_back(id);
  }
  for (Citizen& baby : newborns) {
    baby.id = CitizenId{state.next_citizen_id++};
    state.family(baby.family_id).members.insert(baby.id);
    report.births.push_back(baby.id);
    const CitizenId id = baby.id;
    state.citizens.emplace(id, std::move(baby));
  }
  for (CitizenId id : report.deaths) remove_dead(state, id);
  return report;
}

void remove_dead(SimulationState& state, CitizenId id) {
  const auto it = state.citizens.find(id);
  if (it == state.citizens.end()) throw ConsistencyError(fmt::format("citizen {} is not alive", id.value));
  Citizen& c = it->second;
  Family& family = state.family(c.family_id);
  if (family.members.erase(id) != 1) {
    throw ConsistencyError(fmt::format("family {} does not list dying citizen {}", family.id.value, id.value));
  }
  family.balance += c.money + c.savings;
  c.money = 0.0;
  c.savings = 0.0;
  if (c.firm_id) {
    if (state.firm(*c.firm_id).employees.erase(id) != 1) {
      throw ConsistencyError(fmt::format("firm {} does not list dying employee {}", c.firm_id->value, id.value));
    }
  }
  state.graveyard.push_back(std::move(c));
  state.citizens.erase(it);
}

}  // namespace seal
