#pragma once

#include <vector>

#include "seal/data.hpp"
#include "seal/random.hpp"
#include "seal/state.hpp"

namespace seal {

struct DemographicsReport {
  std::vector<CitizenId> births;
  std::vector<CitizenId> deaths;
};

// Start-of-month vital events. Citizens whose birth month is the current calendar month
// age one year and draw death with the annual probability for (year, gender, age);
// women aged 15..49 also draw a birth. Newborns join the mother's family and home.
// The dead are removed afterwards, so a mother who dies still delivers.
DemographicsReport check_demographics(SimulationState& state, const VitalTables& tables,
                                      const QualificationTable& qualification, int year_to_start, Rng& rng);

// Withdraws a citizen from the registry, the family and the employer and appends them to
// the graveyard. Their cash is inherited by the family balance. Throws ConsistencyError
// if the family or employer does not list the citizen.
void remove_dead(SimulationState& state, CitizenId id);

inline constexpr int kMinFertileAge = 15;
inline constexpr int kMaxFertileAge = 49;

}  // namespace seal
