#pragma once

#include "stuckelberg/evolve.hpp"

namespace stuckelberg::detail {

void check_evolution_inputs(const RydbergHamiltonian& hamiltonian, const DriveProtocol& protocol,
                            const QuantumState& initial, std::size_t steps_per_cycle, std::size_t cycles);

/// Appends densities at time t; throws NormDriftError past kNormDriftLimit.
void record_sample(EvolutionResult& result, const QuantumState& state, double t);

}  // namespace stuckelberg::detail
