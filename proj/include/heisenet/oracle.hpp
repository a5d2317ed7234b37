#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "heisenet/matrix.hpp"
#include "heisenet/network.hpp"
#include "heisenet/tolerances.hpp"

// Schroedinger-picture state-vector simulator used as ground truth for the
// Heisenberg-picture network. Gates are fixed operators applied directly to
// amplitudes; nothing here evolves descriptors.

namespace heisenet::oracle {

struct SchrodingerRun {
  std::size_t qubits = 0;
  std::vector<StateVector> states;  // states[t] is |Psi(t)>, states.size() == gates.size() + 1
  std::vector<Gate> gates;
};

/// |1,...,1> for n qubits: the first standard basis vector.
StateVector initial_state(std::size_t n);

/// Fixed single-qubit Pauli operators at the t = 0 representation, built
/// entrywise (no Kronecker products) for use by CUSTOM gate builders.
std::vector<Descriptor> fixed_descriptors(std::size_t n);

/// Applies one gate's fixed operator to psi. Throws NonUnitary / ValidationError.
void apply_fixed_gate(StateVector& psi, std::size_t n, const Gate& g, const Tolerances& tol);

/// Forward evolution; gate k maps states[k] to states[k+1].
SchrodingerRun evolve(const StateVector& initial, std::vector<Gate> gates,
                      const Tolerances& tol = {});

/// P psi / ||P psi||. Throws ZeroWeightBranch when ||P psi|| <= tol.weight.
StateVector schrodinger_relative_state(const StateVector& psi, const CMatrix& projector,
                                       const Tolerances& tol = {});

struct PauliFactor {
  int qubit = 1;
  Component component = Component::Z;
};
using PauliProduct = std::vector<PauliFactor>;

/// Product q_{f1} q_{f2} ... of the current descriptors of s.
CMatrix heisenberg_product(const NetworkState& s, const PauliProduct& factors);

/// <psi| sigma_{f1} sigma_{f2} ... |psi> with fixed Pauli operators.
cplx pauli_expectation(const StateVector& psi, std::size_t n, const PauliProduct& factors);

/// || (1 + sign * A)/2 psi ||^2 for the fixed Pauli product A.
double pauli_projection_weight(const StateVector& psi, std::size_t n, const PauliProduct& factors,
                               int sign);

struct ResidualEntry {
  std::size_t time = 0;
  std::size_t observable = 0;
  cplx heisenberg;
  cplx schrodinger;
  double residual = 0.0;
};

struct CrossValidation {
  std::vector<ResidualEntry> entries;
  double max_residual = 0.0;
};

/// |<Psi|A(t)|Psi> - <Psi(t)|A(0)|Psi(t)>| for every state of the timeline and
/// every observable. Throws CircuitMismatch when the timeline does not belong
/// to the run.
CrossValidation cross_validate(const SchrodingerRun& run, std::span<const NetworkState> timeline,
                               const std::vector<PauliProduct>& observables);

struct EnsembleMember {
  std::uint32_t m_value = 0;
  double weight = 0.0;
};

/// Classical ensemble read straight off the amplitudes: for every S register
/// value with weight above `weight_tol`, the M register value it pairs with.
/// Registers are least-significant first and a set basis bit is bit value 1.
/// Throws PreconditionFailed when an S value pairs with two M values.
std::map<std::uint32_t, EnsembleMember> register_ensemble(const StateVector& psi, std::size_t n,
                                                          const std::vector<int>& m_qubits,
                                                          const std::vector<int>& s_qubits,
                                                          double weight_tol);

/// Every single-qubit component of an n-qubit network, 3n products.
std::vector<PauliProduct> all_components(std::size_t n);

}  // namespace heisenet::oracle
