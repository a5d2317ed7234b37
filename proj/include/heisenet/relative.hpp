#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "heisenet/matrix.hpp"
#include "heisenet/network.hpp"

namespace heisenet {

/// An observable with a human-readable provenance, e.g. "q1z@2".
struct NamedObservable {
  std::string name;
  CMatrix matrix;
};

/// Wraps a stored record snapshot.
NamedObservable snapshot(const NetworkState& s, const RecordKey& key);

/// Branch selector: a projector of a PVM built from a recorded observable.
struct RelativeFrame {
  CMatrix projector;
  double label = 0.0;            // eigenvalue of the recorded observable
  std::string source;            // e.g. "q1z@2"
  double weight = 0.0;           // <Psi|P|Psi>
  std::optional<RecordKey> record;  // set when built from a descriptor snapshot
};

/// Frame whose projector is the identity ("whole network").
RelativeFrame identity_frame(const NetworkState& s);

/// PVM of a recorded observable. An involution yields the pair (+1, -1) with
/// projectors (1 +/- r)/2 in that order; any other Hermitian observable yields
/// one frame per eigenvalue from spectral(). Throws NotHermitian.
std::vector<RelativeFrame> make_pvm(const NetworkState& s, const NamedObservable& recorded);
/// make_pvm on a stored descriptor snapshot; frames carry the record key.
std::vector<RelativeFrame> make_pvm(const NetworkState& s, const RecordKey& key);

/// ||sum_i P_i - 1||
double pvm_completeness_residual(const std::vector<RelativeFrame>& frames);

/// Product of two commuting frames (a branch of a branch). Throws NonCommuting.
RelativeFrame compose_frames(const NetworkState& s, const RelativeFrame& outer,
                             const RelativeFrame& inner);

struct RelativeDescriptor {
  int qubit = 0;
  std::array<CMatrix, 3> rq;  // q_i * P
  RelativeFrame frame;
  CMatrix relative_unit;      // == frame.projector

  const CMatrix& operator[](Component c) const { return rq[static_cast<std::size_t>(c)]; }
  /// Max residual of the relative Pauli algebra with relative_unit as unit.
  double algebra_residual() const;
};

/// Components q_i P of one qubit in one frame. Throws NonCommuting when the
/// frame projector does not commute with the qubit's descriptors.
RelativeDescriptor relative_descriptor(const NetworkState& s, int qubit,
                                       const RelativeFrame& frame);

/// <A P> / <P>. Throws ZeroWeightBranch when <P> <= tol.weight.
cplx relative_expectation(const NetworkState& s, const CMatrix& a, const RelativeFrame& frame);

/// P|Psi> / ||P|Psi>||. Throws ZeroWeightBranch.
StateVector relative_heisenberg_state(const NetworkState& s, const RelativeFrame& frame);

struct RecordHit {
  Component component;
  double value;
};

/// Components i of `holder` for which q_holder,i * recorded is sharp, in
/// x, y, z order. Empty means the holder carries no copy of the record.
std::vector<RecordHit> record_check(const NetworkState& s, int holder, const CMatrix& recorded);

enum class Autonomy { Preserving, Destroying };

struct AutonomyReport {
  Autonomy classification = Autonomy::Preserving;
  std::string reason;            // "commutes-with-records", "single-qubit" or "breaks-record"
  std::string violated;          // name of the first record the gate fails to commute with
  double commutator_norm = 0.0;  // largest ||[U, r]|| over the records
};

/// A gate preserves the foliation defined by `recorded` when its unitary
/// commutes with every record, or when it acts on a single qubit only.
AutonomyReport autonomy_check(const NetworkState& s, const Gate& g,
                              const std::vector<NamedObservable>& recorded);

struct BranchFactor {
  CMatrix unitary;        // unit_coeff * P + z_coeff * q_fz P
  int foliated_qubit = 0;
  double unit_coeff = 0.0;
  double z_coeff = 0.0;
};

/// Restriction of an F gate to one branch. The frame must come from a z
/// record of one F operand; the other operand is the foliated qubit.
/// Throws WrongGateKind for non-F gates and PreconditionFailed when the frame
/// does not come from a z record of an operand.
BranchFactor branch_evolution_factor(const Gate& g, const RelativeFrame& frame,
                                     const NetworkState& s);

/// max over components of || (U^H q U) P - U'^H (q P) U' || for the foliated
/// qubit, comparing evolve-then-project with project-then-evolve.
double branch_factor_residual(const Gate& g, const RelativeFrame& frame, const NetworkState& s);

struct FoliationReport {
  std::vector<RelativeFrame> frames;
  std::vector<int> foliated_qubits;
  // descriptors[f][k] is foliated_qubits[k] in frames[f]
  std::vector<std::vector<RelativeDescriptor>> descriptors;
  double completeness_residual = 0.0;
  double algebra_residual = 0.0;
  double sum_rule_residual = 0.0;  // || sum_f q_i P_f - q_i ||
  bool valid = false;
};

/// Foliates the listed qubits relative to a recorded observable. Throws
/// PreconditionFailed when the record is sharp (fewer than two branches carry
/// weight): an unentangled system has no meaningful relative states.
FoliationReport foliate(const NetworkState& s, const std::vector<int>& qubits,
                        const NamedObservable& recorded);

}  // namespace heisenet
