#pragma once

#include <cstdint>
#include <vector>

#include "heisenet/matrix.hpp"
#include "heisenet/network.hpp"
#include "heisenet/relative.hpp"

namespace heisenet {

/// Binary register observable sum_k 2^k P_-1(q_{qubits[k], z}). qubits is
/// least-significant first; z = -1 encodes bit value 1, so a fresh network
/// holds the all-zeros register.
struct RegisterDescriptor {
  std::vector<int> qubits;
  CMatrix matrix;
  std::size_t time = 0;
};

/// Throws BadSubset for an empty, repeated or out-of-range subset.
RegisterDescriptor register_descriptor(const NetworkState& s, const std::vector<int>& qubits);

/// A reversible map on m-bit values, stored as a permutation table.
class ClassicalFunction {
 public:
  /// Throws NotReversible unless `table` is a permutation of 0..2^bits-1.
  ClassicalFunction(std::size_t bits, std::vector<std::uint32_t> table);

  static ClassicalFunction identity(std::size_t bits);
  static ClassicalFunction bitwise_not(std::size_t bits);
  static ClassicalFunction increment(std::size_t bits);

  std::size_t bits() const noexcept { return bits_; }
  std::size_t size() const noexcept { return table_.size(); }
  std::uint32_t operator()(std::uint32_t v) const { return table_.at(v); }
  const std::vector<std::uint32_t>& table() const noexcept { return table_; }

 private:
  std::size_t bits_;
  std::vector<std::uint32_t> table_;
};

/// Sharp value of A with respect to an arbitrary normalized vector.
std::optional<double> sharp_value_in(const StateVector& psi, const CMatrix& a, double tol);

struct ClassicalBranch {
  RelativeFrame frame;       // P_j(b_S), j = frame.label
  CMatrix relative_register; // b_M P_j
  double value = 0.0;        // sharp value w.r.t. the relative Heisenberg state
};

struct ClassicalBranches {
  std::vector<ClassicalBranch> branches;  // nonzero-weight frames only, ascending j
  double product_sharpness_residual = 0.0;  // of b_M b_S, diagnostic only
};

/// Decomposes b_M into relative registers b_M P_j(b_S). Requires b_M and b_S
/// to be non-sharp and every nonzero-weight branch register to be sharp with
/// respect to its relative Heisenberg state; throws PreconditionFailed
/// otherwise, and BadSubset when the registers overlap.
ClassicalBranches classical_branches(const NetworkState& s, const RegisterDescriptor& m_register,
                                     const RegisterDescriptor& s_register);

/// Reversible synthesis of f into NOT / CNOT / CCNOT gates on `reg`
/// (least-significant first). Gates with more than two controls are expanded
/// with a Toffoli ladder over `ancillas`, which are left in their initial state.
/// Throws BadSubset when reg has the wrong width or overlaps the ancillas, and
/// PreconditionFailed when there are not enough ancillas.
std::vector<Gate> compile_classical(const ClassicalFunction& f, const std::vector<int>& reg,
                                    const std::vector<int>& ancillas);

/// Runs a NOT/CNOT/CCNOT gate list on classical bits. Bit (q - 1) of `bits` is
/// qubit q. Throws WrongGateKind for any other gate.
std::uint64_t simulate_classically(const std::vector<Gate>& gates, std::uint64_t bits);

struct BranchStep {
  double label = 0.0;
  double weight = 0.0;
  std::uint32_t before = 0;
  std::uint32_t after = 0;
  std::uint32_t expected = 0;  // f(before)
  double residual = 0.0;       // worst sharpness / integrality residual
  bool matches = false;
};

struct StepReport {
  std::vector<BranchStep> branches;
  bool interaction = false;        // the step disturbed S's descriptors
  double interaction_norm = 0.0;   // max change of an S descriptor
  bool ok = false;                 // every branch matches and no interaction
};

/// Checks that each branch's M register went from a sharp v to a sharp f(v)
/// between the two states. `frames` are the b_S frames taken at `before`.
/// Throws BranchNotSharp if a nonzero-weight branch register is not sharp.
StepReport verify_classical_step(const NetworkState& before, const NetworkState& after,
                                 const std::vector<int>& m_qubits,
                                 const std::vector<int>& s_qubits, const ClassicalFunction& f,
                                 const std::vector<RelativeFrame>& frames);

}  // namespace heisenet
