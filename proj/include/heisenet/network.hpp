#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heisenet/matrix.hpp"
#include "heisenet/tolerances.hpp"

namespace heisenet {

inline constexpr std::size_t kMaxQubits = 10;


/// Residual below which restore_unitarity leaves a matrix alone.
inline constexpr double kUnitarityFloor = 1e-14;

/// Polishes a nearly unitary matrix with Newton-Schulz iterations. Every
/// gate unitary passes through this before it conjugates the descriptors.
CMatrix restore_unitarity(CMatrix u);

enum class Component { X = 0, Y = 1, Z = 2 };
inline constexpr std::array<Component, 3> kComponents{Component::X, Component::Y, Component::Z};

char component_name(Component c);
/// Parses "x", "y" or "z". Throws ValidationError.
Component parse_component(std::string_view s);

/// Heisenberg-picture observables (q_x, q_y, q_z) of one qubit at one time.
struct Descriptor {
  int qubit = 0;  // 1-based
  std::size_t time = 0;
  std::array<CMatrix, 3> q;

  const CMatrix& operator[](Component c) const { return q[static_cast<std::size_t>(c)]; }
  const CMatrix& x() const { return q[0]; }
  const CMatrix& y() const { return q[1]; }
  const CMatrix& z() const { return q[2]; }
};

/// Max residual of the single-qubit Pauli algebra
///   q_i q_j = delta_ij * unit + i eps_ijk q_k
/// The ordinary algebra uses unit = identity; relative descriptors use their
/// frame projector.
double pauli_algebra_residual(const CMatrix& qx, const CMatrix& qy, const CMatrix& qz,
                              const CMatrix& unit);

enum class GateKind { I, NOT, H, CNOT, RZ, F, CCNOT, CUSTOM };

std::string_view gate_kind_name(GateKind k);
/// Throws ValidationError for unknown names.
GateKind parse_gate_kind(std::string_view name);

/// A gate is a fixed function of the current descriptors that yields the
/// unitary implementing it. Operands are 1-based, controls before the target.
/// For F(a, b) the unitary is alpha + beta q_az + gamma q_bz + delta q_az q_bz.
struct Gate {
  using Builder = std::function<CMatrix(std::span<const Descriptor>)>;

  GateKind kind = GateKind::I;
  std::vector<int> operands;
  std::vector<double> params;  // theta for RZ; alpha, beta, gamma, delta for F
  Builder custom;              // CUSTOM only
  std::string name;            // CUSTOM only, for reports
};

namespace gates {
Gate identity();
Gate not_gate(int target);
Gate hadamard(int target);
Gate cnot(int control, int target);
Gate rz(int target, double theta);
Gate f_gate(int a, int b, double alpha, double beta, double gamma, double delta);
Gate ccnot(int control1, int control2, int target);
Gate custom(std::string name, std::vector<int> operands, Gate::Builder builder);
/// Rotation by `theta` about the unit axis (nx, ny, nz) of one qubit, built as
/// cos(theta/2) - i sin(theta/2) (nx q_x + ny q_y + nz q_z).
Gate rotation(int target, double nx, double ny, double nz, double theta);
}  // namespace gates

/// The eigenvalues alpha + beta*m + gamma*s + delta*m*s of an F gate for
/// (m, s) in {(+,+), (+,-), (-,+), (-,-)}. F is unitary iff each has modulus 1.
std::array<double, 4> f_gate_eigenvalues(const Gate& g);

/// Checks operand count, range and distinctness and gate parameters for an
/// n-qubit network. Throws ValidationError, or NonUnitary for a bad F.
void validate_gate(const Gate& g, std::size_t n, const Tolerances& tol);

std::string describe(const Gate& g);

/// Identifies a stored snapshot of one descriptor component.
struct RecordKey {
  int qubit = 0;
  Component component = Component::Z;
  std::size_t time = 0;

  auto operator<=>(const RecordKey&) const = default;
};

std::string describe(const RecordKey& key);

/// Network of n qubits at integer time t. Immutable value: apply_gate and
/// with_record return new states. The Heisenberg state is the first standard
/// basis vector |1,...,1;0> and never changes.
class NetworkState {
 public:
  std::size_t qubits() const noexcept { return descriptors_.size(); }
  std::size_t dim() const noexcept { return std::size_t{1} << qubits(); }
  std::size_t time() const noexcept { return time_; }
  const Tolerances& tolerances() const noexcept { return tol_; }
  const StateVector& heisenberg_state() const noexcept { return *psi_; }

  std::span<const Descriptor> descriptors() const noexcept { return descriptors_; }
  /// Throws ValidationError when `qubit` is outside 1..n.
  const Descriptor& descriptor(int qubit) const;
  const CMatrix& component(int qubit, Component c) const { return descriptor(qubit)[c]; }

  /// Snapshot of the given component at the current time.
  NetworkState with_record(int qubit, Component c) const;
  bool has_record(const RecordKey& key) const { return records_.contains(key); }
  /// Throws ValidationError if the record was never taken.
  const CMatrix& record(const RecordKey& key) const;
  std::vector<RecordKey> record_keys() const;

 private:
  friend NetworkState init_network(std::size_t n, const Tolerances& tol);
  friend NetworkState apply_gate(const NetworkState& s, const Gate& g);

  std::size_t time_ = 0;
  std::vector<Descriptor> descriptors_;
  std::shared_ptr<const StateVector> psi_;
  std::map<RecordKey, std::shared_ptr<const CMatrix>> records_;
  Tolerances tol_;
};

/// q_a = 1^(a-1) (x) sigma (x) 1^(n-a). Throws SizeLimit for n outside 1..10.
NetworkState init_network(std::size_t n, const Tolerances& tol = {});

/// Evaluates the gate's characteristic function on the current descriptors.
CMatrix build_gate_unitary(const Gate& g, const NetworkState& s);

/// Conjugates every descriptor by the gate unitary and advances time by one.
NetworkState apply_gate(const NetworkState& s, const Gate& g);
NetworkState apply_gates(NetworkState s, std::span<const Gate> gs);

/// <Psi|A|Psi>. Throws DimMismatch.
cplx expectation(const NetworkState& s, const CMatrix& a);

/// |<A>^2 - <A^2>| for Hermitian A.
double sharpness_residual(const NetworkState& s, const CMatrix& a);

/// The sharp value of A, or nullopt. Throws NotHermitian.
std::optional<double> is_sharp(const NetworkState& s, const CMatrix& a);

struct EntanglementWitness {
  bool entangled = false;
  Component first = Component::X;   // component of qubit a
  Component second = Component::X;  // component of qubit b
  double discrepancy = 0.0;         // |<q_ai q_bj> - <q_ai><q_bj>|, largest over (i, j)
};

/// Throws ValidationError when a == b.
EntanglementWitness are_entangled(const NetworkState& s, int a, int b);

/// Max residual of the full algebra: each qubit's Pauli relations plus
/// commutation between distinct qubits.
double algebra_residual(const NetworkState& s);

}  // namespace heisenet
