#include "heisenet/tolerances.hpp"

#include <cmath>

#include "heisenet/error.hpp"

namespace heisenet {

namespace {

template <typename Fn>
void for_each_field(Tolerances& t, Fn&& fn) {
  fn("hermitian", t.hermitian);
  fn("unitary", t.unitary);
  fn("general", t.general);
  fn("eigengap", t.eigengap);
  fn("sharp", t.sharp);
  fn("entangle", t.entangle);
  fn("commute", t.commute);
  fn("weight", t.weight);
  fn("norm", t.norm);
  fn("oracle", t.oracle);
}

}  // namespace

void Tolerances::set(std::string_view name, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorKind::ValidationError,
                "tolerance '" + std::string(name) + "' must be a positive finite number");
  }
  bool found = false;
  for_each_field(*this, [&](std::string_view field, double& slot) {
    if (field == name) {
      slot = value;
      found = true;
    }
  });
  if (!found) {
    throw Error(ErrorKind::ValidationError, "unknown tolerance '" + std::string(name) + "'");
  }
}

std::vector<std::pair<std::string, double>> Tolerances::entries() const {
  std::vector<std::pair<std::string, double>> out;
  Tolerances copy = *this;
  for_each_field(copy, [&](std::string_view field, double& slot) {
    out.emplace_back(std::string(field), slot);
  });
  return out;
}

}  // namespace heisenet
