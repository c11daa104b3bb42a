#pragma once

#include <string>

namespace optensor {

/// System type carried by a wire: a symbolic label and a Hilbert-space dimension.
struct WireType {
  std::string name;
  int dim = 2;

  bool operator==(const WireType&) const = default;
};

enum class Orientation { input, output };

inline Orientation flipped(Orientation o) {
  return o == Orientation::input ? Orientation::output : Orientation::input;
}

/// One leg of an operator tensor: a typed wire with an integer label.
/// Within a composite expression each id appears exactly twice, once as
/// input and once as output, on wires of equal type.
struct WireInstance {
  WireType type;
  int id = 0;
  Orientation orientation = Orientation::input;

  bool operator==(const WireInstance&) const = default;
};

inline WireInstance in_wire(std::string name, int dim, int id) {
  return {{std::move(name), dim}, id, Orientation::input};
}

inline WireInstance out_wire(std::string name, int dim, int id) {
  return {{std::move(name), dim}, id, Orientation::output};
}

inline WireInstance in_wire(WireType type, int id) {
  return {std::move(type), id, Orientation::input};
}

inline WireInstance out_wire(WireType type, int id) {
  return {std::move(type), id, Orientation::output};
}

}  // namespace optensor
