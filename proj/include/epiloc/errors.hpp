#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace epiloc {

/// Reason codes for data-dependent geometric failures. These are outcomes of
/// the input configuration, not programming errors, and are surfaced to the
/// CLI (exit 3) and HTTP service (422) with their machine-readable name.
enum class ErrorKind {
  degenerate_input,          // zero vector, identical points joined, etc.
  degenerate_pencil,         // coincident lines in a cross-ratio pencil
  ill_conditioned,           // near-collinear triple, near-singular map
  redundant_configuration,   // e collinear with two correspondences
  coincident_solution,       // Cremona intersection lands on a shared point
  underdetermined,           // rank deficiency of a linear system
  no_solution,               // no root found on the epipolar line
  generation_failure,        // synthetic scene could not be placed
  degenerate_data,           // 8-point design matrix rank deficiency
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::degenerate_input: return "degenerate_input";
    case ErrorKind::degenerate_pencil: return "degenerate_pencil";
    case ErrorKind::ill_conditioned: return "ill_conditioned";
    case ErrorKind::redundant_configuration: return "redundant_configuration";
    case ErrorKind::coincident_solution: return "coincident_solution";
    case ErrorKind::underdetermined: return "underdetermined";
    case ErrorKind::no_solution: return "no_solution";
    case ErrorKind::generation_failure: return "generation_failure";
    case ErrorKind::degenerate_data: return "degenerate_data";
  }
  return "unknown";
}

class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace epiloc
