#pragma once

#include <stdexcept>
#include <string>

namespace hyperrho {

/// Structural problem with a hypergraph (bad rank, out-of-range ids, ...).
class InvalidHypergraph : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Generator called with parameters outside the family's domain.
class InvalidParameters : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed hypergraph or certificate file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A recurrence denominator became non-positive before the requested index.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Bisection could not establish a sign change on its bracket.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DisconnectedInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// solve_tree_alpha was handed a hypergraph whose incidence graph has a cycle.
class CyclicInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Weighted incidence matrix does not cover the host's incidences (or has
/// entries off them).
class CertificateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Graft site, bridge or theorem id that fails its preconditions.
class InvalidSite : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace hyperrho
