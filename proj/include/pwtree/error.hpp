#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pwtree {

enum class ErrorKind {
  // graph construction and metrics
  LoopEdge,
  DuplicateEdge,
  NegativeLength,
  UnknownEndpoint,
  DuplicateVertex,
  DisconnectedSubset,
  InfiniteDistance,
  // decompositions and composition sequences
  UncoveredVertex,
  UncoveredEdge,
  BrokenInterval,
  UnknownVertex,
  InvalidComposition,
  NotASubgraph,
  TooLarge,
  NotATree,
  PathwidthTooLow,
  // embeddings
  WrongWidth,
  DegenerateZero,
  IllegalWindow,
  MissingLength,
  VertexAbsent,
  NotACliqueEdge,
  TooManyOutcomes,
  RankBoundExceeded,
  InvariantViolated,
  // instance generators
  BadTruncation,
  BadSpec,
  // harness
  EmptyEdgeSet,
  BadDomain,
  PreconditionFailed,
  HypothesisViolation,
  // io
  ParseError,
};

std::string_view to_string(ErrorKind kind);

/// Every library failure is reported through this exception; `kind()` is the
/// machine-readable part, `what()` names the offending vertex or edge.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pwtree
