#include "pwtree/error.hpp"

namespace pwtree {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::LoopEdge: return "LoopEdge";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::NegativeLength: return "NegativeLength";
    case ErrorKind::UnknownEndpoint: return "UnknownEndpoint";
    case ErrorKind::DuplicateVertex: return "DuplicateVertex";
    case ErrorKind::DisconnectedSubset: return "DisconnectedSubset";
    case ErrorKind::InfiniteDistance: return "InfiniteDistance";
    case ErrorKind::UncoveredVertex: return "UncoveredVertex";
    case ErrorKind::UncoveredEdge: return "UncoveredEdge";
    case ErrorKind::BrokenInterval: return "BrokenInterval";
    case ErrorKind::UnknownVertex: return "UnknownVertex";
    case ErrorKind::InvalidComposition: return "InvalidComposition";
    case ErrorKind::NotASubgraph: return "NotASubgraph";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NotATree: return "NotATree";
    case ErrorKind::PathwidthTooLow: return "PathwidthTooLow";
    case ErrorKind::WrongWidth: return "WrongWidth";
    case ErrorKind::DegenerateZero: return "DegenerateZero";
    case ErrorKind::IllegalWindow: return "IllegalWindow";
    case ErrorKind::MissingLength: return "MissingLength";
    case ErrorKind::VertexAbsent: return "VertexAbsent";
    case ErrorKind::NotACliqueEdge: return "NotACliqueEdge";
    case ErrorKind::TooManyOutcomes: return "TooManyOutcomes";
    case ErrorKind::RankBoundExceeded: return "RankBoundExceeded";
    case ErrorKind::InvariantViolated: return "InvariantViolated";
    case ErrorKind::BadTruncation: return "BadTruncation";
    case ErrorKind::BadSpec: return "BadSpec";
    case ErrorKind::EmptyEdgeSet: return "EmptyEdgeSet";
    case ErrorKind::BadDomain: return "BadDomain";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::HypothesisViolation: return "HypothesisViolation";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace pwtree
