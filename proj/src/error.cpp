#include "men/error.hpp"

namespace men {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingBinding: return "MissingBinding";
    case ErrorCode::InvalidAssignment: return "InvalidAssignment";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::InvalidUnitary: return "InvalidUnitary";
    case ErrorCode::ZeroProbabilityOutcome: return "ZeroProbabilityOutcome";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::NotSeparable: return "NotSeparable";
    case ErrorCode::DegenerateState: return "DegenerateState";
    case ErrorCode::ZeroReferenceAmplitude: return "ZeroReferenceAmplitude";
    case ErrorCode::ZeroAmplitude: return "ZeroAmplitude";
    case ErrorCode::InconsistentGraph: return "InconsistentGraph";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::EnumerationBoundExceeded: return "EnumerationBoundExceeded";
    case ErrorCode::InvalidQuery: return "InvalidQuery";
    case ErrorCode::ZeroEvidenceProbability: return "ZeroEvidenceProbability";
    case ErrorCode::NotAChain: return "NotAChain";
    case ErrorCode::NotAPrefix: return "NotAPrefix";
    case ErrorCode::WrongArity: return "WrongArity";
    case ErrorCode::AllBasesRejected: return "AllBasesRejected";
    case ErrorCode::UnknownState: return "UnknownState";
    case ErrorCode::FileFormat: return "FileFormat";
  }
  return "Unknown";
}

std::string_view error_summary(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingBinding: return "assignment does not bind every required qubit";
    case ErrorCode::InvalidAssignment: return "assignment index or bit out of range";
    case ErrorCode::InvalidState: return "amplitudes do not form a unit-norm pure state";
    case ErrorCode::InvalidUnitary: return "basis change matrix is not unitary";
    case ErrorCode::ZeroProbabilityOutcome: return "measurement outcome has zero probability";
    case ErrorCode::InvalidPartition: return "qubit sets are empty, overlapping or out of range";
    case ErrorCode::NotSeparable: return "state is not separable across the requested split";
    case ErrorCode::DegenerateState: return "every amplitude is below the zero threshold";
    case ErrorCode::ZeroReferenceAmplitude: return "reference amplitude is below the zero threshold";
    case ErrorCode::ZeroAmplitude: return "state has amplitudes below the zero threshold";
    case ErrorCode::InconsistentGraph: return "potentials depend on non-neighbour qubits";
    case ErrorCode::InvalidModel: return "network model violates its invariants";
    case ErrorCode::EnumerationBoundExceeded: return "too many qubits for exhaustive enumeration";
    case ErrorCode::InvalidQuery: return "query binds qubits outside the model";
    case ErrorCode::ZeroEvidenceProbability: return "evidence has zero probability";
    case ErrorCode::NotAChain: return "network graph is not the path 1-2-...-n";
    case ErrorCode::NotAPrefix: return "bound qubits are not a prefix 1..m";
    case ErrorCode::WrongArity: return "operation requires exactly three qubits";
    case ErrorCode::AllBasesRejected: return "every sampled basis had near-zero amplitudes";
    case ErrorCode::UnknownState: return "unknown canonical state name";
    case ErrorCode::FileFormat: return "malformed input file";
  }
  return "unknown error";
}

}  // namespace men
