#include "mukleene/errors.hpp"

namespace mukleene {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::syntax_error: return "SyntaxError";
    case Errc::type_annotation_missing: return "TypeAnnotationMissing";
    case Errc::type_mismatch: return "TypeMismatch";
    case Errc::rank_violation: return "RankViolation";
    case Errc::unknown_constant: return "UnknownConstant";
    case Errc::unbound_oracle: return "UnboundOracle";
    case Errc::node_cap_exceeded: return "NodeCapExceeded";
    case Errc::valueless_tree: return "ValuelessTree";
    case Errc::limit_stage_unsupported: return "LimitStageUnsupported";
    case Errc::no_stabilization: return "NoStabilization";
    case Errc::non_monotone: return "NonMonotoneDetected";
    case Errc::enumeration_too_large: return "EnumerationTooLarge";
    case Errc::cap_exceeded: return "CapExceeded";
    case Errc::degenerate_interval: return "DegenerateInterval";
    case Errc::precision_exhausted: return "PrecisionExhausted";
    case Errc::bad_bound: return "BadBound";
    case Errc::bad_variation: return "BadVariation";
    case Errc::precondition_violated: return "PreconditionViolated";
    case Errc::inconsistent_order: return "InconsistentOrder";
    case Errc::injectivity_violated: return "InjectivityViolated";
    case Errc::missing_preimage: return "MissingPreimage";
    case Errc::duplicate_point: return "DuplicatePoint";
    case Errc::oracle_inconsistent: return "OracleInconsistent";
    case Errc::not_usc: return "NotUSC";
    case Errc::not_attained: return "NotAttained";
    case Errc::not_singular: return "NotSingular";
    case Errc::not_disjoint: return "NotDisjoint";
    case Errc::empty_set: return "EmptySet";
    case Errc::format_error: return "FormatError";
    case Errc::invariant: return "InvariantViolation";
  }
  return "UnknownError";
}

Error::Error(Errc c, const std::string& msg)
    : std::runtime_error(std::string(errc_name(c)) + ": " + msg), code_(c) {}

void fail(Errc c, const std::string& msg) { throw Error(c, msg); }

}  // namespace mukleene
