#include "cx/error.hpp"

namespace cx {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NotConnected: return "NotConnected";
    case Errc::NotQuotientRelation: return "NotQuotientRelation";
    case Errc::UnknownArc: return "UnknownArc";
    case Errc::UnknownCell: return "UnknownCell";
    case Errc::BadPositions: return "BadPositions";
    case Errc::TargetMismatch: return "TargetMismatch";
    case Errc::NotDimensionPreserving: return "NotDimensionPreserving";
    case Errc::IllegalMove: return "IllegalMove";
    case Errc::EndpointMismatch: return "EndpointMismatch";
    case Errc::NotOrientationPreserving: return "NotOrientationPreserving";
    case Errc::NotSubcomplex: return "NotSubcomplex";
    case Errc::NotDisjoint: return "NotDisjoint";
    case Errc::SquareDoesNotCommute: return "SquareDoesNotCommute";
    case Errc::NotHandleConfiguration: return "NotHandleConfiguration";
    case Errc::NotCovering: return "NotCovering";
    case Errc::BasepointNotInFiber: return "BasepointNotInFiber";
    case Errc::SubgroupConditionFails: return "SubgroupConditionFails";
    case Errc::DaggerFails: return "DaggerFails";
    case Errc::NotSimplyConnected: return "NotSimplyConnected";
    case Errc::Inconclusive: return "Inconclusive";
    case Errc::TableNotClosed: return "TableNotClosed";
    case Errc::RelatorViolation: return "RelatorViolation";
    case Errc::NotSubgroup: return "NotSubgroup";
    case Errc::NotGalois: return "NotGalois";
    case Errc::NotGraph: return "NotGraph";
    case Errc::DomainMismatch: return "DomainMismatch";
    case Errc::TooLarge: return "TooLarge";
    case Errc::ParseError: return "ParseError";
    case Errc::UsageError: return "UsageError";
  }
  return "UnknownError";
}

}  // namespace cx
