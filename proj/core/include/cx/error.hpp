#pragma once

#include <stdexcept>
#include <string>

namespace cx {

// Every domain failure carries one of these codes; the CLI maps them to
// exit status 1 and prints "error[<code>]: <message>".
enum class Errc {
  NotConnected,
  NotQuotientRelation,
  UnknownArc,
  UnknownCell,
  BadPositions,
  TargetMismatch,
  NotDimensionPreserving,
  IllegalMove,
  EndpointMismatch,
  NotOrientationPreserving,
  NotSubcomplex,
  NotDisjoint,
  SquareDoesNotCommute,
  NotHandleConfiguration,
  NotCovering,
  BasepointNotInFiber,
  SubgroupConditionFails,
  DaggerFails,
  NotSimplyConnected,
  Inconclusive,
  TableNotClosed,
  RelatorViolation,
  NotSubgroup,
  NotGalois,
  NotGraph,
  DomainMismatch,
  TooLarge,
  ParseError,
  UsageError,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace cx
