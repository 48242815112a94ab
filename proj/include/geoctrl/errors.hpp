#pragma once

#include <stdexcept>
#include <string>

namespace geoctrl {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define GEOCTRL_ERROR_TYPE(Name)                              \
  struct Name : Error {                                       \
    explicit Name(const std::string& msg) : Error(msg) {}     \
  }

GEOCTRL_ERROR_TYPE(NonFiniteSample);
GEOCTRL_ERROR_TYPE(DegenerateMetric);
GEOCTRL_ERROR_TYPE(ZeroDivisor);
GEOCTRL_ERROR_TYPE(StepFailure);
GEOCTRL_ERROR_TYPE(BlowUp);
GEOCTRL_ERROR_TYPE(SpanTooShort);
GEOCTRL_ERROR_TYPE(NoControl);
GEOCTRL_ERROR_TYPE(EmptyTrappedSet);
GEOCTRL_ERROR_TYPE(EmptyAnnulus);
GEOCTRL_ERROR_TYPE(ChartFailure);
GEOCTRL_ERROR_TYPE(NoRadius);
GEOCTRL_ERROR_TYPE(InequalityViolated);
GEOCTRL_ERROR_TYPE(NoExit);
GEOCTRL_ERROR_TYPE(SingularCorrection);
GEOCTRL_ERROR_TYPE(CflViolation);
GEOCTRL_ERROR_TYPE(NonFinite);
GEOCTRL_ERROR_TYPE(ConfigError);

#undef GEOCTRL_ERROR_TYPE

}  // namespace geoctrl
