#pragma once

#include <stdexcept>
#include <string>

namespace packbound {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define PACKBOUND_ERROR(Name)             \
  struct Name : Error {                   \
    using Error::Error;                   \
    Name() : Error(#Name) {}              \
  }

PACKBOUND_ERROR(NotInvariant);
PACKBOUND_ERROR(NotInTheRing);
PACKBOUND_ERROR(Singular);
PACKBOUND_ERROR(Inconsistent);
PACKBOUND_ERROR(DegenerateChoice);
PACKBOUND_ERROR(NotHomogeneous);
PACKBOUND_ERROR(NoRoot);
PACKBOUND_ERROR(EvenDegree);
PACKBOUND_ERROR(DegreeMismatch);
PACKBOUND_ERROR(IoFailure);
PACKBOUND_ERROR(NoProgress);
PACKBOUND_ERROR(Infeasible);
PACKBOUND_ERROR(NotRepairable);
PACKBOUND_ERROR(BasisDeficient);
PACKBOUND_ERROR(CertificationFailed);

#undef PACKBOUND_ERROR

}  // namespace packbound
