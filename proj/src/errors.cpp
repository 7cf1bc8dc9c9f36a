#include "sgspec/errors.hpp"

namespace sgspec {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Degeneracy: return "degeneracy";
    case ErrorKind::DegreeOverflow: return "degree-overflow";
    case ErrorKind::Accuracy: return "accuracy";
    case ErrorKind::Proximity: return "proximity";
    case ErrorKind::Refinement: return "refinement";
    case ErrorKind::Geometry: return "geometry";
    case ErrorKind::Rank: return "rank";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::IllConditioned: return "ill-conditioned";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::Revoked: return "revoked";
    case ErrorKind::NotFound: return "not-found";
    case ErrorKind::DoublePoint: return "double-point";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

}  // namespace sgspec
