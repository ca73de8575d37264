#include "rmtdpp/error.hpp"

namespace rmtdpp {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::pivot_too_small: return "PivotTooSmall";
    case Errc::singular_pinned_block: return "SingularPinnedBlock";
    case Errc::zero_row: return "ZeroRow";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::singular: return "Singular";
    case Errc::unsupported_order: return "UnsupportedOrder";
    case Errc::singular_gram: return "SingularGram";
    case Errc::resolvent_singular: return "ResolventSingular";
    case Errc::invalid_marginal: return "InvalidMarginal";
    case Errc::forced_impossible: return "ForcedImpossible";
    case Errc::not_orthonormal: return "NotOrthonormal";
    case Errc::spectrum_out_of_range: return "SpectrumOutOfRange";
    case Errc::not_projection: return "NotProjection";
    case Errc::numerical_breakdown: return "NumericalBreakdown";
    case Errc::unsupported_variant: return "UnsupportedVariant";
    case Errc::singular_kasteleyn: return "SingularKasteleyn";
    case Errc::malformed_tiling: return "MalformedTiling";
    case Errc::dead_end: return "DeadEnd";
    case Errc::no_eigenvalue_found: return "NoEigenvalueFound";
  }
  return "Unknown";
}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace rmtdpp
