#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polyclust {

enum class errc {
    zero_endpoint_coefficient,
    degree_too_small,
    non_finite_coefficient,
    did_not_converge,
    mismatched_degree,
    rho_out_of_range,
    bad_sector,
    unconverged_roots,
    bad_model_parameters,
    moment_diverges,
    degree_too_large_for_enumeration,
    bad_schedule,
    invalid_argument,
    io_error,
};

constexpr std::string_view to_string(errc code) noexcept
{
    switch (code) {
    case errc::zero_endpoint_coefficient: return "ZeroEndpointCoefficient";
    case errc::degree_too_small: return "DegreeTooSmall";
    case errc::non_finite_coefficient: return "NonFiniteCoefficient";
    case errc::did_not_converge: return "DidNotConverge";
    case errc::mismatched_degree: return "MismatchedDegree";
    case errc::rho_out_of_range: return "RhoOutOfRange";
    case errc::bad_sector: return "BadSector";
    case errc::unconverged_roots: return "UnconvergedRoots";
    case errc::bad_model_parameters: return "BadModelParameters";
    case errc::moment_diverges: return "MomentDiverges";
    case errc::degree_too_large_for_enumeration: return "DegreeTooLargeForEnumeration";
    case errc::bad_schedule: return "BadSchedule";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::io_error: return "IoError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

} // namespace polyclust
