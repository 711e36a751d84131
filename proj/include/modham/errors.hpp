#pragma once

#include <stdexcept>
#include <string>

namespace modham {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define MODHAM_DEFINE_ERROR(Name)                                   \
    struct Name : Error {                                           \
        explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
    }

MODHAM_DEFINE_ERROR(RankDeficient);
MODHAM_DEFINE_ERROR(NearDegenerate);
MODHAM_DEFINE_ERROR(NotFactorial);
MODHAM_DEFINE_ERROR(NotInvariant);
MODHAM_DEFINE_ERROR(GridMismatch);
MODHAM_DEFINE_ERROR(MasslessInfrared);
MODHAM_DEFINE_ERROR(BallOutsideGrid);
MODHAM_DEFINE_ERROR(SupportOverflow);
MODHAM_DEFINE_ERROR(SupportViolation);
MODHAM_DEFINE_ERROR(UnsupportedMode);
MODHAM_DEFINE_ERROR(PoleHit);
MODHAM_DEFINE_ERROR(DomainError);
MODHAM_DEFINE_ERROR(IllConditioned);
MODHAM_DEFINE_ERROR(ProjectionResidualTooLarge);
MODHAM_DEFINE_ERROR(ConfigError);
MODHAM_DEFINE_ERROR(ComputeError);

#undef MODHAM_DEFINE_ERROR

} // namespace modham
