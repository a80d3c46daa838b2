#ifndef CHARCALC_ERRORS_HPP
#define CHARCALC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace charcalc {

/// Base of every error raised by the library. `kind()` is the stable name
/// used in reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define CHARCALC_DEFINE_ERROR(Name)                                          \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what) : Error(#Name, what) {}       \
    };

CHARCALC_DEFINE_ERROR(DimensionMismatch)
CHARCALC_DEFINE_ERROR(DegreeMismatch)
CHARCALC_DEFINE_ERROR(InvalidArgument)
CHARCALC_DEFINE_ERROR(InexactTranslation)
CHARCALC_DEFINE_ERROR(NotClosed)
CHARCALC_DEFINE_ERROR(NotExact)
CHARCALC_DEFINE_ERROR(NotACycle)
CHARCALC_DEFINE_ERROR(Unsupported)
CHARCALC_DEFINE_ERROR(InternalVerificationFailed)
CHARCALC_DEFINE_ERROR(NonIntegralCurvature)
CHARCALC_DEFINE_ERROR(FormNotPreserved)
CHARCALC_DEFINE_ERROR(UnsupportedLinearPart)
CHARCALC_DEFINE_ERROR(NotSymmetryField)
CHARCALC_DEFINE_ERROR(BaseMismatch)
CHARCALC_DEFINE_ERROR(UnsupportedStarProduct)
CHARCALC_DEFINE_ERROR(UnsupportedPullback)
CHARCALC_DEFINE_ERROR(NotExactField)
CHARCALC_DEFINE_ERROR(PathMismatch)
CHARCALC_DEFINE_ERROR(PointsNotInChart)
CHARCALC_DEFINE_ERROR(ParseError)
CHARCALC_DEFINE_ERROR(ValidationError)
CHARCALC_DEFINE_ERROR(UnknownSuite)

#undef CHARCALC_DEFINE_ERROR

}  // namespace charcalc

#endif
