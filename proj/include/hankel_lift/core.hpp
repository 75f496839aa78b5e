#pragma once

///
/// \file core.hpp
///
/// Scalar aliases, the error type shared by every module, and small numeric
/// helpers.
///

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hlift
{

using cplx    = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr const char* kVersion = "0.3.1";

enum class ErrorKind
{
    InvalidArgument,
    ZeroOutsideDisk,
    NonUnimodularConstant,
    AmbiguousMatching,
    TailBoundExceeded,
    GeneratorNotMaterialized,
    NotAnalytic,
    WindowTooSmall,
    InsufficientCoefficients,
    NoConvergence,
    AmbiguousRank,
    OrderMismatch,
    KernelNotBeurling,
    ConfigInvalid,
    UnsupportedFormat,
};

inline const char* to_string(ErrorKind kind)
{
    switch (kind)
    {
    case ErrorKind::InvalidArgument:
        return "InvalidArgument";
    case ErrorKind::ZeroOutsideDisk:
        return "ZeroOutsideDisk";
    case ErrorKind::NonUnimodularConstant:
        return "NonUnimodularConstant";
    case ErrorKind::AmbiguousMatching:
        return "AmbiguousMatching";
    case ErrorKind::TailBoundExceeded:
        return "TailBoundExceeded";
    case ErrorKind::GeneratorNotMaterialized:
        return "GeneratorNotMaterialized";
    case ErrorKind::NotAnalytic:
        return "NotAnalytic";
    case ErrorKind::WindowTooSmall:
        return "WindowTooSmall";
    case ErrorKind::InsufficientCoefficients:
        return "InsufficientCoefficients";
    case ErrorKind::NoConvergence:
        return "NoConvergence";
    case ErrorKind::AmbiguousRank:
        return "AmbiguousRank";
    case ErrorKind::OrderMismatch:
        return "OrderMismatch";
    case ErrorKind::KernelNotBeurling:
        return "KernelNotBeurling";
    case ErrorKind::ConfigInvalid:
        return "ConfigInvalid";
    case ErrorKind::UnsupportedFormat:
        return "UnsupportedFormat";
    }
    return "Unknown";
}

class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message),
          m_kind(kind)
    {
    }

    ErrorKind kind() const noexcept
    {
        return m_kind;
    }

private:
    ErrorKind m_kind;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message)
{
    throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message)
{
    if (!condition)
    {
        fail(kind, message);
    }
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace hlift
