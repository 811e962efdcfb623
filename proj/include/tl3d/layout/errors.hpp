#pragma once

#include "tl3d/error.hpp"

namespace tl3d::layout {

enum class LayoutErrc {
    NonMonotonicTimestamps,
    MissingBaseline,
    OutOfDomain,
    InvalidDesign,
    UnknownCentral,
    InvalidArgument,
    DegenerateOperator,
};

using LayoutError = CodedError<LayoutErrc>;

}  // namespace tl3d::layout
