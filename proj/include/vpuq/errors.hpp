#pragma once

#include <stdexcept>
#include <string>

namespace vpuq {

// Error taxonomy. validation_error -> CLI exit 2, numeric_error -> CLI exit 3.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

#define VPUQ_DEFINE_ERROR(Name, Base)                                        \
    struct Name : Base {                                                      \
        explicit Name(const std::string& what) : Base(#Name ": " + what) {}   \
    }

VPUQ_DEFINE_ERROR(NonNeutral, numeric_error);
VPUQ_DEFINE_ERROR(BlowUp, numeric_error);
VPUQ_DEFINE_ERROR(BadSnapshotTime, validation_error);
VPUQ_DEFINE_ERROR(ShockDetected, numeric_error);
VPUQ_DEFINE_ERROR(ComplexLeak, numeric_error);
VPUQ_DEFINE_ERROR(SizeExceeded, validation_error);
VPUQ_DEFINE_ERROR(Infeasible, validation_error);
VPUQ_DEFINE_ERROR(NoConvergence, numeric_error);
VPUQ_DEFINE_ERROR(EmptyCloud, numeric_error);
VPUQ_DEFINE_ERROR(IllConditioned, validation_error);
VPUQ_DEFINE_ERROR(MissingRun, validation_error);
VPUQ_DEFINE_ERROR(EmptyWindow, validation_error);
VPUQ_DEFINE_ERROR(GridMismatch, validation_error);
VPUQ_DEFINE_ERROR(NoRoot, numeric_error);
VPUQ_DEFINE_ERROR(ConfigParse, validation_error);
VPUQ_DEFINE_ERROR(UnknownSubcommand, validation_error);

#undef VPUQ_DEFINE_ERROR

}  // namespace vpuq
