#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mrioflow {

/// Failure classes. The CLI maps each class to its own exit code.
enum class ErrorCategory { Parse, Concordance, Numeric, IO };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, std::string kind, const std::string& message)
        : std::runtime_error(kind + ": " + message), category_(category), kind_(std::move(kind))
    {
    }

    ErrorCategory category() const noexcept { return category_; }
    const std::string& kind() const noexcept { return kind_; }

private:
    ErrorCategory category_;
    std::string kind_;
};

#define MRIOFLOW_DEFINE_ERROR(Name, Category)                                                   \
    class Name : public Error {                                                                 \
    public:                                                                                     \
        explicit Name(const std::string& message) : Error(ErrorCategory::Category, #Name, message) \
        {                                                                                       \
        }                                                                                       \
    };

// parsing and input files
MRIOFLOW_DEFINE_ERROR(MalformedHeader, Parse)
MRIOFLOW_DEFINE_ERROR(EmptyFile, Parse)
MRIOFLOW_DEFINE_ERROR(UnknownRegionSector, Parse)
MRIOFLOW_DEFINE_ERROR(DuplicateYear, Parse)
MRIOFLOW_DEFINE_ERROR(NonPositivePrice, Parse)
MRIOFLOW_DEFINE_ERROR(DuplicateEntry, Parse)
MRIOFLOW_DEFINE_ERROR(MissingYear, Parse)
MRIOFLOW_DEFINE_ERROR(ScenarioError, Parse)

// concordance and taxonomy
MRIOFLOW_DEFINE_ERROR(UnmatchedSelector, Concordance)
MRIOFLOW_DEFINE_ERROR(SchemaError, Concordance)
MRIOFLOW_DEFINE_ERROR(DuplicateGroup, Concordance)
MRIOFLOW_DEFINE_ERROR(UnknownGroup, Concordance)
MRIOFLOW_DEFINE_ERROR(UnknownTag, Concordance)

// arithmetic preconditions
MRIOFLOW_DEFINE_ERROR(ZeroDenominator, Numeric)
MRIOFLOW_DEFINE_ERROR(DimensionMismatch, Numeric)
MRIOFLOW_DEFINE_ERROR(NonConvergence, Numeric)
MRIOFLOW_DEFINE_ERROR(InvalidSchedule, Numeric)
MRIOFLOW_DEFINE_ERROR(YearOutOfRange, Numeric)
MRIOFLOW_DEFINE_ERROR(InvalidRange, Numeric)
MRIOFLOW_DEFINE_ERROR(InvalidInput, Numeric)
MRIOFLOW_DEFINE_ERROR(DanglingLink, Numeric)
MRIOFLOW_DEFINE_ERROR(TooFewPoints, Numeric)

MRIOFLOW_DEFINE_ERROR(IOError, IO)

#undef MRIOFLOW_DEFINE_ERROR

/// Cell that failed numeric parsing. Coordinates are 1-based file line and field.
class NonNumericCell : public Error {
public:
    NonNumericCell(std::size_t line, std::size_t field, const std::string& text)
        : Error(ErrorCategory::Parse, "NonNumericCell",
                "line " + std::to_string(line) + ", field " + std::to_string(field) + ": '" + text + "'"),
          line_(line), field_(field)
    {
    }

    std::size_t line() const noexcept { return line_; }
    std::size_t field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::size_t field_;
};

} // namespace mrioflow
