#pragma once

#include <stdexcept>
#include <string>

namespace tskit {

/// Base class for every error raised by the toolkit. The `code()` string is
/// stable and machine-parsable; the CLI prints it on the diagnostic stream.
class Error : public std::runtime_error {
public:
    Error(std::string code, std::string message)
        : std::runtime_error(code + ": " + message),
          code_(std::move(code)),
          message_(std::move(message)) {}

    const std::string& code() const noexcept { return code_; }
    /// The message without the code prefix.
    const std::string& message() const noexcept { return message_; }

private:
    std::string code_;
    std::string message_;
};

#define TSKIT_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                    \
    public:                                                        \
        explicit Name(const std::string& message)                  \
            : Error(#Name, message) {}                             \
    }

TSKIT_DEFINE_ERROR(IOError);
TSKIT_DEFINE_ERROR(EmptyDatasetError);
TSKIT_DEFINE_ERROR(ConstantSeriesError);
TSKIT_DEFINE_ERROR(TooShortError);
TSKIT_DEFINE_ERROR(LagOutOfRangeError);
TSKIT_DEFINE_ERROR(DegenerateScaleError);
TSKIT_DEFINE_ERROR(LengthMismatchError);
TSKIT_DEFINE_ERROR(WindowTooNarrowError);
TSKIT_DEFINE_ERROR(NameMismatchError);
TSKIT_DEFINE_ERROR(AllMissingError);
TSKIT_DEFINE_ERROR(SubsequenceTooLongError);
TSKIT_DEFINE_ERROR(SingleClassError);
TSKIT_DEFINE_ERROR(InsufficientCandidatesError);
TSKIT_DEFINE_ERROR(BadIntervalError);
TSKIT_DEFINE_ERROR(ParamMismatchError);
TSKIT_DEFINE_ERROR(IndivisibleError);
TSKIT_DEFINE_ERROR(NoMembersError);
TSKIT_DEFINE_ERROR(InvalidArgumentError);
TSKIT_DEFINE_ERROR(UnknownCommandError);

#undef TSKIT_DEFINE_ERROR

/// Parse/validation failure tied to a specific cell of an input file.
/// Row and column are 1-based (header is row 1).
class FormatError : public Error {
public:
    FormatError(std::size_t row, std::size_t column, const std::string& reason)
        : Error("FormatError",
                "row " + std::to_string(row) + ", column " + std::to_string(column) +
                    ": " + reason),
          row_(row), column_(column) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

} // namespace tskit
