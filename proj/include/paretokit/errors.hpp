#ifndef PARETOKIT_ERRORS_HPP
#define PARETOKIT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace paretokit {

// Base of every error raised by the toolkit. The CLI maps subclasses of
// input_error to exit code 2 and runtime_failure to exit code 3.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class input_error : public error {
public:
    using error::error;
};

class runtime_failure : public error {
public:
    using error::error;
};

#define PARETOKIT_DEFINE_ERROR(name, base)                                  \
    class name : public base {                                              \
    public:                                                                 \
        explicit name(const std::string& what) : base(#name ": " + what) {} \
    }

// core
PARETOKIT_DEFINE_ERROR(NonFiniteObjective, runtime_failure);
PARETOKIT_DEFINE_ERROR(DimensionMismatch, input_error);
PARETOKIT_DEFINE_ERROR(EmptyInput, input_error);

// scalarize
PARETOKIT_DEFINE_ERROR(InvalidWeights, input_error);
PARETOKIT_DEFINE_ERROR(OverflowGuard, runtime_failure);
PARETOKIT_DEFINE_ERROR(OptimizerFailure, runtime_failure);
PARETOKIT_DEFINE_ERROR(Infeasible, runtime_failure);
PARETOKIT_DEFINE_ERROR(Unsupported, input_error);

// moea
PARETOKIT_DEFINE_ERROR(InvalidGenome, input_error);
PARETOKIT_DEFINE_ERROR(PopulationTooSmall, input_error);
PARETOKIT_DEFINE_ERROR(InvalidNicheCount, input_error);
PARETOKIT_DEFINE_ERROR(InvalidConfig, input_error);

// select
PARETOKIT_DEFINE_ERROR(TooFewPoints, input_error);
PARETOKIT_DEFINE_ERROR(NegativeObjective, input_error);

// recsys
PARETOKIT_DEFINE_ERROR(EmptyDataset, input_error);
PARETOKIT_DEFINE_ERROR(InvalidN, input_error);

#undef PARETOKIT_DEFINE_ERROR

class ParseError : public input_error {
public:
    ParseError(std::size_t row, const std::string& what)
        : input_error("ParseError: row " + std::to_string(row) + ": " + what), row_(row) {}

    [[nodiscard]] std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

} // namespace paretokit

#endif
