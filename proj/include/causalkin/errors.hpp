#pragma once

#include <stdexcept>
#include <string>

namespace causalkin {

// Base of all typed errors. kind() is the stable machine-readable tag that
// the CLI serializes into its error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// ── configuration / ingestion ──────────────────────────────────────────────

struct ConfigError : Error {
    explicit ConfigError(const std::string& w) : Error("ConfigError", w) {}
};

struct DataError : Error {
    explicit DataError(const std::string& w) : Error("DataError", w) {}
};

struct MissingColumnError : DataError {
    explicit MissingColumnError(const std::string& name)
        : DataError("missing column '" + name + "'"), column(name) {}
    std::string column;
};

struct NonFiniteValueError : DataError {
    NonFiniteValueError(int row_, int col_)
        : DataError("non-finite value at row " + std::to_string(row_) +
                    ", column " + std::to_string(col_)),
          row(row_), col(col_) {}
    int row, col;
};

struct LabelParseError : DataError {
    explicit LabelParseError(int row_)
        : DataError("unparsable label at row " + std::to_string(row_)), row(row_) {}
    int row;
};

struct ShapeMismatchError : DataError {
    ShapeMismatchError(int expected_, int got_)
        : DataError("shape mismatch: expected " + std::to_string(expected_) +
                    ", got " + std::to_string(got_)),
          expected(expected_), got(got_) {}
    int expected, got;
};

// ── statistics ─────────────────────────────────────────────────────────────

struct SingularConditioningError : Error {
    SingularConditioningError()
        : Error("SingularConditioning",
                "conditioning submatrix is rank-deficient") {}
};

struct InsufficientSamplesError : Error {
    explicit InsufficientSamplesError(const std::string& w)
        : Error("InsufficientSamples", w) {}
};

struct EmptyConditioningStateError : Error {
    explicit EmptyConditioningStateError(int state_)
        : Error("EmptyConditioningState",
                "conditioning state " + std::to_string(state_) +
                " unobserved with zero smoothing"),
          state(state_) {}
    int state;
};

struct SupportMismatchError : Error {
    SupportMismatchError(std::size_t p, std::size_t q)
        : Error("SupportMismatch", "distribution supports differ: " +
                                       std::to_string(p) + " vs " + std::to_string(q)) {}
};

struct ZeroInQError : Error {
    explicit ZeroInQError(std::size_t index)
        : Error("ZeroInQ", "q is zero at state " + std::to_string(index) +
                               " where p is positive") {}
};

// ── classifier ─────────────────────────────────────────────────────────────

struct SingleClassDatasetError : Error {
    SingleClassDatasetError()
        : Error("SingleClassDataset", "training labels contain a single class") {}
};

struct LengthMismatchError : Error {
    LengthMismatchError(std::size_t a, std::size_t b)
        : Error("LengthMismatch", "length mismatch: " + std::to_string(a) +
                                      " vs " + std::to_string(b)) {}
};

// ── synthetic oracle ───────────────────────────────────────────────────────

struct CyclicSpecError : Error {
    CyclicSpecError() : Error("CyclicSpec", "SCM edge list contains a cycle") {}
};

struct NodeCountMismatchError : Error {
    NodeCountMismatchError(int a, int b)
        : Error("NodeCountMismatch", "node counts differ: " + std::to_string(a) +
                                         " vs " + std::to_string(b)) {}
};

}  // namespace causalkin
