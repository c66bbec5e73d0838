#pragma once

#include <stdexcept>
#include <string>

namespace moelr {

// Base class of every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed CSV structure, missing/undeclared columns, bad schema documents.
struct SchemaError : Error { using Error::Error; };

// A data row that cannot be parsed; the message carries the line number.
struct RowError : Error { using Error::Error; };

// Outcome label missing, non-binary, or inconsistent within a case.
struct LabelError : Error { using Error::Error; };

// A temporal split that would leave a partition empty.
struct SplitError : Error { using Error::Error; };

// An operation that requires data received none.
struct EmptyDataError : Error { using Error::Error; };

// Feature dictionary could not be fitted.
struct FitError : Error { using Error::Error; };

// Prefix/dictionary disagreement while encoding.
struct EncodingError : Error { using Error::Error; };

// Vector, model, or dictionary dimension mismatch.
struct ShapeError : Error { using Error::Error; };

// Invalid hyperparameter or option combination.
struct ConfigError : Error { using Error::Error; };

// Training produced a non-finite loss; the message names the epoch.
struct DivergenceError : Error { using Error::Error; };

// AUC requested on a label set containing a single class.
struct UndefinedAucError : Error { using Error::Error; };

// Malformed or internally inconsistent serialized document.
struct SerializationError : Error { using Error::Error; };

}  // namespace moelr
