#ifndef REENACT_BASE_HPP
#define REENACT_BASE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace reenact {

using TxnId = uint32_t;
using VersionId = uint64_t;
using TupleId = uint64_t;

// Error hierarchy. Everything thrown by the engine derives from Error so the
// C API can map exceptions onto status codes.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class TypeMismatchError : public Error {
public:
  explicit TypeMismatchError(const std::string& what) : Error(what) {}
};

class SchemaError : public Error {
public:
  explicit SchemaError(const std::string& what) : Error(what) {}
};

class NotAdmissibleError : public Error {
public:
  explicit NotAdmissibleError(const std::string& what) : Error(what) {}
};

class IndexError : public Error {
public:
  explicit IndexError(const std::string& what) : Error(what) {}
};

class UnboundRelationError : public Error {
public:
  explicit UnboundRelationError(const std::string& what) : Error(what) {}
};

class HistoryError : public Error {
public:
  explicit HistoryError(const std::string& what) : Error(what) {}
};

class LockViolationError : public HistoryError {
public:
  explicit LockViolationError(const std::string& what) : HistoryError(what) {}
};

class UnknownTransactionError : public HistoryError {
public:
  explicit UnknownTransactionError(const std::string& what) : HistoryError(what) {}
};

class UnknownRelationError : public HistoryError {
public:
  explicit UnknownRelationError(const std::string& what) : HistoryError(what) {}
};

class OptimizationInapplicableError : public Error {
public:
  explicit OptimizationInapplicableError(const std::string& what) : Error(what) {}
};

// Parse errors carry a source position (1-based) and what was expected.
class ParseError : public Error {
public:
  ParseError(size_t line, size_t column, const std::string& expected,
             const std::string& what)
      : Error(what), line(line), column(column), expected(expected) {}
  size_t line;
  size_t column;
  std::string expected;
};

}  // namespace reenact

#endif
