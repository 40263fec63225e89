#ifndef REENACT_AUDITLOG_HPP
#define REENACT_AUDITLOG_HPP

#include <string>
#include <vector>

#include "reenact/history.hpp"

namespace reenact {

// One line of the audit log, including read-only statements that do not
// become operations.
struct AuditEntry {
  enum class Kind { Update, Insert, Delete, Commit, Read };
  VersionId time;
  TxnId txn;
  Kind kind;
  std::string stmt;  // raw SQL text, without the trailing semicolon
};

struct ParsedLog {
  History history;
  std::vector<AuditEntry> entries;
};

// Parses the textual audit-log format:
//
//   TABLE Bonus(ID INT, EmpID INT, Amount INT)
//   21 | T7 | UPDATE Bonus SET Amount = Amount + 1000 WHERE ID = 101;
//
// Schema declarations precede entries; one timestamped statement per line;
// '#' starts a comment line. Supported statements: UPDATE .. SET .. [WHERE ..],
// DELETE FROM .. [WHERE ..], INSERT INTO t (cols) VALUES (..)[, (..)],
// INSERT INTO t (cols) (SELECT .. FROM .. [WHERE ..]), COMMIT, and read-only
// SELECT .. FROM .. [WHERE ..] which is recorded but has no effect on state.
// Inserts must provide every column of the target relation.
ParsedLog parseLog(const std::string& text);

std::string serializeLog(const History& h);

// Structural comparison used by round-trip checks.
bool historiesEqual(const History& a, const History& b);
bool plansEqual(const QueryPlan& a, const QueryPlan& b);

// Machine-readable report for parse failures.
std::string parseErrorJson(const ParseError& e);

}  // namespace reenact

#endif
