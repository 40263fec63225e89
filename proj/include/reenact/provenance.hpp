#ifndef REENACT_PROVENANCE_HPP
#define REENACT_PROVENANCE_HPP

#include "reenact/history.hpp"

namespace reenact {

// Relational encoding of a transaction's provenance: data columns of the
// target relation, one pre-image column per attribute, and one boolean flag
// per write statement of the transaction. One row per (tuple, summand,
// pre-image variable); rows of the same (tuple, summand) share a row group.
struct ProvColumn {
  enum class Kind { Data, Pre, Flag };
  Kind kind;
  std::string name;
};

using ProvCell = std::variant<std::monostate, int64_t, std::string, bool>;

struct ProvenanceTable {
  std::vector<ProvColumn> columns;
  std::vector<std::vector<ProvCell>> rows;
  std::vector<size_t> rowGroups;  // parallel to rows

  std::string renderCsv() const;
  std::string renderJson() const;
};

// Keeps only tuple versions the transaction touched and truncates their
// derivations to the transaction's own layers over the pre-image variables.
AnnotatedRelation restrictToTransaction(const AnnotatedRelation& r, TxnId txn,
                                        const BaseSemiring& K);

// Encodes a transaction-restricted relation. preState supplies the tuples
// pre-image variables refer to (the committed version right before the
// transaction's commit); variables without a tuple in preState (VALUES
// inserts, rows read from other relations) leave their pre-image cells empty.
ProvenanceTable encodeRelational(const AnnotatedRelation& restricted,
                                 const Transaction& txn,
                                 const AnnotatedRelation& preState,
                                 const BaseSemiring& K);

// Row filter; conditions may reference data columns, P(rel,attr) columns and
// boolean statement flags. Comparisons against empty cells are false.
ProvenanceTable filterProvenance(const ProvenanceTable& p,
                                 const std::string& condition);

}  // namespace reenact

#endif
