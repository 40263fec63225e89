#include "reenact/auditlog.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <functional>
#include <sstream>

#include "json.hpp"

namespace reenact {

namespace {

enum class Tok {
  Ident,
  Int,
  Str,
  Symbol,  // one of ( ) , | ; = < > + - * and two-char <= >= <> !=
  End
};

struct Token {
  Tok kind;
  std::string text;   // uppercased for idents? no: original; keyword match is case-insensitive
  int64_t intVal = 0;
  size_t line;
  size_t col;
};

bool iequals(const std::string& a, const char* b) {
  size_t n = std::strlen(b);
  if (a.size() != n) return false;
  for (size_t i = 0; i < n; ++i)
    if (std::toupper(static_cast<unsigned char>(a[i])) != b[i]) return false;
  return true;
}

class Lexer {
public:
  Lexer(const std::string& text, size_t line, size_t startCol = 1)
      : s_(text), line_(line), col0_(startCol) {
    next();
  }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    next();
    return t;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError(line_, tok_.col, expected,
                     "line " + std::to_string(line_) + ", column " +
                         std::to_string(tok_.col) + ": expected " + expected +
                         (tok_.kind == Tok::End ? " before end of statement"
                                                : ", found '" + tok_.text + "'"));
  }

  bool atSymbol(const char* sym) const {
    return tok_.kind == Tok::Symbol && tok_.text == sym;
  }

  bool eatSymbol(const char* sym) {
    if (!atSymbol(sym)) return false;
    next();
    return true;
  }

  void expectSymbol(const char* sym) {
    if (!eatSymbol(sym)) fail(std::string("'") + sym + "'");
  }

  bool atKeyword(const char* kw) const {
    return tok_.kind == Tok::Ident && iequals(tok_.text, kw);
  }

  bool eatKeyword(const char* kw) {
    if (!atKeyword(kw)) return false;
    next();
    return true;
  }

  void expectKeyword(const char* kw) {
    if (!eatKeyword(kw)) fail(std::string("keyword ") + kw);
  }

  std::string expectIdent(const char* what) {
    if (tok_.kind != Tok::Ident) fail(what);
    return take().text;
  }

  int64_t expectInt(const char* what) {
    if (tok_.kind != Tok::Int) fail(what);
    return take().intVal;
  }

  void expectEnd() {
    if (tok_.kind != Tok::End) fail("end of statement");
  }

private:
  void next() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    tok_.line = line_;
    tok_.col = col0_ + pos_;
    if (pos_ >= s_.size()) {
      tok_ = Token{Tok::End, "", 0, line_, col0_ + pos_};
      return;
    }
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
      std::string t = s_.substr(start, pos_ - start);
      tok_ = Token{Tok::Int, t, std::stoll(t), line_, col0_ + start};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      tok_ = Token{Tok::Ident, s_.substr(start, pos_ - start), 0, line_,
                   col0_ + start};
      return;
    }
    if (c == '\'') {
      size_t start = pos_++;
      std::string val;
      while (true) {
        if (pos_ >= s_.size())
          throw ParseError(line_, col0_ + start, "closing quote",
                           "line " + std::to_string(line_) +
                               ": unterminated string literal");
        if (s_[pos_] == '\'') {
          if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '\'') {
            val += '\'';
            pos_ += 2;
            continue;
          }
          ++pos_;
          break;
        }
        val += s_[pos_++];
      }
      tok_ = Token{Tok::Str, val, 0, line_, col0_ + start};
      return;
    }
    // two-char symbols first
    static const char* twos[] = {"<=", ">=", "<>", "!="};
    for (const char* t : twos) {
      if (s_.compare(pos_, 2, t) == 0) {
        tok_ = Token{Tok::Symbol, t, 0, line_, col0_ + pos_};
        pos_ += 2;
        return;
      }
    }
    static const std::string singles = "(),|;=<>+-*";
    if (singles.find(c) != std::string::npos) {
      tok_ = Token{Tok::Symbol, std::string(1, c), 0, line_, col0_ + pos_};
      ++pos_;
      return;
    }
    throw ParseError(line_, col0_ + pos_, "token",
                     "line " + std::to_string(line_) + ", column " +
                         std::to_string(col0_ + pos_) +
                         ": unexpected character '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  size_t pos_ = 0;
  Token tok_{Tok::End, "", 0, 0, 0};
  size_t line_;
  size_t col0_;
};

// Expression / condition parsing, shared by WHERE clauses, SET expressions
// and the parseCondition entry point used by the CLI.
ScalarExpr parseScalar(Lexer& lx);

ScalarExpr parseScalarAtom(Lexer& lx) {
  if (lx.peek().kind == Tok::Int) return ScalarExpr::constant(lx.take().intVal);
  if (lx.peek().kind == Tok::Str) return ScalarExpr::constant(lx.take().text);
  if (lx.eatSymbol("(")) {
    ScalarExpr e = parseScalar(lx);
    lx.expectSymbol(")");
    return e;
  }
  if (lx.peek().kind == Tok::Ident) return ScalarExpr::attr(lx.take().text);
  lx.fail("expression");
}

ScalarExpr parseScalarMul(Lexer& lx) {
  ScalarExpr e = parseScalarAtom(lx);
  while (lx.atSymbol("*")) {
    lx.take();
    e = ScalarExpr::arith(ScalarExpr::Tag::Mul, e, parseScalarAtom(lx));
  }
  return e;
}

ScalarExpr parseScalar(Lexer& lx) {
  ScalarExpr e = parseScalarMul(lx);
  while (lx.atSymbol("+") || lx.atSymbol("-")) {
    bool add = lx.take().text == "+";
    e = ScalarExpr::arith(add ? ScalarExpr::Tag::Add : ScalarExpr::Tag::Sub, e,
                          parseScalarMul(lx));
  }
  return e;
}

Condition parseCond(Lexer& lx);

Condition parseCondAtom(Lexer& lx) {
  if (lx.eatKeyword("NOT")) return Condition::negation(parseCondAtom(lx));
  if (lx.atKeyword("TRUE")) {
    lx.take();
    return Condition::literal(true);
  }
  if (lx.atKeyword("FALSE")) {
    lx.take();
    return Condition::literal(false);
  }
  if (lx.atSymbol("(")) {
    // could be a parenthesized condition or a parenthesized scalar on the
    // left of a comparison; parse as condition (comparisons inside).
    lx.take();
    Condition c = parseCond(lx);
    lx.expectSymbol(")");
    return c;
  }
  ScalarExpr l = parseScalar(lx);
  CmpOp op;
  if (lx.eatSymbol("=")) op = CmpOp::Eq;
  else if (lx.eatSymbol("<>") || lx.eatSymbol("!=")) op = CmpOp::Ne;
  else if (lx.eatSymbol("<=")) op = CmpOp::Le;
  else if (lx.eatSymbol(">=")) op = CmpOp::Ge;
  else if (lx.eatSymbol("<")) op = CmpOp::Lt;
  else if (lx.eatSymbol(">")) op = CmpOp::Gt;
  else lx.fail("comparison operator");
  return Condition::cmp(op, l, parseScalar(lx));
}

Condition parseCondAnd(Lexer& lx) {
  Condition c = parseCondAtom(lx);
  while (lx.eatKeyword("AND")) c = Condition::conj(c, parseCondAtom(lx));
  return c;
}

Condition parseCond(Lexer& lx) {
  Condition c = parseCondAnd(lx);
  while (lx.eatKeyword("OR")) c = Condition::disj(c, parseCondAnd(lx));
  return c;
}

Value literalValue(Lexer& lx) {
  if (lx.peek().kind == Tok::Int) return Value{lx.take().intVal};
  if (lx.peek().kind == Tok::Str) return Value{lx.take().text};
  lx.fail("literal");
}

struct SelectStmt {
  std::vector<std::pair<ScalarExpr, std::string>> items;  // expr, optional AS name
  std::string from;
  Condition where = Condition::literal(true);
};

SelectStmt parseSelect(Lexer& lx) {
  SelectStmt sel;
  lx.expectKeyword("SELECT");
  while (true) {
    ScalarExpr e = parseScalar(lx);
    std::string name;
    if (lx.eatKeyword("AS")) name = lx.expectIdent("output name");
    sel.items.emplace_back(std::move(e), std::move(name));
    if (!lx.eatSymbol(",")) break;
  }
  lx.expectKeyword("FROM");
  sel.from = lx.expectIdent("relation name");
  if (lx.eatKeyword("WHERE")) sel.where = parseCond(lx);
  return sel;
}

struct LogParser {
  History history;
  std::vector<AuditEntry> entries;
  std::map<VersionId, size_t> seenTimes;  // time -> line
  std::map<TxnId, bool> committed;

  void checkColumnRefs(const Condition& c, const Schema& s, const Lexer& lx);
  void checkColumnRefsExpr(const ScalarExpr& e, const Schema& s, const Lexer& lx);

  void parseTableDecl(Lexer& lx) {
    lx.expectKeyword("TABLE");
    Schema schema;
    schema.relation = lx.expectIdent("relation name");
    lx.expectSymbol("(");
    while (true) {
      std::string col = lx.expectIdent("column name");
      ValueType ty;
      if (lx.eatKeyword("INT")) ty = ValueType::Int;
      else if (lx.eatKeyword("STRING")) ty = ValueType::Str;
      else lx.fail("column type INT or STRING");
      schema.attrs.push_back({std::move(col), ty});
      if (!lx.eatSymbol(",")) break;
    }
    lx.expectSymbol(")");
    lx.expectEnd();
    if (history.schemas().count(schema.relation))
      throw ParseError(lx.peek().line, 1, "unique table name",
                       "line " + std::to_string(lx.peek().line) +
                           ": duplicate TABLE declaration for '" +
                           schema.relation + "'");
    history.addRelation(std::move(schema));
  }

  const Schema& lookupTable(const std::string& name, const Lexer& lx,
                            size_t col) {
    auto it = history.schemas().find(name);
    if (it == history.schemas().end())
      throw ParseError(lx.peek().line, col, "declared table",
                       "line " + std::to_string(lx.peek().line) +
                           ": unknown table '" + name + "'");
    return it->second;
  }

  void parseEntry(Lexer& lx, size_t lineNo, const std::string& rawStmt) {
    VersionId time = static_cast<VersionId>(lx.expectInt("timestamp"));
    if (time == 0)
      throw ParseError(lineNo, 1, "positive timestamp",
                       "line " + std::to_string(lineNo) + ": timestamps start at 1");
    lx.expectSymbol("|");
    std::string t = lx.expectIdent("transaction id (T<number>)");
    if (t.size() < 2 || (t[0] != 'T' && t[0] != 't') ||
        !std::all_of(t.begin() + 1, t.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw ParseError(lineNo, 1, "transaction id (T<number>)",
                       "line " + std::to_string(lineNo) +
                           ": malformed transaction id '" + t + "'");
    TxnId txn = static_cast<TxnId>(std::stoul(t.substr(1)));
    lx.expectSymbol("|");

    auto [it, fresh] = seenTimes.emplace(time, lineNo);
    if (!fresh)
      throw ParseError(lineNo, 1, "unique timestamp",
                       "line " + std::to_string(lineNo) + ": version " +
                           std::to_string(time) + " already used on line " +
                           std::to_string(it->second));
    if (committed[txn])
      throw ParseError(lineNo, 1, "no statement after COMMIT",
                       "line " + std::to_string(lineNo) + ": statement of T" +
                           std::to_string(txn) + " after its COMMIT");

    AuditEntry entry;
    entry.time = time;
    entry.txn = txn;
    entry.stmt = rawStmt;

    if (lx.atKeyword("UPDATE")) {
      entry.kind = AuditEntry::Kind::Update;
      lx.take();
      size_t nameCol = lx.peek().col;
      std::string rel = lx.expectIdent("table name");
      const Schema& schema = lookupTable(rel, lx, nameCol);
      lx.expectKeyword("SET");
      std::map<std::string, ScalarExpr> sets;
      while (true) {
        size_t col = lx.peek().col;
        std::string attr = lx.expectIdent("column name");
        if (!schema.tryIndexOf(attr))
          throw ParseError(lineNo, col, "column of " + rel,
                           "line " + std::to_string(lineNo) + ": unknown column '" +
                               attr + "' in table '" + rel + "'");
        lx.expectSymbol("=");
        ScalarExpr e = parseScalar(lx);
        checkColumnRefsExpr(e, schema, lx);
        sets.insert_or_assign(attr, std::move(e));
        if (!lx.eatSymbol(",")) break;
      }
      Condition where = Condition::literal(true);
      if (lx.eatKeyword("WHERE")) {
        where = parseCond(lx);
        checkColumnRefs(where, schema, lx);
      }
      lx.expectEnd();
      // the projection lists every attribute; unset ones map to themselves
      ProjExprList proj;
      for (const auto& a : schema.attrs) {
        auto sit = sets.find(a.name);
        if (sit != sets.end())
          proj.push_back({sit->second, a.name});
        else
          proj.push_back({ScalarExpr::attr(a.name), a.name});
      }
      addOp(txn, Operation{time, txn, UpdateSpec{rel, where, std::move(proj)}});
    } else if (lx.atKeyword("DELETE")) {
      entry.kind = AuditEntry::Kind::Delete;
      lx.take();
      lx.expectKeyword("FROM");
      size_t nameCol = lx.peek().col;
      std::string rel = lx.expectIdent("table name");
      const Schema& schema = lookupTable(rel, lx, nameCol);
      Condition where = Condition::literal(true);
      if (lx.eatKeyword("WHERE")) {
        where = parseCond(lx);
        checkColumnRefs(where, schema, lx);
      }
      lx.expectEnd();
      addOp(txn, Operation{time, txn, DeleteSpec{rel, where}});
    } else if (lx.atKeyword("INSERT")) {
      entry.kind = AuditEntry::Kind::Insert;
      lx.take();
      lx.expectKeyword("INTO");
      size_t nameCol = lx.peek().col;
      std::string rel = lx.expectIdent("table name");
      const Schema& schema = lookupTable(rel, lx, nameCol);
      lx.expectSymbol("(");
      std::vector<std::string> cols;
      while (true) {
        size_t col = lx.peek().col;
        std::string c = lx.expectIdent("column name");
        if (!schema.tryIndexOf(c))
          throw ParseError(lineNo, col, "column of " + rel,
                           "line " + std::to_string(lineNo) + ": unknown column '" +
                               c + "' in table '" + rel + "'");
        cols.push_back(std::move(c));
        if (!lx.eatSymbol(",")) break;
      }
      lx.expectSymbol(")");
      if (cols.size() != schema.attrs.size())
        throw ParseError(lineNo, nameCol, "all columns of " + rel,
                         "line " + std::to_string(lineNo) +
                             ": insert must provide every column of '" + rel +
                             "'");
      // position of each schema attribute within the provided column list
      std::vector<size_t> slot(schema.attrs.size());
      for (size_t i = 0; i < schema.attrs.size(); ++i) {
        auto cit = std::find(cols.begin(), cols.end(), schema.attrs[i].name);
        if (cit == cols.end())
          throw ParseError(lineNo, nameCol, "all columns of " + rel,
                           "line " + std::to_string(lineNo) + ": column '" +
                               schema.attrs[i].name + "' missing from insert");
        slot[i] = static_cast<size_t>(cit - cols.begin());
      }

      if (lx.eatKeyword("VALUES")) {
        std::optional<QueryPlan> plan;
        Schema rowSchema = schema;
        while (true) {
          lx.expectSymbol("(");
          std::vector<Value> given;
          while (true) {
            given.push_back(literalValue(lx));
            if (!lx.eatSymbol(",")) break;
          }
          lx.expectSymbol(")");
          if (given.size() != cols.size())
            throw ParseError(lineNo, nameCol, "row arity matching column list",
                             "line " + std::to_string(lineNo) +
                                 ": VALUES row arity mismatch");
          Tuple row;
          for (size_t i = 0; i < schema.attrs.size(); ++i) {
            Value v = given[slot[i]];
            if (typeOf(v) != schema.attrs[i].type)
              throw ParseError(lineNo, nameCol, "value of column type",
                               "line " + std::to_string(lineNo) +
                                   ": VALUES literal for '" +
                                   schema.attrs[i].name + "' has wrong type");
            row.values.push_back(std::move(v));
          }
          QueryPlan s = QueryPlan::singleton(rowSchema, std::move(row), uint64_t{1});
          plan = plan ? QueryPlan::unite(*plan, s) : s;
          if (!lx.eatSymbol(",")) break;
        }
        lx.expectEnd();
        addOp(txn, Operation{time, txn, InsertSpec{rel, *plan, true}});
      } else {
        bool paren = lx.eatSymbol("(");
        SelectStmt sel = parseSelect(lx);
        if (paren) lx.expectSymbol(")");
        lx.expectEnd();
        const Schema& src = lookupTable(sel.from, lx, nameCol);
        checkColumnRefs(sel.where, src, lx);
        if (sel.items.size() != cols.size())
          throw ParseError(lineNo, nameCol, "select list matching column list",
                           "line " + std::to_string(lineNo) +
                               ": SELECT list arity does not match insert columns");
        ProjExprList proj(schema.attrs.size(),
                          ProjItem{ScalarExpr::constant(int64_t{0}), ""});
        for (size_t i = 0; i < schema.attrs.size(); ++i) {
          const auto& [expr, asName] = sel.items[slot[i]];
          checkColumnRefsExpr(expr, src, lx);
          proj[i] = ProjItem{expr, schema.attrs[i].name};
        }
        QueryPlan plan = QueryPlan::project(
            std::move(proj),
            QueryPlan::select(sel.where, QueryPlan::baseRel(sel.from)));
        addOp(txn, Operation{time, txn, InsertSpec{rel, std::move(plan), false}});
      }
    } else if (lx.atKeyword("COMMIT")) {
      entry.kind = AuditEntry::Kind::Commit;
      lx.take();
      lx.expectEnd();
      committed[txn] = true;
      addOp(txn, Operation{time, txn, CommitSpec{}});
    } else if (lx.atKeyword("SELECT")) {
      // reads are recorded but have no effect on state
      entry.kind = AuditEntry::Kind::Read;
      SelectStmt sel = parseSelect(lx);
      lx.expectEnd();
      const Schema& src = lookupTable(sel.from, lx, 1);
      checkColumnRefs(sel.where, src, lx);
      for (const auto& [expr, asName] : sel.items) checkColumnRefsExpr(expr, src, lx);
    } else {
      lx.fail("UPDATE, INSERT, DELETE, SELECT or COMMIT");
    }
    entries.push_back(std::move(entry));
  }

  void addOp(TxnId txn, Operation op) {
    pendingOps[txn].push_back(std::move(op));
  }

  std::map<TxnId, std::vector<Operation>> pendingOps;

  History finish() {
    for (auto& [txn, ops] : pendingOps) {
      std::sort(ops.begin(), ops.end(),
                [](const Operation& a, const Operation& b) { return a.time < b.time; });
      history.addTransaction(Transaction{txn, std::move(ops)});
    }
    history.validate();
    return std::move(history);
  }
};

void LogParser::checkColumnRefsExpr(const ScalarExpr& e, const Schema& s,
                                    const Lexer& lx) {
  switch (e.tag()) {
    case ScalarExpr::Tag::Attr:
      if (!s.tryIndexOf(e.attrName()))
        throw ParseError(lx.peek().line, 1, "column of " + s.relation,
                         "line " + std::to_string(lx.peek().line) +
                             ": unknown column '" + e.attrName() + "' in table '" +
                             s.relation + "'");
      return;
    case ScalarExpr::Tag::Const:
      return;
    default:
      checkColumnRefsExpr(e.left(), s, lx);
      checkColumnRefsExpr(e.right(), s, lx);
  }
}

void LogParser::checkColumnRefs(const Condition& c, const Schema& s,
                                const Lexer& lx) {
  switch (c.tag()) {
    case Condition::Tag::Cmp:
      checkColumnRefsExpr(c.cmpLeft(), s, lx);
      checkColumnRefsExpr(c.cmpRight(), s, lx);
      return;
    case Condition::Tag::And:
    case Condition::Tag::Or:
      checkColumnRefs(c.left(), s, lx);
      checkColumnRefs(c.right(), s, lx);
      return;
    case Condition::Tag::Not:
      checkColumnRefs(c.child(), s, lx);
      return;
    case Condition::Tag::Literal:
      return;
  }
}

}  // namespace

ParsedLog parseLog(const std::string& text) {
  LogParser p;
  std::istringstream in(text);
  std::string line;
  size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    // strip trailing comment-only / blank lines
    std::string trimmed = line;
    size_t b = trimmed.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    if (trimmed[b] == '#') continue;
    // one trailing semicolon terminates a statement line
    std::string body = trimmed;
    size_t semi = body.find_last_not_of(" \t\r");
    bool hadSemi = semi != std::string::npos && body[semi] == ';';
    if (hadSemi) body = body.substr(0, semi);

    Lexer probe(body, lineNo);
    if (probe.atKeyword("TABLE")) {
      Lexer lx(body, lineNo);
      p.parseTableDecl(lx);
      continue;
    }
    if (!hadSemi)
      throw ParseError(lineNo, trimmed.size(), "';'",
                       "line " + std::to_string(lineNo) +
                           ": statement must end with ';'");
    std::string raw = body.substr(body.find('|') != std::string::npos
                                      ? body.find('|', body.find('|') + 1) + 1
                                      : 0);
    size_t rb = raw.find_first_not_of(" \t");
    if (rb != std::string::npos) raw = raw.substr(rb);
    Lexer lx(body, lineNo);
    p.parseEntry(lx, lineNo, raw);
  }
  ParsedLog out;
  out.entries = std::move(p.entries);
  out.history = p.finish();
  return out;
}

static std::string renderSqlFor(const Operation& op, const History& h) {
  std::ostringstream os;
  if (const auto* u = std::get_if<UpdateSpec>(&op.body)) {
    os << "UPDATE " << u->rel << " SET ";
    bool first = true;
    for (const auto& item : u->set) {
      bool identity = item.expr.tag() == ScalarExpr::Tag::Attr &&
                      item.expr.attrName() == item.name;
      if (identity) continue;
      if (!first) os << ", ";
      os << item.name << " = " << item.expr.render();
      first = false;
    }
    if (first) {
      // no attribute changes; keep the statement well-formed
      const auto& a0 = u->set.front();
      os << a0.name << " = " << a0.name;
    }
    if (!(u->where.tag() == Condition::Tag::Literal && u->where.literalValue()))
      os << " WHERE " << u->where.render();
  } else if (const auto* d = std::get_if<DeleteSpec>(&op.body)) {
    os << "DELETE FROM " << d->rel;
    if (!(d->where.tag() == Condition::Tag::Literal && d->where.literalValue()))
      os << " WHERE " << d->where.render();
  } else if (const auto* ins = std::get_if<InsertSpec>(&op.body)) {
    const Schema& schema = h.schemaOf(ins->rel);
    os << "INSERT INTO " << ins->rel << " (";
    for (size_t i = 0; i < schema.attrs.size(); ++i) {
      if (i) os << ", ";
      os << schema.attrs[i].name;
    }
    os << ") ";
    if (ins->valuesOnly) {
      // flatten the union of singletons back into VALUES rows
      std::vector<QueryPlan> rows;
      std::function<void(const QueryPlan&)> collect = [&](const QueryPlan& q) {
        if (q.tag() == QueryPlan::Tag::Union) {
          collect(q.left());
          collect(q.right());
        } else {
          rows.push_back(q);
        }
      };
      collect(ins->query);
      os << "VALUES ";
      for (size_t i = 0; i < rows.size(); ++i) {
        if (i) os << ", ";
        os << renderTuple(rows[i].singletonTuple());
      }
    } else {
      // Project(items, Select(where, BaseRel(src)))
      const QueryPlan& proj = ins->query;
      const QueryPlan& sel = proj.child();
      os << "(SELECT ";
      for (size_t i = 0; i < proj.projection().size(); ++i) {
        if (i) os << ", ";
        os << proj.projection()[i].expr.render();
      }
      os << " FROM " << sel.child().relName();
      const Condition& w = sel.condition();
      if (!(w.tag() == Condition::Tag::Literal && w.literalValue()))
        os << " WHERE " << w.render();
      os << ")";
    }
  } else {
    os << "COMMIT";
  }
  return os.str();
}

std::string serializeLog(const History& h) {
  std::ostringstream os;
  for (const auto& [name, schema] : h.schemas()) {
    os << "TABLE " << name << "(";
    for (size_t i = 0; i < schema.attrs.size(); ++i) {
      if (i) os << ", ";
      os << schema.attrs[i].name << " "
         << (schema.attrs[i].type == ValueType::Int ? "INT" : "STRING");
    }
    os << ")\n";
  }
  for (const Operation* op : h.operationsInOrder())
    os << op->time << " | T" << op->txn << " | " << renderSqlFor(*op, h) << ";\n";
  return os.str();
}

bool plansEqual(const QueryPlan& a, const QueryPlan& b) {
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case QueryPlan::Tag::BaseRel:
      return a.relName() == b.relName() && a.relVersion() == b.relVersion();
    case QueryPlan::Tag::EmptyRel:
      return a.fixedSchema().sameAttributes(b.fixedSchema());
    case QueryPlan::Tag::Select:
    case QueryPlan::Tag::VersionFilter:
      return a.condition() == b.condition() && plansEqual(a.child(), b.child());
    case QueryPlan::Tag::Project:
      return a.projection() == b.projection() && plansEqual(a.child(), b.child());
    case QueryPlan::Tag::Join:
    case QueryPlan::Tag::Union:
    case QueryPlan::Tag::VersionMerge:
      return plansEqual(a.left(), b.left()) && plansEqual(a.right(), b.right());
    case QueryPlan::Tag::Singleton:
      return a.fixedSchema().sameAttributes(b.fixedSchema()) &&
             a.singletonTuple() == b.singletonTuple() &&
             a.singletonAnnotation() == b.singletonAnnotation();
    case QueryPlan::Tag::AnnotOp:
      return a.annotKind() == b.annotKind() && a.annotTxn() == b.annotTxn() &&
             a.annotTime() == b.annotTime() && plansEqual(a.child(), b.child());
  }
  return false;
}

static bool opsEqual(const Operation& a, const Operation& b) {
  if (a.time != b.time || a.txn != b.txn) return false;
  if (a.body.index() != b.body.index()) return false;
  if (const auto* u = std::get_if<UpdateSpec>(&a.body)) {
    const auto& v = std::get<UpdateSpec>(b.body);
    return u->rel == v.rel && u->where == v.where && u->set == v.set;
  }
  if (const auto* d = std::get_if<DeleteSpec>(&a.body)) {
    const auto& e = std::get<DeleteSpec>(b.body);
    return d->rel == e.rel && d->where == e.where;
  }
  if (const auto* i = std::get_if<InsertSpec>(&a.body)) {
    const auto& j = std::get<InsertSpec>(b.body);
    return i->rel == j.rel && i->valuesOnly == j.valuesOnly &&
           plansEqual(i->query, j.query);
  }
  return true;
}

bool historiesEqual(const History& a, const History& b) {
  if (a.schemas().size() != b.schemas().size()) return false;
  for (const auto& [name, schema] : a.schemas()) {
    auto it = b.schemas().find(name);
    if (it == b.schemas().end() || !schema.sameAttributes(it->second)) return false;
  }
  if (a.transactions().size() != b.transactions().size()) return false;
  for (const auto& [id, t] : a.transactions()) {
    if (!b.hasTransaction(id)) return false;
    const Transaction& u = b.transaction(id);
    if (t.ops.size() != u.ops.size()) return false;
    for (size_t i = 0; i < t.ops.size(); ++i)
      if (!opsEqual(t.ops[i], u.ops[i])) return false;
  }
  return true;
}

std::string parseErrorJson(const ParseError& e) {
  nlohmann::json j;
  j["error"] = "parse";
  j["line"] = e.line;
  j["column"] = e.column;
  j["expected"] = e.expected;
  j["message"] = e.what();
  return j.dump(2);
}

Condition parseCondition(const std::string& text, const Schema& schema) {
  Lexer lx(text, 1);
  Condition c = parseCond(lx);
  lx.expectEnd();
  c.check(schema);
  return c;
}

}  // namespace reenact
