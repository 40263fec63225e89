#include "reenact/relation.hpp"

#include <sstream>

#include "json.hpp"

namespace reenact {

ValueType typeOf(const Value& v) {
  return std::holds_alternative<int64_t>(v) ? ValueType::Int : ValueType::Str;
}

std::string renderValue(const Value& v) {
  if (std::holds_alternative<int64_t>(v))
    return std::to_string(std::get<int64_t>(v));
  std::string out = "'";
  for (char c : std::get<std::string>(v)) {
    if (c == '\'') out += "''";
    else out += c;
  }
  out += "'";
  return out;
}

size_t Schema::indexOf(const std::string& name) const {
  auto idx = tryIndexOf(name);
  if (!idx)
    throw SchemaError("unknown attribute '" + name + "' in relation '" +
                      relation + "'");
  return *idx;
}

std::optional<size_t> Schema::tryIndexOf(const std::string& name) const {
  for (size_t i = 0; i < attrs.size(); ++i)
    if (attrs[i].name == name) return i;
  return std::nullopt;
}

bool Schema::sameAttributes(const Schema& o) const { return attrs == o.attrs; }

std::string Schema::render() const {
  std::ostringstream os;
  os << relation << "(";
  for (size_t i = 0; i < attrs.size(); ++i) {
    if (i) os << ", ";
    os << attrs[i].name << " "
       << (attrs[i].type == ValueType::Int ? "INT" : "STRING");
  }
  os << ")";
  return os.str();
}

std::string renderTuple(const Tuple& t) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < t.values.size(); ++i) {
    if (i) os << ", ";
    os << renderValue(t.values[i]);
  }
  os << ")";
  return os.str();
}

void AnnotatedRelation::checkTuple(const Tuple& t) const {
  if (t.values.size() != schema_.attrs.size())
    throw SchemaError("tuple arity " + std::to_string(t.values.size()) +
                      " does not match schema " + schema_.render());
  for (size_t i = 0; i < t.values.size(); ++i)
    if (typeOf(t.values[i]) != schema_.attrs[i].type)
      throw TypeMismatchError("value " + renderValue(t.values[i]) +
                              " has wrong type for attribute '" +
                              schema_.attrs[i].name + "'");
}

void AnnotatedRelation::addAnnotation(const Tuple& t, const NormalForm& ann,
                                      const BaseSemiring& K) {
  checkTuple(t);
  if (ann.isZero()) return;
  auto it = rows_.find(t);
  if (it == rows_.end()) {
    rows_.emplace(t, ann);
    return;
  }
  std::vector<Summand> merged = it->second.summands();
  const auto& extra = ann.summands();
  merged.insert(merged.end(), extra.begin(), extra.end());
  NormalForm sum(std::move(merged), K);
  if (sum.isZero())
    rows_.erase(it);
  else
    it->second = std::move(sum);
}

void AnnotatedRelation::setAnnotation(const Tuple& t, NormalForm ann) {
  checkTuple(t);
  if (ann.isZero()) {
    rows_.erase(t);
    return;
  }
  rows_.insert_or_assign(t, std::move(ann));
}

NormalForm AnnotatedRelation::annotationOf(const Tuple& t,
                                           const BaseSemiring& K) const {
  auto it = rows_.find(t);
  if (it != rows_.end()) return it->second;
  return NormalForm({}, K);
}

bool AnnotatedRelation::operator==(const AnnotatedRelation& o) const {
  return schema_.sameAttributes(o.schema_) && rows_ == o.rows_;
}

bool AnnotatedRelation::allSummandsVersioned() const {
  for (const auto& [t, ann] : rows_)
    for (const auto& s : ann.summands())
      if (!isVersioned(s)) return false;
  return true;
}

std::string AnnotatedRelation::renderText() const {
  std::ostringstream os;
  os << "# relation " << schema_.render() << "\n";
  for (const auto& [t, ann] : rows_)
    os << renderTuple(t) << " :: " << ann.render() << "\n";
  return os.str();
}

std::string AnnotatedRelation::renderJson() const {
  nlohmann::json j;
  j["relation"] = schema_.relation;
  j["attributes"] = nlohmann::json::array();
  for (const auto& a : schema_.attrs)
    j["attributes"].push_back(
        {{"name", a.name}, {"type", a.type == ValueType::Int ? "INT" : "STRING"}});
  j["rows"] = nlohmann::json::array();
  for (const auto& [t, ann] : rows_) {
    nlohmann::json row;
    row["values"] = nlohmann::json::array();
    for (const auto& v : t.values) {
      if (std::holds_alternative<int64_t>(v))
        row["values"].push_back(std::get<int64_t>(v));
      else
        row["values"].push_back(std::get<std::string>(v));
    }
    row["annotation"] = ann.render();
    j["rows"].push_back(std::move(row));
  }
  return j.dump(2);
}

}  // namespace reenact
